"""Citelangis actions on k-permutations.

Two families of binary operators act on k-permutations.  In series mode the
first k letters of the result are picked from the left or right operand
according to the operator word; in parallel mode (k = 2 only) the first and
the last letter are picked.  The messy operators shuffle whatever is left,
the tidy ones concatenate it.  Trees over the operators are evaluated by
folding, and cut points of a permutation recover the tree again.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .combinatorics import (
    FormalSum,
    Word,
    degree,
    format_word,
    gap_shift,
    is_k_permutation,
    k_of,
    restrict,
    shift,
    shuffle_words,
)
from .trees import LEAF, MESSY, PARALLEL, SERIES, TIDY, Node, Tree, arity, check_mode, check_style, format_tree

BOUNDED = "bounded"
ROOTED = "k_rooted"
CUT_KINDS = (BOUNDED, ROOTED)


class CapabilityError(ValueError):
    """Raised when an operation is requested outside the supported range of k."""


def _check_word(w: Sequence[int], k: int, name: str) -> Word:
    w = tuple(w)
    if not is_k_permutation(w, k):
        raise ValueError(f"{name} = {format_word(w)} is not a {k}-permutation")
    return w


def _operands(mode: str, op: str, mu: Sequence[int], nu: Sequence[int]) -> Tuple[Word, Word]:
    check_mode(mode)
    k = len(op)
    if set(op) - {"l", "r"} or not op:
        raise ValueError(f"bad operator word {op!r}")
    if mode == PARALLEL and k != 2:
        raise CapabilityError("parallel actions are only defined for k = 2")
    mu = _check_word(mu, k, "left operand")
    nu = _check_word(nu, k, "right operand")
    return mu, shift(nu, degree(mu))


# ---------------------------------------------------------------------------
# operators


def apply_tidy(mode: str, op: str, mu: Sequence[int], nu: Sequence[int]) -> Word:
    """The single term of the shifted shuffle of mu and nu selected by ``op``."""
    x, y = _operands(mode, op, mu, nu)
    if mode == SERIES:
        head = []
        for ch in op:
            if ch == "l":
                head.append(x[0])
                x = x[1:]
            else:
                head.append(y[0])
                y = y[1:]
        return tuple(head) + x + y
    first = x[0] if op[0] == "l" else y[0]
    last = x[-1] if op[1] == "l" else y[-1]
    x = x[1:] if op[0] == "l" else x
    y = y[1:] if op[0] == "r" else y
    x = x[:-1] if op[1] == "l" else x
    y = y[:-1] if op[1] == "r" else y
    return (first,) + x + y + (last,)


def _messy_words(mode: str, op: str, x: Word, y: Word) -> List[Word]:
    if mode == SERIES:
        head = []
        for ch in op:
            if ch == "l":
                head.append(x[0])
                x = x[1:]
            else:
                head.append(y[0])
                y = y[1:]
        return [tuple(head) + w for w in shuffle_words(x, y)]
    first = x[0] if op[0] == "l" else y[0]
    last = x[-1] if op[1] == "l" else y[-1]
    x = x[1:] if op[0] == "l" else x
    y = y[1:] if op[0] == "r" else y
    x = x[:-1] if op[1] == "l" else x
    y = y[:-1] if op[1] == "r" else y
    return [(first,) + w + (last,) for w in shuffle_words(x, y)]


def apply_messy(mode: str, op: str, mu: Sequence[int], nu: Sequence[int]) -> FormalSum:
    """Sum of the shifted-shuffle terms whose constrained letters obey ``op``."""
    x, y = _operands(mode, op, mu, nu)
    words = _messy_words(mode, op, x, y)
    out = FormalSum(words)
    # operand alphabets are disjoint, so no interleaving can repeat
    assert len(out) == len(words), "messy action produced a repeated term"
    return out


def _as_sum(x) -> FormalSum:
    return x if isinstance(x, FormalSum) else FormalSum.single(tuple(x))


def apply(mode: str, style: str, op: str, mu, nu):
    """Dispatch on style; sums on either side are handled bilinearly."""
    check_style(style)
    if not isinstance(mu, FormalSum) and not isinstance(nu, FormalSum):
        if style == TIDY:
            return apply_tidy(mode, op, mu, nu)
        return apply_messy(mode, op, mu, nu)
    acc: Dict[Word, int] = {}
    for a, ca in _as_sum(mu).unordered_items():
        for b, cb in _as_sum(nu).unordered_items():
            if style == TIDY:
                terms = [apply_tidy(mode, op, a, b)]
            else:
                x, y = _operands(mode, op, a, b)
                terms = _messy_words(mode, op, x, y)
            for w in terms:
                acc[w] = acc.get(w, 0) + ca * cb
    return FormalSum(acc)


# ---------------------------------------------------------------------------
# tree evaluation


def eval_tree(
    t: Union[Tree, FormalSum],
    inputs: Optional[Sequence] = None,
    mode: str = SERIES,
    style: str = TIDY,
    k: Optional[int] = None,
):
    """Fold the operators of ``t`` over the inputs (default: every input is 1^k).

    Each input is read as a k-permutation of its own degree; the shift by the
    degrees of the inputs to its left is applied by the operators themselves.
    Tidy evaluation of a single tree gives a word, anything else a FormalSum.
    """
    check_mode(mode)
    check_style(style)
    if isinstance(t, FormalSum):
        acc: Dict[Word, int] = {}
        for u, c in t.items():
            for w, d in _as_sum(eval_tree(u, inputs, mode, style, k)).unordered_items():
                acc[w] = acc.get(w, 0) + c * d
        return FormalSum(acc)
    p = arity(t)
    if inputs is None:
        if k is None:
            if t is LEAF:
                raise ValueError("k is needed to evaluate the bare leaf")
            k = len(t.label)
        inputs = [(1,) * k] * p
    inputs = list(inputs)
    if len(inputs) != p:
        raise ValueError(f"tree of arity {p} given {len(inputs)} inputs")
    it = iter(inputs)

    def go(u: Tree):
        if u is LEAF:
            x = next(it)
            return x if isinstance(x, FormalSum) else tuple(x)
        left = go(u.left)
        right = go(u.right)
        return apply(mode, style, u.label, left, right)

    out = go(t)
    if style == MESSY and not isinstance(out, FormalSum):
        out = FormalSum.single(out)
    return out


def lexmin(f: FormalSum) -> Word:
    """Lexicographically least word with a nonzero coefficient."""
    if not f:
        raise ValueError("lexmin of the zero sum")
    return min(w for w, _ in f.unordered_items())


# ---------------------------------------------------------------------------
# cuts


def _split_points(middle: Sequence[int], n: int) -> Tuple[int, ...]:
    """Values g in [n-1] such that letters <= g all precede letters > g."""
    out = []
    for g in range(1, n):
        last_low = max((p for p, x in enumerate(middle) if x <= g), default=-1)
        first_high = min((p for p, x in enumerate(middle) if x > g), default=len(middle))
        if last_low < first_high:
            out.append(g)
    return tuple(out)


def bounded_cuts(sigma: Sequence[int]) -> Tuple[int, ...]:
    """Cuts g with sigma = f mu nu l, mu <= g < nu (2-permutations)."""
    sigma = tuple(sigma)
    if k_of(sigma) != 2:
        raise CapabilityError("bounded cuts are defined on 2-permutations")
    return _split_points(sigma[1:-1], degree(sigma))


def rooted_cuts(sigma: Sequence[int], k: Optional[int] = None) -> Tuple[int, ...]:
    """Cuts g with sigma = mu nu omega, |mu| = k, nu <= g < omega."""
    sigma = tuple(sigma)
    if k is None:
        k = k_of(sigma)
    return _split_points(sigma[k:], degree(sigma))


def cuts(sigma: Sequence[int], kind: str = ROOTED) -> Tuple[int, ...]:
    if kind == BOUNDED:
        return bounded_cuts(sigma)
    if kind == ROOTED:
        return rooted_cuts(sigma)
    raise ValueError(f"unknown cut kind {kind!r}")


def kind_of(mode: str) -> str:
    check_mode(mode)
    return BOUNDED if mode == PARALLEL else ROOTED


@dataclass(frozen=True)
class CutProfile:
    subject: Word
    bounded_cuts: Tuple[int, ...]
    k_rooted_cuts: Tuple[int, ...]


def cut_profile(sigma: Sequence[int]) -> CutProfile:
    sigma = tuple(sigma)
    bounded = bounded_cuts(sigma) if k_of(sigma) == 2 else ()
    return CutProfile(sigma, bounded, rooted_cuts(sigma))


def is_fully_cuttable(sigma: Sequence[int], kind: str = ROOTED) -> bool:
    """Every restriction to an interval of size >= 2 has a cut of ``kind``."""
    sigma = tuple(sigma)
    n = degree(sigma)
    for a in range(1, n):
        for b in range(a + 1, n + 1):
            if not cuts(restrict(sigma, range(a, b + 1)), kind):
                return False
    return True


# Pattern tests.  Each looks for the pattern through the restriction to the
# value interval it spans, which is linear per interval instead of a search
# over all subwords.


def _after_prefix(sigma: Word, lo: int, hi: int, k: int) -> Word:
    return tuple(x for x in sigma if lo <= x <= hi)[k:]


def contains_rooted_pattern(sigma: Sequence[int], k: Optional[int] = None) -> bool:
    """Is there a subword b_1..b_k . c . a with a <= b_i <= c?"""
    sigma = tuple(sigma)
    k = k_of(sigma) if k is None else k
    n = degree(sigma)
    for a in range(1, n):
        for c in range(a + 1, n + 1):
            tail = _after_prefix(sigma, a, c, k)
            if c in tail and a in tail and tail.index(c) < len(tail) - 1 - tail[::-1].index(a):
                return True
    return False


def contains_bounded_pattern(sigma: Sequence[int]) -> bool:
    """Is there a subword b . c . a . b' with a <= b, b' <= c?"""
    sigma = tuple(sigma)
    n = degree(sigma)
    for a in range(1, n):
        for c in range(a + 1, n + 1):
            inner = tuple(x for x in sigma if a <= x <= c)[1:-1]
            if c in inner and a in inner and inner.index(c) < len(inner) - 1 - inner[::-1].index(a):
                return True
    return False


def avoids_231(sigma: Sequence[int]) -> bool:
    sigma = tuple(sigma)
    for i, j, l in itertools.combinations(range(len(sigma)), 3):
        if sigma[l] < sigma[i] < sigma[j]:
            return False
    return True


def contains_low_pattern(sigma: Sequence[int], k: Optional[int] = None) -> bool:
    """Is there a subword a_1..a_k . b . a with a < b and a_i <= b?"""
    sigma = tuple(sigma)
    k = k_of(sigma) if k is None else k
    for b in range(2, degree(sigma) + 1):
        tail = tuple(x for x in sigma if x <= b)[k:]
        if b in tail and any(x < b for x in tail[tail.index(b) + 1 :]):
            return True
    return False


def contains_high_pattern(sigma: Sequence[int], k: Optional[int] = None) -> bool:
    """Is there a subword b_1..b_k . b . a with a < b and a <= b_i?"""
    sigma = tuple(sigma)
    k = k_of(sigma) if k is None else k
    for a in range(1, degree(sigma)):
        tail = tuple(x for x in sigma if x >= a)[k:]
        if a in tail and any(x > a for x in tail[: len(tail) - 1 - tail[::-1].index(a)]):
            return True
    return False


# ---------------------------------------------------------------------------
# decomposition


def operator_of_cut(sigma: Sequence[int], gamma: int, mode: str) -> str:
    """The operator op with sigma = sigma|[gamma] op sigma|rest."""
    sigma = tuple(sigma)
    if mode == PARALLEL:
        ends = (sigma[0], sigma[-1])
    else:
        ends = sigma[: k_of(sigma)]
    return "".join("l" if x <= gamma else "r" for x in ends)


@dataclass(frozen=True)
class Decomposition:
    skeleton: Tree
    leaves: Tuple[Word, ...]
    mode: str = SERIES

    def evaluate(self, style: str = TIDY):
        return eval_tree(self.skeleton, self.leaves, self.mode, style)

    def format(self) -> str:
        return f"{format_tree(self.skeleton)} ; leaves [{', '.join(format_word(w) for w in self.leaves)}]"


def decompose(sigma: Sequence[int], mode: str = SERIES, style: str = TIDY) -> Decomposition:
    """Split at the rightmost cut, recursively, down to uncuttable leaves.

    For the messy style the same data is returned: its messy evaluation
    contains sigma as lexicographically least term.
    """
    check_mode(mode)
    check_style(style)
    sigma = tuple(sigma)
    k = k_of(sigma)
    if mode == PARALLEL and k != 2:
        raise CapabilityError("parallel decompositions are only defined for k = 2")
    kind = kind_of(mode)
    leaves: List[Word] = []

    def go(rho: Word) -> Tree:
        found = cuts(rho, kind)
        if not found:
            leaves.append(rho)
            return LEAF
        gamma = found[-1]
        n = degree(rho)
        op = operator_of_cut(rho, gamma, mode)
        left = go(restrict(rho, range(1, gamma + 1)))
        right = go(restrict(rho, range(gamma + 1, n + 1)))
        return Node(op, left, right)

    skeleton = go(sigma)
    return Decomposition(skeleton, tuple(leaves), mode)


def is_uncuttable(sigma: Sequence[int], mode: str = SERIES) -> bool:
    return not cuts(sigma, kind_of(mode))


# ---------------------------------------------------------------------------
# compositions on k-permutations


def _split_at_copies(sigma: Word, i: int) -> List[Word]:
    """Factors between consecutive copies of i (k + 1 factors)."""
    parts, cur = [], []
    for x in sigma:
        if x == i:
            parts.append(tuple(cur))
            cur = []
        else:
            cur.append(x)
    parts.append(tuple(cur))
    return parts


def _low_prefix(w: Word, i: int) -> Tuple[Word, Word]:
    n = 0
    while n < len(w) and w[n] < i:
        n += 1
    return w[:n], w[n:]


def cuttable_compose(sigma: Sequence[int], i: int, tau: Sequence[int], mode: str = SERIES, style: str = TIDY):
    """i-th composition of k-permutations by substitution.

    The copies of i in sigma are replaced by the first k letters of tau (series)
    or by its first and last letters (parallel); the rest of tau is inserted
    after the last copy (series) or the first copy (parallel), shuffled with
    the following factor (messy) or placed after its part below i (tidy).
    On fully cuttable inputs this is the citelangis composition; on all
    k-permutations it is the Zinbiel one.
    """
    check_mode(mode)
    check_style(style)
    sigma, tau = tuple(sigma), tuple(tau)
    k = k_of(sigma)
    if k_of(tau) != k:
        raise ValueError("operands have different k")
    m, n = degree(sigma), degree(tau)
    if not 1 <= i <= m:
        raise IndexError(f"index {i} out of range 1..{m}")
    if mode == PARALLEL and k != 2:
        raise CapabilityError("parallel compositions are only defined for k = 2")

    def big(w: Word) -> Word:
        return gap_shift(w, i, n)

    def small(w: Sequence[int]) -> Word:
        return shift(w, i - 1)

    parts = _split_at_copies(sigma, i)
    if mode == SERIES:
        head: Word = ()
        for j in range(k):
            head += big(parts[j]) + small(tau[j : j + 1])
        tail, theta = parts[k], tau[k:]
        if style == TIDY:
            mu, nu = _low_prefix(tail, i)
            return head + mu + small(theta) + big(nu)
        return FormalSum(head + w for w in shuffle_words(big(tail), small(theta)))
    lam, between, omega = parts
    first, theta, last = small(tau[:1]), small(tau[1:-1]), small(tau[-1:])
    if style == TIDY:
        mu, nu = _low_prefix(between, i)
        return big(lam) + first + mu + theta + big(nu) + last + big(omega)
    return FormalSum(big(lam) + first + w + last + big(omega) for w in shuffle_words(big(between), theta))


def zinbiel_compose(sigma, i, tau, mode: str = SERIES, style: str = MESSY):
    """Alias kept for readability at call sites dealing with all k-permutations."""
    return cuttable_compose(sigma, i, tau, mode, style)


def all_evaluations(p: int, k: int, mode: str = SERIES) -> dict:
    """Tidy evaluation of every tree of arity p, keyed by tree."""
    from .trees import all_trees

    return {t: eval_tree(t, mode=mode, style=TIDY, k=k) for t in all_trees(p, k)}


def fully_cuttable(k: int, m: int, mode: str = SERIES) -> Iterable[Word]:
    from .combinatorics import k_permutations

    kind = kind_of(mode)
    return (w for w in k_permutations(k, m) if is_fully_cuttable(w, kind))


# ---------------------------------------------------------------------------
# relation checks on random inputs


def random_k_permutation(rng, k: int, m: int) -> Word:
    w = [v for v in range(1, m + 1) for _ in range(k)]
    rng.shuffle(w)
    return tuple(w)


def action_constraint(mode: str, style: str, k: int) -> Optional[str]:
    """Constraint word of the relations that the permutation action satisfies."""
    return "lr" if (mode, style, k) == (PARALLEL, TIDY, 2) else None


def check_relations(
    k: int,
    mode: str,
    style: str,
    samples: int = 1000,
    seed: int = 0,
    max_degree: int = 3,
    max_letters: int = 12,
) -> List[Tuple[str, Tuple[Word, ...]]]:
    """Evaluate every citelangis relation on random triples; return the failures.

    Input degrees are drawn from 1..max_degree and redrawn while the triple
    has more than ``max_letters`` letters in total.
    """
    import random

    from .citelangis import citelangis_relations

    if mode == PARALLEL and k != 2:
        raise CapabilityError("the parallel action needs k = 2")
    if k * 3 > max_letters:
        raise ValueError("max_letters leaves no room for three inputs")
    rels = citelangis_relations(k, mode, style, action_constraint(mode, style, k))
    rng = random.Random(seed)
    failures = []
    for _ in range(samples):
        while True:
            ds = [rng.randint(1, max_degree) for _ in range(3)]
            if k * sum(ds) <= max_letters:
                break
        xs = tuple(random_k_permutation(rng, k, d) for d in ds)
        for rel in rels:
            if eval_tree(rel.left, xs, mode, style) != eval_tree(rel.right, xs, mode, style):
                failures.append((rel.format(), xs))
    return failures
