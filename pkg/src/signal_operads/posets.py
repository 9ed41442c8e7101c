"""Rooted and bounded multiposets with citelangis-style operations.

Series mode works on k-rooted k-posets: k elements forming a chain below
everything else.  Parallel mode works on bounded 2-posets, with a unique
minimum and maximum.  Both carry binary operations indexed by traffic
signal words and a partial composition, and the linear extensions of the
results follow the permutation actions.
"""

from __future__ import annotations

import random
from collections import defaultdict
from fractions import Fraction
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .combinatorics import (
    Element,
    FormalSum,
    Multiposet,
    Word,
    chain,
    linear_extensions,
)
from .linalg import series_compose, series_mul
from .trees import LEAF, PARALLEL, SERIES, Tree, all_trees, check_mode, label_length


class RootedPoset:
    """A multiposet together with its distinguished root elements.

    In series mode ``root`` is the chain min_1 < ... < min_k.  In parallel
    mode it is the pair (min, max).
    """

    __slots__ = ("poset", "mode", "k", "root")

    def __init__(self, poset: Multiposet, mode: str = SERIES):
        check_mode(mode)
        counts = set(poset.counts)
        if len(counts) != 1 or 0 in counts:
            raise ValueError("every value needs the same positive multiplicity")
        self.poset = poset
        self.mode = mode
        self.k = poset.counts[0]
        if mode == PARALLEL:
            if self.k != 2:
                raise ValueError("parallel posets are 2-posets")
            self.root = bounds(poset)
        else:
            self.root = root_chain(poset, self.k)

    @classmethod
    def unit(cls, k: int, mode: str = SERIES) -> "RootedPoset":
        return cls(chain((1,) * k), mode)

    @property
    def degree(self) -> int:
        return self.poset.degree

    @property
    def size(self) -> int:
        return self.poset.size

    def min(self, j: int = 1) -> Element:
        """The j-th root element (1-based); in parallel mode the minimum."""
        return self.root[j - 1] if self.mode == SERIES else self.root[0]

    def max(self) -> Element:
        if self.mode != PARALLEL:
            raise ValueError("only bounded posets have a distinguished maximum")
        return self.root[1]

    def linear_extensions(self) -> FormalSum:
        return FormalSum(linear_extensions(self.poset, max_size=max(12, self.size)))

    def min_extension(self) -> Word:
        return min_linear_extension(self.poset)

    def __eq__(self, other):
        return isinstance(other, RootedPoset) and self.mode == other.mode and self.poset == other.poset

    def __hash__(self):
        return hash((self.mode, self.poset))

    def __repr__(self):
        return f"RootedPoset({self.mode}, {self.poset!r})"


def root_chain(poset: Multiposet, k: int) -> Tuple[Element, ...]:
    """Peel k unique minima off ``poset``; ValueError if it is not k-rooted."""
    rest = set(poset.elements())
    out = []
    for _ in range(k):
        lows = [x for x in rest if not any((y, x) in poset.less for y in rest)]
        if len(lows) != 1:
            raise ValueError("poset is not k-rooted")
        out.append(lows[0])
        rest.discard(lows[0])
    return tuple(out)


def bounds(poset: Multiposet) -> Tuple[Element, Element]:
    lows, highs = poset.minimal(), poset.maximal()
    if len(lows) != 1 or len(highs) != 1:
        raise ValueError("poset is not bounded")
    return lows[0], highs[0]


def is_rooted(poset: Multiposet, k: int) -> bool:
    try:
        root_chain(poset, k)
    except ValueError:
        return False
    return True


def is_bounded(poset: Multiposet) -> bool:
    return len(poset.minimal()) == 1 and len(poset.maximal()) == 1


def min_linear_extension(poset: Multiposet) -> Word:
    """Lexicographically smallest linear extension, read greedily."""
    placed: set = set()
    preds = {x: {a for (a, b) in poset.less if b == x} for x in poset.elements()}
    word = []
    while len(word) < poset.size:
        x = min(x for x in preds if x not in placed and preds[x] <= placed)
        placed.add(x)
        word.append(x[0])
    return tuple(word)


# ---------------------------------------------------------------------------
# binary operations


def _shifted(p: RootedPoset, j: int) -> Tuple[Multiposet, Tuple[Element, ...]]:
    return p.poset.shift(j), tuple((v + j, c) for v, c in p.root)


def _build(counts: List[int], pairs: Iterable[Tuple[Element, Element]], mode: str) -> RootedPoset:
    return RootedPoset(Multiposet(counts, pairs), mode)


def _ordered_sum_rule(m: Multiposet, n: Multiposet, bottom: Sequence[Element], top: Sequence[Element]) -> List[Tuple[Element, Element]]:
    """Relations of ``bottom`` (a chain) + (rest) + ``top`` (a chain) over m and n."""
    rest = [x for x in m.elements() + n.elements() if x not in bottom and x not in top]
    pairs = list(m.less) + list(n.less)
    pairs += list(zip(bottom, bottom[1:])) + list(zip(top, top[1:]))
    if bottom:
        pairs += [(bottom[-1], x) for x in rest + list(top[:1])]
    if top:
        pairs += [(x, top[0]) for x in rest]
    return pairs


def poset_apply(mode: str, op: str, p: RootedPoset, q: RootedPoset) -> RootedPoset:
    """``p op q``; the right operand is shifted past the values of ``p``."""
    check_mode(mode)
    if p.mode != mode or q.mode != mode:
        raise ValueError("operands belong to a different mode")
    if p.k != q.k or len(op) != p.k or set(op) - {"l", "r"}:
        raise ValueError(f"operator {op!r} does not match k = {p.k}")
    m = p.degree
    nm, nroot = _shifted(q, m)
    counts = list(p.poset.counts) + list(q.poset.counts)
    if mode == SERIES:
        bottom, used = [], {"l": 0, "r": 0}
        for s in op:
            src = p.root if s == "l" else nroot
            bottom.append(src[used[s]])
            used[s] += 1
        return _build(counts, _ordered_sum_rule(p.poset, nm, bottom, ()), mode)
    (pmin, pmax), (qmin, qmax) = p.root, nroot
    low = pmin if op[0] == "l" else qmin
    high = pmax if op[1] == "l" else qmax
    return _build(counts, _ordered_sum_rule(p.poset, nm, [low], [high]), mode)


def poset_compose(mode: str, p: RootedPoset, i: int, q: RootedPoset) -> RootedPoset:
    """Insert ``q`` at value ``i`` of ``p``.

    The anchors of ``q`` (root chain in series mode, minimum and maximum in
    parallel mode) take the places of the copies of ``i``; an element of
    ``p`` below the j-th copy ends up below everything above the j-th
    anchor, and symmetrically.
    """
    check_mode(mode)
    if p.mode != mode or q.mode != mode or p.k != q.k:
        raise ValueError("operands do not match")
    m, n = p.degree, q.degree
    if not 1 <= i <= m:
        raise IndexError(f"position {i} outside 1..{m}")
    copies = [(i, c) for c in range(1, p.k + 1)]
    anchors = list(q.root)

    def lift_m(x: Element) -> Element:
        v, c = x
        return (v if v < i else v + n - 1, c)

    def lift_n(x: Element) -> Element:
        return (x[0] + i - 1, x[1])

    outer = [x for x in p.poset.elements() if x[0] != i]
    inner = q.poset.elements()
    pairs = [(lift_m(x), lift_m(y)) for x, y in p.poset.less if x[0] != i and y[0] != i]
    pairs += [(lift_n(x), lift_n(y)) for x, y in q.poset.less]
    for x in outer:
        for y in inner:
            if any(p.poset.leq(x, c) and q.poset.leq(a, y) for c, a in zip(copies, anchors)):
                pairs.append((lift_m(x), lift_n(y)))
            if any(q.poset.leq(y, a) and p.poset.leq(c, x) for c, a in zip(copies, anchors)):
                pairs.append((lift_n(y), lift_m(x)))
    return _build([p.k] * (m + n - 1), pairs, mode)


def generator_poset(op: str, mode: str = SERIES) -> RootedPoset:
    k = len(op)
    return poset_apply(mode, op, RootedPoset.unit(k, mode), RootedPoset.unit(k, mode))


# ---------------------------------------------------------------------------
# evaluation of syntax trees


def eval_tree_poset(t: Tree, mode: str = SERIES, k: Optional[int] = None) -> RootedPoset:
    if k is None:
        k = label_length(t)
        if k is None:
            raise ValueError("k is needed to evaluate a bare leaf")
    if t is LEAF:
        return RootedPoset.unit(k, mode)
    return poset_apply(mode, t.label, eval_tree_poset(t.left, mode, k), eval_tree_poset(t.right, mode, k))


def evaluation_classes(k: int, mode: str, p: int) -> Dict[RootedPoset, List[Tree]]:
    classes: Dict[RootedPoset, List[Tree]] = defaultdict(list)
    for t in all_trees(p, k):
        classes[eval_tree_poset(t, mode, k)].append(t)
    return dict(classes)


def distinct_evaluations(k: int, mode: str, p: int) -> int:
    return len(evaluation_classes(k, mode, p))


def identified_pairs(k: int, mode: str, p: int = 3) -> List[List[Tree]]:
    """Classes of at least two trees sharing an evaluation."""
    return [ts for ts in evaluation_classes(k, mode, p).values() if len(ts) > 1]


# ---------------------------------------------------------------------------
# structure of evaluations


def _children(poset: Multiposet) -> Dict[Element, List[Element]]:
    kids: Dict[Element, List[Element]] = {x: [] for x in poset.elements()}
    for x, y in poset.covers():
        kids[x].append(y)
    return kids


def is_interval_labelled(poset: Multiposet) -> bool:
    """Sibling subtrees of a tree multiposet carry values in disjoint intervals."""
    if not poset.is_tree():
        return False
    for x, ys in _children(poset).items():
        spans = sorted((min(v for v, _ in poset.up_set(y)), max(v for v, _ in poset.up_set(y))) for y in ys)
        if any(a[1] >= b[0] for a, b in zip(spans, spans[1:])):
            return False
    return True


def edge_colours(poset: Multiposet) -> Dict[Tuple[Element, Element], str]:
    """Cover relations coloured ``red`` when the value grows, ``blue`` when it drops."""
    return {(x, y): ("red" if y[0] > x[0] else "blue") for x, y in poset.covers() if x[0] != y[0]}


def is_willow(poset: Multiposet) -> bool:
    """1-poset tree where no node has two smaller children and no red edges stack."""
    if set(poset.counts) != {1} or not is_interval_labelled(poset):
        return False
    colours = edge_colours(poset)
    blue_bottoms = [x for (x, _), c in colours.items() if c == "blue"]
    if len(blue_bottoms) != len(set(blue_bottoms)):
        return False
    red_bottoms = {x for (x, _), c in colours.items() if c == "red"}
    red_tops = {y for (_, y), c in colours.items() if c == "red"}
    return not (red_bottoms & red_tops)


def decomposition_round_trip(p: RootedPoset) -> bool:
    """Does ``p`` come back from the tree read off its minimal linear extension?

    The extension is decomposed along its rightmost cuts; the resulting
    tree must have trivial leaves and evaluate to ``p`` again.
    """
    from .actions import decompose

    dec = decompose(p.min_extension(), p.mode)
    if any(len(w) != p.k for w in dec.leaves):
        return False
    return eval_tree_poset(dec.skeleton, p.mode, p.k) == p


def is_series_normal(p: RootedPoset) -> bool:
    """Is ``p`` the evaluation of a series citelangis normal form?"""
    if p.mode != SERIES:
        raise ValueError("expected a series poset")
    return decomposition_round_trip(p)


# ---------------------------------------------------------------------------
# random instances for property checks


def random_rooted_poset(rng: random.Random, k: int, m: int, density: float = 0.4, mode: str = SERIES) -> RootedPoset:
    """Random k-rooted (or bounded) k-poset compatible with a random k-permutation."""
    word = [v for v in range(1, m + 1) for _ in range(k)]
    rng.shuffle(word)
    seen: Dict[int, int] = defaultdict(int)
    elems = []
    for v in word:
        seen[v] += 1
        elems.append((v, seen[v]))
    if mode == SERIES:
        head, body, tail = elems[:k], elems[k:], []
    else:
        head, body, tail = elems[:1], elems[1:-1], elems[-1:]
    pairs = list(zip(head, head[1:]))
    pairs += [(head[-1], y) for y in body + tail]
    pairs += [(x, tail[0]) for x in body] if tail else []
    for a, x in enumerate(body):
        for y in body[a + 1 :]:
            if rng.random() < density:
                pairs.append((x, y))
    return RootedPoset(Multiposet([k] * m, pairs), mode)


# ---------------------------------------------------------------------------
# Hilbert series numerology


def pos_hilbert_cubic(K: int, n: int) -> List[int]:
    """u_1..u_n from the fixed point H = t + K H^2 - H^3."""
    h = [0, 1] + [0] * (n - 1)
    for _ in range(n):
        h2 = series_mul(h, h, n)
        h3 = series_mul(h2, h, n)
        h = [a + K * b - c for a, b, c in zip([0, 1] + [0] * (n - 1), h2, h3)]
    return h[1:]


def pos_hilbert(K: int, n: int) -> List[int]:
    """u_1..u_n of the root H = t + O(t^2) of H^3 - K H^2 + H - t.

    Uses the order-two recurrence, or its first-order degeneration when
    K = 2, and cross-checks against the cubic fixed point.
    """
    if K < 2 or n < 1:
        raise ValueError("need K >= 2 and n >= 1")
    if K == 2:
        u = [comb(3 * m - 2, m - 1) // m for m in range(1, n + 1)]
        if any(comb(3 * m - 2, m - 1) % m for m in range(1, n + 1)):
            raise ArithmeticError("closed form is not integral")
    else:
        c, d = K * (2 * K * K - 9), K * K - 4
        u = [1, K][:n]
        for m in range(1, n - 1):
            num = c * (2 * m + 1) * (m + 1) * u[m] + 3 * (3 * m - 1) * (3 * m + 1) * u[m - 1]
            value = Fraction(num, d * (m + 1) * (m + 2))
            if value.denominator != 1:
                raise ArithmeticError(f"non-integral coefficient at n = {m + 2}")
            u.append(int(value))
    if u != pos_hilbert_cubic(K, n):
        raise ArithmeticError("recurrence disagrees with the cubic equation")
    return u


def dual_hilbert_polynomial(K: int) -> List[int]:
    """Coefficients of t + K t^2 + t^3, the Hilbert series of the Koszul dual."""
    return [0, 1, K, 1]


def koszul_inverse_check(K: int, n: int = 8) -> bool:
    """H(t) composed with -G(-t) is t, where G is the dual polynomial."""
    g = [(-c if e % 2 == 0 else c) for e, c in enumerate(dual_hilbert_polynomial(K))]
    h = [0] + pos_hilbert(K, n)
    return series_compose(g, h, n) == [0, 1] + [0] * (n - 1)
