"""Citelangis operads: relations, rewriting, normal forms and numerology.

Relations are written ``a(x, b(y, z)) = c(d(x, y), z)`` where the operator
words may contain the letter ``m``, which stands for ``l + r``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, factorial
from typing import Dict, List, Optional, Sequence, Tuple

import sympy
from sympy.polys.matrices import DomainMatrix

from .combinatorics import T, FormalSum, eulerian_number, eulerian_polynomial, format_poly
from .linalg import nullspace, rank_of, same_span, series_compose, series_inverse, series_mul, series_negate_argument
from .signaletic import QuadraticRelation, quadratic_trees, signaletic_relations
from .trees import LEAF, MESSY, PARALLEL, SERIES, TIDY, Node, Tree, check_mode, check_style, format_tree, operator_words

# per-letter tables indexed by the destination letter 1, 2, 3: (a, b, c, d)
_PARALLEL_MESSY = {1: "lmll", 2: "rllr", 3: "rrrm"}
_PARALLEL_TIDY = {
    "l": {1: "llll", 2: "rllr", 3: "rrrl"},
    "r": {1: "lrll", 2: "rllr", 3: "rrrr"},
}


def expand_word(word: str) -> List[str]:
    """All {l, r} words obtained by replacing each ``m`` by ``l`` or ``r``."""
    choices = [("l", "r") if ch == "m" else (ch,) for ch in word]
    return ["".join(w) for w in itertools.product(*choices)]


def destination_words(k: int) -> List[Tuple[int, ...]]:
    return list(itertools.product((1, 2, 3), repeat=k))


def citelangis_table(k: int, mode: str, style: str, constraint: Optional[str] = None) -> Dict[Tuple[int, ...], Tuple[str, str, str, str]]:
    """Operator words (a, b, c, d) of the relation attached to each p in [3]^k."""
    check_mode(mode)
    check_style(style)
    if constraint is None:
        constraint = "l" * k
    if style == TIDY and mode == SERIES and set(constraint) - {"l"}:
        raise ValueError("tidy series relations are only available for the all-l constraint")
    table = {}
    for p in destination_words(k):
        if mode == PARALLEL:
            if style == MESSY:
                cols = [_PARALLEL_MESSY[x] for x in p]
            else:
                cols = [_PARALLEL_TIDY[constraint[i]][x] for i, x in enumerate(p)]
            a, b, c, d = ("".join(col[n] for col in cols) for n in range(4))
        else:
            filler = "m" if style == MESSY else "l"
            a = "".join("l" if x == 1 else "r" for x in p)
            c = "".join("r" if x == 3 else "l" for x in p)
            q = [x for x in p if x in (2, 3)]
            s = [x for x in p if x in (1, 2)]
            b = "".join("l" if x == 2 else "r" for x in q) + filler * (k - len(q))
            d = "".join("l" if x == 1 else "r" for x in s) + filler * (k - len(s))
        table[p] = (a, b, c, d)
    return table


def _right_tree(a: str, b: str) -> Tree:
    return Node(a, LEAF, Node(b, LEAF, LEAF))


def _left_tree(c: str, d: str) -> Tree:
    return Node(c, Node(d, LEAF, LEAF), LEAF)


def citelangis_relations(k: int, mode: str, style: str, constraint: Optional[str] = None) -> List[QuadraticRelation]:
    """One relation per p in [3]^k, with ``m`` letters expanded."""
    out = []
    for p, (a, b, c, d) in citelangis_table(k, mode, style, constraint).items():
        left = FormalSum(_right_tree(x, y) for x in expand_word(a) for y in expand_word(b))
        right = FormalSum(_left_tree(x, y) for x in expand_word(c) for y in expand_word(d))
        out.append(QuadraticRelation(left, right))
    return out


# ---------------------------------------------------------------------------
# Koszul duality in arity 3


def _pairing_sign(t: Tree) -> int:
    # trees grafted on the left pair to +1, on the right to -1
    return 1 if t.left is not LEAF else -1


def relation_vectors(relations: Sequence[QuadraticRelation]) -> List[Dict[Tree, int]]:
    return [dict(r.vector().items()) for r in relations]


def koszul_dual_relations(relations: Sequence[QuadraticRelation], k: int) -> List[Dict[Tree, object]]:
    """Basis of the orthogonal complement under the signed pairing."""
    basis = quadratic_trees(k)
    rows = [{t: _pairing_sign(t) * c for t, c in v.items()} for v in relation_vectors(relations)]
    return nullspace(rows, basis)


def relation_rank(relations: Sequence[QuadraticRelation], k: int) -> int:
    return rank_of(relation_vectors(relations), quadratic_trees(k))


def same_relation_span(r1, r2, k: int) -> bool:
    """Do two lists of relations (or raw vectors) span the same space?"""
    basis = quadratic_trees(k)
    v1 = [x if isinstance(x, dict) else dict(x.vector().items()) for x in r1]
    v2 = [x if isinstance(x, dict) else dict(x.vector().items()) for x in r2]
    return same_span(v1, v2, basis)


def koszul_round_trip(k: int, mode: str, style: str, constraint: Optional[str] = None) -> bool:
    """Is the dual of the signaletic relations spanned by the citelangis ones?"""
    dual = koszul_dual_relations(signaletic_relations(k, mode, style, constraint), k)
    return same_relation_span(dual, citelangis_relations(k, mode, style, constraint), k)


# ---------------------------------------------------------------------------
# combs, transition matrices and normal forms


def is_comb_pair(a: str, b: str, mode: str, constraint: Optional[str] = None) -> bool:
    """Is ``a(x, b(y, z))`` a quadratic right signaletic comb?

    Letters of ``b`` not read by any car must equal the constraint letter
    (``l`` by default).
    """
    c = constraint or "l" * len(b)
    if mode == PARALLEL:
        return all(y == ci for x, y, ci in zip(a, b, c) if x == "l")
    start = a.count("r")
    return all(y == ci for y, ci in zip(b[start:], c[start:]))


def transition_matrix(k: int, mode: str) -> List[List[int]]:
    """0/1 matrix over operator words: 1 when a(x, b(y, z)) is not a comb."""
    check_mode(mode)
    words = operator_words(k)
    return [[0 if is_comb_pair(a, b, mode) else 1 for b in words] for a in words]


def reduced_matrix(k: int) -> List[List[int]]:
    return [[comb(k, j) - comb(i, j) for j in range(k + 1)] for i in range(k + 1)]


def _matmul(a: List[List[int]], b: List[List[int]]) -> List[List[int]]:
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def comb_series(k: int, mode: Optional[str] = PARALLEL, n: int = 10, via: str = "M") -> List[int]:
    """Coefficients of R_k(t) up to t^n, from powers of M_k or of N_k."""
    if via == "M":
        a = transition_matrix(k, mode)
        weights = [1] * len(a)
    elif via == "N":
        a = reduced_matrix(k)
        weights = [comb(k, i) for i in range(k + 1)]
    else:
        raise ValueError("via must be 'M' or 'N'")
    size = len(a)
    power = [[int(i == j) for j in range(size)] for i in range(size)]
    out = [1]
    for _ in range(n):
        out.append(sum(w * sum(row) for w, row in zip(weights, power)))
        power = _matmul(power, a)
    return out


def comb_series_closed(k: int, n: int = 10) -> List[int]:
    """R_k(t) from R_k(t) E_k(-t) = -t (1+t)^(k+1)."""
    e = [int(c) for c in reversed(eulerian_polynomial(k).all_coeffs())]
    e = series_negate_argument(e + [0] * (n + 2))
    # E_k(-t) = -t * u(t) with u(0) = 1
    u = [-c for c in e[1:]]
    num = [comb(k + 1, j) for j in range(n + 1)]
    return series_mul(num, series_inverse(u, n), n)


def normal_form_counts(k: int, mode: str, p_max: int) -> List[int]:
    """d(1..p_max) by counting trees free of quadratic combs."""
    words = operator_words(k)
    allowed = {a: [b for b in words if not is_comb_pair(a, b, mode)] for a in words}
    total = [0, 1]
    by_root: List[Dict[str, int]] = [{}, {}]
    for p in range(2, p_max + 1):
        roots = {}
        for a in words:
            acc = 0
            for i in range(1, p):
                j = p - i
                right = 1 if j == 1 else sum(by_root[j][b] for b in allowed[a])
                acc += total[i] * right
            roots[a] = acc
        by_root.append(roots)
        total.append(sum(roots.values()))
    return total[1:]


def normal_form_count(k: int, mode: str, p: int) -> int:
    return normal_form_counts(k, mode, p)[p - 1]


def enumerate_normal_forms(k: int, mode: str, p: int, constraint: Optional[str] = None) -> List[Tree]:
    """Every tree of arity p over {l, r}^k avoiding quadratic right combs."""
    check_mode(mode)
    words = operator_words(k)

    @lru_cache(maxsize=None)
    def trees(n: int) -> Tuple[Tree, ...]:
        if n == 1:
            return (LEAF,)
        out = []
        for a in words:
            for i in range(1, n):
                rights = [r for r in trees(n - i) if r is LEAF or not is_comb_pair(a, r.label, mode, constraint)]
                for left in trees(i):
                    out.extend(Node(a, left, r) for r in rights)
        return tuple(out)

    return list(trees(p))


def is_normal_form(t: Tree, mode: str, constraint: Optional[str] = None) -> bool:
    if t is LEAF:
        return True
    if t.right is not LEAF and is_comb_pair(t.label, t.right.label, mode, constraint):
        return False
    return is_normal_form(t.left, mode, constraint) and is_normal_form(t.right, mode, constraint)


# ---------------------------------------------------------------------------
# rewriting


def _graft3(template: Tree, x: Tree, y: Tree, z: Tree) -> Tree:
    if template.left is LEAF:
        return Node(template.label, x, Node(template.right.label, y, z))
    return Node(template.label, Node(template.left.label, x, y), z)


class CitelangisRewriter:
    """Rewrites every quadratic right comb into the other terms of its relation."""

    def __init__(self, k: int, mode: str, style: str, constraint: Optional[str] = None):
        self.k, self.mode, self.style = k, mode, style
        self.rules: Dict[Tuple[str, str], FormalSum] = {}
        for rel in citelangis_relations(k, mode, style, constraint):
            combs = [t for t in rel.left if is_comb_pair(t.label, t.right.label, mode, constraint)]
            if len(combs) != 1:
                raise ValueError(f"relation {rel.format()} does not contain exactly one comb")
            (c,) = combs
            key = (c.label, c.right.label)
            self.rules[key] = rel.right - (rel.left - FormalSum.single(c))
        self._memo: Dict[Tree, FormalSum] = {}

    def rewrite(self, t: Tree) -> FormalSum:
        """Normal form of a single tree as a combination of comb-free trees."""
        hit = self._memo.get(t)
        if hit is not None:
            return hit
        if t is LEAF:
            out = FormalSum.single(LEAF)
        else:
            acc = FormalSum()
            for lt, lc in self.rewrite(t.left).items():
                for rt, rc in self.rewrite(t.right).items():
                    acc = acc + (lc * rc) * self._root_step(Node(t.label, lt, rt))
            out = acc
        self._memo[t] = out
        return out

    def _root_step(self, t: Tree) -> FormalSum:
        # children are already normal, so only the root can carry a comb
        r = t.right
        if r is LEAF or (t.label, r.label) not in self.rules:
            return FormalSum.single(t)
        acc = FormalSum()
        for template, c in self.rules[(t.label, r.label)].items():
            acc = acc + c * self.rewrite(_graft3(template, t.left, r.left, r.right))
        return acc

    def rewrite_sum(self, f: FormalSum) -> FormalSum:
        return f.map(self.rewrite)

    def random_rewrite(self, t: Tree, rng: random.Random, max_steps: int = 100000) -> FormalSum:
        """Rewrite by picking redexes at random, as a confluence cross-check."""
        current = FormalSum.single(t)
        for _ in range(max_steps):
            redexes = [(u, path) for u in current for path in _comb_paths(u, self.rules)]
            if not redexes:
                return current
            u, path = rng.choice(redexes)
            c = current.coefficient(u)
            current = current - c * FormalSum.single(u) + c * self._one_step(u, path)
        raise RuntimeError("rewriting did not terminate")

    def _one_step(self, t: Tree, path: Tuple[int, ...]) -> FormalSum:
        if not path:
            r = t.right
            acc = FormalSum()
            for template, c in self.rules[(t.label, r.label)].items():
                acc = acc + c * FormalSum.single(_graft3(template, t.left, r.left, r.right))
            return acc
        if path[0]:
            return self._one_step(t.right, path[1:]).map(lambda s: FormalSum.single(Node(t.label, t.left, s)))
        return self._one_step(t.left, path[1:]).map(lambda s: FormalSum.single(Node(t.label, s, t.right)))


def _comb_paths(t: Tree, rules, path: Tuple[int, ...] = ()) -> List[Tuple[int, ...]]:
    if t is LEAF:
        return []
    out = []
    if t.right is not LEAF and (t.label, t.right.label) in rules:
        out.append(path)
    return out + _comb_paths(t.left, rules, path + (0,)) + _comb_paths(t.right, rules, path + (1,))


def citelangis_rewrite(t: Tree, mode: str, style: str) -> FormalSum:
    k = len(t.label) if t is not LEAF else 0
    return CitelangisRewriter(k, mode, style).rewrite(t)


# ---------------------------------------------------------------------------
# Hilbert series


def _compositions_product(d: Sequence[int], parts: int, total: int, minimum: int) -> int:
    """Sum over q_1 + ... + q_parts = total (each q >= minimum) of prod d[q_i]."""
    # polynomial power on the truncated series sum_{q >= minimum} d[q] x^q
    base = [d[q] if q >= minimum else 0 for q in range(total + 1)]
    acc = [1] + [0] * total
    for _ in range(parts):
        acc = series_mul(acc, base, total)
    return acc[total]


def hilbert_recursive(k: int, n: int) -> List[int]:
    """d_k(1..n) from the recurrence with d_k(0) = 1."""
    d = [1]
    for p in range(1, n + 1):
        d.append(0)
        value = _compositions_product(d, k + 1, p - 1, 0)
        for j in range(1, k):
            value += (-1) ** (j + 1) * eulerian_number(k, j) * _compositions_product(d, j + 1, p, 1)
        d[p] = value
    return d[1:]


def _weighted_partitions(target: int, parts: int) -> List[Tuple[int, ...]]:
    """(j_1..j_parts) with sum l * j_l = target."""
    if parts == 0:
        return [()] if target == 0 else []
    out = []
    for last in range(target // parts + 1):
        for head in _weighted_partitions(target - parts * last, parts - 1):
            out.append(head + (last,))
    return out


def hilbert_closed(k: int, p: int) -> int:
    """d_k(p) from the alternating multinomial summation."""
    if p < 1:
        raise ValueError("p must be positive")
    if k == 0:
        return 1
    total = 0
    for i in range(p):
        jprime = p - 1 - i
        for js in _weighted_partitions(jprime, k - 1):
            j = sum(js)
            multinomial = factorial(j)
            weight = 1
            for ell, jl in enumerate(js, start=1):
                multinomial //= factorial(jl)
                weight *= eulerian_number(k, ell) ** jl
            total += (-1) ** (j + jprime) * comb((k + 1) * p, i) * comb(p + j - 1, j) * multinomial * weight
    if total % p:
        raise ArithmeticError("closed formula produced a non-integer")
    return total // p


def signaletic_series(k: int, n: int) -> List[int]:
    return [0] + [p ** k for p in range(1, n + 1)]


def lagrange_check(k: int, mode: str = PARALLEL, style: str = MESSY, n: int = 10) -> bool:
    """Does sum p^k t^p composed with -H(-t) give t up to order n?

    All four flavours share both series; ``mode`` and ``style`` are only
    validated.
    """
    check_mode(mode)
    check_style(style)
    d = hilbert_recursive(k, n)
    inner = [0] + [-c for c in series_negate_argument([0] + d)[1:]]
    composed = series_compose(signaletic_series(k, n), inner, n)
    return composed == [0, 1] + [0] * (n - 1)


def fixed_point_check(k: int, mode: str = PARALLEL, n: int = 10) -> bool:
    """H(t) = t R_k(H(t)) up to order n."""
    h = [0] + hilbert_recursive(k, n)
    r = comb_series(k, mode, n)
    rhs = [0] + series_compose(r, h, n)[:n]
    return rhs == h


# ---------------------------------------------------------------------------
# polynomials of integer matrices


def _domain_matrix(a: List[List[int]], domain=sympy.ZZ) -> DomainMatrix:
    return DomainMatrix([[domain(x) for x in row] for row in a], (len(a), len(a)), domain)


def char_poly(a: List[List[int]]) -> sympy.Poly:
    """det(tI - A) via the division-free Berkowitz algorithm."""
    coeffs = _domain_matrix(a).charpoly()
    return sympy.Poly([int(c) for c in coeffs], T, domain="ZZ")


def _poly_at_matrix(p: sympy.Poly, a: DomainMatrix) -> DomainMatrix:
    n = a.shape[0]
    acc = DomainMatrix.zeros((n, n), a.domain)
    for c in p.all_coeffs():
        acc = acc * a + DomainMatrix.eye(n, a.domain) * a.domain(int(c))
    return acc


def min_poly(a: List[List[int]]) -> sympy.Poly:
    """Minimal polynomial over the rationals.

    For each irreducible factor f of the characteristic polynomial, its
    exponent is the point where the kernels of f(A)^e stop growing.
    """
    chi = char_poly(a)
    qa = _domain_matrix(a, sympy.QQ)
    n = len(a)
    result = sympy.Poly(1, T, domain="ZZ")
    for factor, mult in chi.factor_list()[1]:
        fa = _poly_at_matrix(factor, qa)
        power = DomainMatrix.eye(n, sympy.QQ)
        prev_nullity = 0
        exponent = 0
        for e in range(1, mult + 1):
            power = power * fa
            nullity = n - power.rank()
            if nullity == prev_nullity:
                break
            prev_nullity = nullity
            exponent = e
        result = result * factor ** exponent
    return sympy.Poly(result.monic(), T, domain="ZZ")


def annihilates(p: sympy.Poly, a: List[List[int]]) -> bool:
    return _poly_at_matrix(p, _domain_matrix(a, sympy.QQ)).is_zero_matrix


def _signed_eulerian(k: int) -> sympy.Poly:
    """(-1)^k t E_k(-t)."""
    e = eulerian_polynomial(k).as_expr().subs(T, -T)
    return sympy.Poly(sympy.expand((-1) ** k * T * e), T, domain="ZZ")


def conjectured_polynomials(k: int) -> Dict[str, sympy.Poly]:
    base = _signed_eulerian(k)
    a1 = eulerian_number(k, 1)
    return {
        "min M parallel": base * sympy.Poly((T + 1) ** (k - 1), T),
        "char M parallel": base * sympy.Poly((T + 1) ** a1, T),
        "min M series": base,
        "char M series": base * sympy.Poly(T ** a1, T),
        "min N": base,
        "char N": base,
    }


@dataclass
class ConjectureReport:
    k: int
    computed: Dict[str, sympy.Poly] = field(default_factory=dict)
    expected: Dict[str, sympy.Poly] = field(default_factory=dict)

    def results(self) -> Dict[str, bool]:
        return {name: self.computed[name] == self.expected[name] for name in self.expected}

    @property
    def passed(self) -> bool:
        return all(self.results().values())

    def lines(self) -> List[str]:
        out = []
        for name, ok in self.results().items():
            status = "PASS" if ok else "FAIL"
            line = f"k={self.k} {name}: {format_poly(self.computed[name])} {status}"
            if not ok:
                line += f" (expected {format_poly(self.expected[name])})"
            out.append(line)
        return out


def conjecture_check(k: int, modes: Sequence[str] = (PARALLEL, SERIES)) -> ConjectureReport:
    """Compare minimal and characteristic polynomials with the Eulerian conjectures."""
    if k < 1:
        raise ValueError("the conjectures are stated for k >= 1")
    report = ConjectureReport(k)
    expected = conjectured_polynomials(k)
    for mode in modes:
        m = transition_matrix(k, mode)
        report.computed[f"min M {mode}"] = min_poly(m)
        report.computed[f"char M {mode}"] = char_poly(m)
        report.expected[f"min M {mode}"] = expected[f"min M {mode}"]
        report.expected[f"char M {mode}"] = expected[f"char M {mode}"]
    n = reduced_matrix(k)
    report.computed["min N"] = min_poly(n)
    report.computed["char N"] = char_poly(n)
    report.expected["min N"] = expected["min N"]
    report.expected["char N"] = expected["char N"]
    return report


def normal_forms_differ(k: int, p: int) -> bool:
    """Series and parallel normal forms are different sets of trees."""
    return set(enumerate_normal_forms(k, PARALLEL, p)) != set(enumerate_normal_forms(k, SERIES, p))


def format_relation(rel: QuadraticRelation) -> str:
    return f"{rel.left.format(format_tree)} = {rel.right.format(format_tree)}"
