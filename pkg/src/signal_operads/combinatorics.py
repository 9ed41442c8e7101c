"""Multisets, multipermutations, multiposets and Eulerian numerology.

Multipermutations are plain tuples of positive integers.  Copies of a value
are never labelled explicitly: the u-th occurrence of ``i`` from the left is
the copy ``i_u``.  Multiposets do label their copies, as ``(value, copy)``
pairs, because their order relations have to name individual elements.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter
from functools import lru_cache
from math import comb, factorial, prod
from typing import Callable, Dict, Hashable, Iterable, Iterator, Mapping, Sequence, Tuple

import sympy
from sympy.utilities.iterables import multiset_permutations

Word = Tuple[int, ...]
Element = Tuple[int, int]

T = sympy.Symbol("t")


# ---------------------------------------------------------------------------
# Formal sums


def basis_key(x) -> tuple:
    """Total order on basis elements: length first, then lexicographic."""
    key = getattr(x, "sort_key", None)
    if key is not None:
        return key()
    if isinstance(x, tuple):
        return (len(x), x)
    return (len(str(x)), str(x))


class FormalSum:
    """Finite integer combination of hashable basis elements.

    Zero coefficients are dropped eagerly, so two sums are equal exactly when
    their dictionaries are equal.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Hashable, int] | Iterable[Hashable] = ()):
        acc: Dict[Hashable, int] = {}
        if isinstance(terms, Mapping):
            items = terms.items()
        else:
            items = ((x, 1) for x in terms)
        for x, c in items:
            if c:
                acc[x] = acc.get(x, 0) + c
        self._terms = {x: c for x, c in acc.items() if c}

    @classmethod
    def single(cls, x, coefficient: int = 1) -> "FormalSum":
        return cls({x: coefficient})

    def items(self) -> list:
        return sorted(self._terms.items(), key=lambda xc: basis_key(xc[0]))

    def unordered_items(self):
        """Items without sorting, for hot loops."""
        return self._terms.items()

    def support(self) -> list:
        return [x for x, _ in self.items()]

    def coefficient(self, x) -> int:
        return self._terms.get(x, 0)

    def __iter__(self) -> Iterator:
        return iter(self.support())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __contains__(self, x) -> bool:
        return x in self._terms

    def __eq__(self, other) -> bool:
        if isinstance(other, FormalSum):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: "FormalSum") -> "FormalSum":
        acc = dict(self._terms)
        for x, c in other._terms.items():
            acc[x] = acc.get(x, 0) + c
        return FormalSum(acc)

    def __neg__(self) -> "FormalSum":
        return FormalSum({x: -c for x, c in self._terms.items()})

    def __sub__(self, other: "FormalSum") -> "FormalSum":
        return self + (-other)

    def __mul__(self, scalar: int) -> "FormalSum":
        return FormalSum({x: scalar * c for x, c in self._terms.items()})

    __rmul__ = __mul__

    def map(self, f: Callable) -> "FormalSum":
        """Apply a linear map given on basis elements (f returns a FormalSum)."""
        out: Dict[Hashable, int] = {}
        for x, c in self._terms.items():
            for y, d in f(x)._terms.items():
                out[y] = out.get(y, 0) + c * d
        return FormalSum(out)

    def format(self, fmt: Callable = str) -> str:
        if not self._terms:
            return "0"
        parts = []
        for x, c in self.items():
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = fmt(x) if mag == 1 else f"{mag}*{fmt(x)}"
            parts.append((sign, body))
        head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        return " ".join([head] + [f"{s} {b}" for s, b in parts[1:]])

    def __repr__(self):
        return f"FormalSum({self.format(format_word if self._is_words() else str)})"

    def _is_words(self) -> bool:
        return all(isinstance(x, tuple) and all(isinstance(v, int) for v in x) for x in self._terms)


# ---------------------------------------------------------------------------
# Words and multipermutations


def parse_word(text: str) -> Word:
    """Read ``"31421324"`` or ``"10,2,3"`` into a tuple of integers."""
    text = text.strip()
    if not text:
        return ()
    if "," in text:
        return tuple(int(x) for x in text.split(","))
    return tuple(int(ch) for ch in text)


def format_word(w: Sequence[int]) -> str:
    if w and max(w) > 9:
        return ",".join(str(x) for x in w)
    return "".join(str(x) for x in w)


def degree(w: Sequence[int]) -> int:
    return max(w, default=0)


def multiplicities(w: Sequence[int]) -> Tuple[int, ...]:
    counts = Counter(w)
    return tuple(counts.get(i, 0) for i in range(1, degree(w) + 1))


def is_k_permutation(w: Sequence[int], k: int) -> bool:
    m = degree(w)
    return len(w) == k * m and all(c == k for c in multiplicities(w))


def k_of(w: Sequence[int]) -> int:
    """Common multiplicity of a k-permutation."""
    if not w:
        raise ValueError("empty word has no multiplicity")
    m = degree(w)
    if len(w) % m or not is_k_permutation(w, len(w) // m):
        raise ValueError(f"{format_word(w)} is not a k-permutation")
    return len(w) // m


def k_permutations(k: int, m: int) -> Iterator[Word]:
    """All k-permutations of degree m, in lexicographic order."""
    base = [i for i in range(1, m + 1) for _ in range(k)]
    for p in multiset_permutations(base):
        yield tuple(p)


def count_k_permutations(k: int, m: int) -> int:
    return factorial(k * m) // factorial(k) ** m


def restrict(w: Sequence[int], values: Iterable[int]) -> Word:
    """Keep the letters lying in ``values``, relabelled by their rank there."""
    rank = {v: r for r, v in enumerate(sorted(set(values)), start=1)}
    return tuple(rank[x] for x in w if x in rank)


def shift(w: Sequence[int], j: int) -> Word:
    return tuple(x + j for x in w)


def gap_shift(w: Sequence[int], i: int, j: int) -> Word:
    """Erase every ``i`` and add ``j - 1`` to the letters larger than ``i``."""
    return tuple(x if x < i else x + j - 1 for x in w if x != i)


def standardize(w: Sequence[int]) -> Word:
    """Send the copy ``i_u`` to its global rank (copies ordered left to right)."""
    order = sorted(range(len(w)), key=lambda p: (w[p], p))
    out = [0] * len(w)
    for r, p in enumerate(order, start=1):
        out[p] = r
    return tuple(out)


def shuffle(x: Sequence[int], y: Sequence[int]) -> FormalSum:
    """All interleavings of two words, with multiplicity."""
    return FormalSum(Counter(_interleavings(tuple(x), tuple(y))))


@lru_cache(maxsize=256)
def _shuffle_maps(a: int, b: int) -> Tuple[Tuple[int, ...], ...]:
    # each map sends a position of the result to an index into x + y
    maps = []
    for slots in itertools.combinations(range(a + b), a):
        chosen = set(slots)
        xi, yi, idx = 0, a, []
        for pos in range(a + b):
            if pos in chosen:
                idx.append(xi)
                xi += 1
            else:
                idx.append(yi)
                yi += 1
        maps.append(tuple(idx))
    return tuple(maps)


def _interleavings(x: Word, y: Word) -> Iterator[Word]:
    xy = x + y
    pick = xy.__getitem__
    for idx in _shuffle_maps(len(x), len(y)):
        yield tuple(map(pick, idx))


def shuffle_words(x: Sequence[int], y: Sequence[int]) -> Iterator[Word]:
    """Interleavings of two words over disjoint alphabets (each exactly once)."""
    return _interleavings(tuple(x), tuple(y))


def shifted_shuffle(mu: Sequence[int], nu: Sequence[int]) -> FormalSum:
    return shuffle(mu, shift(nu, degree(mu)))


def shifted_concat(mu: Sequence[int], nu: Sequence[int]) -> Word:
    return tuple(mu) + shift(nu, degree(mu))


# ---------------------------------------------------------------------------
# Multiposets


class Multiposet:
    """Partial order on labelled copies ``(i, u)`` of a multiset.

    ``less`` is the strict order, stored transitively closed.  Copies of the
    same value are always chained in their natural order, so a linear
    extension is determined by its word of values.
    """

    __slots__ = ("counts", "less", "_hash")

    def __init__(self, counts: Sequence[int], relations: Iterable[Tuple[Element, Element]] = ()):
        self.counts = tuple(counts)
        elems = self.elements()
        known = set(elems)
        pairs = set()
        for x, y in relations:
            if x not in known or y not in known:
                raise ValueError(f"unknown element in relation {x} < {y}")
            if x != y:
                pairs.add((x, y))
        for i, a in enumerate(self.counts, start=1):
            for u in range(1, a):
                pairs.add(((i, u), (i, u + 1)))
        self.less = frozenset(_transitive_closure(elems, pairs))
        for x, y in self.less:
            if (y, x) in self.less or x == y:
                raise ValueError("relations contain a cycle")
        self._hash = None

    def elements(self) -> list:
        return [(i, u) for i, a in enumerate(self.counts, start=1) for u in range(1, a + 1)]

    @property
    def size(self) -> int:
        return sum(self.counts)

    @property
    def degree(self) -> int:
        return len(self.counts)

    def leq(self, x: Element, y: Element) -> bool:
        return x == y or (x, y) in self.less

    def covers(self) -> list:
        """Cover relations (x, y) with x < y and nothing strictly between."""
        out = []
        for x, y in self.less:
            if not any((x, z) in self.less and (z, y) in self.less for z in self.elements()):
                out.append((x, y))
        return sorted(out)

    def minimal(self) -> list:
        below = {y for _, y in self.less}
        return [x for x in self.elements() if x not in below]

    def maximal(self) -> list:
        above = {x for x, _ in self.less}
        return [x for x in self.elements() if x not in above]

    def up_set(self, x: Element) -> set:
        return {x} | {y for (z, y) in self.less if z == x}

    def is_forest(self) -> bool:
        # two elements below a common one are comparable
        elems = self.elements()
        for z in elems:
            below = [x for x in elems if (x, z) in self.less]
            for x, y in itertools.combinations(below, 2):
                if not (self.leq(x, y) or self.leq(y, x)):
                    return False
        return True

    def is_tree(self) -> bool:
        return self.size > 0 and self.is_forest() and len(self.minimal()) == 1

    def __eq__(self, other):
        return isinstance(other, Multiposet) and self.counts == other.counts and self.less == other.less

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.counts, self.less))
        return self._hash

    def __repr__(self):
        return f"Multiposet({list(self.counts)}, covers={self.covers()})"

    # -- serialization --------------------------------------------------------

    def to_json(self) -> str:
        covers = [[f"{x[0]}_{x[1]}", f"{y[0]}_{y[1]}"] for x, y in self.covers()]
        return json.dumps({"ground": list(self.counts), "covers": covers})

    @classmethod
    def from_json(cls, text: str) -> "Multiposet":
        data = json.loads(text)

        def elem(s: str) -> Element:
            v, u = s.split("_")
            return int(v), int(u)

        return cls(data["ground"], [(elem(a), elem(b)) for a, b in data["covers"]])

    def to_dot(self, name: str = "poset") -> str:
        lines = [f"digraph {name} {{", "  rankdir=BT;"]
        for i, u in self.elements():
            lines.append(f'  "{i}_{u}" [label="{i}"];')
        for (a, b), (c, d) in self.covers():
            lines.append(f'  "{a}_{b}" -> "{c}_{d}";')
        lines.append("}")
        return "\n".join(lines) + "\n"

    # -- operators --------------------------------------------------------------

    def relabel(self, mapping: Callable[[Element], Element], counts: Sequence[int]) -> "Multiposet":
        return Multiposet(counts, [(mapping(x), mapping(y)) for x, y in self.less])

    def shift(self, j: int) -> "Multiposet":
        return Multiposet((0,) * j + self.counts, [((a + j, b), (c + j, d)) for (a, b), (c, d) in self.less])

    def restrict(self, values: Iterable[int]) -> "Multiposet":
        vals = sorted(set(values))
        rank = {v: r for r, v in enumerate(vals, start=1)}
        counts = [self.counts[v - 1] for v in vals]
        rel = [((rank[a], b), (rank[c], d)) for (a, b), (c, d) in self.less if a in rank and c in rank]
        return Multiposet(counts, rel)

    def standardize(self) -> "Multiposet":
        """One copy per value, copies ranked globally."""
        order = {}
        r = 0
        for i, a in enumerate(self.counts, start=1):
            for u in range(1, a + 1):
                r += 1
                order[(i, u)] = (r, 1)
        return Multiposet([1] * r, [(order[x], order[y]) for x, y in self.less])


def _transitive_closure(elems: Sequence[Element], pairs: set) -> set:
    succ: Dict[Element, set] = {x: set() for x in elems}
    for x, y in pairs:
        succ[x].add(y)
    closed = set()
    for x in elems:
        seen = set()
        stack = list(succ[x])
        while stack:
            y = stack.pop()
            if y in seen:
                continue
            seen.add(y)
            stack.extend(succ[y])
        closed.update((x, y) for y in seen)
    return closed


def disjoint_union(p: Multiposet, q: Multiposet) -> Multiposet:
    """Disjoint union of posets on disjoint value ranges (q already shifted)."""
    counts = _merge_counts(p.counts, q.counts)
    return Multiposet(counts, list(p.less) + list(q.less))


def ordered_sum(p: Multiposet, q: Multiposet) -> Multiposet:
    """Every element of ``p`` below every element of ``q``."""
    counts = _merge_counts(p.counts, q.counts)
    bridge = [(x, y) for x in p.elements() for y in q.elements()]
    return Multiposet(counts, list(p.less) + list(q.less) + bridge)


def _merge_counts(a: Sequence[int], b: Sequence[int]) -> list:
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    if any(x and y for x, y in zip(a, b)):
        raise ValueError("multisets are not disjoint")
    return [x + y for x, y in zip(a, b)]


def chain(word: Sequence[int]) -> Multiposet:
    """The total order given by a multipermutation."""
    counts = multiplicities(word)
    seen: Counter = Counter()
    elems = []
    for v in word:
        seen[v] += 1
        elems.append((v, seen[v]))
    return Multiposet(counts, list(zip(elems, elems[1:])))


MAX_EXTENSION_SIZE = 12


def linear_extensions(poset: Multiposet, max_size: int = MAX_EXTENSION_SIZE) -> list:
    """Sorted list of the linear extensions of ``poset``, as value words."""
    if poset.size > max_size:
        raise ValueError(f"poset of size {poset.size} exceeds the guard {max_size}")
    elems = poset.elements()
    preds = {x: {a for (a, b) in poset.less if b == x} for x in elems}
    out = []

    def extend(placed: set, word: list):
        if len(word) == len(elems):
            out.append(tuple(word))
            return
        for x in elems:
            if x not in placed and preds[x] <= placed:
                placed.add(x)
                word.append(x[0])
                extend(placed, word)
                word.pop()
                placed.discard(x)

    extend(set(), [])
    return sorted(set(out))


def hook_count(poset: Multiposet) -> int:
    """Number of linear extensions of a tree poset, by the hook length formula."""
    if not poset.is_tree():
        raise ValueError("hook length formula needs a tree poset")
    return factorial(poset.size) // prod(len(poset.up_set(x)) for x in poset.elements())


# ---------------------------------------------------------------------------
# Eulerian numbers


@lru_cache(maxsize=None)
def eulerian_number(k: int, j: int) -> int:
    """Number of permutations of size k with exactly j descents."""
    if k == 0:
        return 1 if j == 0 else 0
    if j < 0 or j >= k:
        return 0
    return (j + 1) * eulerian_number(k - 1, j) + (k - j) * eulerian_number(k - 1, j - 1)


def eulerian_polynomial(k: int) -> sympy.Poly:
    """E_k(t) = sum_j A(k, j) t^(j+1); E_0(t) = t."""
    return sympy.Poly(sum(eulerian_number(k, j) * T ** (j + 1) for j in range(max(k, 1))), T, domain="ZZ")


def format_poly(p: sympy.Poly) -> str:
    """Sparse text form ``c*t^e + ...``, highest degree first."""
    terms = [(e[0], c) for e, c in p.terms() if c]
    if not terms:
        return "0"
    parts = []
    for n, (e, c) in enumerate(terms):
        mag = abs(c)
        mono = "1" if e == 0 else ("t" if e == 1 else f"t^{e}")
        body = mono if mag == 1 and e else (str(mag) if e == 0 else f"{mag}*{mono}")
        sign = "-" if c < 0 else "+"
        parts.append(("-" + body) if n == 0 and c < 0 else (body if n == 0 else f"{sign} {body}"))
    return " ".join(parts)


def worpitzky_holds(p: int, k: int) -> bool:
    return p ** k == sum(eulerian_number(k, j) * comb(j + p, k) for j in range(k))
