"""The four signaletic operads on destination vectors.

Composition is computed directly on vectors; relations and the rewriting
system are derived from traversals of the arity-3 syntax trees.
"""

from __future__ import annotations

import itertools
import json
from math import gcd
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import sympy

from .combinatorics import FormalSum
from .trees import (
    LEAF,
    PARALLEL,
    SERIES,
    TIDY,
    ZERO,
    DestinationVector,
    Node,
    Tree,
    all_trees,
    arity,
    check_mode,
    check_style,
    destination,
    format_tree,
    operator_words,
    right_comb_of,
    tamari_leq,
)

Dest = Union[DestinationVector, type(ZERO)]


# ---------------------------------------------------------------------------
# composition


def compose_destination(p: Dest, i: int, q: Dest, mode: str, style: str) -> Dest:
    """The i-th partial composition p o_i q of two destination vectors."""
    check_mode(mode)
    check_style(style)
    if p is ZERO or q is ZERO:
        if style != TIDY:
            raise ValueError("zero only exists in tidy operads")
        return ZERO
    if not 1 <= i <= p.arity:
        raise IndexError(f"position {i} out of range for arity {p.arity}")
    if p.k != q.k:
        raise ValueError("destination vectors over different k")
    n = p.arity + q.arity - 1
    if mode == PARALLEL:
        if style == TIDY and any(qj != 1 for pj, qj in zip(p.entries, q.entries) if pj != i):
            return ZERO
        out = tuple(_lift(pj, i, qj, q.arity) for pj, qj in zip(p.entries, q.entries))
        return DestinationVector(out, n)
    arriving = sum(1 for pj in p.entries if pj == i)
    if style == TIDY and any(qj != 1 for qj in q.entries[arriving:]):
        return ZERO
    out = []
    c = 0
    for pj in p.entries:
        if pj == i:
            c += 1
            out.append(i + q.entries[c - 1] - 1)
        else:
            out.append(_lift(pj, i, 1, q.arity))
    return DestinationVector(tuple(out), n)


def _lift(pj: int, i: int, qj: int, qn: int) -> int:
    if pj < i:
        return pj
    if pj == i:
        return i + qj - 1
    return pj + qn - 1


def unit(k: int) -> DestinationVector:
    return DestinationVector((1,) * k, 1)


def generator(word: str, mode: str = PARALLEL) -> DestinationVector:
    """Destination vector of a single binary node."""
    return destination(Node(word, LEAF, LEAF), mode)


# ---------------------------------------------------------------------------
# relations


@dataclass(frozen=True)
class QuadraticRelation:
    """``left = right`` between combinations of arity-3 trees."""

    left: FormalSum
    right: FormalSum

    def vector(self) -> FormalSum:
        return self.left - self.right

    def format(self) -> str:
        return f"{self.left.format(format_tree)} = {self.right.format(format_tree)}"

    def __repr__(self):
        return f"QuadraticRelation({self.format()})"


def quadratic_trees(k: int) -> List[Tree]:
    """The 2^(2k+1) arity-3 trees: left-grafted ones first, then right-grafted."""
    words = operator_words(k)
    lefts = [Node(a, Node(b, LEAF, LEAF), LEAF) for a in words for b in words]
    rights = [Node(a, LEAF, Node(b, LEAF, LEAF)) for a in words for b in words]
    return lefts + rights


def relation_classes(k: int, mode: str, style: str, constraint: Optional[str] = None) -> Dict[Dest, List[Tree]]:
    """Arity-3 trees grouped by their (tidy-)destination vector."""
    classes: Dict[Dest, List[Tree]] = {}
    for t in quadratic_trees(k):
        d = destination(t, mode, style, k=k, constraint=constraint)
        classes.setdefault(d, []).append(t)
    return dict(sorted(classes.items(), key=lambda kv: kv[0].sort_key()))


def signaletic_relations(k: int, mode: str, style: str, constraint: Optional[str] = None) -> List[QuadraticRelation]:
    """Each tree equals the comb of its class; trees of the zero class vanish."""
    out = []
    for d, trees in relation_classes(k, mode, style, constraint).items():
        if d is ZERO:
            out.extend(QuadraticRelation(FormalSum.single(t), FormalSum()) for t in trees)
            continue
        comb = right_comb_of(d, mode, constraint)
        out.extend(QuadraticRelation(FormalSum.single(t), FormalSum.single(comb)) for t in trees if t != comb)
    return out


def relations_json(k: int, mode: str, style: str) -> str:
    """Relation classes as JSON arrays of tree terms."""
    data = [
        {"destination": repr(d), "trees": [format_tree(t) for t in trees]}
        for d, trees in relation_classes(k, mode, style).items()
    ]
    return json.dumps(data, indent=2, ensure_ascii=False)


# ---------------------------------------------------------------------------
# rewriting


Path = Tuple[int, ...]


@lru_cache(maxsize=None)
def _rule_table(k: int, mode: str, style: str, constraint: Optional[str]) -> Dict[Tree, object]:
    """Quadratic tree -> comb it rewrites to (ZERO for tidy-zero trees)."""
    table = {}
    for t in quadratic_trees(k):
        d = destination(t, mode, style, k=k, constraint=constraint)
        target = ZERO if d is ZERO else right_comb_of(d, mode, constraint)
        if target != t:
            table[t] = target
    return table


def _subtree(t: Tree, path: Path) -> Tree:
    for step in path:
        t = t.right if step else t.left
    return t


def _replace(t: Tree, path: Path, new: Tree) -> Tree:
    if not path:
        return new
    if path[0]:
        return Node(t.label, t.left, _replace(t.right, path[1:], new))
    return Node(t.label, _replace(t.left, path[1:], new), t.right)


def _redexes(t: Tree, rules: Dict[Tree, object], path: Path = ()) -> Iterator[Tuple[Path, Tree, object]]:
    """Rewritable quadratic patterns in preorder: outermost first, left pattern before right."""
    if t is LEAF:
        return
    for side, child in enumerate((t.left, t.right)):
        if child is LEAF:
            continue
        if side == 0:
            local = Node(t.label, Node(child.label, LEAF, LEAF), LEAF)
        else:
            local = Node(t.label, LEAF, Node(child.label, LEAF, LEAF))
        target = rules.get(local)
        if target is not None:
            yield path, local, target
    yield from _redexes(t.left, rules, path + (0,))
    yield from _redexes(t.right, rules, path + (1,))


def _apply(t: Tree, path: Path, local: Tree, target) -> object:
    if target is ZERO:
        return ZERO
    u = _subtree(t, path)
    if local.left is LEAF:
        a, b, c = u.left, u.right.left, u.right.right
    else:
        a, b, c = u.left.left, u.left.right, u.right
    new = Node(target.label, a, Node(target.right.label, b, c))
    return _replace(t, path, new)


def rewrite_successors(t: Tree, mode: str, style: str, constraint: Optional[str] = None) -> List[object]:
    """Every tree (or ZERO) reachable from ``t`` by one rule application."""
    if t is LEAF:
        return []
    rules = _rule_table(len(t.label), mode, style, constraint)
    return [_apply(t, path, local, target) for path, local, target in _redexes(t, rules)]


def signaletic_rewrite(t: Tree, mode: str, style: str, constraint: Optional[str] = None, check_tamari: bool = False):
    """Rewrite ``t`` to its normal form, leftmost-outermost first.

    Returns ``(normal_form, steps)``; the normal form is a comb or ZERO.
    """
    check_mode(mode)
    check_style(style)
    if t is LEAF:
        return t, 0
    rules = _rule_table(len(t.label), mode, style, constraint)
    steps = 0
    while True:
        found = next(_redexes(t, rules), None)
        if found is None:
            return t, steps
        new = _apply(t, *found)
        steps += 1
        if new is ZERO:
            return ZERO, steps
        if check_tamari and not (tamari_leq(t, new) and new != t):
            raise AssertionError(f"rewriting step {format_tree(t)} -> {format_tree(new)} is not Tamari increasing")
        t = new


def all_normal_forms(t: Tree, mode: str, style: str, constraint: Optional[str] = None) -> set:
    """Every terminal form reachable from ``t`` under any application order."""
    seen = {}

    def explore(u) -> frozenset:
        if u is ZERO:
            return frozenset([ZERO])
        if u in seen:
            return seen[u]
        succ = rewrite_successors(u, mode, style, constraint)
        result = frozenset([u]) if not succ else frozenset().union(*(explore(v) for v in succ))
        seen[u] = result
        return result

    return set(explore(t))


def convergence_report(p: int, k: int, mode: str, style: str) -> dict:
    """Check that one-step rewriting preserves classes and only terminates on combs.

    Every step must keep the (tidy-)destination vector and move strictly up
    in the signaletic Tamari order.  Together with the comb count, this
    shows that any application order ends at the comb of the class.
    """
    terminal = set()
    bad_steps = 0
    for t in all_trees(p, k):
        d = destination(t, mode, style, k=k)
        succ = rewrite_successors(t, mode, style)
        if not succ:
            terminal.add(t)
            if d is ZERO or right_comb_of(d, mode) != t:
                bad_steps += 1
            continue
        for u in succ:
            if u is ZERO:
                if d is not ZERO:
                    bad_steps += 1
                continue
            if destination(u, mode, style, k=k) != d or not tamari_leq(t, u) or u == t:
                bad_steps += 1
    return {"p": p, "k": k, "mode": mode, "style": style, "normal_forms": len(terminal), "violations": bad_steps}


# ---------------------------------------------------------------------------
# associative and bipotent operations


def _normalize(c):
    return sympy.expand(c) if isinstance(c, sympy.Basic) else c


def self_compose(a: FormalSum, mode: str, style: str, constraint: Optional[str] = None) -> Tuple[FormalSum, FormalSum]:
    """Expand a o_1 a and a o_2 a on destination vectors (ZERO terms dropped)."""
    check_mode(mode)
    check_style(style)
    first: Dict[object, object] = {}
    second: Dict[object, object] = {}
    for (x, cx), (y, cy) in itertools.product(a.items(), repeat=2):
        k = len(x)
        left = destination(Node(x, Node(y, LEAF, LEAF), LEAF), mode, style, k=k, constraint=constraint)
        right = destination(Node(x, LEAF, Node(y, LEAF, LEAF)), mode, style, k=k, constraint=constraint)
        for acc, d in ((first, left), (second, right)):
            if d is not ZERO:
                acc[d] = acc.get(d, 0) + cx * cy
    return (
        FormalSum({d: _normalize(c) for d, c in first.items()}),
        FormalSum({d: _normalize(c) for d, c in second.items()}),
    )


def is_associative(a: FormalSum, mode: str, style: str, constraint: Optional[str] = None) -> bool:
    one, two = self_compose(a, mode, style, constraint)
    return one == two


def is_left_bipotent(a: FormalSum, mode: str, style: str, constraint: Optional[str] = None) -> bool:
    return self_compose(a, mode, style, constraint)[0] == 0


def is_right_bipotent(a: FormalSum, mode: str, style: str, constraint: Optional[str] = None) -> bool:
    return self_compose(a, mode, style, constraint)[1] == 0


def operation(terms: Dict[str, object]) -> FormalSum:
    """Shorthand: ``operation({"ll": 1, "lr": -1})``."""
    return FormalSum(terms)


PREDICATES = {
    "associative": is_associative,
    "left-bipotent": is_left_bipotent,
    "right-bipotent": is_right_bipotent,
}


def grid_search(
    k: int,
    mode: str,
    style: str,
    predicate: str = "associative",
    values: Iterable[int] = range(-2, 3),
    constraint: Optional[str] = None,
) -> List[FormalSum]:
    """Nonzero integer combinations of generators satisfying ``predicate``.

    Only combinations whose first nonzero coefficient is positive and whose
    coefficients are coprime are reported, one per line through the origin.
    """
    test = PREDICATES[predicate]
    words = operator_words(k)
    values = list(values)
    found = []
    for coeffs in itertools.product(values, repeat=len(words)):
        nonzero = [c for c in coeffs if c]
        if not nonzero or nonzero[0] < 0 or _gcd(nonzero) != 1:
            continue
        a = FormalSum(dict(zip(words, coeffs)))
        if test(a, mode, style, constraint):
            found.append(a)
    return found


def _gcd(xs: Sequence[int]) -> int:
    g = 0
    for x in xs:
        g = gcd(g, x)
    return g
