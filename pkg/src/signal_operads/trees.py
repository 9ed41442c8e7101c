"""Planar binary syntax trees labelled by signal words, and car traversals.

A node label is a word over ``{l, r}`` of length k.  Leaves are numbered
1..p from left to right.  In the parallel rule car j reads letter j of every
node it crosses; in the series rule cars leave one after another and each
reads (and consumes) the leftmost unread letter of the node.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, NamedTuple, Optional, Sequence, Tuple, Union

PARALLEL = "parallel"
SERIES = "series"
MODES = (PARALLEL, SERIES)
MESSY = "messy"
TIDY = "tidy"
STYLES = (MESSY, TIDY)


class _Leaf:
    """The unique leaf; compares by identity."""

    __slots__ = ()

    def __repr__(self):
        return "•"

    def __reduce__(self):
        return (_leaf, ())

    def sort_key(self):
        return (1, "•")


def _leaf():
    return LEAF


LEAF = _Leaf()


class Node(NamedTuple):
    label: str
    left: "Tree"
    right: "Tree"

    def __repr__(self):
        return format_tree(self)

    def sort_key(self):
        s = format_tree(self)
        return (len(s), s)


Tree = Union[Node, _Leaf]


def operator_words(k: int) -> list:
    """All 2^k signal words, ordered by number of r then lexicographically."""
    words = ["".join(w) for w in itertools.product("lr", repeat=k)]
    return sorted(words, key=lambda w: (w.count("r"), w))


def check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")


def check_style(style: str) -> None:
    if style not in STYLES:
        raise ValueError(f"unknown style {style!r}")


# ---------------------------------------------------------------------------
# structure


def arity(t: Tree) -> int:
    if t is LEAF:
        return 1
    return arity(t.left) + arity(t.right)


def node_count(t: Tree) -> int:
    return arity(t) - 1


def label_length(t: Tree) -> Optional[int]:
    """The common label length k, or None for the leaf."""
    if t is LEAF:
        return None
    return len(t.label)


def labels_inorder(t: Tree) -> list:
    if t is LEAF:
        return []
    return labels_inorder(t.left) + [t.label] + labels_inorder(t.right)


def shape(t: Tree) -> Tree:
    if t is LEAF:
        return LEAF
    return Node("", shape(t.left), shape(t.right))


def graft(t: Tree, i: int, s: Tree) -> Tree:
    """Graft the root of ``s`` on the i-th leaf of ``t`` (1-based)."""
    if not 1 <= i <= arity(t):
        raise IndexError(f"leaf {i} out of range for arity {arity(t)}")

    def go(u: Tree, i: int) -> Tree:
        if u is LEAF:
            return s
        a = arity(u.left)
        if i <= a:
            return Node(u.label, go(u.left, i), u.right)
        return Node(u.label, u.left, go(u.right, i - a))

    return go(t, i)


def compose_right(a: str, b: str) -> Node:
    """Root ``a`` whose right child is ``b``: the tree a o_2 b."""
    return Node(a, LEAF, Node(b, LEAF, LEAF))


def compose_left(a: str, b: str) -> Node:
    """Root ``a`` whose left child is ``b``: the tree a o_1 b."""
    return Node(a, Node(b, LEAF, LEAF), LEAF)


def binary_shapes(n: int) -> list:
    """All unlabelled binary trees with n leaves."""
    return list(_shapes(n))


@lru_cache(maxsize=None)
def _shapes(n: int) -> tuple:
    if n == 1:
        return (LEAF,)
    out = []
    for a in range(1, n):
        for left in _shapes(a):
            for right in _shapes(n - a):
                out.append(Node("", left, right))
    return tuple(out)


def relabel(t: Tree, labels: Sequence[str]) -> Tree:
    """Put ``labels`` on the internal nodes of ``t`` in in-order."""
    it = iter(labels)

    def go(u: Tree) -> Tree:
        if u is LEAF:
            return LEAF
        left = go(u.left)
        lab = next(it)
        return Node(lab, left, go(u.right))

    return go(t)


def all_trees(p: int, k: int) -> Iterator[Tree]:
    """Every syntax tree of arity p over the 2^k signal words."""
    words = operator_words(k)
    for sh in binary_shapes(p):
        for labs in itertools.product(words, repeat=p - 1):
            yield relabel(sh, labs)


def count_trees(p: int, k: int) -> int:
    return len(binary_shapes(p)) * 2 ** (k * (p - 1))


# ---------------------------------------------------------------------------
# text form

_TOKEN = re.compile(r"\s*([lrn]+|•|\*|\(|\)|,)")


def format_tree(t: Tree) -> str:
    if t is LEAF:
        return "•"
    label = t.label or "n"
    return f"{label}({format_tree(t.left)}, {format_tree(t.right)})"


def parse_tree(text: str) -> Tree:
    """Read terms such as ``lr(•, rl(•, •))``; ``*`` also denotes a leaf."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse tree at {text[pos:]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    tokens = [t for t in tokens if t]
    it = iter(range(len(tokens)))
    idx = 0

    def take() -> str:
        nonlocal idx
        if idx >= len(tokens):
            raise ValueError("unexpected end of tree term")
        tok = tokens[idx]
        idx += 1
        return tok

    def expect(tok: str) -> None:
        got = take()
        if got != tok:
            raise ValueError(f"expected {tok!r}, got {got!r}")

    def term() -> Tree:
        tok = take()
        if tok in ("•", "*"):
            return LEAF
        if not re.fullmatch(r"[lrn]+", tok):
            raise ValueError(f"bad label {tok!r}")
        label = "" if tok == "n" else tok
        expect("(")
        left = term()
        expect(",")
        right = term()
        expect(")")
        return Node(label, left, right)

    del it
    t = term()
    if idx != len(tokens):
        raise ValueError("trailing input after tree term")
    k = {len(lab) for lab in labels_inorder(t)}
    if len(k) > 1:
        raise ValueError("node labels have different lengths")
    return t


# ---------------------------------------------------------------------------
# destination vectors and traversals


class DestinationVector(NamedTuple):
    entries: Tuple[int, ...]
    arity: int

    def __repr__(self):
        return "(" + ",".join(map(str, self.entries)) + f"|{self.arity})"

    @property
    def k(self) -> int:
        return len(self.entries)

    def sort_key(self):
        return (self.arity, self.entries)


class _Zero:
    """The absorbing zero destination of the tidy operads."""

    __slots__ = ()

    def __repr__(self):
        return "0"

    def __reduce__(self):
        return (_zero, ())

    def sort_key(self):
        return (0, ())


def _zero():
    return ZERO


ZERO = _Zero()


def parse_destination(text: str) -> Union[DestinationVector, _Zero]:
    text = text.strip()
    if text == "0":
        return ZERO
    m = re.fullmatch(r"\(\s*([\d,\s]*)\|\s*(\d+)\s*\)", text)
    if not m:
        raise ValueError(f"bad destination vector {text!r}")
    body = m.group(1).strip().rstrip(",")
    entries = tuple(int(x) for x in body.split(",")) if body else ()
    n = int(m.group(2))
    if any(not 1 <= e <= n for e in entries):
        raise ValueError("destination entries must lie in [1, arity]")
    return DestinationVector(entries, n)


Path = Tuple[int, ...]


@dataclass(frozen=True)
class TraversalResult:
    destination: DestinationVector
    visited: Dict[Path, Tuple[Tuple[int, int], ...]]  # node path -> (car, letter position) pairs
    tidy: bool

    def tidy_destination(self):
        return self.destination if self.tidy else ZERO


def _nodes_with_paths(t: Tree, path: Path = ()) -> Iterator[Tuple[Path, Node]]:
    if t is LEAF:
        return
    yield path, t
    yield from _nodes_with_paths(t.left, path + (0,))
    yield from _nodes_with_paths(t.right, path + (1,))


def _subtree(t: Tree, path: Path) -> Tree:
    for step in path:
        t = t.right if step else t.left
    return t


def traverse(t: Tree, mode: str, k: Optional[int] = None, constraint: Optional[str] = None) -> TraversalResult:
    """Send k cars through ``t`` and record where they land.

    ``constraint`` is the word that unread letters must match for the tree to
    count as tidy; it defaults to all ``l``.
    """
    check_mode(mode)
    if k is None:
        k = label_length(t)
        if k is None:
            raise ValueError("the leaf needs an explicit k")
    if constraint is None:
        constraint = "l" * k
    visited: Dict[Path, list] = {path: [] for path, _ in _nodes_with_paths(t)}
    dest = []
    consumed: Dict[Path, int] = {path: 0 for path in visited}
    for car in range(k):
        u, path, offset = t, (), 0
        while u is not LEAF:
            if mode == PARALLEL:
                pos = car
            else:
                pos = consumed[path]
                consumed[path] += 1
            visited[path].append((car + 1, pos + 1))
            if u.label[pos] == "l":
                u, path = u.left, path + (0,)
            else:
                offset += arity(u.left)
                u, path = u.right, path + (1,)
        dest.append(offset + 1)
    tidy = True
    for path, node in _nodes_with_paths(t):
        used = {pos for _, pos in visited[path]}
        for pos, letter in enumerate(node.label, start=1):
            if pos not in used and letter != constraint[pos - 1]:
                tidy = False
    return TraversalResult(
        DestinationVector(tuple(dest), arity(t)),
        {p: tuple(v) for p, v in visited.items()},
        tidy,
    )


def destination(t: Tree, mode: str, style: str = "messy", k: Optional[int] = None, constraint: Optional[str] = None):
    """Destination vector of ``t``, or ZERO for a tidy-style messy tree."""
    check_style(style)
    res = traverse(t, mode, k, constraint)
    if style == TIDY:
        return res.tidy_destination()
    return res.destination


def right_comb_of(d: DestinationVector, mode: str, constraint: Optional[str] = None) -> Tree:
    """The right comb whose cars land on ``d`` and whose unread letters match ``constraint``."""
    check_mode(mode)
    if d is ZERO:
        raise ValueError("the zero vector has no comb")
    k, n = d.k, d.arity
    if constraint is None:
        constraint = "l" * k
    labels = []
    for s in range(1, n):
        if mode == PARALLEL:
            lab = [("r" if e > s else "l") if e >= s else constraint[j] for j, e in enumerate(d.entries)]
        else:
            passing = [e for e in d.entries if e >= s]
            lab = ["r" if e > s else "l" for e in passing] + list(constraint[len(passing):])
        labels.append("".join(lab))
    t: Tree = LEAF
    for lab in reversed(labels):
        t = Node(lab, LEAF, t)
    return t


def is_right_comb(t: Tree) -> bool:
    while t is not LEAF:
        if t.left is not LEAF:
            return False
        t = t.right
    return True


def is_signaletic_comb(t: Tree, mode: str, constraint: Optional[str] = None) -> bool:
    """Right comb whose unread letters all match the constraint."""
    if not is_right_comb(t):
        return False
    if t is LEAF:
        return True
    return traverse(t, mode, constraint=constraint).tidy


# ---------------------------------------------------------------------------
# Tamari comparison


def right_sizes(t: Tree) -> Tuple[int, ...]:
    """Bracket vector: internal-node count of each node's right subtree, in-order."""
    if t is LEAF:
        return ()
    return right_sizes(t.left) + (node_count(t.right),) + right_sizes(t.right)


def shape_leq(s: Tree, t: Tree) -> bool:
    """Tamari order on shapes (rotations towards the right comb go up)."""
    a, b = right_sizes(s), right_sizes(t)
    if len(a) != len(b):
        raise ValueError("trees of different arities")
    return all(x <= y for x, y in zip(a, b))


def tamari_leq(s: Tree, t: Tree) -> bool:
    """Signaletic Tamari order: shape first, then letters with r below l."""
    if arity(s) != arity(t):
        raise ValueError("trees of different arities")
    if label_length(s) != label_length(t) and s is not LEAF:
        raise ValueError("trees over different k")
    if shape(s) != shape(t):
        return shape_leq(s, t)
    return all(
        x == y or (x == "r" and y == "l")
        for a, b in zip(labels_inorder(s), labels_inorder(t))
        for x, y in zip(a, b)
    )


def tree_to_dot(t: Tree, name: str = "tree") -> str:
    lines = [f"digraph {name} {{"]
    counter = itertools.count()

    def go(u: Tree) -> str:
        ident = f"n{next(counter)}"
        if u is LEAF:
            lines.append(f'  {ident} [label="•", shape=plaintext];')
            return ident
        lines.append(f'  {ident} [label="{u.label or "n"}", shape=box];')
        for child in (u.left, u.right):
            lines.append(f"  {ident} -> {go(child)};")
        return ident

    go(t)
    lines.append("}")
    return "\n".join(lines) + "\n"
