import random
from math import comb

import pytest
import sympy

from signal_operads.citelangis import (
    CitelangisRewriter,
    annihilates,
    char_poly,
    citelangis_relations,
    citelangis_table,
    comb_series,
    comb_series_closed,
    conjecture_check,
    enumerate_normal_forms,
    expand_word,
    fixed_point_check,
    format_relation,
    hilbert_closed,
    hilbert_recursive,
    is_comb_pair,
    is_normal_form,
    koszul_dual_relations,
    koszul_round_trip,
    lagrange_check,
    min_poly,
    normal_form_count,
    normal_form_counts,
    normal_forms_differ,
    reduced_matrix,
    relation_rank,
    same_relation_span,
    transition_matrix,
)
from signal_operads.combinatorics import format_poly
from signal_operads.linalg import series_mul
from signal_operads.signaletic import quadratic_trees, signaletic_relations
from signal_operads.trees import MESSY, PARALLEL, SERIES, TIDY, all_trees, arity, operator_words, parse_tree

from printed_values import CITELANGIS_TABLE, M_PARALLEL, M_SERIES, N_MATRICES, PRINTED_N, PRINTED_POLYS, PRINTED_R, T

MODES = (PARALLEL, SERIES)
FLAVOURS = [(m, s) for m in MODES for s in (MESSY, TIDY)]


def poly(expr):
    return sympy.Poly(expr, T, domain="ZZ")


# -- relations -------------------------------------------------------------------------


def test_expand_word():
    assert expand_word("lm") == ["ll", "lr"]
    assert len(expand_word("mmm")) == 8


def test_dendriform_relations():
    text = [format_relation(r) for r in citelangis_relations(1, SERIES, MESSY)]
    assert text == [
        "l(•, l(•, •)) + l(•, r(•, •)) = l(l(•, •), •)",
        "r(•, l(•, •)) = l(r(•, •), •)",
        "r(•, r(•, •)) = r(l(•, •), •) + r(r(•, •), •)",
    ]


# (root, right child) = (root, left child), rows ordered by p = 11, 12, ..., 33
MESSY_SERIES_2 = [
    ("ll", "mm", "ll", "ll"),
    ("lr", "lm", "ll", "lr"),
    ("lr", "rm", "lr", "lm"),
    ("rl", "lm", "ll", "rl"),
    ("rr", "ll", "ll", "rr"),
    ("rr", "lr", "lr", "rm"),
    ("rl", "rm", "rl", "lm"),
    ("rr", "rl", "rl", "rm"),
    ("rr", "rr", "rr", "mm"),
]
TIDY_SERIES_2 = [
    ("ll", "ll", "ll", "ll"),
    ("lr", "ll", "ll", "lr"),
    ("lr", "rl", "lr", "ll"),
    ("rl", "ll", "ll", "rl"),
    ("rr", "ll", "ll", "rr"),
    ("rr", "lr", "lr", "rl"),
    ("rl", "rl", "rl", "ll"),
    ("rr", "rl", "rl", "rl"),
    ("rr", "rr", "rr", "ll"),
]


def test_series_tables_k2():
    assert list(citelangis_table(2, SERIES, MESSY).values()) == MESSY_SERIES_2
    assert list(citelangis_table(2, SERIES, TIDY).values()) == TIDY_SERIES_2


def test_lr_over_rm_relation_terms():
    rel = citelangis_relations(2, SERIES, MESSY)[2]
    assert set(rel.left) == {parse_tree("lr(•, rl(•, •))"), parse_tree("lr(•, rr(•, •))")}
    assert set(rel.right) == {parse_tree("lr(ll(•, •), •)"), parse_tree("lr(lr(•, •), •)")}


@pytest.mark.parametrize("mode,style", FLAVOURS)
@pytest.mark.parametrize("k", [1, 2, 3])
def test_relation_count_and_term_sizes(mode, style, k):
    rels = citelangis_relations(k, mode, style)
    assert len(rels) == 3**k
    if style == MESSY:
        for p, rel in zip(citelangis_table(k, mode, style), rels):
            assert len(rel.left) == 2 ** p.count(1)
            assert len(rel.right) == 2 ** p.count(3)


def test_tidy_series_needs_default_constraint():
    with pytest.raises(ValueError):
        citelangis_table(2, SERIES, TIDY, constraint="lr")


# -- Koszul duality ---------------------------------------------------------------------


@pytest.mark.parametrize("mode,style", FLAVOURS)
@pytest.mark.parametrize("k", [1, 2, 3])
def test_koszul_round_trip(mode, style, k):
    assert koszul_round_trip(k, mode, style)


def test_koszul_round_trip_with_lr_constraint():
    assert koszul_round_trip(2, PARALLEL, TIDY, constraint="lr")


@pytest.mark.parametrize("mode,style", FLAVOURS)
@pytest.mark.parametrize("k", [1, 2, 3])
def test_complement_dimension(mode, style, k):
    rels = signaletic_relations(k, mode, style)
    dual = koszul_dual_relations(rels, k)
    assert relation_rank(rels, k) + len(dual) == 2 * 4**k


@pytest.mark.parametrize("mode,style", FLAVOURS)
@pytest.mark.parametrize("k", [1, 2])
def test_double_complement(mode, style, k):
    rels = signaletic_relations(k, mode, style)
    twice = koszul_dual_relations([_as_relation(v) for v in koszul_dual_relations(rels, k)], k)
    assert same_relation_span(twice, rels, k)


def _as_relation(vector):
    # a bare dict behaves like a relation with an empty right side
    from signal_operads.combinatorics import FormalSum
    from signal_operads.signaletic import QuadraticRelation

    return QuadraticRelation(FormalSum(vector), FormalSum())


def test_dual_of_diassociative_is_dendriform():
    dual = koszul_dual_relations(signaletic_relations(1, SERIES, MESSY), 1)
    assert same_relation_span(dual, citelangis_relations(1, SERIES, MESSY), 1)
    assert len(quadratic_trees(1)) == 8


# -- combs and matrices --------------------------------------------------------------------


def test_operator_order_groups_by_r_count():
    assert operator_words(3) == ["lll", "llr", "lrl", "rll", "lrr", "rlr", "rrl", "rrr"]


@pytest.mark.parametrize("k", [1, 2, 3])
def test_printed_transition_matrices(k):
    assert transition_matrix(k, PARALLEL) == M_PARALLEL[k]
    assert transition_matrix(k, SERIES) == M_SERIES[k]


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_printed_reduced_matrices(k):
    assert reduced_matrix(k) == N_MATRICES[k]


@pytest.mark.parametrize("mode", MODES)
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_row_group_sums(mode, k):
    m = transition_matrix(k, mode)
    words = operator_words(k)
    for a, row in zip(words, m):
        for j in range(k + 1):
            total = sum(x for b, x in zip(words, row) if b.count("r") == j)
            assert total == comb(k, j) - comb(a.count("r"), j)


def test_comb_pair_rules():
    assert is_comb_pair("lr", "lr", PARALLEL)  # second car skips the child
    assert not is_comb_pair("ll", "lr", PARALLEL)
    assert is_comb_pair("rr", "rr", SERIES)
    assert not is_comb_pair("lr", "rr", SERIES)
    assert is_comb_pair("ll", "lr", PARALLEL, constraint="lr")


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_comb_series(k):
    for mode in MODES:
        r = comb_series(k, mode, 12)
        assert r[: len(PRINTED_R[k])] == PRINTED_R[k]
        assert r == comb_series(k, mode, 12, via="N")
        assert r == comb_series_closed(k, 12)


@pytest.mark.parametrize("k", range(1, 7))
def test_comb_series_eulerian_identity(k):
    r = comb_series(k, PARALLEL, 12)
    e = [0] + [(-1) ** (j + 1) * c for j, c in enumerate(_eulerian_coeffs(k))]
    lhs = series_mul(r, e + [0] * 12, 12)
    rhs = [0] + [-comb(k + 1, j) for j in range(12)]
    assert lhs == rhs[:13]


def _eulerian_coeffs(k):
    from signal_operads.combinatorics import eulerian_number

    return [eulerian_number(k, j) for j in range(k)]


@pytest.mark.parametrize("k", [1, 2, 3])
def test_comb_series_counts_comb_trees(k):
    # right combs free of quadratic right signaletic combs, counted by nodes
    r = comb_series(k, PARALLEL, 4)
    words = operator_words(k)
    counts = [1, len(words)]
    chains = [[w] for w in words]
    for _ in range(3):
        chains = [c + [b] for c in chains for b in words if not is_comb_pair(c[-1], b, PARALLEL)]
        counts.append(len(chains))
    assert counts == r


# -- polynomials ---------------------------------------------------------------------------


@pytest.mark.parametrize("key", sorted(PRINTED_POLYS, key=str))
def test_printed_matrix_polynomials(key):
    kind, mode, k = key
    f = min_poly if kind == "min" else char_poly
    assert f(transition_matrix(k, mode)) == poly(PRINTED_POLYS[key])


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_printed_reduced_polynomials(k):
    assert min_poly(reduced_matrix(k)) == poly(PRINTED_N[k])
    assert char_poly(reduced_matrix(k)) == poly(PRINTED_N[k])


def test_char_poly_of_identity():
    assert char_poly([[1, 0], [0, 1]]) == poly((T - 1) ** 2)
    assert min_poly([[1, 0], [0, 1]]) == poly(T - 1)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_cayley_hamilton_and_divisibility(k):
    for a in (transition_matrix(k, PARALLEL), transition_matrix(k, SERIES), reduced_matrix(k)):
        chi, pi = char_poly(a), min_poly(a)
        assert annihilates(chi, a) and annihilates(pi, a)
        assert chi.rem(pi).is_zero


def _brute_min_poly(a):
    # least degree monic polynomial annihilating a, by linear dependence of powers
    n = len(a)
    m = sympy.Matrix(a)
    powers = [sympy.eye(n)]
    for d in range(1, n + 1):
        powers.append(powers[-1] * m)
        vecs = sympy.Matrix.hstack(*[p.reshape(n * n, 1) for p in powers])
        null = vecs.nullspace()
        if null:
            v = null[0] / null[0][-1]
            return poly(sum(v[i] * T**i for i in range(d + 1)))
    raise AssertionError


@pytest.mark.parametrize("k", [1, 2, 3])
def test_min_poly_matches_power_dependence(k):
    for mode in MODES:
        a = transition_matrix(k, mode)
        assert min_poly(a) == _brute_min_poly(a)


@pytest.mark.parametrize("k", range(1, 7))
def test_conjectures(k):
    report = conjecture_check(k)
    assert report.passed, report.lines()
    assert all(line.endswith("PASS") for line in report.lines())


def test_conjecture_report_lines():
    lines = conjecture_check(3, modes=(SERIES,)).lines()
    assert "k=3 min M series: t^4 - 4*t^3 + t^2 PASS" in lines


def test_conjecture_check_rejects_k0():
    with pytest.raises(ValueError):
        conjecture_check(0)


def test_polynomial_text():
    assert format_poly(char_poly(reduced_matrix(4))) == "t^5 - 11*t^4 + 11*t^3 - t^2"


# -- Hilbert series and normal forms ---------------------------------------------------


@pytest.mark.parametrize("k", range(1, 6))
def test_hilbert_table(k):
    assert hilbert_recursive(k, 8) == CITELANGIS_TABLE[k - 1]
    assert [hilbert_closed(k, p) for p in range(1, 9)] == CITELANGIS_TABLE[k - 1]


def test_k2_closed_form():
    for p in range(1, 9):
        value = sum(comb(3 * p, i) * comb(2 * p - i - 2, p - i - 1) for i in range(p))
        assert value % p == 0
        assert value // p == CITELANGIS_TABLE[1][p - 1]


def test_k0_is_associative():
    assert hilbert_recursive(0, 6) == [1] * 6
    assert hilbert_closed(0, 4) == 1
    assert lagrange_check(0, n=10)


@pytest.mark.parametrize("k,n", [(1, 10), (2, 8), (3, 8), (4, 8), (5, 8)])
def test_lagrange(k, n):
    for mode, style in FLAVOURS:
        assert lagrange_check(k, mode, style, n)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_fixed_point(k):
    for mode in MODES:
        assert fixed_point_check(k, mode, 10)


@pytest.mark.parametrize("mode", MODES)
@pytest.mark.parametrize("k,pmax", [(1, 6), (2, 5), (3, 4)])
def test_normal_form_enumeration(mode, k, pmax):
    for p in range(1, pmax + 1):
        forms = enumerate_normal_forms(k, mode, p)
        assert len(forms) == len(set(forms)) == normal_form_count(k, mode, p)
        assert len(forms) == CITELANGIS_TABLE[k - 1][p - 1]
        assert all(is_normal_form(t, mode) for t in forms)


@pytest.mark.parametrize("mode", MODES)
def test_normal_forms_are_pattern_avoiders(mode):
    brute = [t for t in all_trees(4, 2) if is_normal_form(t, mode)]
    assert sorted(map(repr, brute)) == sorted(map(repr, enumerate_normal_forms(2, mode, 4)))


def test_counts_agree_across_modes_but_sets_differ():
    for k in (1, 2, 3):
        assert normal_form_counts(k, PARALLEL, 7) == normal_form_counts(k, SERIES, 7)
    assert normal_forms_differ(2, 3)


def test_normal_form_examples():
    assert normal_form_count(2, PARALLEL, 3) == normal_form_count(2, SERIES, 3) == 23
    assert normal_form_count(3, SERIES, 4) == 1544
    assert all(normal_form_count(k, SERIES, 1) == 1 for k in range(5))


# -- rewriting ----------------------------------------------------------------------------


@pytest.mark.parametrize("mode,style", FLAVOURS)
@pytest.mark.parametrize("k", [1, 2])
def test_rewriting_confluent(mode, style, k):
    rw = CitelangisRewriter(k, mode, style)
    rng = random.Random(k)
    for p in range(1, 5):
        for t in all_trees(p, k):
            nf = rw.rewrite(t)
            assert all(is_normal_form(u, mode) and arity(u) == p for u in nf)
            if p >= 3 and rng.random() < 0.25:
                assert rw.random_rewrite(t, rng) == nf


@pytest.mark.parametrize("mode,style", FLAVOURS)
def test_normal_forms_rewrite_to_themselves(mode, style):
    rw = CitelangisRewriter(2, mode, style)
    for t in enumerate_normal_forms(2, mode, 4):
        assert rw.rewrite(t).items() == [(t, 1)]


@pytest.mark.parametrize("mode,style", FLAVOURS)
def test_rewriting_respects_relations(mode, style):
    rw = CitelangisRewriter(2, mode, style)
    for rel in citelangis_relations(2, mode, style):
        assert rw.rewrite_sum(rel.left) == rw.rewrite_sum(rel.right)
