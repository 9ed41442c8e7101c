"""Acceptance criteria 1 to 10.

Each test prints a single ``criterion N: PASS`` or ``criterion N: FAIL``
line and then asserts.  Running this file directly prints the same
report without pytest.
"""

import itertools
import random
import sys
import time
from math import comb
from pathlib import Path

import pytest
import sympy

from signal_operads import actions, citelangis, posets
from signal_operads.actions import (
    BOUNDED,
    apply_messy,
    apply_tidy,
    bounded_cuts,
    check_relations,
    cuttable_compose,
    decompose,
    eval_tree,
    is_fully_cuttable,
    is_uncuttable,
    lexmin,
    rooted_cuts,
    zinbiel_compose,
)
from signal_operads.cli import main as cli_main
from signal_operads.combinatorics import (
    FormalSum,
    count_k_permutations,
    eulerian_number,
    gap_shift,
    k_permutations,
    parse_word,
    shift,
    shifted_concat,
    shifted_shuffle,
    shuffle_words,
)
from signal_operads.linalg import series_mul
from signal_operads.signaletic import compose_destination, convergence_report, unit
from signal_operads.trees import (
    LEAF,
    MESSY,
    PARALLEL,
    SERIES,
    TIDY,
    ZERO,
    DestinationVector,
    all_trees,
    arity,
    destination,
    format_tree,
    operator_words,
    parse_tree,
)

sys.path.insert(0, str(Path(__file__).parent))
from printed_values import (  # noqa: E402
    CITELANGIS_TABLE,
    EULERIAN_TABLE,
    M_PARALLEL,
    M_SERIES,
    N_MATRICES,
    POS_TABLE,
    PRINTED_N,
    PRINTED_POLYS,
    PRINTED_R,
    T,
)

w = parse_word
D = DestinationVector
FLAVOURS = [(m, s) for m in (PARALLEL, SERIES) for s in (MESSY, TIDY)]
SIGNALETIC_SPACES = [(k, p) for k in (1, 2, 3) for p in range(1, 6)] + [(k, 6) for k in (1, 2)]
GOLDEN = Path(__file__).parent / "golden"


class Report:
    """Collects named checks and the time they took."""

    def __init__(self):
        self.failed = []
        self.start = time.perf_counter()

    def check(self, name, ok):
        if not ok:
            self.failed.append(name)

    def within(self, seconds):
        self.check(f"runtime under {seconds} s", self.elapsed() < seconds)

    def elapsed(self):
        return time.perf_counter() - self.start


# -- 1 ----------------------------------------------------------------------------------------


def criterion_1(r):
    for k, row in EULERIAN_TABLE.items():
        r.check(f"Eulerian row {k}", [eulerian_number(k, j) for j in range(k)] == row)
    for k in range(0, 7):
        for p in range(0, 21):
            total = sum(eulerian_number(k, j) * comb(j + p, k) for j in range(max(k, 1)))
            r.check(f"Worpitzky k={k} p={p}", total == p**k)
    r.within(1)


# -- 2 ----------------------------------------------------------------------------------------


def criterion_2(r):
    for mode, style in FLAVOURS:
        for k, p in SIGNALETIC_SPACES:
            seen = {destination(t, mode, style, k=k) for t in all_trees(p, k)}
            seen.discard(ZERO)
            r.check(f"{mode} {style} k={k} p={p}", len(seen) == p**k)
    r.within(60)


# -- 3 ----------------------------------------------------------------------------------------


def criterion_3(r):
    for mode, style in FLAVOURS:
        for k, p in SIGNALETIC_SPACES:
            report = convergence_report(p, k, mode, style)
            r.check(f"{mode} {style} k={k} p={p} violations", report["violations"] == 0)
            r.check(f"{mode} {style} k={k} p={p} normal forms", report["normal_forms"] == p**k)
    r.within(120)


# -- 4 ----------------------------------------------------------------------------------------


def criterion_4(r):
    for mode, style in FLAVOURS:
        for k in (1, 2, 3):
            r.check(f"{mode} {style} k={k}", citelangis.koszul_round_trip(k, mode, style))


# -- 5 ----------------------------------------------------------------------------------------


def criterion_5(r):
    for k in range(1, 6):
        row = CITELANGIS_TABLE[k - 1]
        r.check(f"recursive k={k}", citelangis.hilbert_recursive(k, 8) == row)
        r.check(f"closed k={k}", [citelangis.hilbert_closed(k, p) for p in range(1, 9)] == row)
        r.check(f"Lagrange k={k}", citelangis.lagrange_check(k, PARALLEL, MESSY, 8))
    for k in (1, 2, 3):
        for mode in (PARALLEL, SERIES):
            counts = [citelangis.normal_form_count(k, mode, p) for p in range(1, 6)]
            r.check(f"normal forms {mode} k={k}", counts == CITELANGIS_TABLE[k - 1][:5])
            listed = [len(citelangis.enumerate_normal_forms(k, mode, p)) for p in range(1, 6)]
            r.check(f"enumerated normal forms {mode} k={k}", listed == counts)


# -- 6 ----------------------------------------------------------------------------------------


def criterion_6(r):
    for k in (1, 2, 3):
        r.check(f"M_{k} parallel", citelangis.transition_matrix(k, PARALLEL) == M_PARALLEL[k])
        r.check(f"M_{k} series", citelangis.transition_matrix(k, SERIES) == M_SERIES[k])
    for k in (1, 2, 3, 4):
        r.check(f"N_{k}", citelangis.reduced_matrix(k) == N_MATRICES[k])
    for (kind, mode, k), expr in PRINTED_POLYS.items():
        f = citelangis.min_poly if kind == "min" else citelangis.char_poly
        r.check(f"{kind} poly M_{k} {mode}", f(citelangis.transition_matrix(k, mode)) == sympy.Poly(expr, T, domain="ZZ"))
    for k, expr in PRINTED_N.items():
        r.check(f"min poly N_{k}", citelangis.min_poly(citelangis.reduced_matrix(k)) == sympy.Poly(expr, T, domain="ZZ"))
    for k in range(1, 7):
        r.check(f"conjectures k={k}", citelangis.conjecture_check(k, (PARALLEL, SERIES)).passed)
    for k, prefix in PRINTED_R.items():
        for mode in (PARALLEL, SERIES):
            r.check(f"R_{k} {mode}", citelangis.comb_series(k, mode, 12)[: len(prefix)] == prefix)
    for k in range(1, 7):
        rk = citelangis.comb_series(k, PARALLEL, 12)
        e = [0] + [(-1) ** (j + 1) * eulerian_number(k, j) for j in range(k)]
        lhs = series_mul(rk, e + [0] * 12, 12)
        rhs = [0] + [-comb(k + 1, j) for j in range(12)]
        r.check(f"R_{k} E_{k} identity", lhs == rhs)


# -- 7 ----------------------------------------------------------------------------------------


def _inline_examples(r):
    # destination vector compositions
    p = D((2, 1, 4, 2, 2), 5)
    r.check("messy parallel destination", compose_destination(p, 1, D((3, 1, 6, 1, 2), 6), PARALLEL, MESSY) == D((7, 1, 9, 7, 7), 10))
    r.check("tidy parallel destination", compose_destination(p, 2, D((3, 1, 1, 4, 1), 4), PARALLEL, TIDY) == D((4, 1, 7, 5, 2), 8))
    r.check("tidy parallel zero", compose_destination(p, 1, D((3, 1, 1, 4, 1), 4), PARALLEL, TIDY) is ZERO)
    r.check("messy series destination", compose_destination(p, 2, D((3, 1, 6, 1, 2), 6), SERIES, MESSY) == D((4, 1, 9, 2, 7), 10))
    q = D((2, 1, 4, 2, 4), 5)
    r.check("tidy series destination", compose_destination(q, 4, D((3, 5, 1, 1, 1), 6), SERIES, TIDY) == D((2, 1, 6, 2, 8), 10))
    r.check("tidy series zero", compose_destination(q, 1, D((3, 5, 1, 1, 1), 6), SERIES, TIDY) is ZERO)
    for mode, style in FLAVOURS:
        r.check(f"unit {mode} {style}", compose_destination(unit(5), 1, p, mode, style) == p)
    # operators
    r.check("tidy parallel ll", apply_tidy(PARALLEL, "ll", w("42132413"), w("2121")) == w("421324165653"))
    r.check("tidy series lrr", apply_tidy(SERIES, "lrr", w("321312132"), w("221211")) == w("355213121324544"))
    r.check("l^k is concatenation", apply_tidy(SERIES, "lll", w("321312132"), w("221211")) == shifted_concat(w("321312132"), w("221211")))
    messy = apply_messy(SERIES, "lrr", w("321312132"), w("221211"))
    r.check("messy series lrr", messy == FormalSum(w("355") + x for x in shuffle_words(w("21312132"), w("4544"))))
    messy = apply_messy(PARALLEL, "rr", w("321312"), w("213231"))
    r.check("messy parallel rr", messy == FormalSum((5,) + x + (4,) for x in shuffle_words(w("321312"), w("4656"))))
    for mode, k in ((SERIES, 3), (PARALLEL, 2)):
        mu, nu = (w("321312132"), w("221211")) if k == 3 else (w("321312"), w("213231"))
        total = FormalSum()
        for op in operator_words(k):
            total = total + apply_messy(mode, op, mu, nu)
        r.check(f"messy operators sum to the shuffle ({mode})", total == shifted_shuffle(mu, nu))
    # evaluations
    tree = parse_tree("lr(rr(lr(•, •), ll(•, •)), rl(•, •))")
    r.check("tidy evaluation of the figure tree", eval_tree(tree, mode=SERIES, style=TIDY) == w("363121244556"))
    messy = eval_tree(tree, mode=SERIES, style=MESSY)
    r.check("messy evaluation begins", messy.support()[:2] == [w("363121244556"), w("363121244565")])
    r.check("lexmin of the messy evaluation", lexmin(messy) == w("363121244556"))
    r.check("leaf evaluation", eval_tree(LEAF, [w("2112")]) == w("2112"))
    r.check("lexmin of a singleton", lexmin(FormalSum.single(w("12"))) == w("12"))
    # cuts
    r.check("bounded cut of 31123424", 1 in bounded_cuts(w("31123424")))
    r.check("31421324 is bounded uncuttable", bounded_cuts(w("31421324")) == ())
    r.check("2-rooted cut of 31213244", 3 in rooted_cuts(w("31213244")))
    r.check("5211332454 fully bounded cuttable", is_fully_cuttable(w("5211332454"), BOUNDED))
    r.check("31123424 not fully bounded cuttable", not is_fully_cuttable(w("31123424"), BOUNDED))
    for m in range(1, 8):
        perms = list(itertools.permutations(range(1, m + 1)))
        r.check(f"231 avoidance S_{m}", all(is_fully_cuttable(s) == actions.avoids_231(s) for s in perms))
    # decompositions
    d = decompose(w("31421324"), PARALLEL)
    r.check("uncuttable decomposes to a leaf", d.skeleton is LEAF and d.leaves == (w("31421324"),))
    d = decompose(w("363121244556"))
    r.check(
        "figure decomposition",
        format_tree(d.skeleton) == "lr(ll(ll(rr(lr(•, •), •), •), •), •)" and d.leaves == (w("11"),) * 6,
    )
    # compositions
    sigma, tau = w("661414322355"), w("232113")
    r.check("tidy series composition", cuttable_compose(sigma, 1, tau, SERIES, TIDY) == w("8826321136544577"))
    parallel = ["8211233654547768", "8116532234547768", "8116423345527768", "8115323244567768", "8114323265567748"]
    for i, expected in enumerate(parallel, start=1):
        got = cuttable_compose(w("611432325546"), i, w("211233"), PARALLEL, TIDY)
        r.check(f"tidy parallel composition at {i}", got == w(expected))
    r.check("messy series Zinbiel at 4", zinbiel_compose(w("31232144"), 4, w("313122")) == FormalSum.single(w("312321646455")))
    for m in range(1, 4):
        for n in range(1, 4):
            for s in itertools.permutations(range(1, m + 1)):
                for t in itertools.permutations(range(1, n + 1)):
                    for i in range(1, m + 1):
                        pos = s.index(i)
                        head = gap_shift(s[:pos], i, n) + (t[0] + i - 1,)
                        tail = shuffle_words(gap_shift(s[pos + 1 :], i, n), shift(t[1:], i - 1))
                        r.check("classical Zinbiel", zinbiel_compose(s, i, t) == FormalSum(head + x for x in tail))


def criterion_7(r):
    _inline_examples(r)
    for k, mode, style in [(1, SERIES, TIDY), (2, SERIES, TIDY), (3, SERIES, TIDY), (2, PARALLEL, TIDY),
                           (1, SERIES, MESSY), (2, SERIES, MESSY), (3, SERIES, MESSY), (2, PARALLEL, MESSY)]:
        failures = check_relations(k, mode, style, samples=1000, seed=20240101)
        r.check(f"relations {mode} {style} k={k}", not failures)
    rng = random.Random(20240101)
    for mode, ks in ((SERIES, (1, 2, 3)), (PARALLEL, (2,))):
        for _ in range(200):
            k = rng.choice(ks)
            t = rng.choice(list(all_trees(rng.randint(1, 4), k)))
            tidy = eval_tree(t, mode=mode, style=TIDY, k=k)
            r.check(f"LexMin {mode}", lexmin(eval_tree(t, mode=mode, style=MESSY, k=k)) == tidy)


# -- 8 ----------------------------------------------------------------------------------------


def _skeletons(k, mode, p):
    if mode == SERIES:
        return citelangis.enumerate_normal_forms(k, SERIES, p)
    # parallel: the skeletons read off the fully cuttable permutations
    kind = actions.kind_of(mode)
    found = {decompose(s, mode).skeleton for s in k_permutations(k, p) if is_fully_cuttable(s, kind)}
    return sorted(found, key=format_tree)


def _compositions(n, p):
    if p == 1:
        yield (n,)
        return
    for first in range(1, n - p + 2):
        for rest in _compositions(n - first, p - 1):
            yield (first,) + rest


def freeness(r, k, mode, nmax):
    uncuttable = {d: [s for s in k_permutations(k, d) if is_uncuttable(s, mode)] for d in range(1, nmax + 1)}
    skeletons = {p: _skeletons(k, mode, p) for p in range(1, nmax + 1)}
    for p, ts in skeletons.items():
        r.check(f"{mode} k={k} skeleton count p={p}", len(ts) == CITELANGIS_TABLE[k - 1][p - 1])
    for n in range(1, nmax + 1):
        perms = list(k_permutations(k, n))
        round_trip = True
        for sigma in perms:
            d = decompose(sigma, mode)
            round_trip &= d.evaluate() == sigma and all(is_uncuttable(x, mode) for x in d.leaves)
            round_trip &= len(d.leaves) == arity(d.skeleton)
        r.check(f"{mode} k={k} round trip n={n}", round_trip)
        images = []
        for p in range(1, n + 1):
            for degrees in _compositions(n, p):
                for leaves in itertools.product(*(uncuttable[d] for d in degrees)):
                    images.extend(eval_tree(t, list(leaves), mode, TIDY) for t in skeletons[p])
        r.check(f"{mode} k={k} injective n={n}", len(images) == len(set(images)))
        r.check(f"{mode} k={k} onto n={n}", set(images) == set(perms) and len(perms) == count_k_permutations(k, n))


def criterion_8(r):
    freeness(r, 2, SERIES, 4)
    freeness(r, 2, PARALLEL, 4)
    freeness(r, 1, SERIES, 6)
    r.within(120)


# -- 9 ----------------------------------------------------------------------------------------


def criterion_9(r):
    r.check("k=1 evaluations", [posets.distinct_evaluations(1, SERIES, p) for p in range(1, 5)] == [1, 2, 7, 30])
    r.check("k=2 evaluations", [posets.distinct_evaluations(2, SERIES, p) for p in range(1, 4)] == [1, 4, 31])
    for k, row in POS_TABLE.items():
        r.check(f"pos_hilbert k={k}", posets.pos_hilbert(2**k, 8) == row)
    for k in (1, 2, 3):
        pairs = posets.identified_pairs(k, SERIES)
        expected = [[f"{'r' * k}(•, {'l' * k}(•, •))", f"{'l' * k}({'r' * k}(•, •), •)"]]
        r.check(f"unique relation k={k}", [[format_tree(t) for t in ts] for ts in pairs] == expected)
    rng = random.Random(20240101)
    for mode, ks in ((SERIES, (1, 2)), (PARALLEL, (2,))):
        for _ in range(200):
            k = rng.choice(ks)
            p = posets.random_rooted_poset(rng, k, rng.randint(1, 3), mode=mode)
            q = posets.random_rooted_poset(rng, k, rng.randint(1, 3), mode=mode)
            i = rng.randint(1, p.degree)
            rhs = FormalSum()
            for x, a in p.linear_extensions().items():
                for y, b in q.linear_extensions().items():
                    rhs = rhs + (a * b) * zinbiel_compose(x, i, y, mode, MESSY)
            r.check(f"LinExt morphism {mode}", posets.poset_compose(mode, p, i, q).linear_extensions() == rhs)


# -- 10 ---------------------------------------------------------------------------------------

GOLDEN_RUNS = {
    "hilbert.csv": ["hilbert", *[a for k in range(1, 6) for a in ("--k", str(k))], "--N", "8", "--format", "csv"],
    "conjectures.txt": ["matrices", "--k", "6", "--conjectures"],
    "pos_hilbert.csv": ["pos-hilbert", *[a for k in range(1, 6) for a in ("--k", str(k))], "--N", "8", "--format", "csv"],
}


def criterion_10(r, tmp_dir):
    for name, argv in GOLDEN_RUNS.items():
        out = Path(tmp_dir) / name
        code = cli_main(argv + ["--output", str(out)])
        r.check(f"{name} exit status", code == 0)
        r.check(f"{name} diff", out.read_bytes() == (GOLDEN / name).read_bytes())


# ---------------------------------------------------------------------------------------------

CRITERIA = {
    1: ("Eulerian table and Worpitzky identity", criterion_1),
    2: ("signaletic dimensions p^k", criterion_2),
    3: ("rewriting convergence to tidy right combs", criterion_3),
    4: ("Koszul dual round trip", criterion_4),
    5: ("citelangis Hilbert series", criterion_5),
    6: ("transition matrices, polynomials and conjectures", criterion_6),
    7: ("permutation actions", criterion_7),
    8: ("freeness of the permutation actions", criterion_8),
    9: ("poset operads", criterion_9),
    10: ("CLI golden files", criterion_10),
}


def evaluate(n, tmp_dir=None):
    title, fn = CRITERIA[n]
    r = Report()
    try:
        fn(r, tmp_dir) if n == 10 else fn(r)
    except Exception as exc:  # a crash counts as a failure of the criterion
        r.failed.append(f"error: {exc!r}")
    status = "PASS" if not r.failed else "FAIL"
    line = f"criterion {n}: {status}  {title} ({r.elapsed():.1f} s)"
    if r.failed:
        line += "; failed: " + ", ".join(r.failed[:5])
    return r, line


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n, tmp_path, capsys):
    r, line = evaluate(n, tmp_path)
    with capsys.disabled():
        print(f"\n{line}")
    assert not r.failed, line


if __name__ == "__main__":
    import tempfile

    with tempfile.TemporaryDirectory() as tmp:
        results = [evaluate(n, tmp) for n in sorted(CRITERIA)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(not r.failed for r, _ in results) else 1)
