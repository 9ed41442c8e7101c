"""Command line front end.

Every subcommand writes deterministic output.  Exit status is 0 on
success, 2 when a verification fails and 1 on usage errors.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from dataclasses import asdict, dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence

import click

from . import actions, citelangis, posets, signaletic
from .combinatorics import FormalSum, eulerian_number, format_word, parse_word
from .trees import LEAF, MODES, PARALLEL, SERIES, STYLES, ZERO, Node, count_trees, format_tree, parse_tree, tree_to_dot

TREE_SPACE_LIMIT = 10**7
DEFAULT_SEED = 20240101

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2


class VerificationFailed(Exception):
    """Raised after output is written when a check did not hold."""


@dataclass
class RunConfig:
    command: str
    k: Optional[int] = None
    mode: Optional[str] = None
    style: Optional[str] = None
    bounds: Dict[str, int] = field(default_factory=dict)
    N: Optional[int] = None
    format: str = "text"
    output: Optional[str] = None
    seed: Optional[int] = None

    def check(self) -> None:
        for name, value in self.bounds.items():
            if value < 1:
                raise click.UsageError(f"{name} must be positive")
        if self.N is not None and self.N < 1:
            raise click.UsageError("N must be positive")
        if self.k is not None and self.k < 0:
            raise click.UsageError("k must be non-negative")
        p = self.bounds.get("arity")
        if p is not None and self.k is not None and count_trees(p, self.k) > TREE_SPACE_LIMIT:
            raise click.UsageError(f"tree space of arity {p} for k = {self.k} exceeds {TREE_SPACE_LIMIT} trees")


# ---------------------------------------------------------------------------
# output helpers


def output_schema() -> dict:
    """The JSON schema every ``--format json`` output conforms to."""
    from importlib import resources

    return json.loads(resources.files("signal_operads").joinpath("schema/output.schema.json").read_text(encoding="utf-8"))


def _csv_rows(rows: Iterable[Sequence], header: Sequence[str] = ("k", "p", "value")) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _envelope(cfg: RunConfig, data) -> str:
    params = {key: value for key, value in asdict(cfg).items() if key not in ("command", "format", "output") and value not in (None, {})}
    return json.dumps({"command": cfg.command, "params": params, "data": data}, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _require_format(cfg: RunConfig, allowed: Sequence[str]) -> None:
    if cfg.format not in allowed:
        raise click.UsageError(f"{cfg.command} supports --format {'|'.join(allowed)}")


def _parse_tree_arg(text: str):
    try:
        return parse_tree(text)
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint="--tree")


def _parse_word_arg(text: str, hint: str):
    try:
        return parse_word(text)
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint=hint)


def _term(x) -> str:
    return format_tree(x) if x is LEAF or isinstance(x, Node) else format_word(x)


def _format_sum(value) -> str:
    if isinstance(value, FormalSum):
        return value.format(_term)
    return _term(value)


def _sum_json(value) -> list:
    if isinstance(value, FormalSum):
        return [[_term(x), c] for x, c in value.items()]
    return [[_term(value), 1]]


# ---------------------------------------------------------------------------
# shared options

FORMATS = ("text", "json", "csv", "dot")

format_option = click.option("--format", "fmt", type=click.Choice(FORMATS), default="text", show_default=True)
output_option = click.option("--output", "-o", type=click.Path(dir_okay=False, writable=True), default=None, help="Write to a file instead of stdout.")
mode_option = click.option("--mode", type=click.Choice(MODES), default=PARALLEL, show_default=True)
style_option = click.option("--style", type=click.Choice(STYLES), default="messy", show_default=True)
seed_option = click.option("--seed", type=int, default=DEFAULT_SEED, show_default=True)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def cli() -> None:
    """Signaletic and citelangis operads: enumeration, tables and checks."""


# ---------------------------------------------------------------------------
# tables


def _hilbert_table(table: int, ks: Sequence[int], n: int, source: str) -> List[tuple]:
    rows = []
    for k in ks:
        if table == 1:
            rows.extend((k, j, eulerian_number(k, j)) for j in range(k))
            continue
        elif table == 2:
            if source == "recursive":
                values = citelangis.hilbert_recursive(k, n)
            elif source == "closed":
                values = [citelangis.hilbert_closed(k, p) for p in range(1, n + 1)]
            else:
                values = citelangis.normal_form_counts(k, PARALLEL, n)
        else:
            values = posets.pos_hilbert(2**k, n)
        rows.extend((k, p, v) for p, v in enumerate(values, start=1))
    return rows


@cli.command()
@click.option("--k", "ks", type=int, multiple=True, required=True, help="Repeat for several rows.")
@click.option("--N", "n", type=int, default=8, show_default=True, help="Number of terms.")
@click.option("--table", type=click.IntRange(1, 3), default=2, show_default=True, help="1 Eulerian numbers, 2 citelangis dimensions, 3 poset operad dimensions.")
@click.option("--source", type=click.Choice(["recursive", "closed", "enumerate"]), default="recursive", show_default=True)
@click.option("--check", is_flag=True, help="Cross-check the recursive and closed formulas (table 2).")
@format_option
@output_option
def hilbert(ks, n, table, source, check, fmt, output):
    """Rows of the dimension tables."""
    cfg = RunConfig("hilbert", N=n, format=fmt, output=output, bounds={"table": table})
    cfg.check()
    _require_format(cfg, ("text", "json", "csv"))
    if any(k < 1 for k in ks):
        raise click.UsageError("k must be positive")
    if source == "enumerate" and n > 12:
        raise click.UsageError("enumeration is limited to N <= 12")
    rows = _hilbert_table(table, ks, n, source)
    failed = False
    if check and table == 2:
        other = _hilbert_table(2, ks, n, "closed" if source != "closed" else "recursive")
        failed = other != rows
    if fmt == "csv":
        text = _csv_rows(rows)
    elif fmt == "json":
        text = _envelope(cfg, [{"k": k, "p": p, "value": v} for k, p, v in rows])
    else:
        lines = []
        for k in ks:
            lines.append(",".join(str(v) for kk, _, v in rows if kk == k))
        text = "\n".join(lines) + "\n"
    _emit(cfg, text)
    if failed:
        raise VerificationFailed("recursive and closed formulas disagree")


@cli.command("pos-hilbert")
@click.option("--K", "big_k", type=int, default=None, help="Any K >= 2.")
@click.option("--k", "ks", type=int, multiple=True, help="Shorthand for K = 2^k; repeatable.")
@click.option("--N", "n", type=int, default=8, show_default=True)
@format_option
@output_option
def pos_hilbert_cmd(big_k, ks, n, fmt, output):
    """Dimensions of the poset operads, from the holonomic recurrence."""
    cfg = RunConfig("pos-hilbert", N=n, format=fmt, output=output)
    cfg.check()
    _require_format(cfg, ("text", "json", "csv"))
    if (big_k is None) == (not ks):
        raise click.UsageError("give exactly one of --K or --k")
    if big_k is not None:
        if big_k < 2:
            raise click.UsageError("K must be at least 2")
        header, params = ("K", "p", "value"), [(big_k, big_k)]
    else:
        if any(k < 1 for k in ks):
            raise click.UsageError("k must be positive")
        header, params = ("k", "p", "value"), [(k, 2**k) for k in ks]
    try:
        rows = [(label, p, v) for label, K in params for p, v in enumerate(posets.pos_hilbert(K, n), start=1)]
    except ArithmeticError as exc:
        raise VerificationFailed(str(exc))
    if fmt == "csv":
        text = _csv_rows(rows, header)
    elif fmt == "json":
        text = _envelope(cfg, [dict(zip(header, row)) for row in rows])
    else:
        text = "\n".join(",".join(str(v) for lab, _, v in rows if lab == label) for label, _ in params) + "\n"
    _emit(cfg, text)


# ---------------------------------------------------------------------------
# matrices


def _matrix_text(name: str, a: List[List[int]]) -> List[str]:
    return [f"{name}:"] + ["  " + " ".join(str(x) for x in row) for row in a]


@cli.command()
@click.option("--k", type=int, required=True)
@click.option("--mode", type=click.Choice(MODES + ("reduced",)), default=None, help="Restrict to one matrix family.")
@click.option("--conjectures", is_flag=True, help="Check the Eulerian conjectures for 1..k.")
@format_option
@output_option
def matrices(k, mode, conjectures, fmt, output):
    """Transition matrices of admissible combs and their polynomials."""
    cfg = RunConfig("matrices", k=k, mode=mode, format=fmt, output=output)
    cfg.check()
    _require_format(cfg, ("text", "json"))
    if k < 1:
        raise click.UsageError("k must be positive")
    if conjectures:
        modes = (mode,) if mode in MODES else MODES
        reports = [citelangis.conjecture_check(j, modes) for j in range(1, k + 1)]
        if mode == "reduced":
            for r in reports:
                r.expected = {name: v for name, v in r.expected.items() if name.endswith(" N")}
        elif mode is not None:
            for r in reports:
                r.expected = {name: v for name, v in r.expected.items() if name.endswith(mode)}
        if fmt == "json":
            data = [
                {"k": r.k, "name": name, "polynomial": citelangis.format_poly(r.computed[name]), "pass": ok}
                for r in reports
                for name, ok in r.results().items()
            ]
            text = _envelope(cfg, data)
        else:
            text = "\n".join(line for r in reports for line in r.lines()) + "\n"
        _emit(cfg, text)
        if not all(r.passed for r in reports):
            raise VerificationFailed("a conjectured polynomial does not match")
        return
    families = []
    if mode in (None, PARALLEL):
        families.append((f"M_{k} parallel", citelangis.transition_matrix(k, PARALLEL)))
    if mode in (None, SERIES):
        families.append((f"M_{k} series", citelangis.transition_matrix(k, SERIES)))
    if mode in (None, "reduced"):
        families.append((f"N_{k}", citelangis.reduced_matrix(k)))
    if fmt == "json":
        data = [
            {
                "name": name,
                "matrix": a,
                "char_poly": citelangis.format_poly(citelangis.char_poly(a)),
                "min_poly": citelangis.format_poly(citelangis.min_poly(a)),
            }
            for name, a in families
        ]
        text = _envelope(cfg, data)
    else:
        lines = []
        for name, a in families:
            lines += _matrix_text(name, a)
            lines.append(f"  char: {citelangis.format_poly(citelangis.char_poly(a))}")
            lines.append(f"  min:  {citelangis.format_poly(citelangis.min_poly(a))}")
        text = "\n".join(lines) + "\n"
    _emit(cfg, text)


# ---------------------------------------------------------------------------
# relations, rewriting, normal forms


@cli.command()
@click.option("--k", type=int, required=True)
@mode_option
@style_option
@click.option("--side", type=click.Choice(["signaletic", "citelangis"]), default="citelangis", show_default=True)
@click.option("--check", is_flag=True, help="Evaluate the citelangis relations on random permutations.")
@click.option("--samples", type=int, default=200, show_default=True)
@click.option("--max-letters", type=int, default=10, show_default=True)
@seed_option
@format_option
@output_option
def relations(k, mode, style, side, check, samples, max_letters, seed, fmt, output):
    """Quadratic relations; optionally checked under the permutation action."""
    cfg = RunConfig("relations", k=k, mode=mode, style=style, format=fmt, output=output, seed=seed, bounds={"samples": samples})
    cfg.check()
    _require_format(cfg, ("text", "json"))
    if side == "signaletic":
        rels = signaletic.signaletic_relations(k, mode, style)
    else:
        rels = citelangis.citelangis_relations(k, mode, style, actions.action_constraint(mode, style, k))
    failures = []
    if check:
        try:
            failures = actions.check_relations(k, mode, style, samples, seed, max_letters=max_letters)
        except ValueError as exc:
            raise click.UsageError(str(exc))
    if fmt == "json":
        data = {"relations": [{"left": rel.left.format(format_tree), "right": rel.right.format(format_tree)} for rel in rels]}
        if check:
            data["failures"] = [{"relation": r, "inputs": [format_word(x) for x in xs]} for r, xs in failures]
        text = _envelope(cfg, data)
    else:
        lines = [rel.format() for rel in rels]
        if check:
            lines.append(f"checked {samples} triples: {'PASS' if not failures else f'FAIL ({len(failures)})'}")
            lines += [f"  {r} on {' '.join(format_word(x) for x in xs)}" for r, xs in failures[:10]]
        text = "\n".join(lines) + "\n"
    _emit(cfg, text)
    if failures:
        raise VerificationFailed("relations fail under the action")


@cli.command()
@click.option("--k", type=int, default=None, help="Checked against the tree labels when given.")
@mode_option
@style_option
@click.option("--tree", "tree_text", required=True)
@click.option("--side", type=click.Choice(["signaletic", "citelangis"]), default="signaletic", show_default=True)
@format_option
@output_option
def rewrite(k, mode, style, tree_text, side, fmt, output):
    """Rewrite a tree to its normal form."""
    cfg = RunConfig("rewrite", k=k, mode=mode, style=style, format=fmt, output=output)
    cfg.check()
    _require_format(cfg, ("text", "json"))
    t = _parse_tree_arg(tree_text)
    if t is not None and getattr(t, "label", None) is not None and k is not None and len(t.label) != k:
        raise click.UsageError(f"tree labels have length {len(t.label)}, not k = {k}")
    if side == "signaletic":
        result, _ = signaletic.signaletic_rewrite(t, mode, style)
        rendered = "0" if result is ZERO else format_tree(result)
        data = rendered
    else:
        result = citelangis.citelangis_rewrite(t, mode, style)
        rendered = result.format(format_tree)
        data = _sum_json(result)
    text = _envelope(cfg, {"tree": format_tree(t), "normal_form": data}) if fmt == "json" else rendered + "\n"
    _emit(cfg, text)


@cli.command("normal-forms")
@click.option("--k", type=int, required=True)
@mode_option
@click.option("--p", "arity", type=int, required=True, help="Arity.")
@click.option("--side", type=click.Choice(["signaletic", "citelangis"]), default="citelangis", show_default=True)
@style_option
@click.option("--count", is_flag=True, help="Only print the number of normal forms.")
@format_option
@output_option
def normal_forms(k, mode, arity, side, style, count, fmt, output):
    """Normal forms of a given arity."""
    cfg = RunConfig("normal-forms", k=k, mode=mode, style=style, format=fmt, output=output, bounds={"arity": arity})
    cfg.check()
    _require_format(cfg, ("text", "json", "csv"))
    if side == "citelangis":
        trees = citelangis.enumerate_normal_forms(k, mode, arity)
    else:
        from .trees import all_trees, is_signaletic_comb

        trees = [t for t in all_trees(arity, k) if is_signaletic_comb(t, mode)]
        if style == "tidy":
            from .trees import destination

            trees = [t for t in trees if destination(t, mode, style, k=k) is not ZERO]
    if fmt == "csv":
        text = _csv_rows([(k, arity, len(trees))])
    elif fmt == "json":
        data = {"count": len(trees)} if count else {"count": len(trees), "trees": [format_tree(t) for t in trees]}
        text = _envelope(cfg, data)
    elif count:
        text = f"{len(trees)}\n"
    else:
        text = "".join(format_tree(t) + "\n" for t in trees)
    _emit(cfg, text)


# ---------------------------------------------------------------------------
# permutations and posets


@cli.command()
@mode_option
@style_option
@click.option("--op", default=None, help="Operator word, used with --left and --right.")
@click.option("--left", "left_text", default=None)
@click.option("--right", "right_text", default=None)
@click.option("--tree", "tree_text", default=None, help="Evaluate a whole tree instead.")
@click.option("--inputs", default=None, help="Comma separated leaf words for --tree (default 1^k each).")
@format_option
@output_option
def act(mode, style, op, left_text, right_text, tree_text, inputs, fmt, output):
    """Action of the citelangis operators on k-permutations."""
    cfg = RunConfig("act", mode=mode, style=style, format=fmt, output=output)
    _require_format(cfg, ("text", "json"))
    try:
        if tree_text is not None:
            t = _parse_tree_arg(tree_text)
            words = [_parse_word_arg(w.strip(), "--inputs") for w in inputs.split(",")] if inputs else None
            result = actions.eval_tree(t, words, mode, style)
        else:
            if not (op and left_text and right_text):
                raise click.UsageError("give --op, --left and --right, or --tree")
            result = actions.apply(mode, style, op, _parse_word_arg(left_text, "--left"), _parse_word_arg(right_text, "--right"))
    except actions.CapabilityError as exc:
        raise click.UsageError(str(exc))
    except ValueError as exc:
        raise click.UsageError(str(exc))
    if fmt == "json":
        text = _envelope(cfg, {"terms": _sum_json(result)})
    else:
        text = _format_sum(result) + "\n"
    _emit(cfg, text)


@cli.command()
@mode_option
@click.option("--perm", "perm_text", required=True, help="A k-permutation, e.g. 363121244556.")
@format_option
@output_option
def decompose(mode, perm_text, fmt, output):
    """Decompose a permutation into a tree over uncuttable leaves."""
    cfg = RunConfig("decompose", mode=mode, format=fmt, output=output)
    _require_format(cfg, ("text", "json", "dot"))
    sigma = _parse_word_arg(perm_text, "--perm")
    try:
        dec = actions.decompose(sigma, mode)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    ok = dec.evaluate() == tuple(sigma)
    if fmt == "json":
        data = {
            "skeleton": format_tree(dec.skeleton),
            "leaves": [format_word(w) for w in dec.leaves],
            "round_trip": ok,
        }
        text = _envelope(cfg, data)
    elif fmt == "dot":
        text = tree_to_dot(dec.skeleton)
    else:
        text = dec.format() + "\n"
    _emit(cfg, text)
    if not ok:
        raise VerificationFailed("decomposition does not evaluate back")


@cli.command("poset-eval")
@mode_option
@click.option("--tree", "tree_text", required=True)
@click.option("--normal", is_flag=True, help="Also report whether the poset is series normal.")
@format_option
@output_option
def poset_eval(mode, tree_text, normal, fmt, output):
    """Poset evaluation of a syntax tree."""
    cfg = RunConfig("poset-eval", mode=mode, format=fmt, output=output)
    _require_format(cfg, ("text", "json", "dot"))
    t = _parse_tree_arg(tree_text)
    try:
        p = posets.eval_tree_poset(t, mode)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    if normal and mode != SERIES:
        raise click.UsageError("--normal is only available in series mode")
    is_normal = posets.is_series_normal(p) if normal else None
    if fmt == "dot":
        text = p.poset.to_dot()
    elif fmt == "json":
        data = json.loads(p.poset.to_json())
        data["min_extension"] = format_word(p.min_extension())
        if normal:
            data["series_normal"] = is_normal
        text = _envelope(cfg, data)
    else:
        covers = " ".join(f"{a}_{b}<{c}_{d}" for (a, b), (c, d) in p.poset.covers())
        lines = [f"ground: {' '.join(str(c) for c in p.poset.counts)}", f"covers: {covers}", f"min extension: {format_word(p.min_extension())}"]
        if normal:
            lines.append(f"series normal: {'yes' if is_normal else 'no'}")
        text = "\n".join(lines) + "\n"
    _emit(cfg, text)


@cli.command()
@click.option("--tree", "tree_text", required=True)
@click.option("--poset", "as_poset", is_flag=True, help="Draw the poset evaluation instead of the tree.")
@mode_option
@output_option
def dot(tree_text, as_poset, mode, output):
    """Graphviz export of a syntax tree or of its poset evaluation."""
    cfg = RunConfig("dot", mode=mode, format="dot", output=output)
    t = _parse_tree_arg(tree_text)
    if as_poset:
        try:
            text = posets.eval_tree_poset(t, mode).poset.to_dot()
        except ValueError as exc:
            raise click.UsageError(str(exc))
    else:
        text = tree_to_dot(t)
    _emit(cfg, text)


# ---------------------------------------------------------------------------


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point; maps click's error handling onto the documented exit codes."""
    try:
        cli.main(args=argv, prog_name="signal-operads", standalone_mode=False)
    except VerificationFailed as exc:
        click.echo(f"verification failed: {exc}", err=True)
        return EXIT_VERIFY
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show(file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
