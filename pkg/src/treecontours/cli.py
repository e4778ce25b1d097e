"""Command-line front end.

Every subcommand prints one report to stdout, JSON by default.  Counts are
written as decimal strings because they outgrow 64-bit integers quickly,
and an infinite multiplicity is written as ``"infinite"``.  Failures go to
stderr as a JSON object and set the exit status:

    2  usage error
    3  bad input (grammar file, family spec, depth below the bound, ...)
    4  vertex budget exceeded
    5  two counting routes (or a stored report) disagree
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import analyzer, counters, enumerator, kernels, peierls
from .errors import ContourError, GrammarError, MismatchError, TruncationTooShallow, VertexBudgetExceeded
from .tree import TreeGrammar, binarize, contract_independent_paths, dary_grammar, expand_grammar, regular_grammar

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_BUDGET = 4
EXIT_MISMATCH = 5

GRAMMAR_KEYS = ("root", "classes")


class UsageError(Exception):
    pass


class ReportMismatch(MismatchError):
    """A mismatch that still carries the report to print."""

    def __init__(self, message, size, rendered):
        super().__init__(message, size=size)
        self.rendered = rendered


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def parse_grammar_file(path) -> TreeGrammar:
    """Read a grammar from JSON of the form ``{"root": ..., "classes": {...}}``."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise GrammarError(f"{path}: cannot read grammar file: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GrammarError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None
    if not isinstance(data, dict):
        raise GrammarError(f"{path}: top level must be an object")
    unknown = sorted(set(data) - set(GRAMMAR_KEYS))
    if unknown:
        raise GrammarError(f"{path}: unknown key {unknown[0]!r}; allowed keys are root, classes")
    for key in GRAMMAR_KEYS:
        if key not in data:
            raise GrammarError(f"{path}: missing key {key!r}")
    root, classes = data["root"], data["classes"]
    if not isinstance(root, str):
        raise GrammarError(f"{path}: 'root' must be a string")
    if not isinstance(classes, dict):
        raise GrammarError(f"{path}: 'classes' must be an object")
    for name, kids in classes.items():
        if not isinstance(kids, list) or not all(isinstance(k, str) for k in kids):
            raise GrammarError(f"{path}: classes.{name} must be a list of class names")
    return TreeGrammar(root, classes, name=path.stem)


def parse_family(spec: str) -> tuple[str, int]:
    kind, sep, arg = spec.partition(":")
    if not sep or kind not in ("dary", "regular"):
        raise GrammarError(f"bad family {spec!r}; expected dary:d or regular:k")
    try:
        param = int(arg)
    except ValueError:
        raise GrammarError(f"bad family parameter in {spec!r}") from None
    if kind == "dary" and param < 2:
        raise GrammarError("dary:d needs d >= 2")
    if kind == "regular" and param < 3:
        raise GrammarError("regular:k needs k >= 3")
    return kind, param


def family_grammar(spec: str) -> TreeGrammar:
    kind, param = parse_family(spec)
    return dary_grammar(param) if kind == "dary" else regular_grammar(param)


def _load_grammar(args) -> TreeGrammar:
    if args.grammar is not None:
        return parse_grammar_file(args.grammar)
    return family_grammar(args.family)


def _count_str(v) -> str:
    return "infinite" if v is counters.Infinite else str(v)


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _counts_report(args) -> counters.CountReport:
    if args.family is not None:
        parse_family(args.family)
        return counters.family_report(args.family, args.n_max, args.rooted)
    return counters.count_grammar(_load_grammar(args), args.n_max, args.rooted)


def _depth(args, grammar: TreeGrammar) -> int:
    need = enumerator.grammar_depth(grammar, args.n_max)
    if args.depth is None:
        return need
    if args.depth < need:
        raise TruncationTooShallow(args.depth, need)
    return args.depth


# --------------------------------------------------------------------------
# Subcommands.  Each returns (payload, csv_header, csv_rows, exit_code).
# --------------------------------------------------------------------------

def cmd_count(args):
    report = _counts_report(args)
    counts = {str(n): _count_str(v) for n, v in sorted(report.counts.items())}
    payload = {"counts": counts}
    if report.notes:
        payload["notes"] = list(report.notes)
    rows = [(n, v) for n, v in counts.items()]
    return payload, ("n", "count"), rows, EXIT_OK


def cmd_enumerate(args):
    grammar = _load_grammar(args)
    depth = _depth(args, grammar)
    tree = expand_grammar(grammar, depth, args.budget)
    found = enumerator.enumerate_contours(tree, args.n_max, rooted_only=args.rooted, check_depth=False)
    contours = {str(n): [list(c.key) for c in cs] for n, cs in found.items()}
    counts = {str(n): str(len(found.get(n, []))) for n in range(1, args.n_max + 1)}
    payload = {"depth": depth, "counts": counts, "contours": contours}
    rows = [(n, v) for n, v in counts.items()]
    return payload, ("n", "count"), rows, EXIT_OK


def _load_expected(path) -> dict[int, str]:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise GrammarError(f"{path}: cannot read stored report: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise GrammarError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None
    if not isinstance(data, dict) or not isinstance(data.get("counts"), dict):
        raise GrammarError(f"{path}: stored report needs a 'counts' object")
    try:
        return {int(k): str(v) for k, v in data["counts"].items()}
    except ValueError:
        raise GrammarError(f"{path}: count keys must be sizes") from None


def cmd_verify(args):
    grammar = _load_grammar(args)
    if args.family is not None:
        formula = counters.family_report(args.family, args.n_max, args.rooted)
    else:
        formula = counters.count_grammar(grammar, args.n_max, args.rooted)
    depth = _depth(args, grammar)
    tree = expand_grammar(grammar, depth, args.budget)
    check = enumerator.cross_check(tree, args.n_max, rooted_only=args.rooted,
                                   direct_cap=args.direct_cap, check_depth=False)
    expected = _load_expected(args.expected) if args.expected else {}
    table = []
    bad = []
    for n in range(1, args.n_max + 1):
        f = formula.counts.get(n)
        e = check.subtree_counts[n]
        d = check.direct_counts.get(n)
        row = {"n": str(n), "formula": _count_str(f), "enumerated": str(e),
               "direct": None if d is None else str(d)}
        ok = f == e and (d is None or d == e)
        if n in expected:
            row["stored"] = expected[n]
            ok = ok and expected[n] == str(e)
        row["agree"] = ok
        table.append(row)
        if not ok:
            bad.append(n)
    extra = sorted(k for k in expected if not 1 <= k <= args.n_max)
    payload = {"depth": depth, "backend": kernels.BACKEND, "sizes": table, "agree": not bad and not extra}
    header = ("n", "formula", "enumerated", "direct", "agree")
    rows = [(r["n"], r["formula"], r["enumerated"], r["direct"] or "", str(r["agree"]).lower()) for r in table]
    if bad or extra:
        where = f"size {bad[0]}" if bad else f"stored size {extra[0]} outside 1..{args.n_max}"
        raise ReportMismatch(f"counts disagree at {where}", bad[0] if bad else None, (payload, header, rows))
    return payload, header, rows, EXIT_OK


def cmd_analyze(args):
    grammar = _load_grammar(args)
    report = analyzer.infinitely_many_sizes(grammar, args.probe_bound)
    witness = None
    if report.witness is not None:
        witness = {"class_cycle": list(report.witness.class_cycle),
                   "entry_path": list(report.witness.entry_path)}
    payload = {
        "has_infinite_path": report.has_infinite_path,
        "infinite_sizes_found": list(report.infinite_sizes_found),
        "infinitely_many_sizes": report.infinitely_many_sizes,
        "probe_bound": report.probe_bound,
        "witness": witness,
    }
    return payload, None, None, EXIT_OK


def _enclosure_json(enc: peierls.Enclosure) -> dict:
    out = {"lower": _frac_str(enc.lower), "upper": _frac_str(enc.upper),
           "approx": repr(float((enc.lower + enc.upper) / 2))}
    if enc.exact is not None:
        out["exact"] = _frac_str(enc.exact)
    return out


def cmd_peierls(args):
    report = _counts_report(args)
    if args.activity is not None:
        weight = peierls.WeightSpec.activity(Fraction(args.activity))
    else:
        weight = peierls.WeightSpec.exp_beta(Fraction(args.beta))
    total = peierls.peierls_partial_sum(report, weight, args.n_max, args.precision_bits)
    payload = {"weight": {"kind": weight.kind, "value": _frac_str(weight.value)},
               "n_max": args.n_max, "partial_sum": _enclosure_json(total)}
    try:
        payload["growth_rate"] = repr(peierls.estimate_growth_rate(report, args.n_max))
    except ValueError:
        payload["growth_rate"] = None
    if args.family is not None and parse_family(args.family)[0] == "dary":
        d = parse_family(args.family)[1]
        payload["critical_activity"] = _enclosure_json(
            peierls.critical_activity_enclosure(d, max(args.precision_bits, 128)))
    return payload, None, None, EXIT_OK


def cmd_bounds(args):
    grammar = _load_grammar(args)
    report = _counts_report(args)
    r = grammar.min_children()
    dary = None
    if args.family is not None:
        kind, param = parse_family(args.family)
        dary = param if kind == "dary" and not args.rooted else None
    table = {}
    rows = []
    for n in range(1, args.n_max + 1):
        entry = {"count": _count_str(report.counts.get(n, 0))}
        entry["bollobas"] = str(counters.bound_bollobas(r, n)) if r >= 2 else None
        if dary is not None and n >= 2 and (n - 1) % (dary - 1) == 0:
            lo, hi = counters.bounds_dary(dary, n, args.precision_bits)
            entry["lower"], entry["upper"] = _frac_str(lo), _frac_str(hi)
        table[str(n)] = entry
        rows.append((n, entry["count"], entry.get("lower", ""), entry.get("upper", ""), entry["bollobas"] or ""))
    payload = {"min_children": r, "bounds": table}
    return payload, ("n", "count", "lower", "upper", "bollobas"), rows, EXIT_OK


def _edge_list(mapping) -> list[list[int]]:
    return [[a, b, c, d] for (a, b), (c, d) in sorted(mapping.items())]


def cmd_binarize(args):
    grammar = _load_grammar(args)
    tree = expand_grammar(grammar, args.depth, args.budget)
    binary, vmap = binarize(tree)
    payload = {"input": tree.to_dict(), "tree": binary.to_dict(), "edge_map": _edge_list(vmap.edge_map)}
    return payload, None, None, EXIT_OK


def cmd_contract(args):
    grammar = _load_grammar(args)
    tree = expand_grammar(grammar, args.depth, args.budget)
    contracted, vmap = contract_independent_paths(tree)
    lengths = [[p, c, ell] for (p, c), ell in sorted(contracted.edge_length.items())]
    payload = {"input": tree.to_dict(), "tree": contracted.tree.to_dict(),
               "edge_length": lengths, "edge_map": _edge_list(vmap.edge_map)}
    return payload, None, None, EXIT_OK


COMMANDS = {
    "count": cmd_count,
    "enumerate": cmd_enumerate,
    "verify": cmd_verify,
    "analyze": cmd_analyze,
    "peierls": cmd_peierls,
    "bounds": cmd_bounds,
    "binarize": cmd_binarize,
    "contract": cmd_contract,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="treecontours", description="Count and check contours on trees.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def add(name, help, n_max=True, fmt=False):
        p = sub.add_parser(name, help=help)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--grammar", metavar="FILE", help="grammar JSON file")
        src.add_argument("--family", metavar="SPEC", help="dary:d or regular:k")
        if n_max:
            p.add_argument("--n-max", type=int, required=True, help="largest contour size")
        if fmt:
            p.add_argument("--format", choices=("json", "csv"), default="json")
        return p

    p = add("count", "exact counts from the generating functions", fmt=True)
    p.add_argument("--rooted", action="store_true", help="only contours with an edge at the root")

    p = add("enumerate", "list contours on a truncation", fmt=True)
    p.add_argument("--rooted", action="store_true")
    p.add_argument("--depth", type=int, help="truncation depth (at least the bound)")
    p.add_argument("--budget", type=int, help="vertex budget (default: CONTOUR_BUDGET or 10^7)")

    p = add("verify", "compare formula, enumeration and direct search", fmt=True)
    p.add_argument("--rooted", action="store_true")
    p.add_argument("--depth", type=int, help="truncation depth (at least the bound)")
    p.add_argument("--budget", type=int)
    p.add_argument("--direct-cap", type=int, default=enumerator.DIRECT_SEARCH_CAP,
                   help="largest size checked by the direct search")
    p.add_argument("--expected", metavar="FILE", help="stored count report to compare against")

    p = add("analyze", "decide which sizes have infinitely many contours", n_max=False)
    p.add_argument("--probe-bound", type=int, default=32)

    p = add("peierls", "size-weighted partial sums")
    p.add_argument("--rooted", action="store_true")
    weight = p.add_mutually_exclusive_group(required=True)
    weight.add_argument("--activity", help="lambda as a rational, e.g. 1/8")
    weight.add_argument("--beta", help="inverse temperature; lambda = exp(-2 beta)")
    p.add_argument("--precision-bits", type=int, default=64)

    p = add("bounds", "counts next to the closed-form bounds", fmt=True)
    p.add_argument("--rooted", action="store_true")
    p.add_argument("--precision-bits", type=int, default=128)

    for name, help in (("binarize", "expand and binarize a truncation"),
                       ("contract", "expand and contract independent paths")):
        p = add(name, help, n_max=False)
        p.add_argument("--depth", type=int, required=True)
        p.add_argument("--budget", type=int)
    return parser


def _check_args(args) -> None:
    if getattr(args, "n_max", None) is not None and args.n_max < 1:
        raise UsageError("--n-max must be at least 1")
    if getattr(args, "depth", None) is not None and args.depth < 0:
        raise UsageError("--depth must be non-negative")
    if getattr(args, "budget", None) is not None and args.budget < 1:
        raise UsageError("--budget must be positive")
    if getattr(args, "precision_bits", 64) < 64:
        raise UsageError("--precision-bits must be at least 64")
    if getattr(args, "probe_bound", 1) < 1:
        raise UsageError("--probe-bound must be at least 1")
    if getattr(args, "direct_cap", 1) < 0:
        raise UsageError("--direct-cap must be non-negative")
    for flag in ("activity", "beta"):
        raw = getattr(args, flag, None)
        if raw is not None:
            try:
                value = Fraction(raw)
            except (ValueError, ZeroDivisionError):
                raise UsageError(f"--{flag} must be a rational number, got {raw!r}") from None
            if value < 0 or (flag == "beta" and value == 0):
                raise UsageError(f"--{flag} must be positive")


def _render(payload, header, rows, fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return buf.getvalue()
    return json.dumps(payload, separators=(",", ":")) + "\n"


def _fail(code: int, kind: str, message: str, stderr) -> int:
    stderr.write(json.dumps({"error": kind, "message": message, "exit_code": code},
                            separators=(",", ":")) + "\n")
    return code


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        _check_args(args)
        fmt = getattr(args, "format", "json")
        payload, header, rows, code = COMMANDS[args.command](args)
    except UsageError as exc:
        return _fail(EXIT_USAGE, "usage", str(exc), stderr)
    except MismatchError as exc:
        if isinstance(exc, ReportMismatch):
            stdout.write(_render(*exc.rendered, fmt))
        return _fail(EXIT_MISMATCH, type(exc).__name__, str(exc), stderr)
    except VertexBudgetExceeded as exc:
        return _fail(EXIT_BUDGET, type(exc).__name__, str(exc), stderr)
    except (ContourError, ValueError) as exc:
        return _fail(EXIT_INPUT, type(exc).__name__, str(exc), stderr)
    stdout.write(_render(payload, header, rows, fmt))
    return code


if __name__ == "__main__":
    sys.exit(main())
