"""Command-line entry point: ``hdepthkit <subcommand> ...``.

Exit codes: 0 success (including an empty search), 1 verification mismatch,
2 usage or parse error, 3 domain precondition.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, replace

from . import __version__
from .errors import DomainError, ParseError
from .hdepth import (HdepthReport, alpha_of_ideal, alpha_of_quotient, beta_table,
                     compare_criteria, hdepth)
from .ideals import MonomialIdeal, intersect, parse_ideal, polarize
from .search import hunt, load_search_spec
from .verify import parse_scale, run_checks

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class Problem:
    """The parsed input: I (polarized if needed), an optional J, and the shift N."""

    original: MonomialIdeal
    I: MonomialIdeal
    J: MonomialIdeal | None
    shift: int

    @property
    def n(self) -> int:
        return self.I.n


# --- input ----------------------------------------------------------------------


def _read_file(path: str) -> str:
    # one or more generators per line; '#' starts a comment
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    parts = [ln.split("#", 1)[0].strip().rstrip(",") for ln in lines]
    return ", ".join(p for p in parts if p)


def _load_ideal(args) -> MonomialIdeal:
    sources = [s for s in (args.ideal is not None, args.file is not None, bool(args.intersect)) if s]
    if len(sources) != 1:
        raise UsageError("give exactly one of: an ideal string, --file, --intersect")
    if args.intersect:
        parts = [parse_ideal(t, args.n) for t in args.intersect]
        n = args.n if args.n is not None else max(p.n for p in parts)
        parts = [p if p.n == n else parse_ideal(t, n) for p, t in zip(parts, args.intersect)]
        I = parts[0]
        for p in parts[1:]:
            I = intersect(I, p)
        return I
    text = args.ideal if args.ideal is not None else _read_file(args.file)
    return parse_ideal(text, args.n)


def _problem(args) -> Problem:
    I = _load_ideal(args)
    if I.is_zero():
        raise DomainError("I must be nonzero (got the zero ideal)")
    if I.is_unit():
        raise DomainError("I must be a proper ideal (got the unit ideal)")
    J = None
    if getattr(args, "over", None) is not None:
        if args.mode != "quotient":
            raise UsageError("--over only supports --mode quotient")
        J = parse_ideal(args.over, I.n)
        return Problem(I, I, J, 0)
    P, N = polarize(I)
    return Problem(I, P, None, N)


def _alpha(prob: Problem, which: str, args):
    method = args.method
    if which == "quotient":
        return alpha_of_quotient(prob.J, prob.I, method, args.limit_subsets)
    return alpha_of_ideal(prob.I, method, args.limit_subsets)


def _modes(args) -> list[str]:
    return ["quotient", "ideal"] if args.mode == "both" else [args.mode]


def _label(which: str, prob: Problem) -> str:
    if which == "ideal":
        return "I"
    return "J/I" if prob.J is not None else "S/I"


def _header(prob: Problem) -> dict:
    out = {"n": prob.original.n, "generators": [str(g) for g in prob.original.generators]}
    if prob.J is not None:
        out["over"] = [str(g) for g in prob.J.generators]
    if prob.shift:
        out["polarized"] = {"n": prob.n, "shift": prob.shift,
                            "generators": [str(g) for g in prob.I.generators]}
    return out


def _header_text(prob: Problem) -> list[str]:
    lines = [f"n = {prob.original.n}", f"I = {prob.original}"]
    if prob.J is not None:
        lines.append(f"J = ({', '.join(str(g) for g in prob.J.generators)})")
    if prob.shift:
        lines.append(f"polarized: {prob.shift} extra variables, n = {prob.n}")
        lines.append(f"I^p = {prob.I}")
    return lines


def _fmt(values) -> str:
    return "[" + ", ".join(str(v) for v in values) + "]"


# --- subcommands ------------------------------------------------------------------


def cmd_alpha(args):
    prob = _problem(args)
    data = _header(prob)
    data["mode"] = args.mode
    text = _header_text(prob)
    for which in _modes(args):
        a = _alpha(prob, which, args)
        data.setdefault("alpha", {})[which] = list(a.counts)
        text.append(f"alpha({_label(which, prob)}) = {_fmt(a.counts)}")
    if len(data["alpha"]) == 1:
        data["alpha"] = next(iter(data["alpha"].values()))
    return data, text


def cmd_beta(args):
    prob = _problem(args)
    if args.q < 0:
        raise DomainError(f"q must be >= 0, got {args.q}")
    if args.q > prob.n:
        raise DomainError(f"q must be <= n = {prob.n}, got {args.q}")
    data = _header(prob)
    data.update(mode=args.mode, q=args.q)
    text = _header_text(prob)
    sections = {}
    for which in _modes(args):
        a = _alpha(prob, which, args)
        b = beta_table(a, args.q)
        neg = b.first_negative()
        sections[which] = {"alpha": list(a.counts), "beta": list(b.values), "first_negative": neg}
        lab = _label(which, prob)
        text.append(f"alpha({lab}) = {_fmt(a.counts)}")
        text.append(f"beta^q({lab}) at q={args.q}: {_fmt(b.values)}")
        if neg is not None:
            text.append(f"  first negative entry at k={neg}")
    if len(sections) == 1:
        data.update(next(iter(sections.values())))
    else:
        data.update(sections)
    return data, text


def _report_json(rep: HdepthReport) -> dict:
    return {
        "beta_q": rep.hdepth + rep.shift,
        "alpha": list(rep.alpha.counts),
        "hdepth": rep.hdepth,
        "dim": rep.dim,
        "beta_at_hdepth": list(rep.beta_at_hdepth.values),
        "rejected": [{"q": q, "k": k, "beta": b} for q, (k, b) in sorted(rep.rejected.items(), reverse=True)],
    }


def _shifted(rep: HdepthReport, N: int) -> HdepthReport:
    if not N:
        return rep
    return HdepthReport(rep.hdepth - N, rep.dim - N, rep.n, rep.alpha, rep.beta_at_hdepth, rep.rejected, N)


def _report_text(rep: HdepthReport, lab: str, N: int) -> list[str]:
    lines = [f"alpha({lab}) = {_fmt(rep.alpha.counts)}"]
    for q, (k, b) in sorted(rep.rejected.items(), reverse=True):
        lines.append(f"  q={q} rejected: beta_k = {b} < 0 at k={k}")
    q_raw = rep.hdepth + N
    lines.append(f"  beta at q={q_raw}: {_fmt(rep.beta_at_hdepth.values)}")
    if N:
        lines.append(f"hdepth({lab}) = {rep.hdepth} (polarized value minus {N}), dim = {rep.dim}")
    else:
        lines.append(f"hdepth({lab}) = {rep.hdepth}, dim = {rep.dim}")
    return lines


def _witness(w):
    return None if w is None else {"k": w[0], "beta": w[1], "bound": w[2]}


def _compare(prob: Problem, aS) -> tuple[dict, list[str]]:
    cmp = compare_criteria(aS)
    data = {"at_least": cmp.at_least, "strict_plus_one": cmp.strict_plus_one,
            "at_least_witness": _witness(cmp.at_least_witness),
            "strict_plus_one_witness": _witness(cmp.strict_witness)}
    text = [f"hdepth(I) >= hdepth(S/I): {'yes' if cmp.at_least else 'no'}"]
    if cmp.at_least_witness:
        k, b, bound = cmp.at_least_witness
        text.append(f"  beta_k at k={k} is {b} > {bound}")
    text.append(f"hdepth(I) > hdepth(S/I): {'yes' if cmp.strict_plus_one else 'no'}")
    if cmp.strict_witness:
        k, b, bound = cmp.strict_witness
        text.append(f"  beta_k at k={k} is {b} > {bound}")
    return data, text


def cmd_hdepth(args):
    prob = _problem(args)
    N = prob.shift
    data = _header(prob)
    data["mode"] = args.mode
    text = _header_text(prob)
    reps = {}
    for which in _modes(args):
        rep = _shifted(hdepth(_alpha(prob, which, args)), N)
        reps[which] = rep
        text += _report_text(rep, _label(which, prob), N)
    if len(reps) == 1:
        data.update(_report_json(next(iter(reps.values()))))
    else:
        for which, rep in reps.items():
            data[which] = _report_json(rep)
    if prob.J is None:
        aS = reps["quotient"].alpha if "quotient" in reps else _alpha(prob, "quotient", args)
        cdata, ctext = _compare(prob, aS)
        data["compare"] = cdata
        if args.mode == "both":
            text += ctext
    else:
        data["compare"] = None
    return data, text


def cmd_compare(args):
    args.mode = "quotient"
    prob = _problem(args)
    if prob.J is not None:
        raise UsageError("compare works on the pair S/I, I; drop --over")
    N = prob.shift
    aS = _alpha(prob, "quotient", args)
    qS = hdepth(aS).hdepth
    qI = hdepth(_alpha(prob, "ideal", args)).hdepth
    data = _header(prob)
    cdata, ctext = _compare(prob, aS)
    data.update(hdepth_quotient=qS - N, hdepth_ideal=qI - N, compare=cdata)
    agree = cdata["at_least"] == (qI >= qS) and cdata["strict_plus_one"] == (qI >= qS + 1)
    data["consistent"] = agree
    text = _header_text(prob)
    text.append(f"hdepth(S/I) = {qS - N}, hdepth(I) = {qI - N}")
    text += ctext
    if not agree:
        text.append("MISMATCH: criteria disagree with the direct computation")
    return data, text, (EXIT_OK if agree else EXIT_MISMATCH)


def cmd_polarize(args):
    I = _load_ideal(args)
    P, N = polarize(I)
    data = {"n": I.n, "generators": [str(g) for g in I.generators],
            "polarized": {"n": P.n, "generators": [str(g) for g in P.generators]}, "shift": N}
    text = [f"I = {I}", f"I^p = {P}", f"extra variables: {N} (n = {I.n} -> {P.n})"]
    return data, text


def cmd_search(args):
    try:
        spec = load_search_spec(args.spec)
    except OSError as exc:
        raise UsageError(f"cannot read {args.spec}: {exc.strerror}") from exc
    if args.seed is not None:
        spec = replace(spec, seed=args.seed)
    res = hunt(spec, threads=args.threads)
    for f in res.findings:
        print(f.to_line())
    summ = res.summary()
    if args.json:
        print(json.dumps({"summary": summ}, sort_keys=True), file=sys.stderr)
    else:
        p = summ["pruned"]
        note = "complete" if summ["complete"] else "budget exhausted"
        print(f"# {summ['findings']} findings, {summ['nodes']} nodes, {summ['leaves']} leaves, "
              f"pruned kk={p['kk']} beta={p['beta']} predicate={p['predicate']}, "
              f"{note}, {summ['wall_time']:.2f}s", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args):
    try:
        scale = parse_scale(args.scale or [])
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.seed is not None:
        scale["seed"] = str(args.seed)

    def show(c):
        if args.json:
            print(json.dumps({"check": c.name, "passed": c.passed, "detail": c.detail,
                              "mismatches": c.mismatches}, sort_keys=True))
        else:
            extra = f"  ({c.elapsed:.2f}s)" if args.verbose else ""
            print(c.line() + extra)
            for m in c.mismatches[:20]:
                print(f"    - {m}")
            if len(c.mismatches) > 20:
                print(f"    ... {len(c.mismatches) - 20} more")
        sys.stdout.flush()

    try:
        results = run_checks(args.only or (), scale, on_result=show)
    except ValueError as exc:  # --only matched nothing
        raise UsageError(str(exc)) from exc
    failed = sum(not c.passed for c in results)
    summary = f"{len(results) - failed} passed, {failed} failed"
    if args.json:
        print(json.dumps({"passed": len(results) - failed, "failed": failed}, sort_keys=True))
    else:
        print(summary)
    return EXIT_MISMATCH if failed else EXIT_OK


# --- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("-v", "--verbose", action="store_true")

    ideal = argparse.ArgumentParser(add_help=False)
    ideal.add_argument("ideal", nargs="?", help='generators, e.g. "x1x2, x1x3, x4^2"')
    ideal.add_argument("--file", help="read generators from a file ('#' comments allowed)")
    ideal.add_argument("--intersect", nargs="+", metavar="IDEAL", help="use the intersection of these ideals")
    ideal.add_argument("--n", type=int, help="number of variables (default: largest index used)")
    ideal.add_argument("--limit-subsets", type=int, default=None, metavar="N",
                       help="largest n for subset enumeration")
    ideal.add_argument("--method", choices=["enumerate", "inclusion-exclusion"], default="enumerate",
                       help="how alpha is counted")

    modes = argparse.ArgumentParser(add_help=False)
    modes.add_argument("--mode", choices=["quotient", "ideal", "both"], default="quotient")
    modes.add_argument("--over", metavar="J", help="compute for J/I instead of S/I (squarefree, quotient mode)")

    p = argparse.ArgumentParser(prog="hdepthkit", description="Hilbert depth of squarefree monomial ideals.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("alpha", parents=[common, ideal, modes], help="alpha-vector (counts of squarefree monomials)")
    b = sub.add_parser("beta", parents=[common, ideal, modes], help="beta^q table")
    b.add_argument("--q", type=int, required=True)
    sub.add_parser("hdepth", parents=[common, ideal, modes], help="Hilbert depth with witnesses")
    sub.add_parser("compare", parents=[common, ideal], help="decide hdepth(I) >= hdepth(S/I) from S/I")
    sub.add_parser("polarize", parents=[common, ideal], help="polarize a monomial ideal")
    s = sub.add_parser("search", parents=[common], help="search alpha-vectors for a predicate")
    s.add_argument("spec", help="search spec file (key = value lines or a JSON object)")
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--seed", type=int)
    v = sub.add_parser("verify-paper", parents=[common], help="replay the worked examples and theorem sweeps")
    v.add_argument("--only", action="append", metavar="NAME", help="run checks whose name starts with NAME")
    v.add_argument("--scale", action="append", metavar="KEY=VALUE", help="e.g. n6=exhaustive, n7=200000")
    v.add_argument("--seed", type=int)
    return p


_HANDLERS = {"alpha": cmd_alpha, "beta": cmd_beta, "hdepth": cmd_hdepth, "compare": cmd_compare,
             "polarize": cmd_polarize, "search": cmd_search, "verify-paper": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", 1) < 1:
        parser.error("--threads must be >= 1")
    try:
        out = _HANDLERS[args.command](args)
    except UsageError as exc:
        print(f"hdepthkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"hdepthkit: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"hdepthkit: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    if isinstance(out, int):
        return out
    status = EXIT_OK
    if len(out) == 3:
        data, text, status = out
    else:
        data, text = out
    if args.json:
        print(json.dumps(data, sort_keys=True))
    else:
        print("\n".join(text))
    return status


if __name__ == "__main__":
    sys.exit(main())
