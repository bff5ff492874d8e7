"""Command-line interface.

Data goes to stdout, diagnostics to stderr; identical argv produces
byte-identical stdout.  Exit codes: 0 success, 1 domain error, 2 usage
error.  Integer JSON fields that scale with the inputs (bases, offsets,
witnesses, skews, Pell coefficients) are decimal strings so consumers
never hit 53-bit float truncation; structurally bounded fields (case
parameters, moduli, counts) stay plain numbers.
"""

from __future__ import annotations

import argparse
import json
import sys
from decimal import Decimal, ROUND_HALF_EVEN
from fractions import Fraction

from . import __version__, cases, core, pell, search


def _emit(text: str) -> None:
    sys.stdout.write(text)


def _emit_json(doc) -> None:
    _emit(json.dumps(doc, indent=2) + "\n")


def _offsets_arg(text: str) -> list[tuple[int, int]]:
    """argparse type: 'a:b,a:b,...' -> [(a, b), ...]; syntax errors are usage errors."""
    pairs = []
    for chunk in text.split(","):
        a, sep, b = chunk.partition(":")
        try:
            if not sep:
                raise ValueError
            pairs.append((int(a), int(b)))
        except ValueError:
            raise argparse.ArgumentTypeError(
                f"offset {chunk!r} is not of the form a:b"
            ) from None
    return pairs


def _moduli_arg(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"moduli must be comma-separated integers, got {text!r}") from None


def _group_arg(text: str) -> tuple[int, ...]:
    try:
        group = tuple(int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"group must be comma-separated integers, got {text!r}") from None
    if not 1 <= len(group) <= 3:
        raise argparse.ArgumentTypeError("group takes 1 to 3 values: d21[,d31[,d32]]")
    return group


def _fraction_decimal(fr: Fraction, places: int = 11) -> str:
    q = Decimal(fr.numerator) / Decimal(fr.denominator)
    return str(q.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN))


def _skews_doc(offsets) -> dict:
    d21, d31, d32 = core.raw_skews(offsets)
    return {"d21": str(d21), "d31": str(d31), "d32": str(d32)}


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_verify(args) -> int:
    try:
        cf = core.verify_quadruple(args.n, args.A, args.B, args.offsets)
    except core.InvalidFactorization as exc:
        _emit_json({"valid": False, "error": {"code": exc.code, "detail": str(exc)}})
        return 1
    doc = {"valid": True, **cf.to_json_dict(), "k": cf.k}
    if cf.k == 4:
        doc["skews"] = _skews_doc(cf.offsets)
    _emit_json(doc)
    return 0


def _cmd_skews(args) -> int:
    triple = core.compute_skews(args.offsets)
    _emit_json({"d21": str(triple.d21), "d31": str(triple.d31), "d32": str(triple.d32)})
    return 0


def _cmd_pell(args) -> int:
    eq = pell.PellEquation(args.K, args.M, args.tau)
    verdict = pell.classify_equation(eq, moduli=args.moduli, bound=args.bound)
    _emit_json({"equation": eq.to_json_dict(), **verdict.to_json_dict()})
    return 0


def _cmd_cases(args) -> int:
    if args.paper_diff:
        _emit_json(cases.paper_diff(bound=args.bound))
        return 0
    _emit(cases.emit_tables(args.format, group=args.group, bound=args.bound))
    return 0


def _cmd_family(args) -> int:
    if args.index is not None:
        fam = search.optimal_family(args.index)
        ratio = core.closeness_ratio(fam.cf)
        doc = {
            "kind": "k4-optimal",
            **fam.to_json_dict(),
            "skews": _skews_doc(fam.cf.offsets),
            "ratio": {
                "numerator": str(ratio.numerator),
                "denominator": str(ratio.denominator),
                "decimal": _fraction_decimal(ratio),
            },
        }
    else:
        fam = search.k3_family(args.k3)
        c = fam.cf.offsets[-1][0]
        doc = {
            "kind": "k3",
            **fam.to_json_dict(),
            "bound": {
                "c": str(c),
                "four_a": str(4 * fam.cf.A),
                "c_times_c_minus_1_sq": str(c * (c - 1) ** 2),
                "holds": 4 * fam.cf.A <= c * (c - 1) ** 2,
            },
        }
    _emit_json(doc)
    return 0


def _cmd_search(args) -> int:
    box = search.SearchBox(a_max=args.amax, c_max=args.cmax, k_min=args.k)
    results = search.brute_force(box, jobs=args.jobs)
    if args.format == "csv":
        lines = ["n,A,B,k,offsets"]
        for cf in results:
            offs = ";".join(f"{a}:{b}" for a, b in cf.offsets)
            lines.append(f"{cf.n},{cf.A},{cf.B},{cf.k},{offs}")
        _emit("\n".join(lines) + "\n")
        return 0
    doc = {
        "box": {"a_max": box.a_max, "c_max": box.c_max, "k_min": box.k_min},
        "count": len(results),
        "results": [{**cf.to_json_dict(), "k": cf.k} for cf in results],
    }
    _emit_json(doc)
    return 0


def _report_doc(bound: int) -> dict:
    flagship = search.optimal_family(2)
    ratio = core.closeness_ratio(flagship.cf)
    families_k4 = []
    for i in range(1, 5):
        fam = search.optimal_family(i)
        families_k4.append(
            {
                "index": i,
                "n": str(fam.cf.n),
                "skews": _skews_doc(fam.cf.offsets),
                "ratio_decimal": _fraction_decimal(core.closeness_ratio(fam.cf)),
            }
        )
    families_k3 = []
    for n_index in range(2, 7):
        fam = search.k3_family(n_index)
        c = fam.cf.offsets[-1][0]
        families_k3.append(
            {
                "index": n_index,
                "n": str(fam.cf.n),
                "cubic_bound_holds": 4 * fam.cf.A <= c * (c - 1) ** 2,
            }
        )
    census_doc = json.loads(cases.emit_tables("json", bound=bound))
    return {
        "census": census_doc,
        "flagship": {
            **flagship.to_json_dict(),
            "factor_pairs": [[str(p), str(q)] for p, q in flagship.cf.factor_pairs()],
            "skews": _skews_doc(flagship.cf.offsets),
            "ratio": {
                "numerator": str(ratio.numerator),
                "denominator": str(ratio.denominator),
                "decimal": _fraction_decimal(ratio),
            },
        },
        "family_crosscheck": {"k4": families_k4, "k3": families_k3},
    }


def _cmd_report(args) -> int:
    doc = _report_doc(args.bound)
    if args.format == "markdown":
        lines = [cases.emit_tables("markdown", bound=args.bound)]
        flag = doc["flagship"]
        lines.append("## Flagship example")
        lines.append("")
        lines.append(f"n = {flag['n']} factors {len(flag['factor_pairs'])} ways:")
        lines.append("")
        for p, q in flag["factor_pairs"]:
            lines.append(f"* {p} x {q}")
        lines.append("")
        lines.append(
            f"Closeness ratio A/a_3^3 = {flag['ratio']['numerator']}/{flag['ratio']['denominator']}"
            f" = {flag['ratio']['decimal']}"
        )
        lines.append("")
        lines.append("## Family cross-check")
        lines.append("")
        for fam in doc["family_crosscheck"]["k4"]:
            lines.append(
                f"* k4 index {fam['index']}: n = {fam['n']}, skews "
                f"({fam['skews']['d21']}, {fam['skews']['d31']}, {fam['skews']['d32']}), "
                f"ratio {fam['ratio_decimal']}"
            )
        for fam in doc["family_crosscheck"]["k3"]:
            lines.append(
                f"* k3 index {fam['index']}: n = {fam['n']}, cubic bound holds: "
                f"{fam['cubic_bound_holds']}"
            )
        _emit("\n".join(lines) + "\n")
        return 0
    _emit_json(doc)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="closefact",
        description="Integers with several close factorizations: validation, "
        "Pell-type case classification, ratio census, families, and search.",
    )
    parser.add_argument("--version", action="version", version=f"closefact {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="validate a close-factorization tuple")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--A", type=int, required=True)
    p.add_argument("--B", type=int, required=True)
    p.add_argument(
        "--offsets", required=True, type=_offsets_arg,
        help="comma-separated a:b pairs, increasing",
    )
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("skews", help="skew triple of three offset pairs")
    p.add_argument("--offsets", required=True, type=_offsets_arg, help="exactly three a:b pairs")
    p.set_defaults(func=_cmd_skews)

    p = sub.add_parser("pell", help="classify a generalized Pell equation")
    psub = p.add_subparsers(dest="pell_command", required=True)
    pc = psub.add_parser("classify", help="obstruction certificate or bounded witnesses")
    pc.add_argument("K", type=int)
    pc.add_argument("M", type=int)
    pc.add_argument("tau", type=int)
    pc.add_argument(
        "--moduli", type=_moduli_arg,
        help="comma-separated residue moduli (default: prime powers <= 64)",
    )
    pc.add_argument("--bound", type=int, default=pell.DEFAULT_SEARCH_BOUND)
    pc.set_defaults(func=_cmd_pell)

    p = sub.add_parser("cases", help="enumerate and classify the parameter case space")
    p.add_argument("--format", choices=("markdown", "csv", "json"), default="json")
    p.add_argument("--group", type=_group_arg, help="restrict to d21[,d31[,d32]]")
    p.add_argument("--bound", type=int, default=pell.DEFAULT_SEARCH_BOUND)
    p.add_argument(
        "--paper-diff",
        action="store_true",
        help="compare engine verdicts/ratios against the bundled published-table transcription",
    )
    p.set_defaults(func=_cmd_cases)

    p = sub.add_parser("family", help="constructive family members")
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--index", type=int, help="k = 4 extremal family index i >= 1")
    grp.add_argument("--k3", type=int, help="k = 3 family index N >= 2")
    p.set_defaults(func=_cmd_family)

    p = sub.add_parser("search", help="exhaustive box search for close factorizations")
    p.add_argument("--amax", type=int, required=True)
    p.add_argument("--cmax", type=int, required=True)
    p.add_argument("--k", type=int, default=2, help="minimum number of factorizations")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("report", help="full pipeline: census, supremum, families, flagship")
    p.add_argument("--format", choices=("json", "markdown"), default="json")
    p.add_argument("--bound", type=int, default=pell.DEFAULT_SEARCH_BOUND)
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError) as exc:
        print(f"closefact: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
