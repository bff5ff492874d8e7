"""Case engine: enumerate skew/divisor parameters, classify, compute ratios.

A quadruple with skews (d21, d31, d32), gcd split (d_a, d_b) and
multipliers (k, m) forces an integer solution of the Pell-type equation

    (d_b*k) * x^2 - (d_a*m) * y^2 = d31 * (d31 - d21)

in the coprime parts (x, y) = (beta_1, alpha_1) of its first offset pair.
Only finitely many parameter tuples matter: skews above 5 (and the
pattern d31 = 5, d32 = 4, and equal d31 = d32) are already capped below
every candidate supremum by elementary bounds, and (k, m) is pinned by

    k * m * d21 == d_a * d_b * d32 * d31 * (d32 + d21 - d31)
    k > (d_b / d_a) * m.

Classifying each equation (congruence obstruction or explicit witness)
and evaluating the limiting ratio

    m (d31-d21) (d21*s + d32*d31) (d21 + d31*(d32-d31+d21)/s)
    -----------------------------------------------------------,
              d21 * d31^2 * d_a * (s + d32)^3

with s = sqrt(k*m / (d_a*d_b)), yields the full census the package
reproduces, including the supremum 0.04742065558... at
(d21, d31, d32, d_a, d_b, k, m) = (1, 3, 4, 1, 1, 6, 4).

Ratios are evaluated with mpmath at a working precision of at least 60
bits (CLOSEFACT_PRECISION overrides, in bits).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal
from functools import lru_cache
from importlib import resources

from mpmath import mp

from .core import CloseFactorization, compute_skews, derive_km, gcd_decompose
from .pell import DEFAULT_SEARCH_BOUND, PellEquation, PellVerdict, classify_equation

SKEW_MAX = 5
DEFAULT_PRECISION_BITS = 64
MIN_PRECISION_BITS = 60


def working_precision() -> int:
    """Ratio working precision in bits (env CLOSEFACT_PRECISION, min 60)."""
    raw = os.environ.get("CLOSEFACT_PRECISION", "").strip()
    if not raw:
        return DEFAULT_PRECISION_BITS
    try:
        bits = int(raw)
    except ValueError:
        raise ValueError(f"CLOSEFACT_PRECISION must be an integer, got {raw!r}") from None
    return max(bits, MIN_PRECISION_BITS)


@dataclass(frozen=True)
class CaseParams:
    """One admissible parameter tuple of the finite case space.

    The constructor enforces every structural constraint, including the
    multiplicative (k, m) identity and the k > (d_b/d_a)*m filter, so an
    instance is an admissible case by construction.
    """

    d21: int
    d31: int
    d32: int
    d_a: int
    d_b: int
    k: int
    m: int

    def __post_init__(self):
        p = (self.d21, self.d31, self.d32, self.d_a, self.d_b, self.k, self.m)
        if min(p) < 1:
            raise ValueError(f"parameters must be positive: {p}")
        if not (self.d21 <= SKEW_MAX and self.d31 <= SKEW_MAX and self.d32 <= SKEW_MAX):
            raise ValueError(f"skews above {SKEW_MAX} are out of case space: {p}")
        if not self.d31 > self.d21:
            raise ValueError(f"need d31 > d21: {p}")
        if not self.d32 + self.d21 > self.d31:
            raise ValueError(f"need d32 + d21 > d31: {p}")
        if self.d31 == self.d32:
            raise ValueError(f"equal outer skews are handled by the quadratic bound: {p}")
        if (self.d31, self.d32) == (5, 4):
            raise ValueError(f"(d31, d32) = (5, 4) is capped at ratio 0.04 and excluded: {p}")
        if self.d21 % (self.d_a * self.d_b):
            raise ValueError(f"d_a*d_b must divide d21: {p}")
        lhs = self.k * self.m * self.d21
        rhs = self.d_a * self.d_b * self.d32 * self.d31 * (self.d32 + self.d21 - self.d31)
        if lhs != rhs:
            raise ValueError(f"k*m identity violated: {lhs} != {rhs} for {p}")
        if not self.k * self.d_a > self.m * self.d_b:
            raise ValueError(f"need k > (d_b/d_a)*m: {p}")

    def group(self) -> tuple[int, int, int]:
        return (self.d21, self.d31, self.d32)

    def as_tuple(self) -> tuple[int, ...]:
        return (self.d21, self.d31, self.d32, self.d_a, self.d_b, self.k, self.m)

    def to_json_dict(self) -> dict:
        return {
            "d21": self.d21,
            "d31": self.d31,
            "d32": self.d32,
            "d_a": self.d_a,
            "d_b": self.d_b,
            "k": self.k,
            "m": self.m,
        }


def _divisor_pairs_desc(n: int) -> list[tuple[int, int]]:
    """(k, m) with k*m == n, descending in k."""
    divs = sorted(d for d in range(1, n + 1) if n % d == 0)
    return [(n // d, d) for d in divs]


def _gcd_splits(d21: int) -> list[tuple[int, int]]:
    """All (d_a, d_b) with d_a*d_b dividing d21, lexicographic."""
    return sorted(
        (da, db)
        for da in range(1, d21 + 1)
        for db in range(1, d21 + 1)
        if d21 % (da * db) == 0
    )


def enumerate_cases(d21=None, d31=None, d32=None) -> list[CaseParams]:
    """Every admissible CaseParams, optionally restricted to one group.

    Order: lexicographic in (d21, d31, d32, d_a, d_b), then descending k.
    Combinations whose (k, m) product is not an integer are impossible and
    silently skipped.
    """
    out = []
    for s21 in range(1, SKEW_MAX + 1):
        if d21 is not None and s21 != d21:
            continue
        for s31 in range(s21 + 1, SKEW_MAX + 1):
            if d31 is not None and s31 != d31:
                continue
            for s32 in range(max(1, s31 - s21 + 1), SKEW_MAX + 1):
                if d32 is not None and s32 != d32:
                    continue
                if s32 == s31 or (s31, s32) == (5, 4):
                    continue
                for da, db in _gcd_splits(s21):
                    km_num = da * db * s32 * s31 * (s32 + s21 - s31)
                    if km_num % s21:
                        continue
                    for k, m in _divisor_pairs_desc(km_num // s21):
                        if k * da > m * db:
                            out.append(CaseParams(s21, s31, s32, da, db, k, m))
    return out


def build_pell(params: CaseParams) -> PellEquation:
    """The Pell-type equation forced by a parameter tuple."""
    return PellEquation(
        K=params.d_b * params.k,
        M=params.d_a * params.m,
        tau=params.d31 * (params.d31 - params.d21),
    )


def ratio_limit(params: CaseParams, prec_bits: int | None = None):
    """Limiting value of A / a_3^3 along solutions of the case's equation.

    Returned as an mpf computed at ``prec_bits`` (default: the configured
    working precision).  Defined for every case; it is only meaningful
    (and only attached to census rows) when the equation is solvable.
    """
    bits = working_precision() if prec_bits is None else max(prec_bits, MIN_PRECISION_BITS)
    d21, d31, d32 = params.d21, params.d31, params.d32
    with mp.workprec(bits):
        s = mp.sqrt(mp.mpf(params.k * params.m) / (params.d_a * params.d_b))
        num = (
            params.m
            * (d31 - d21)
            * (d21 * s + d32 * d31)
            * (d21 + d31 * (d32 - d31 + d21) / s)
        )
        den = d21 * d31**2 * params.d_a * (s + d32) ** 3
        return num / den


def format_ratio(x) -> str:
    """Fixed 11-decimal-place rendering, matching the published digits."""
    dec = Decimal(mp.nstr(x, 25))
    return str(dec.quantize(Decimal("1e-11"), rounding=ROUND_HALF_EVEN))


@dataclass(frozen=True)
class CaseRow:
    """A classified case: parameters, equation, verdict, optional ratio."""

    params: CaseParams
    equation: PellEquation
    verdict: PellVerdict
    ratio: object = None  # mpf, present iff verdict is solvable

    def to_json_dict(self) -> dict:
        doc = {
            "params": self.params.to_json_dict(),
            "equation": self.equation.to_json_dict(),
            "verdict": self.verdict.to_json_dict(),
        }
        if self.ratio is not None:
            doc["ratio"] = format_ratio(self.ratio)
        return doc


def classify(
    params: CaseParams,
    bound: int = DEFAULT_SEARCH_BOUND,
    moduli=None,
) -> CaseRow:
    """Classify one case and attach the limiting ratio iff solvable."""
    eq = build_pell(params)
    verdict = classify_equation(eq, moduli=moduli, bound=bound)
    ratio = ratio_limit(params) if verdict.status == "solvable" else None
    return CaseRow(params=params, equation=eq, verdict=verdict, ratio=ratio)


@lru_cache(maxsize=8)
def _census_cached(bound: int, prec_bits: int) -> tuple[CaseRow, ...]:
    return tuple(classify(p, bound=bound) for p in enumerate_cases())


def census(bound: int = DEFAULT_SEARCH_BOUND) -> list[CaseRow]:
    """Every enumerated case, classified, in canonical order."""
    return list(_census_cached(bound, working_precision()))


def solvable_census(bound: int = DEFAULT_SEARCH_BOUND) -> list[CaseRow]:
    """The solvable rows only: the machine analogue of the ratio census."""
    return [row for row in census(bound) if row.verdict.status == "solvable"]


def supremum_ratio(bound: int = DEFAULT_SEARCH_BOUND):
    """(params, ratio) of the maximal limiting ratio over solvable cases.

    A pure function of the case set; the result does not depend on
    enumeration order.
    """
    rows = solvable_census(bound)
    if not rows:
        raise RuntimeError("no solvable cases found")
    best = max(rows, key=lambda row: row.ratio)
    return best.params, best.ratio


def derive_params(cf: CloseFactorization) -> CaseParams:
    """CaseParams realized by an actual quadruple.

    Raises ValueError when the quadruple's skews fall outside the finite
    case space (large or equal skews are legal for tuples, just outside
    the census).
    """
    skews = compute_skews(cf.offsets)
    dec = gcd_decompose(cf.offsets)
    k, m = derive_km(cf)
    return CaseParams(skews.d21, skews.d31, skews.d32, dec.d_a, dec.d_b, k, m)


# ---------------------------------------------------------------------------
# Bundled transcription of the published tables, and the diff against it.
# ---------------------------------------------------------------------------

@lru_cache(maxsize=1)
def reference_tables() -> dict:
    """The published tables 1-17, transcribed row by row, plus errata notes."""
    with resources.files("closefact.data").joinpath("reference_tables.json").open() as fh:
        return json.load(fh)


def _row_key(doc: dict) -> tuple[int, int, int, int]:
    return (doc["d_a"], doc["d_b"], doc["k"], doc["m"])


def _engine_reason(row: CaseRow) -> str:
    cert = row.verdict.certificate
    if cert is None:
        return ""
    if cert.kind == "residue-sweep":
        return "parity" if cert.modulus == 2 else f"mod {cert.modulus}"
    if cert.kind == "prime-power":
        return f"valuation lemma p={cert.prime}"
    return f"non-residue lemma p={cert.prime}"


def paper_diff(bound: int = DEFAULT_SEARCH_BOUND) -> dict:
    """Compare engine verdicts/ratios against the bundled transcription.

    Verdict agreement is the substantive comparison; reason strings are
    reported informationally because the published attributions are
    occasionally coarser than the minimal certificate (a row labeled
    "mod 4" may minimally obstruct mod 8, for example).
    """
    ref = reference_tables()
    rows_by_group: dict[tuple[int, int, int], dict] = {}
    for row in census(bound):
        rows_by_group.setdefault(row.params.group(), {})[
            _row_key(row.params.to_json_dict())
        ] = row

    report: dict = {"tables": {}, "table17": {}}
    for number, table in sorted(ref["tables"].items(), key=lambda kv: int(kv[0])):
        group = (table["d21"], table["d31"], table["d32"])
        engine_rows = rows_by_group.get(group, {})
        ref_rows = {_row_key(r): r for r in table["rows"]}
        missing = sorted(set(ref_rows) - set(engine_rows))
        extra = sorted(set(engine_rows) - set(ref_rows))
        mismatches = []
        notes = []
        for key in sorted(set(ref_rows) & set(engine_rows)):
            ref_row, eng_row = ref_rows[key], engine_rows[key]
            eng_status = eng_row.verdict.status
            ref_status = "obstructed" if ref_row["verdict"] == "no" else "solvable"
            if eng_status != ref_status:
                mismatches.append({"row": list(key), "reference": ref_status, "engine": eng_status})
                continue
            if ref_status == "solvable":
                witness = tuple(ref_row["witness"])
                if witness not in eng_row.verdict.witnesses:
                    mismatches.append(
                        {"row": list(key), "reference_witness": list(witness), "engine": "witness not found"}
                    )
            else:
                reason = _engine_reason(eng_row)
                if reason != ref_row["reason"]:
                    notes.append({"row": list(key), "reference": ref_row["reason"], "engine": reason})
        report["tables"][number] = {
            "group": list(group),
            "rows": {"engine": len(engine_rows), "reference": len(ref_rows)},
            "missing_in_engine": [list(k) for k in missing],
            "extra_in_engine": [list(k) for k in extra],
            "verdict_mismatches": mismatches,
            "attribution_notes": notes,
        }

    engine17 = {row.params.as_tuple(): row for row in solvable_census(bound)}
    ref17 = {
        (r["d21"], r["d31"], r["d32"], r["d_a"], r["d_b"], r["k"], r["m"]): r
        for r in ref["table17"]
    }
    matched, ref_only, engine_only = [], [], []
    for key in sorted(set(ref17) | set(engine17)):
        if key in ref17 and key in engine17:
            eng = engine17[key]
            printed = ref17[key]["ratio"]
            diff = abs(eng.ratio - mp.mpf(printed))
            matched.append(
                {
                    "params": list(key),
                    "reference_ratio": printed,
                    "engine_ratio": format_ratio(eng.ratio),
                    "agrees_1e-9": bool(diff <= mp.mpf("1e-9")),
                }
            )
        elif key in ref17:
            ref_only.append({"params": list(key), "reference_ratio": ref17[key]["ratio"]})
        else:
            engine_only.append(
                {"params": list(key), "engine_ratio": format_ratio(engine17[key].ratio)}
            )
    report["table17"] = {
        "matched": matched,
        "reference_only": ref_only,
        "engine_only": engine_only,
    }
    return report


# ---------------------------------------------------------------------------
# Table emission
# ---------------------------------------------------------------------------

def _group_table_numbers() -> dict[tuple[int, int, int], int]:
    return {
        (t["d21"], t["d31"], t["d32"]): int(num)
        for num, t in reference_tables()["tables"].items()
    }


def _verdict_detail(row: CaseRow) -> str:
    if row.verdict.status == "obstructed":
        return _engine_reason(row)
    if row.verdict.status == "solvable":
        x, y = row.verdict.witnesses[0]
        return f"witness ({x}, {y})"
    return f"no witness <= {row.verdict.search_bound}"


def emit_tables(fmt: str = "json", group=None, bound: int = DEFAULT_SEARCH_BOUND) -> str:
    """Render the classified census.

    ``fmt`` is one of markdown, csv, json.  ``group`` optionally restricts
    to cases matching a (d21[, d31[, d32]]) prefix.  Output is
    deterministic; ratios carry 11 decimal places.
    """
    if fmt not in ("markdown", "csv", "json"):
        raise ValueError(f"unknown format {fmt!r}")
    rows = census(bound)
    if group is not None:
        prefix = tuple(group)
        rows = [r for r in rows if r.params.group()[: len(prefix)] == prefix]
    table_no = _group_table_numbers()

    groups: list[tuple[tuple[int, int, int], list[CaseRow]]] = []
    for row in rows:
        if groups and groups[-1][0] == row.params.group():
            groups[-1][1].append(row)
        else:
            groups.append((row.params.group(), [row]))
    solvable = [r for r in rows if r.verdict.status == "solvable"]

    if fmt == "json":
        doc = {
            "groups": [
                {
                    "d21": g[0], "d31": g[1], "d32": g[2],
                    "table": table_no.get(g),
                    "rows": [r.to_json_dict() for r in grows],
                }
                for g, grows in groups
            ],
            "solvable": [r.to_json_dict() for r in solvable],
        }
        if solvable:
            best = max(solvable, key=lambda r: r.ratio)
            doc["supremum"] = {
                "params": best.params.to_json_dict(),
                "ratio": format_ratio(best.ratio),
            }
        return json.dumps(doc, indent=2) + "\n"

    if fmt == "csv":
        lines = ["table,d21,d31,d32,d_a,d_b,k,m,K,M,tau,status,detail,witness_x,witness_y,ratio"]
        for g, grows in groups:
            for r in grows:
                wx, wy = ("", "")
                if r.verdict.status == "solvable":
                    wx, wy = (str(v) for v in r.verdict.witnesses[0])
                t = table_no.get(g)
                lines.append(
                    ",".join(
                        str(v)
                        for v in (
                            "" if t is None else t,
                            *r.params.as_tuple(),
                            r.equation.K, r.equation.M, r.equation.tau,
                            r.verdict.status,
                            _verdict_detail(r).replace(",", ";"),
                            wx, wy,
                            format_ratio(r.ratio) if r.ratio is not None else "",
                        )
                    )
                )
        return "\n".join(lines) + "\n"

    # markdown
    out = ["# Close-factorization case census", ""]
    for g, grows in groups:
        t = table_no.get(g)
        suffix = f" (reference table {t})" if t is not None else " (no printed reference table)"
        out.append(f"## Skews d21={g[0]}, d31={g[1]}, d32={g[2]}{suffix}")
        out.append("")
        out.append("| d_a | d_b | k | m | equation | status | detail |")
        out.append("|----:|----:|--:|--:|:---------|:-------|:-------|")
        for r in grows:
            out.append(
                f"| {r.params.d_a} | {r.params.d_b} | {r.params.k} | {r.params.m} "
                f"| {r.equation} | {r.verdict.status} | {_verdict_detail(r)} |"
            )
        out.append("")
    out.append("## Solvable census (reference table 17 analogue)")
    out.append("")
    out.append("| d21 | d31 | d32 | d_a | d_b | k | m | witness | ratio |")
    out.append("|----:|----:|----:|----:|----:|--:|--:|:--------|:------|")
    for r in solvable:
        x, y = r.verdict.witnesses[0]
        out.append(
            f"| {r.params.d21} | {r.params.d31} | {r.params.d32} "
            f"| {r.params.d_a} | {r.params.d_b} | {r.params.k} | {r.params.m} "
            f"| ({x}, {y}) | {format_ratio(r.ratio)} |"
        )
    if solvable:
        best = max(solvable, key=lambda r: r.ratio)
        out.append("")
        out.append(
            f"Supremum: {format_ratio(best.ratio)} at "
            f"(d21, d31, d32, d_a, d_b, k, m) = {best.params.as_tuple()}"
        )
    return "\n".join(out) + "\n"
