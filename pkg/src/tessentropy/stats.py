"""Kruskal-Wallis omnibus test and Dunn post-hoc comparisons, both tie-corrected."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

from .special import chi2_sf, normal_sf

ADJUSTMENTS = ("none", "bonferroni", "holm", "bh")
# Chosen by calibrate_adjustment against the reference Dunn table in data/ (see README).
DEFAULT_ADJUSTMENT = "bh"
DEFAULT_ALPHA = 0.005
VARIABLES = ("pe0", "pe1", "pe_all")
DATA_DIR = Path(__file__).resolve().parents[2] / "data"


class DegenerateSampleError(ValueError):
    pass


@dataclass
class GroupSample:
    groups: list[tuple[str, list[float]]]

    def __post_init__(self):
        self.groups = [(str(name), [float(v) for v in vals]) for name, vals in self.groups]
        if len(self.groups) < 2:
            raise ValueError(f"need at least 2 groups, got {len(self.groups)}")
        names = [name for name, _ in self.groups]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate group names in {names}")
        for name, vals in self.groups:
            if not vals:
                raise ValueError(f"group {name!r} is empty")
            if not all(math.isfinite(v) for v in vals):
                raise ValueError(f"group {name!r} contains non-finite values")

    @classmethod
    def from_mapping(cls, m: Mapping[str, Iterable[float]]) -> "GroupSample":
        return cls([(k, list(v)) for k, v in m.items()])

    @property
    def names(self) -> list[str]:
        return [name for name, _ in self.groups]

    def pooled(self) -> list[float]:
        return [v for _, vals in self.groups for v in vals]


@dataclass
class PairwiseResult:
    group_a: str
    group_b: str
    z: float
    p_raw: float
    p_adjusted: float


@dataclass
class TestResult:
    __test__ = False  # not a pytest class

    statistic: float
    df: Optional[int]
    p_value: float
    pairwise: list[PairwiseResult] = field(default_factory=list)
    adjustment: Optional[str] = None


def rank_with_ties(values: Sequence[float]) -> tuple[list[float], list[int]]:
    """Mid-ranks (1-based) and the sizes of tied blocks with two or more members."""
    if len(values) == 0:
        raise ValueError("cannot rank an empty sample")
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    ties = []
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mid = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = mid
        if j > i:
            ties.append(j - i + 1)
        i = j + 1
    return ranks, ties


def _ranked(g: GroupSample):
    pooled = g.pooled()
    n_total = len(pooled)
    ranks, ties = rank_with_ties(pooled)
    sizes = [len(vals) for _, vals in g.groups]
    mean_ranks, start = [], 0
    for n in sizes:
        mean_ranks.append(math.fsum(ranks[start:start + n]) / n)
        start += n
    tie_sum = sum(t**3 - t for t in ties)
    if n_total > 1 and tie_sum == n_total**3 - n_total:
        raise DegenerateSampleError("degenerate sample: all observations are identical")
    return n_total, sizes, mean_ranks, tie_sum


def kruskal_wallis(g: GroupSample) -> TestResult:
    n_total, sizes, mean_ranks, tie_sum = _ranked(g)
    if n_total < 3:
        raise ValueError(f"Kruskal-Wallis needs at least 3 observations, got {n_total}")
    h = 12.0 / (n_total * (n_total + 1)) * math.fsum(
        n * r * r for n, r in zip(sizes, mean_ranks)
    ) - 3.0 * (n_total + 1)
    h /= 1.0 - tie_sum / (n_total**3 - n_total)
    df = len(sizes) - 1
    return TestResult(statistic=h, df=df, p_value=chi2_sf(h, df))


def adjust_pvalues(p: Sequence[float], method: str) -> list[float]:
    m = len(p)
    if method == "none":
        return list(p)
    if method == "bonferroni":
        return [min(1.0, x * m) for x in p]
    order = sorted(range(m), key=lambda i: p[i])
    out = [0.0] * m
    if method == "holm":
        running = 0.0
        for rank, i in enumerate(order):
            running = max(running, min(1.0, (m - rank) * p[i]))
            out[i] = running
        return out
    if method == "bh":
        running = 1.0
        for rank in range(m - 1, -1, -1):
            i = order[rank]
            running = min(running, p[i] * m / (rank + 1))
            out[i] = min(1.0, running)
        return out
    raise ValueError(f"unknown adjustment {method!r}; expected one of {ADJUSTMENTS}")


def dunn_test(g: GroupSample, adjustment: str = DEFAULT_ADJUSTMENT) -> TestResult:
    """Pairwise Dunn z-tests on mean ranks for every pair (i < j) in group order.

    The returned statistic and p-value are those of the Kruskal-Wallis test the
    comparisons follow up on.
    """
    if adjustment not in ADJUSTMENTS:
        raise ValueError(f"unknown adjustment {adjustment!r}; expected one of {ADJUSTMENTS}")
    omnibus = kruskal_wallis(g)
    n_total, sizes, mean_ranks, tie_sum = _ranked(g)
    variance = n_total * (n_total + 1) / 12.0 - tie_sum / (12.0 * (n_total - 1))
    names = g.names
    rows = []
    for i, j in combinations(range(len(names)), 2):
        se = math.sqrt(variance * (1.0 / sizes[i] + 1.0 / sizes[j]))
        z = (mean_ranks[i] - mean_ranks[j]) / se
        rows.append((names[i], names[j], z, min(1.0, 2.0 * normal_sf(abs(z)))))
    adjusted = adjust_pvalues([r[3] for r in rows], adjustment)
    pairwise = [PairwiseResult(a, b, z, p, q) for (a, b, z, p), q in zip(rows, adjusted)]
    return TestResult(omnibus.statistic, omnibus.df, omnibus.p_value, pairwise, adjustment)


def find_pair(result: TestResult, a: str, b: str) -> PairwiseResult:
    """Look up the comparison of groups a and b regardless of the order they were tested in."""
    for r in result.pairwise:
        if (r.group_a, r.group_b) in ((a, b), (b, a)):
            return r
    raise KeyError(f"no comparison between {a!r} and {b!r}")


def read_group_table(path, variables: Sequence[str] = VARIABLES) -> dict[str, GroupSample]:
    """Read a CSV with a ``group`` column into one GroupSample per variable.

    Groups are sorted by name so the result does not depend on row order.
    """
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = {"group", *variables} - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"{path}: missing column(s) {sorted(missing)}")
        data: dict[str, dict[str, list[float]]] = {v: {} for v in variables}
        for lineno, row in enumerate(reader, 2):
            for v in variables:
                try:
                    x = float(row[v])
                except (TypeError, ValueError):
                    raise ValueError(f"{path}:{lineno}: bad {v} value {row[v]!r}") from None
                data[v].setdefault(row["group"], []).append(x)
    return {v: GroupSample(sorted(groups.items())) for v, groups in data.items()}


@dataclass
class CalibrationReport:
    chosen: str
    rtol: float
    # method -> (entries within rtol, total entries, worst relative error)
    scores: dict[str, tuple[int, int, float]]
    # method -> list of (variable, group_a, group_b, reference, computed)
    details: dict[str, list[tuple[str, str, str, float, float]]]

    def all_match(self) -> bool:
        matched, total, _ = self.scores[self.chosen]
        return matched == total

    def format(self) -> str:
        lines = [f"Dunn adjustment calibration (tolerance {self.rtol:.0%} relative)"]
        for method, (matched, total, worst) in self.scores.items():
            mark = "  <- chosen" if method == self.chosen else ""
            lines.append(f"  {method:<10} {matched}/{total} within tolerance, worst rel. error {worst:.3g}{mark}")
        return "\n".join(lines)


def calibrate_adjustment(
    samples: Mapping[str, GroupSample],
    reference: Iterable[tuple[str, str, str, float]],
    rtol: float = 0.05,
) -> CalibrationReport:
    """Pick the adjustment whose Dunn p-values best reproduce a reference table.

    ``reference`` holds (variable, group_a, group_b, adjusted p) rows. Methods are
    ranked by how many entries fall within ``rtol``, then by median relative error.
    """
    reference = list(reference)
    scores, details, keys = {}, {}, {}
    for method in ADJUSTMENTS:
        results = {v: dunn_test(g, method) for v, g in samples.items()}
        rows, errs = [], []
        for var, a, b, expected in reference:
            computed = find_pair(results[var], a, b).p_adjusted
            rows.append((var, a, b, expected, computed))
            errs.append(abs(computed - expected) / abs(expected))
        matched = sum(e <= rtol for e in errs)
        scores[method] = (matched, len(errs), max(errs))
        details[method] = rows
        keys[method] = (-matched, sorted(errs)[len(errs) // 2])
    chosen = min(ADJUSTMENTS, key=lambda m: keys[m])
    return CalibrationReport(chosen, rtol, scores, details)


def read_dunn_reference(path) -> list[tuple[str, str, str, float]]:
    with open(path, newline="") as fh:
        return [
            (r["variable"], r["group_a"], r["group_b"], float(r["p_adjusted"]))
            for r in csv.DictReader(fh)
        ]


def read_kw_reference(path) -> dict[str, float]:
    with open(path, newline="") as fh:
        return {r["variable"]: float(r["p_value"]) for r in csv.DictReader(fh)}


def compare_groups(
    samples: Mapping[str, GroupSample],
    adjustment: str = DEFAULT_ADJUSTMENT,
    alpha: float = DEFAULT_ALPHA,
) -> dict:
    """Kruskal-Wallis and Dunn results for every variable, as a JSON-ready dict."""
    kw, dunn = {}, {}
    for var, g in samples.items():
        res = dunn_test(g, adjustment)
        kw[var] = {"H": res.statistic, "df": res.df, "p": res.p_value}
        dunn[var] = [
            {"pair": [r.group_a, r.group_b], "z": r.z, "p_raw": r.p_raw, "p_adjusted": r.p_adjusted}
            for r in res.pairwise
        ]
    return {"kruskal_wallis": kw, "dunn": dunn, "adjustment": adjustment, "alpha": alpha}

