"""Persistent entropy of barcodes and the stability bound that controls it."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Iterable, Optional

from .persistence import Barcode

BOTTLENECK_LIMIT = 12


def _log(x: float, base: float) -> float:
    if base == 2:
        return math.log2(x)
    return math.log(x) / math.log(base)


def persistent_entropy(lengths: Iterable[float], log_base: float = 2.0) -> float:
    """Shannon entropy -sum(p log p) of the normalized bar lengths p = l / sum(l)."""
    lengths = [float(x) for x in lengths]
    if not lengths:
        raise ValueError("persistent entropy of an empty barcode is undefined")
    for x in lengths:
        if not (x > 0 and math.isfinite(x)):
            raise ValueError(f"bar lengths must be positive and finite, got {x}")
    if not log_base > 1:
        raise ValueError(f"log base must exceed 1, got {log_base}")
    total = math.fsum(lengths)
    return max(0.0, -math.fsum(x / total * _log(x / total, log_base) for x in lengths))


@dataclass(frozen=True)
class EntropySummary:
    pe0: float
    pe1: float
    pe_all: float
    n0: int
    n1: int
    L0: float
    L1: float
    L_all: float
    policy: str = "drop"
    log_base: float = 2.0
    cap_value: Optional[float] = None

    def as_dict(self) -> dict:
        return asdict(self)


def apply_infinite_policy(b: Barcode, policy: str = "drop", cap_value: Optional[float] = None) -> Barcode:
    """Drop infinite intervals, or cap their death at ``cap_value``.

    The cap defaults to the largest finite value appearing in the barcode.
    Intervals that become zero-length under the cap are removed.
    """
    if policy == "drop":
        return b.finite()
    if policy != "cap":
        raise ValueError(f"unknown infinite-bar policy {policy!r}")
    if cap_value is None:
        finite = [x for _, birth, death in b for x in (birth, death) if math.isfinite(x)]
        cap_value = max(finite) if finite else 0.0
    out = []
    for d, birth, death in b:
        if math.isinf(death):
            death = cap_value
        if death > birth:
            out.append((d, birth, death))
    return Barcode(tuple(out))


def summarize_entropy(
    b: Barcode,
    policy: str = "drop",
    log_base: float = 2.0,
    cap_value: Optional[float] = None,
) -> EntropySummary:
    """PE_0, PE_1 and PE_all (entropy of the union of both dimensions)."""
    if policy == "cap" and cap_value is None:
        finite = [x for _, birth, death in b for x in (birth, death) if math.isfinite(x)]
        cap_value = max(finite) if finite else 0.0
    kept = apply_infinite_policy(b, policy, cap_value)
    l0, l1 = kept.lengths(0), kept.lengths(1)
    for name, ls in (("pe0", l0), ("pe1", l1)):
        if not ls:
            raise ValueError(f"{name}: no intervals left in dimension {name[-1]} after {policy!r} policy")
    return EntropySummary(
        pe0=persistent_entropy(l0, log_base),
        pe1=persistent_entropy(l1, log_base),
        pe_all=persistent_entropy(l0 + l1, log_base),
        n0=len(l0),
        n1=len(l1),
        L0=math.fsum(l0),
        L1=math.fsum(l1),
        L_all=math.fsum(l0 + l1),
        policy=policy,
        log_base=log_base,
        cap_value=cap_value if policy == "cap" else None,
    )


def _bars(b: Barcode) -> list[float]:
    ls = b.lengths()
    if any(math.isinf(x) for x in ls):
        raise ValueError("stability bound needs finite barcodes; apply an infinite-bar policy first")
    return [x for x in ls if x > 0]


def bottleneck_hypothesis_threshold(b1: Barcode, b2: Barcode) -> float:
    """Largest bottleneck distance under which the stability bound applies: max(L) / (8 n_max)."""
    l1, l2 = _bars(b1), _bars(b2)
    n_max = max(len(l1), len(l2))
    return max(math.fsum(l1), math.fsum(l2)) / (8 * n_max)


def stability_bound(b1: Barcode, b2: Barcode, delta: float, log_base: float = 2.0) -> float:
    """Upper bound on |E(b1) - E(b2)| for barcodes of filtrations within ``delta`` in sup norm.

    With x = 4 delta n_max / max(L1, L2) the bound is x (log n_max - log x). Returns
    ``math.inf`` when x falls outside (0, n_max), where the bound says nothing.
    """
    l1, l2 = _bars(b1), _bars(b2)
    if not l1 or not l2:
        raise ValueError("stability bound needs two nonempty barcodes")
    n_max = max(len(l1), len(l2))
    x = 4.0 * delta * n_max / max(math.fsum(l1), math.fsum(l2))
    if not 0 < x < n_max:
        return math.inf
    return x * (_log(n_max, log_base) - _log(x, log_base))


def _perfect_matching(adj: list[list[int]], n_right: int) -> bool:
    match_right = [-1] * n_right

    def augment(u, seen):
        for v in adj[u]:
            if v in seen:
                continue
            seen.add(v)
            if match_right[v] < 0 or augment(match_right[v], seen):
                match_right[v] = u
                return True
        return False

    return all(augment(u, set()) for u in range(len(adj)))


def _bottleneck_finite(p: list[tuple[float, float]], q: list[tuple[float, float]]) -> float:
    n1, n2 = len(p), len(q)
    if n1 + n2 == 0:
        return 0.0
    cost = [[max(abs(a[0] - b[0]), abs(a[1] - b[1])) for b in q] for a in p]
    half_p = [(d - b) / 2 for b, d in p]
    half_q = [(d - b) / 2 for b, d in q]
    candidates = sorted({0.0, *half_p, *half_q, *(c for row in cost for c in row)})

    def feasible(t):
        # left: p_0..p_{n1-1}, then diagonal copies of q; right: q_0..q_{n2-1}, then diagonal copies of p
        adj = []
        for i in range(n1):
            row = [j for j in range(n2) if cost[i][j] <= t]
            if half_p[i] <= t:
                row.append(n2 + i)
            adj.append(row)
        for j in range(n2):
            row = [j] if half_q[j] <= t else []
            row.extend(range(n2, n2 + n1))
            adj.append(row)
        return _perfect_matching(adj, n1 + n2)

    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(candidates[mid]):
            hi = mid
        else:
            lo = mid + 1
    return candidates[lo]


def bottleneck_bruteforce(b1: Barcode, b2: Barcode, limit: int = BOTTLENECK_LIMIT) -> float:
    """Exact bottleneck distance for small barcodes, taken as the max over dimensions.

    Every threshold a matching can achieve is a pairwise L-infinity cost or a
    half-length. The search tries these candidates and tests each one for a
    perfect matching on the diagonal-augmented bipartite graph.
    """
    dims = {d for d, _, _ in b1} | {d for d, _, _ in b2}
    worst = 0.0
    for d in sorted(dims):
        f1 = [(b, e) for dd, b, e in b1 if dd == d and math.isfinite(e)]
        f2 = [(b, e) for dd, b, e in b2 if dd == d and math.isfinite(e)]
        if len(f1) > limit or len(f2) > limit:
            raise ValueError(
                f"bottleneck_bruteforce handles at most {limit} finite intervals per barcode, "
                f"got {len(f1)} and {len(f2)} in dimension {d}"
            )
        i1 = sorted(b for dd, b, e in b1 if dd == d and math.isinf(e))
        i2 = sorted(b for dd, b, e in b2 if dd == d and math.isinf(e))
        if len(i1) != len(i2):
            return math.inf
        worst = max(worst, *(abs(x - y) for x, y in zip(i1, i2)), _bottleneck_finite(f1, f2))
    return worst
