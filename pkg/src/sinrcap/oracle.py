"""Exhaustive optima on small instances; ground truth for everything else.

Subset feasibility is evaluated directly from powers and distances (the
SINR inequality itself), independently of the affectance matrices used by
the approximation pipelines.
"""

from __future__ import annotations

import numpy as np

from .affectance import AffectanceContext, InfeasiblePrimaries, Schedule, certify

ENUMERATION_CAP = 20
_CHUNK = 1 << 14


class TooLarge(Exception):
    """Instance exceeds the exhaustive-enumeration cap."""


def _check_cap(n: int):
    if n > ENUMERATION_CAP:
        raise TooLarge(f"{n} links exceed the enumeration cap of {ENUMERATION_CAP}")


def _subset_masks(n: int):
    """Yield (start, bool matrix) covering all 2**n subsets in mask order."""
    total = 1 << n
    bit = 1 << np.arange(n, dtype=np.int64)
    for start in range(0, total, _CHUNK):
        stop = min(start + _CHUNK, total)
        masks = np.arange(start, stop, dtype=np.int64)
        yield start, (masks[:, None] & bit[None, :]) != 0


def _feasible_exact(ctx: AffectanceContext, sel: np.ndarray) -> np.ndarray:
    """Exact SINR feasibility for a block of subsets (primaries transmit)."""
    noise = ctx.base_noise.copy()
    if ctx.k:
        noise = noise + ctx.interf_ps.sum(axis=0)
    budget = ctx.signal / ctx.betas - noise
    loads = sel.astype(float) @ ctx.interf_ss
    return np.all((loads <= budget) | ~sel, axis=1)


def _feasible_affectance(ctx: AffectanceContext, sel: np.ndarray, gamma: float,
                         anti: bool = False) -> np.ndarray:
    mat = ctx.raw if gamma <= 1.0 else ctx.aff
    f = sel.astype(float)
    ok = np.ones(sel.shape[0], dtype=bool)
    in_loads = f @ mat
    ok &= np.all((in_loads <= gamma) | ~sel, axis=1)
    if anti:
        out_loads = f @ mat.T
        ok &= np.all((out_loads <= gamma) | ~sel, axis=1)
    return ok


def _pick_best(ctx, feasible, sel, values, best):
    """Update (value, ids) with the block's best subset; ties take the
    lexicographically smallest id tuple."""
    vals = np.where(feasible, values, -np.inf)
    if vals.size == 0 or np.max(vals) == -np.inf:
        return best
    vmax = float(np.max(vals))
    if best is not None and vmax < best[0]:
        return best
    cand_rows = np.flatnonzero(vals == vmax)
    ids_list = [tuple(int(i) for i in ctx.ids[sel[r]]) for r in cand_rows]
    cand = (vmax, min(ids_list))
    if best is None or cand[0] > best[0] or (cand[0] == best[0] and cand[1] < best[1]):
        return cand
    return best


def exact_capacity(ctx: AffectanceContext, objective: str = "cardinality",
                   mode: str = "exact_sinr", gamma: float = 1.0) -> Schedule:
    """Maximum feasible subset by enumeration (n <= 20).

    mode "exact_sinr" checks the SINR inequality; "affectance" checks
    gamma-feasibility of received affectance sums.
    """
    _check_cap(ctx.n)
    if objective not in ("cardinality", "weight"):
        raise ValueError(f"unknown objective {objective!r}")
    if mode not in ("exact_sinr", "affectance"):
        raise ValueError(f"unknown mode {mode!r}")
    best = None
    for _, sel in _subset_masks(ctx.n):
        if mode == "exact_sinr":
            ok = _feasible_exact(ctx, sel)
        else:
            ok = _feasible_affectance(ctx, sel, gamma)
        values = sel.sum(axis=1).astype(float) if objective == "cardinality" \
            else sel.astype(float) @ ctx.weights
        best = _pick_best(ctx, ok, sel, values, best)
    return certify(ctx, best[1] if best else ())


def exact_admission(ctx: AffectanceContext) -> Schedule:
    """Maximum secondary subset keeping all primaries and members exactly
    feasible, primaries at their explicit powers."""
    if not ctx.has_primaries:
        raise ValueError("admission oracle requires a context with primaries")
    _check_cap(ctx.n)
    if ctx.k:
        prim_noise = np.full(ctx.k, ctx.instance.noise) + ctx.interf_pp.sum(axis=0)
        prim_budget = ctx.prim_signal / ctx.prim_betas - prim_noise
        if np.any(prim_budget < 0):
            raise InfeasiblePrimaries("primaries are infeasible even without secondaries")
    sec_noise = ctx.base_noise + (ctx.interf_ps.sum(axis=0) if ctx.k else 0.0)
    sec_budget = ctx.signal / ctx.betas - sec_noise
    best = None
    for _, sel in _subset_masks(ctx.n):
        f = sel.astype(float)
        ok = np.all((f @ ctx.interf_ss <= sec_budget) | ~sel, axis=1)
        if ctx.k:
            ok &= np.all(f @ ctx.interf_sp <= prim_budget, axis=1)
        best = _pick_best(ctx, ok, sel, sel.sum(axis=1).astype(float), best)
    return certify(ctx, best[1] if best else ())


def largest_bifeasible(ctx: AffectanceContext, gamma: float = 2.0) -> Schedule:
    """Maximum-cardinality subset whose received and sent affectance sums
    both stay within gamma at every member."""
    _check_cap(ctx.n)
    best = None
    for _, sel in _subset_masks(ctx.n):
        ok = _feasible_affectance(ctx, sel, gamma, anti=True)
        best = _pick_best(ctx, ok, sel, sel.sum(axis=1).astype(float), best)
    return certify(ctx, best[1] if best else ())
