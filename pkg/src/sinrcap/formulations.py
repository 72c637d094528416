"""LP relaxations over an affectance context.

Each builder returns a program whose variables follow the context's id
order (``ctx.ids``).  Coefficients are clipped affectances, so every
entry lies in [0, 1].
"""

from __future__ import annotations

import logging
import math

import numpy as np

from .affectance import AffectanceContext
from .lp_core import LinearProgram

logger = logging.getLogger(__name__)

DEFAULT_C = 1.0

# Per-pair affectance cap on secondaries kept by the large-optimum
# admission prefilter; the coefficient of the 1/sqrt(log k) rule.
FILTER_COEFF = 10.0


def _warn_unless(cond: bool, message: str):
    if not cond:
        logger.warning(message)


def build_capacity_lp(ctx: AffectanceContext, C: float = DEFAULT_C) -> LinearProgram:
    """Maximize the number of links, bounding per link both the affectance
    received from and sent to no-shorter links by C (2n rows)."""
    pc = ctx.power_class()
    _warn_unless(pc["non_decreasing"] and pc["sub_linear"],
                 "capacity LP expects a non-decreasing sub-linear power assignment")
    if not C > 0:
        raise ValueError("C must be positive")
    n = ctx.n
    mask = ctx.length_ge_mask()  # mask[v, u]: l_v >= l_u, v != u
    in_rows = (ctx.aff * mask).T          # row u, coefficient at v: a_v(u)
    out_rows = (ctx.aff.T * mask).T       # row u, coefficient at v: a_u(v)
    names = tuple(f"in_{int(u)}" for u in ctx.ids) + tuple(f"out_{int(u)}" for u in ctx.ids)
    return LinearProgram(
        objective=np.ones(n),
        row_coeffs=np.vstack([in_rows, out_rows]) if n else np.zeros((0, 0)),
        row_bounds=np.full(2 * n, C),
        row_names=names,
    )


def build_qos_lp(ctx: AffectanceContext, C: float = DEFAULT_C) -> LinearProgram:
    """Variant honoring per-link thresholds and noise: one row per link
    bounding the affectance it sends to all others by C."""
    _warn_unless(ctx.nearly_uniform(),
                 "QoS LP guarantee assumes (nearly) uniform power")
    if not C > 0:
        raise ValueError("C must be positive")
    n = ctx.n
    rows = ctx.aff.copy() if n else np.zeros((0, 0))  # row u, coeff at v: a_u(v)
    return LinearProgram(
        objective=np.ones(n),
        row_coeffs=rows,
        row_bounds=np.full(n, C),
        row_names=tuple(f"out_{int(u)}" for u in ctx.ids),
    )


def build_admission_lp(ctx: AffectanceContext, C: float = DEFAULT_C) -> LinearProgram:
    """Admission relaxation treating primary interference as noise.

    One aggregate row caps the total hat-affectance on the primaries at
    |P|, plus per-link rows as in the QoS program (hat values throughout).
    With no primaries the aggregate row is vacuous and omitted.
    """
    if not ctx.has_primaries:
        raise ValueError("admission LP requires a context with primaries attached")
    _warn_unless(ctx.nearly_uniform(),
                 "admission guarantee assumes (nearly) uniform secondary power")
    if not C > 0:
        raise ValueError("C must be positive")
    n = ctx.n
    rows = [ctx.aff.copy() if n else np.zeros((0, 0))]
    bounds = [np.full(n, C)]
    names = [f"out_{int(u)}" for u in ctx.ids]
    if ctx.k and n:  # with no variables the aggregate row constrains nothing
        rows.insert(0, ctx.aff_to_prim.sum(axis=1).reshape(1, -1))
        bounds.insert(0, np.array([float(ctx.k)]))
        names.insert(0, "primaries_total")
    return LinearProgram(
        objective=np.ones(n),
        row_coeffs=np.vstack(rows),
        row_bounds=np.concatenate(bounds),
        row_names=tuple(names),
    )


def admission_filter_threshold(k: int, log_base: str = "e") -> float:
    """Per-pair affectance cap 1/(10 sqrt(log k)); 1/10 when k < 2."""
    if k < 2:
        return 1.0 / FILTER_COEFF
    logk = math.log(k) if log_base == "e" else math.log2(k)
    return 1.0 / (FILTER_COEFF * math.sqrt(logk))


def build_admission_large_lp(ctx: AffectanceContext, C: float = DEFAULT_C,
                             log_base: str = "e"):
    """Admission relaxation for large optima.

    Secondaries whose (plain) affectance on some primary exceeds
    1/(10 sqrt(log k)) are filtered out; the program then caps each
    primary's received hat-affectance at 1/3 and keeps the per-link rows.
    Returns (kept_ids, program); variables follow kept_ids order.
    """
    if not ctx.has_primaries or ctx.k == 0:
        raise ValueError("large-optimum admission requires at least one primary")
    _warn_unless(ctx.nearly_uniform(),
                 "admission guarantee assumes (nearly) uniform secondary power")
    if not C > 0:
        raise ValueError("C must be positive")
    if ctx.k == 1:
        logger.warning("single primary: filter threshold falls back to 1/10; "
                       "the general admission pipeline is the intended route")
    thr = admission_filter_threshold(ctx.k, log_base)
    keep = np.all(ctx.aff_to_prim_plain <= thr, axis=1) if ctx.n else np.zeros(0, dtype=bool)
    kept_ids = tuple(int(i) for i in ctx.ids[keep])
    idx = np.flatnonzero(keep)
    m = idx.size
    prim_rows = ctx.aff_to_prim[idx, :].T if m else np.zeros((ctx.k, 0))
    link_rows = ctx.aff[np.ix_(idx, idx)] if m else np.zeros((0, 0))
    names = tuple(f"prim_{int(w)}" for w in ctx.prim_ids) \
        + tuple(f"out_{i}" for i in kept_ids)
    lp = LinearProgram(
        objective=np.ones(m),
        row_coeffs=np.vstack([prim_rows, link_rows]),
        row_bounds=np.concatenate([np.full(ctx.k, 1.0 / 3.0), np.full(m, C)]),
        row_names=names,
    )
    return kept_ids, lp


def build_weighted_lp(ctx: AffectanceContext, C: float = DEFAULT_C) -> LinearProgram:
    """Maximize total weight; one row per link bounding its received
    affectance from all links by C."""
    ratios = ctx.powers / ctx.lengths ** ctx.instance.alpha if ctx.n else np.zeros(0)
    _warn_unless(ctx.n <= 1 or bool(np.allclose(ratios, ratios[0])),
                 "weighted-capacity guarantee assumes linear power")
    if not C > 0:
        raise ValueError("C must be positive")
    n = ctx.n
    rows = ctx.aff.T.copy() if n else np.zeros((0, 0))  # row u, coeff at v: a_v(u)
    return LinearProgram(
        objective=ctx.weights.copy(),
        row_coeffs=rows,
        row_bounds=np.full(n, C),
        row_names=tuple(f"in_{int(u)}" for u in ctx.ids),
    )
