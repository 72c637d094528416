"""Affectance kernel and feasibility predicates.

The affectance of link w on link v is the interference w causes at v's
receiver relative to the margin v has above its SINR threshold, clipped
at 1:

    a_w(v) = min(1, c_v * (P_w / P_v) * (l_v / d_wv) ** alpha)
    c_v    = beta_v / (1 - beta_v * N_v * l_v ** alpha / P_v)

When a set of primary links is attached, every noise term is augmented by
the interference received from the primaries, and the same formulas yield
the "hat" affectance used by admission control.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .model import Instance, PowerAssignment, PrimarySet, validate_power_class

logger = logging.getLogger(__name__)

# Finite stand-in for an infinite unclipped value (zero cross distance),
# so that subset sums stay NaN-free.
RAW_CAP = 1e300

FEASIBILITY_MODES = ("feasible", "anti_feasible", "bi_feasible", "exact_sinr")


class IndividuallyInfeasible(Exception):
    """The link cannot meet its SINR threshold even transmitting alone."""

    def __init__(self, link_id):
        super().__init__(f"link {link_id} cannot satisfy its SINR threshold alone")
        self.link_id = link_id


class InfeasiblePrimaries(Exception):
    """The primary set cannot satisfy its own SINR requirements."""


@dataclass(frozen=True)
class Schedule:
    """A selected link set with its recomputable certificate."""

    ids: tuple
    in_affectance: tuple
    out_affectance: tuple
    exact_sinr_ok: bool

    @property
    def size(self) -> int:
        return len(self.ids)


def _interference(powers_from, dist, alpha):
    with np.errstate(divide="ignore"):
        out = powers_from[:, None] / dist ** alpha
    return np.minimum(out, RAW_CAP)


class AffectanceContext:
    """Immutable precomputation of powers, c-factors and affectance matrices.

    Links that cannot meet their SINR threshold alone (given the ambient,
    possibly primary-augmented, noise) are dropped with a warning; their
    ids are listed in ``removed_ids``.
    """

    def __init__(self, instance: Instance, assignment: PowerAssignment,
                 primaries: Optional[PrimarySet] = None):
        self.instance = instance
        self.assignment = assignment
        self.primaries = primaries
        alpha = instance.alpha

        all_ids = sorted(lk.id for lk in instance.links)
        all_lengths = np.array([instance.length_of(i) for i in all_ids])
        all_powers = np.asarray(assignment.power(all_lengths, alpha), dtype=float)
        if all_ids and np.any(all_powers <= 0):
            raise ValueError("power assignment produced a nonpositive power")

        # primaries: explicit powers, instance-global beta/noise
        if primaries is not None:
            self.prim_ids = [lk.id for lk in primaries.links]
            self.prim_powers = np.array(primaries.powers, dtype=float)
            self.prim_lengths = np.array([instance.length_of(i) for i in self.prim_ids])
        else:
            self.prim_ids = []
            self.prim_powers = np.zeros(0)
            self.prim_lengths = np.zeros(0)
        self.k = len(self.prim_ids)

        # hat noise at every receiver: base noise plus primary interference
        betas = np.array([instance.link(i).beta_override or instance.beta for i in all_ids])
        base_noise = np.array([
            instance.noise if instance.link(i).noise_override is None
            else instance.link(i).noise_override
            for i in all_ids
        ])
        if self.k:
            d_ps = instance.sr_matrix(self.prim_ids, all_ids) if all_ids else np.zeros((self.k, 0))
            prim_at_sec = _interference(self.prim_powers, d_ps, alpha).sum(axis=0)
            hat_noise = base_noise + prim_at_sec
        else:
            hat_noise = base_noise.copy()

        # drop links that are infeasible even alone
        margins = np.ones(len(all_ids))
        if all_ids:
            margins = 1.0 - betas * hat_noise * all_lengths ** alpha / all_powers
        keep = margins > 0
        self.removed_ids = tuple(i for i, k_ in zip(all_ids, keep) if not k_)
        if self.removed_ids:
            logger.warning("dropping %d individually infeasible link(s): %s",
                           len(self.removed_ids), list(self.removed_ids))

        self.ids = np.array([i for i, k_ in zip(all_ids, keep) if k_], dtype=int)
        self._pos = {int(i): p for p, i in enumerate(self.ids)}
        sel = np.flatnonzero(keep)
        self.lengths = all_lengths[sel]
        self.powers = all_powers[sel]
        self.betas = betas[sel]
        self.base_noise = base_noise[sel]
        self.hat_noise_sec = hat_noise[sel]
        self.weights = np.array([instance.link(int(i)).weight for i in self.ids])
        self.c = self.betas / (1.0 - self.betas * self.hat_noise_sec
                               * self.lengths ** alpha / self.powers) \
            if len(self.ids) else np.zeros(0)
        self._removed_margins = {int(i): float(m) for i, m in zip(all_ids, margins)}

        n = len(self.ids)
        ids_list = [int(i) for i in self.ids]
        self.dist = instance.sr_matrix(ids_list, ids_list) if n else np.zeros((0, 0))
        with np.errstate(divide="ignore"):
            raw = (self.c[None, :]
                   * (self.powers[:, None] / self.powers[None, :])
                   * (self.lengths[None, :] / self.dist) ** alpha) if n else np.zeros((0, 0))
        raw = np.minimum(np.nan_to_num(raw, posinf=RAW_CAP), RAW_CAP)
        np.fill_diagonal(raw, 0.0)
        self.raw = raw
        self.aff = np.minimum(raw, 1.0)

        # direct-SINR helpers (computed from powers and distances only)
        self.signal = self.powers / self.lengths ** alpha if n else np.zeros(0)
        self.interf_ss = _interference(self.powers, self.dist, alpha) if n else np.zeros((0, 0))
        if n:
            np.fill_diagonal(self.interf_ss, 0.0)

        if self.k:
            self._init_primaries(alpha, ids_list)

        self._power_class = None
        self._len_ge = None

    def _init_primaries(self, alpha, ids_list):
        inst = self.instance
        d_pp = inst.sr_matrix(self.prim_ids, self.prim_ids)
        interf_pp = _interference(self.prim_powers, d_pp, alpha)
        np.fill_diagonal(interf_pp, 0.0)
        self.interf_pp = interf_pp
        prim_base_noise = np.full(self.k, inst.noise)
        self.prim_hat_noise = prim_base_noise + interf_pp.sum(axis=0)
        self.prim_betas = np.full(self.k, inst.beta)
        self.prim_signal = self.prim_powers / self.prim_lengths ** alpha

        margins_hat = 1.0 - self.prim_betas * self.prim_hat_noise \
            * self.prim_lengths ** alpha / self.prim_powers
        if np.any(margins_hat <= 0):
            bad = [self.prim_ids[i] for i in np.flatnonzero(margins_hat <= 0)]
            raise InfeasiblePrimaries(f"primary link(s) {bad} cannot satisfy their own SINR")
        self.prim_c_hat = self.prim_betas / margins_hat

        margins_plain = 1.0 - self.prim_betas * inst.noise \
            * self.prim_lengths ** alpha / self.prim_powers
        self.prim_c_plain = np.where(margins_plain > 0, self.prim_betas / margins_plain, np.inf)

        n = len(self.ids)
        self.dist_sp = inst.sr_matrix(ids_list, self.prim_ids) if n else np.zeros((0, self.k))
        self.dist_ps = inst.sr_matrix(self.prim_ids, ids_list) if n else np.zeros((self.k, 0))
        with np.errstate(divide="ignore"):
            ratio = (self.powers[:, None] / self.prim_powers[None, :]) \
                * (self.prim_lengths[None, :] / self.dist_sp) ** alpha if n \
                else np.zeros((0, self.k))
        self.raw_to_prim = np.minimum(np.nan_to_num(self.prim_c_hat[None, :] * ratio,
                                                    posinf=RAW_CAP), RAW_CAP)
        self.aff_to_prim = np.minimum(self.raw_to_prim, 1.0)
        raw_plain = np.minimum(np.nan_to_num(self.prim_c_plain[None, :] * ratio,
                                             posinf=RAW_CAP), RAW_CAP)
        self.aff_to_prim_plain = np.minimum(raw_plain, 1.0)
        self.interf_sp = _interference(self.powers, self.dist_sp, self.instance.alpha) \
            if n else np.zeros((0, self.k))
        self.interf_ps = _interference(self.prim_powers, self.dist_ps, self.instance.alpha) \
            if n else np.zeros((self.k, 0))

    # -- basic accessors ----------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.ids)

    @property
    def has_primaries(self) -> bool:
        return self.primaries is not None

    def index_of(self, link_ids: Iterable[int]) -> np.ndarray:
        try:
            return np.array([self._pos[int(i)] for i in link_ids], dtype=int)
        except KeyError as exc:
            raise KeyError(f"unknown or removed link id {exc.args[0]}") from None

    def power_class(self) -> dict:
        if self._power_class is None:
            self._power_class = validate_power_class(self.instance, self.assignment)
        return self._power_class

    def nearly_uniform(self, c1: float = 2.0) -> bool:
        if self.n <= 1:
            return True
        return float(self.powers.max()) <= c1 * float(self.powers.min())

    def length_ge_mask(self) -> np.ndarray:
        """mask[v, u] true iff l_v >= l_u and v != u (LP row membership)."""
        if self._len_ge is None:
            m = self.lengths[:, None] >= self.lengths[None, :]
            np.fill_diagonal(m, False)
            self._len_ge = m
        return self._len_ge


# ---------------------------------------------------------------------------
# operations

def c_factor(ctx: AffectanceContext, v: int) -> float:
    if v in ctx._pos:
        return float(ctx.c[ctx._pos[v]])
    if v in ctx.removed_ids:
        raise IndividuallyInfeasible(v)
    raise KeyError(f"unknown link id {v}")


def affectance(ctx: AffectanceContext, w: int, v: int) -> float:
    """Clipped affectance of link w on link v (0 when w == v)."""
    for x in (w, v):
        if x not in ctx._pos:
            if x in ctx.removed_ids:
                raise IndividuallyInfeasible(x)
            raise KeyError(f"unknown link id {x}")
    return float(ctx.aff[ctx._pos[w], ctx._pos[v]])


def hat_noise(ctx: AffectanceContext, u: int) -> float:
    """Noise at u's receiver augmented by all primary transmissions."""
    if not ctx.has_primaries:
        raise ValueError("hat noise requires a context with primaries attached")
    if u in ctx._pos:
        return float(ctx.hat_noise_sec[ctx._pos[u]])
    if u in ctx.prim_ids:
        return float(ctx.prim_hat_noise[ctx.prim_ids.index(u)])
    raise KeyError(f"unknown link id {u}")


def aggregate_affectance(ctx: AffectanceContext, S, v: int, direction: str = "in") -> float:
    """Sum of pairwise affectances between v and the set S.

    direction "in" gives a_S(v), the total affectance on v from S;
    "out" gives a_v(S), the total affectance of v on S.
    """
    idx = ctx.index_of(S)
    p = ctx._pos[v]
    if direction == "in":
        return float(ctx.aff[idx, p].sum())
    if direction == "out":
        return float(ctx.aff[p, idx].sum())
    raise ValueError(f"unknown direction {direction!r}")


def _exact_sinr_ok(ctx: AffectanceContext, idx: np.ndarray) -> bool:
    """Direct SINR evaluation at every member, primaries transmitting too."""
    if idx.size == 0:
        return True
    interf = ctx.interf_ss[np.ix_(idx, idx)].sum(axis=0)
    noise = ctx.base_noise[idx].copy()
    if ctx.k:
        noise = noise + ctx.interf_ps[:, idx].sum(axis=0)
    return bool(np.all(ctx.signal[idx] >= ctx.betas[idx] * (noise + interf)))


def check_feasibility(ctx: AffectanceContext, S, gamma: float = 1.0,
                      mode: str = "feasible") -> bool:
    """Feasibility predicates over a link set.

    feasible: a_S(v) <= gamma for every member; anti_feasible: a_v(S) <=
    gamma; bi_feasible: both; exact_sinr: the SINR inequality holds at every
    member (gamma ignored).  For gamma <= 1 the affectance sums are taken
    unclipped: a saturated term understates its true interference, so it
    must count as a violation at these thresholds.
    """
    if mode not in FEASIBILITY_MODES:
        raise ValueError(f"unknown mode {mode!r}")
    idx = ctx.index_of(S)
    if mode == "exact_sinr":
        return _exact_sinr_ok(ctx, idx)
    if idx.size == 0:
        return True
    mat = ctx.raw if gamma <= 1.0 else ctx.aff
    sub = mat[np.ix_(idx, idx)]
    ok = True
    if mode in ("feasible", "bi_feasible"):
        ok = ok and bool(np.all(sub.sum(axis=0) <= gamma))
    if mode in ("anti_feasible", "bi_feasible"):
        ok = ok and bool(np.all(sub.sum(axis=1) <= gamma))
    return ok


def separation_check(ctx: AffectanceContext, S, q: float) -> bool:
    """d_uv * d_vu >= q**2 * l_u * l_v for every pair in S."""
    idx = ctx.index_of(S)
    if idx.size <= 1:
        return True
    d = ctx.dist[np.ix_(idx, idx)]
    lengths = ctx.lengths[idx]
    lhs = d * d.T
    rhs = q * q * np.outer(lengths, lengths)
    off = ~np.eye(idx.size, dtype=bool)
    return bool(np.all(lhs[off] >= rhs[off]))


def certify(ctx: AffectanceContext, S) -> Schedule:
    """Build a schedule with per-link affectance sums and an exact-SINR flag."""
    ids = tuple(sorted(int(i) for i in S))
    idx = ctx.index_of(ids)
    sub = ctx.aff[np.ix_(idx, idx)]
    return Schedule(
        ids=ids,
        in_affectance=tuple(float(x) for x in sub.sum(axis=0)),
        out_affectance=tuple(float(x) for x in sub.sum(axis=1)),
        exact_sinr_ok=_exact_sinr_ok(ctx, idx),
    )


def schedule_weight(ctx: AffectanceContext, schedule: Schedule) -> float:
    if not schedule.ids:
        return 0.0
    return float(ctx.weights[ctx.index_of(schedule.ids)].sum())
