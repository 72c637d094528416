"""Admission control: add secondaries without disturbing primary links.

Primary interference is folded into each receiver's noise term, turning
the joint feasibility requirement into plain feasibility under the
augmented ("hat") affectance.  The general pipeline rounds an admission
LP and splits the result into groups that are individually safe for every
primary; the large-optimum pipeline prefilters links that affect any
primary too much, after which one rounded set is safe outright with high
probability.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .affectance import AffectanceContext, Schedule, certify
from .formulations import (admission_filter_threshold, build_admission_large_lp,
                           build_admission_lp)
from .lp_core import solve_lp
from .rounding import (RoundingPolicy, best_part, extract_low_affectance,
                       sample_round, signal_strengthen)

logger = logging.getLogger(__name__)

RETRY_CAP = 200
SPARSIFY_KEEP_PROB = 1.0 / 6.0
SPARSIFY_TARGET = 1.0 / 3.0


class RetriesExhausted(Exception):
    """Random selection kept failing its acceptance condition; the inputs
    likely violate the preconditions."""


@dataclass(frozen=True)
class AdmissionResult:
    admitted: Schedule
    groups: tuple
    per_primary_load: tuple  # unclipped hat-affectance on each primary
    verified: bool
    notes: dict


def verify_admission(ctx: AffectanceContext, Q, primaries=None) -> bool:
    """Exact SINR check of the primaries plus Q, all transmitting.

    Recomputed from the instance geometry and powers alone, independent of
    the context's cached affectance matrices.
    """
    inst = ctx.instance
    prim = ctx.primaries if primaries is None else primaries
    ids, powers, betas, noises = [], [], [], []
    if prim is not None:
        for lk, p in zip(prim.links, prim.powers):
            ids.append(lk.id)
            powers.append(p)
            betas.append(inst.beta)
            noises.append(inst.noise)
    for i in sorted(int(x) for x in Q):
        lk = inst.link(i)
        ids.append(i)
        powers.append(ctx.assignment.power(inst.length_of(i), inst.alpha))
        betas.append(lk.beta_override or inst.beta)
        noises.append(inst.noise if lk.noise_override is None else lk.noise_override)
    if not ids:
        return True
    powers = np.array(powers, dtype=float)
    betas = np.array(betas)
    noises = np.array(noises)
    lengths = np.array([inst.length_of(i) for i in ids])
    d = inst.sr_matrix(ids, ids)
    with np.errstate(divide="ignore"):
        interf = powers[:, None] / d ** inst.alpha
    interf = np.nan_to_num(interf, posinf=np.inf)
    np.fill_diagonal(interf, 0.0)
    signal = powers / lengths ** inst.alpha
    return bool(np.all(signal >= betas * (noises + interf.sum(axis=0))))


def partition_by_primaries(ctx: AffectanceContext, R) -> list:
    """First-fit grouping of R so each group's unclipped hat-affectance on
    every primary is at most 1.  A link that alone overloads some primary
    cannot be placed and is dropped with a warning."""
    ids = sorted(int(i) for i in R)
    if not ids:
        return []
    if ctx.k == 0:
        return [tuple(ids)]
    idx = ctx.index_of(ids)
    order = sorted(range(len(ids)),
                   key=lambda p: (-float(ctx.aff_to_prim[idx[p], :].sum()), ids[p]))
    groups = []  # each entry: [member_ids, load_vector]
    dropped = []
    for p in order:
        contrib = ctx.raw_to_prim[idx[p], :]
        if np.any(contrib > 1.0):
            dropped.append(ids[p])
            continue
        for entry in groups:
            if np.all(entry[1] + contrib <= 1.0):
                entry[0].append(ids[p])
                entry[1] = entry[1] + contrib
                break
        else:
            groups.append([[ids[p]], contrib.copy()])
    if dropped:
        logger.warning("dropped %d link(s) that alone overload a primary: %s",
                       len(dropped), dropped)
    return [tuple(sorted(g)) for g, _ in groups]


def sparsify(ctx: AffectanceContext, R, rng, retry_cap: int = RETRY_CAP) -> tuple:
    """Thin R by independent 1/6-sampling until the sample's affectance on
    every primary is at most 1/3; the preconditions make each attempt
    succeed with probability at least 9/10."""
    if not ctx.has_primaries:
        raise ValueError("sparsify requires a context with primaries attached")
    ids = sorted(int(i) for i in R)
    if not ids:
        return ()
    idx = ctx.index_of(ids)
    per_pair = ctx.aff_to_prim[idx, :]
    thr = admission_filter_threshold(ctx.k)
    if np.any(per_pair > thr) or np.any(per_pair.sum(axis=0) > 1.0 + 1e-12):
        logger.warning("sparsify preconditions violated; acceptance may be rare")
    for _ in range(retry_cap):
        mask = rng.random(len(ids)) < SPARSIFY_KEEP_PROB
        loads = per_pair[mask, :].sum(axis=0) if mask.any() else np.zeros(ctx.k)
        if np.all(loads <= SPARSIFY_TARGET):
            return tuple(i for i, m in zip(ids, mask) if m)
    raise RetriesExhausted(f"no accepted sample in {retry_cap} attempts")


def _primary_loads(ctx: AffectanceContext, ids) -> np.ndarray:
    if not ids or ctx.k == 0:
        return np.zeros(ctx.k)
    return ctx.raw_to_prim[ctx.index_of(ids), :].sum(axis=0)


def _result(ctx, admitted_ids, groups, notes) -> AdmissionResult:
    schedule = certify(ctx, admitted_ids)
    loads = _primary_loads(ctx, schedule.ids)
    verified = verify_admission(ctx, schedule.ids)
    result = AdmissionResult(
        admitted=schedule,
        groups=tuple(tuple(g) for g in groups),
        per_primary_load=tuple(float(x) for x in loads),
        verified=verified,
        notes=notes,
    )
    if not verified:
        raise AssertionError("admission result failed exact SINR verification")
    return result


def admit_general(ctx: AffectanceContext, policy: RoundingPolicy) -> AdmissionResult:
    """LP + rounding + extraction, then primary-safe grouping; returns the
    largest group.  Works for any number of primaries."""
    if policy.mode != "admission_general":
        raise ValueError("policy mode must be admission_general")
    if not ctx.has_primaries:
        raise ValueError("admit_general requires a context with primaries attached")
    sol = solve_lp(build_admission_lp(ctx, policy.C))
    best_ids, best_groups, best_aggregate = (), [], 0.0
    for trial in range(policy.trials):
        sample = sample_round(ctx, sol.values, policy, trial)
        kept = extract_low_affectance(ctx, sample, policy.extraction_bound)
        parts = signal_strengthen(ctx, kept, theta=1.0)
        feasible_set = best_part(ctx, parts, "capacity")
        groups = partition_by_primaries(ctx, feasible_set)
        cand = min(groups, key=lambda g: (-len(g), g), default=())
        if len(cand) > len(best_ids) or (len(cand) == len(best_ids) and cand < best_ids):
            best_ids = cand
            best_groups = groups
            fs_idx = ctx.index_of(feasible_set) if feasible_set else np.zeros(0, dtype=int)
            best_aggregate = float(ctx.aff_to_prim[fs_idx, :].sum()) if ctx.k else 0.0
    notes = {
        "group_count": len(best_groups),
        "aggregate_primary_load": best_aggregate,
        "group_bound_exceeded": len(best_groups) > 10 * ctx.k if ctx.k else False,
    }
    if notes["group_bound_exceeded"]:
        logger.warning("group count %d exceeds 10*|P|=%d", len(best_groups), 10 * ctx.k)
    return _result(ctx, best_ids, best_groups, notes)


def admit_large_opt(ctx: AffectanceContext, policy: RoundingPolicy,
                    log_base: str = "e", retry_cap: int = RETRY_CAP) -> AdmissionResult:
    """Prefilter, LP, and rounding where one rounded set must respect every
    primary's unit budget simultaneously; no grouping step is needed."""
    if policy.mode != "admission_large":
        raise ValueError("policy mode must be admission_large")
    if not ctx.has_primaries or ctx.k == 0:
        raise ValueError("admit_large_opt requires at least one primary")
    kept_ids, lp = build_admission_large_lp(ctx, policy.C, log_base)
    sol = solve_lp(lp)
    best_ids = ()
    successes = 0
    attempts_cap = max(policy.trials, retry_cap)
    for trial in range(attempts_cap):
        sample = sample_round(ctx, sol.values, policy, trial, ids=kept_ids)
        if np.any(_primary_loads(ctx, sample) > 1.0):
            continue
        successes += 1
        kept = extract_low_affectance(ctx, sample, policy.extraction_bound)
        parts = signal_strengthen(ctx, kept, theta=1.0)
        cand = best_part(ctx, parts, "capacity")
        if len(cand) > len(best_ids) or (len(cand) == len(best_ids) and cand < best_ids):
            best_ids = cand
        if successes >= policy.trials:
            break
    if successes == 0:
        raise RetriesExhausted(
            f"primary budget condition failed in all {attempts_cap} attempts")
    notes = {
        "group_count": 1 if best_ids else 0,
        "filtered_to": len(kept_ids),
        "k1_fallback": ctx.k == 1,
        "successful_samples": successes,
    }
    groups = [best_ids] if best_ids else []
    return _result(ctx, best_ids, groups, notes)


def nearly_uniform_classes(ctx: AffectanceContext, c1: float = 2.0) -> list:
    """Split the context into power classes with max/min ratio at most c1
    (anchored at each class's smallest power); running a per-class pipeline
    and keeping the best extends uniform-power guarantees to any
    non-decreasing sub-linear assignment."""
    if not c1 >= 1:
        raise ValueError("c1 must be at least 1")
    if ctx.n == 0:
        return []
    order = np.argsort(ctx.powers, kind="stable")
    classes = []
    current, anchor = [], None
    for pos in order:
        p = float(ctx.powers[pos])
        if anchor is None or p > c1 * anchor:
            if current:
                classes.append(current)
            current, anchor = [], p
        current.append(int(ctx.ids[pos]))
    if current:
        classes.append(current)
    out = []
    for ids in classes:
        sub = ctx.instance.restrict(ids)
        out.append(AffectanceContext(sub, ctx.assignment, primaries=ctx.primaries))
    return out
