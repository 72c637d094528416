"""Random instance generation, algorithm comparison runs, and CSV output.

Instances are drawn inside an R x R square with link lengths uniform in
[1, delta]; four weight distributions are supported.  ``run_compare``
reproduces the sweep-and-compare methodology: every algorithm is run over
a grid of acceptance/bound constants and its best result is reported,
together with the LP-to-greedy quality ratio.
"""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import model
from .affectance import AffectanceContext, check_feasibility, schedule_weight
from .formulations import build_capacity_lp, build_weighted_lp
from .greedy import greedy_base, greedy_length_classes, greedy_weight_classes
from .lp_core import solve_lp
from .model import Instance, Link, Point, PowerAssignment, PrimarySet
from .oracle import exact_capacity, largest_bifeasible
from .rounding import RoundingPolicy, run_pipeline

WEIGHT_DISTRIBUTIONS = ("ordinary", "reversed", "length_determined", "weight_class")

CSV_COLUMNS = ("seed", "n", "R", "delta", "density", "weight_dist", "algo",
               "constant", "value", "feasible", "runtime_ms", "ratio")

DEFAULT_SWEEP = tuple(round(0.2 * i, 10) for i in range(1, 16))  # 0.2 .. 3.0


@dataclass(frozen=True)
class GenConfig:
    n: int
    R: float
    delta: float
    weight_dist: str = "ordinary"
    alpha: float = 2.5
    beta: float = 1.0
    noise: float = 0.0
    seed: int = 0
    primaries: int = 0
    primary_power: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if not self.R > 0:
            raise ValueError("R must be positive")
        if not self.delta >= 1:
            raise ValueError("delta must be at least 1")
        if self.weight_dist not in WEIGHT_DISTRIBUTIONS:
            raise ValueError(f"unknown weight distribution {self.weight_dist!r}")

    @property
    def density(self) -> float:
        return self.n / (self.R * self.R)


@dataclass
class ExperimentRecord:
    seed: int
    n: int
    R: float
    delta: float
    density: float
    weight_dist: str
    algo: str
    constant: Optional[float]
    value: float
    feasible: Optional[bool]
    runtime_ms: Optional[float]
    ratio: Optional[float] = None

    def to_row(self) -> list:
        def fmt(x):
            if x is None:
                return ""
            if isinstance(x, bool):
                return "true" if x else "false"
            return repr(x) if isinstance(x, float) else str(x)
        return [fmt(getattr(self, c)) for c in CSV_COLUMNS]


def _draw_links(cfg: GenConfig, rng: np.random.Generator, count: int, id_base: int):
    sx = rng.uniform(0.0, cfg.R, count)
    sy = rng.uniform(0.0, cfg.R, count)
    lengths = rng.uniform(1.0, cfg.delta, count)
    angles = rng.uniform(0.0, 2.0 * math.pi, count)
    rx = sx + lengths * np.cos(angles)
    ry = sy + lengths * np.sin(angles)
    return [
        Link(id=id_base + i,
             sender=Point(float(sx[i]), float(sy[i])),
             receiver=Point(float(rx[i]), float(ry[i])))
        for i in range(count)
    ], lengths


def _draw_weights(cfg: GenConfig, rng: np.random.Generator, lengths: np.ndarray):
    if cfg.weight_dist == "ordinary":
        return rng.uniform(1.0, cfg.n, cfg.n)
    if cfg.weight_dist == "reversed":
        return 1.0 / rng.uniform(1.0, cfg.n, cfg.n)
    if cfg.weight_dist == "length_determined":
        return lengths.copy()
    t_max = max(1, math.ceil(math.log2(cfg.n))) if cfg.n > 1 else 1
    t = rng.integers(1, t_max + 1, cfg.n)
    return np.exp2(t).astype(float)


def generate_instance(cfg: GenConfig) -> Instance:
    """Deterministic instance for a config: senders uniform in the square,
    lengths uniform in [1, delta], directions uniform, weights per the
    configured distribution."""
    rng = np.random.default_rng(cfg.seed)
    links, lengths = _draw_links(cfg, rng, cfg.n, 0)
    weights = _draw_weights(cfg, rng, lengths)
    links = [
        Link(id=lk.id, sender=lk.sender, receiver=lk.receiver, weight=float(w))
        for lk, w in zip(links, weights)
    ]
    primaries = None
    if cfg.primaries > 0:
        plinks, _ = _draw_links(cfg, rng, cfg.primaries, cfg.n)
        primaries = PrimarySet(links=tuple(plinks),
                               powers=tuple([cfg.primary_power] * cfg.primaries))
    return Instance(links=tuple(links), alpha=cfg.alpha, beta=cfg.beta,
                    noise=cfg.noise, primaries=primaries)


def _verify(ctx: AffectanceContext, ids) -> bool:
    ok = check_feasibility(ctx, ids, 1.0, "feasible")
    if ctx.instance.beta >= 1.0:
        ok = ok and check_feasibility(ctx, ids, mode="exact_sinr")
    return ok


def _best_over_sweep(values_by_constant):
    """(constant, value, ids) with the largest value; ties prefer the
    smaller constant."""
    best = None
    for c, value, ids in values_by_constant:
        if best is None or value > best[1] + 1e-12:
            best = (c, value, ids)
    return best


def run_compare(gen_configs: Sequence[GenConfig], sweep: Sequence[float],
                trials: int, out_path, power: Optional[PowerAssignment] = None,
                timing: bool = False) -> list:
    """Run the LP pipeline and the combined greedy over a constant sweep on
    each instance, keep each algorithm's best, and write one CSV.

    Every emitted solution row is re-verified feasible before writing.
    Rows are deterministic for fixed configs; runtimes are recorded only
    when ``timing`` is set (they would break byte-for-byte determinism).
    """
    sweep = list(sweep)
    if not sweep:
        raise ValueError("constant sweep must not be empty")
    if power is None:
        power = PowerAssignment.linear()
    records = []
    for cfg in gen_configs:
        inst = generate_instance(cfg)
        ctx = AffectanceContext(inst, power)
        meta = dict(seed=cfg.seed, n=cfg.n, R=cfg.R, delta=cfg.delta,
                    density=cfg.density, weight_dist=cfg.weight_dist)

        def timed(fn):
            t0 = time.perf_counter()
            out = fn()
            ms = (time.perf_counter() - t0) * 1e3
            return out, (ms if timing else None)

        lp_runs = []
        lp_ms = 0.0
        for c in sweep:
            policy = RoundingPolicy(mode="weighted", C=c, trials=trials, seed=cfg.seed)
            (sched, ms) = timed(lambda: run_pipeline(ctx, build_weighted_lp(ctx, c), policy))
            lp_ms += ms or 0.0
            lp_runs.append((c, schedule_weight(ctx, sched), sched.ids))
        lp_best = _best_over_sweep(lp_runs)

        gw_runs, gl_runs, g_runs = [], [], []
        greedy_ms = 0.0
        for c in sweep:
            (sw, ms1) = timed(lambda: greedy_weight_classes(ctx, c))
            (sl, ms2) = timed(lambda: greedy_length_classes(ctx, c))
            greedy_ms += (ms1 or 0.0) + (ms2 or 0.0)
            ww, wl = schedule_weight(ctx, sw), schedule_weight(ctx, sl)
            gw_runs.append((c, ww, sw.ids))
            gl_runs.append((c, wl, sl.ids))
            if ww > wl or (ww == wl and sw.ids <= sl.ids):
                g_runs.append((c, ww, sw.ids))
            else:
                g_runs.append((c, wl, sl.ids))
        gw_best = _best_over_sweep(gw_runs)
        gl_best = _best_over_sweep(gl_runs)
        g_best = _best_over_sweep(g_runs)

        for algo, best, ms in (("lp", lp_best, lp_ms if timing else None),
                               ("greedy_w", gw_best, None),
                               ("greedy_l", gl_best, None),
                               ("greedy", g_best, greedy_ms if timing else None)):
            c, value, ids = best
            if not _verify(ctx, ids):
                raise AssertionError(f"{algo} produced an infeasible solution")
            records.append(ExperimentRecord(**meta, algo=algo, constant=c,
                                            value=value, feasible=True, runtime_ms=ms))
        ratio = lp_best[1] / g_best[1] if g_best[1] > 0 else float("inf")
        records.append(ExperimentRecord(**meta, algo="ratio", constant=None,
                                        value=ratio, feasible=None,
                                        runtime_ms=None, ratio=ratio))
    if out_path is not None:
        with open(out_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for rec in records:
                writer.writerow(rec.to_row())
    return records


def run_oracle_suite(gen_configs: Sequence[GenConfig], trials: int = 50,
                     power: Optional[PowerAssignment] = None) -> dict:
    """Small-instance report: per instance the exhaustive optimum, the LP
    pipeline and greedy values, the fractional optimum under a calibrated
    bound, and verdicts for the dominance and relaxation properties."""
    if power is None:
        power = PowerAssignment.uniform()
    rows = []
    all_ok = True
    for cfg in gen_configs:
        if cfg.n > 12:
            raise ValueError("oracle suite expects n <= 12")
        inst = generate_instance(cfg)
        ctx = AffectanceContext(inst, power)
        opt = exact_capacity(ctx, "cardinality", "exact_sinr")
        w2 = largest_bifeasible(ctx, 2.0)
        lp_probe = build_capacity_lp(ctx, 1.0)
        indicator = np.zeros(ctx.n)
        if w2.ids:
            indicator[ctx.index_of(w2.ids)] = 1.0
        calibrated = max(float(np.max(lp_probe.row_coeffs @ indicator)), 1e-9) \
            if ctx.n else 1e-9
        lp_star = solve_lp(build_capacity_lp(ctx, calibrated)).objective
        policy = RoundingPolicy(mode="capacity", C=1.0, trials=trials, seed=cfg.seed)
        alg = run_pipeline(ctx, build_capacity_lp(ctx, 1.0), policy)
        grd = greedy_base(ctx, 1.0)
        verdicts = {
            "alg_le_opt": alg.size <= opt.size and grd.size <= opt.size,
            "lp_ge_w2": lp_star >= len(w2.ids) - 1e-6,
            "w2_ge_half_opt": len(w2.ids) >= math.ceil(opt.size / 2),
            "outputs_feasible": _verify(ctx, alg.ids) and _verify(ctx, grd.ids),
        }
        all_ok = all_ok and all(verdicts.values())
        rows.append({
            "seed": cfg.seed, "n": cfg.n, "ALG": alg.size, "GREEDY": grd.size,
            "OPT": opt.size, "LP*": lp_star, "W2": len(w2.ids),
            "calibrated_C": calibrated, "verdicts": verdicts,
        })
    return {"rows": rows, "all_ok": all_ok}


# instance file helpers, re-exported for convenience
read_instance = model.read_instance
write_instance = model.write_instance


def io_roundtrip(path) -> Instance:
    """Read an instance file (the inverse of ``write_instance``)."""
    return model.read_instance(path)
