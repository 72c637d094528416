import logging

import numpy as np
import pytest

from sinrcap import (AffectanceContext, Instance, PowerAssignment, PrimarySet,
                     RetriesExhausted, RoundingPolicy, admit_general,
                     admit_large_opt, check_feasibility, exact_admission,
                     nearly_uniform_classes, partition_by_primaries, sparsify,
                     verify_admission)

from conftest import far_instance, feasible_prim_ctx, make_link, random_ctx

UNIFORM = PowerAssignment.uniform()


def prim_ctx(seed, n=10, R=6.0, delta=2.0, primaries=2, beta=1.0, noise=0.0):
    return feasible_prim_ctx(seed, n=n, R=R, delta=delta, beta=beta, noise=noise,
                             primaries=primaries)


def policy(mode, seed=0, trials=20, C=1.0):
    return RoundingPolicy(mode=mode, C=C, trials=trials, seed=seed)


def test_general_no_primaries_reduces_to_plain_pipeline():
    empty = PrimarySet(links=(), powers=())
    inst = Instance(links=far_instance(4).links, alpha=2.5, primaries=empty)
    ctx = AffectanceContext(inst, UNIFORM, primaries=empty)
    res = admit_general(ctx, policy("admission_general"))
    assert res.admitted.ids == (0, 1, 2, 3)
    assert res.verified
    assert res.groups == ((0, 1, 2, 3),)


def test_general_far_primary_keeps_capacity():
    prim = PrimarySet(links=(make_link(9, 1e6, 0.0, 1e6 + 1, 0.0),), powers=(1.0,))
    inst = Instance(links=far_instance(4).links, alpha=2.5, primaries=prim)
    ctx = AffectanceContext(inst, UNIFORM, primaries=prim)
    res = admit_general(ctx, policy("admission_general"))
    assert res.admitted.size == 4
    assert res.verified


@pytest.mark.parametrize("seed", range(6))
def test_general_never_beats_admission_oracle(seed):
    ctx = prim_ctx(seed, n=9, primaries=1 + seed % 2)
    res = admit_general(ctx, policy("admission_general", seed=seed, trials=30))
    opt = exact_admission(ctx)
    assert res.admitted.size <= opt.size
    assert res.verified
    # every primary keeps a unit budget in unclipped hat-affectance terms
    assert all(load <= 1.0 for load in res.per_primary_load)


def test_partition_by_primaries_basics():
    ctx = prim_ctx(3, n=8, primaries=2)
    assert partition_by_primaries(ctx, []) == []
    far = AffectanceContext(far_instance(4), UNIFORM,
                            primaries=PrimarySet(links=(), powers=()))
    assert partition_by_primaries(far, [0, 1, 2, 3]) == [(0, 1, 2, 3)]


def test_partition_groups_respect_unit_budget():
    for seed in range(5):
        ctx = prim_ctx(seed + 10, n=12, R=4.0, primaries=2)
        ids = [int(i) for i in ctx.ids]
        groups = partition_by_primaries(ctx, ids)
        covered = [i for g in groups for i in g]
        assert len(covered) == len(set(covered))
        for g in groups:
            loads = ctx.raw_to_prim[ctx.index_of(g), :].sum(axis=0)
            assert np.all(loads <= 1.0)


def test_partition_drops_overloading_link(caplog):
    # a secondary sender almost on the primary receiver overloads it alone
    prim = PrimarySet(links=(make_link(9, 0.0, 0.0, 1.0, 0.0),), powers=(1.0,))
    sec = (make_link(0, 1.2, 0.0, 2.2, 0.0), make_link(1, 50.0, 0.0, 51.0, 0.0))
    inst = Instance(links=sec, alpha=2.0, primaries=prim)
    ctx = AffectanceContext(inst, UNIFORM, primaries=prim)
    assert ctx.raw_to_prim[0, 0] > 1.0
    with caplog.at_level(logging.WARNING):
        groups = partition_by_primaries(ctx, [0, 1])
    assert groups == [(1,)]
    assert any("overload" in r.message for r in caplog.records)


def test_sparsify_empty_and_zero_affectance(rng):
    ctx = prim_ctx(1, n=8, R=50.0, primaries=2)
    assert sparsify(ctx, [], rng) == ()
    far_prim = PrimarySet(links=(make_link(9, 1e7, 0.0, 1e7 + 1, 0.0),), powers=(1.0,))
    inst = Instance(links=far_instance(6).links, alpha=2.5, primaries=far_prim)
    fctx = AffectanceContext(inst, UNIFORM, primaries=far_prim)
    # all affectance on the primary is negligible: first sample accepted
    q = sparsify(fctx, [int(i) for i in fctx.ids], rng)
    assert set(q) <= set(int(i) for i in fctx.ids)


def test_sparsify_respects_budget(rng):
    ctx = prim_ctx(2, n=12, R=30.0, primaries=2)
    ids = [int(i) for i in ctx.ids]
    q = sparsify(ctx, ids, rng)
    loads = ctx.aff_to_prim[ctx.index_of(q), :].sum(axis=0) if q else np.zeros(ctx.k)
    assert np.all(loads <= 1.0 / 3.0)


def test_sparsify_exhausts_on_hopeless_input(rng):
    # every secondary alone exceeds the budget on the primary: acceptance is
    # impossible unless the empty set is drawn, and with 40 links at keep
    # probability 1/6 that has probability (5/6)**40 per attempt
    prim = PrimarySet(links=(make_link(99, 0.0, 0.0, 1.0, 0.0),), powers=(1.0,))
    sec = tuple(make_link(i, 1.4 + 0.001 * i, 0.0, 2.4 + 0.001 * i, 0.0)
                for i in range(40))
    inst = Instance(links=sec, alpha=2.0, beta=0.2, primaries=prim)
    ctx = AffectanceContext(inst, UNIFORM, primaries=prim)
    assert np.all(ctx.aff_to_prim.sum(axis=1) > 1 / 3)
    with pytest.raises(RetriesExhausted):
        sparsify(ctx, [int(i) for i in ctx.ids], rng, retry_cap=25)


@pytest.mark.parametrize("seed", range(4))
def test_large_opt_verifies(seed):
    ctx = prim_ctx(seed + 30, n=10, R=8.0, primaries=2)
    res = admit_large_opt(ctx, policy("admission_large", seed=seed, trials=20))
    assert res.verified
    assert res.admitted.size <= exact_admission(ctx).size
    assert all(load <= 1.0 for load in res.per_primary_load)


def test_large_opt_excludes_filtered_links():
    prim = PrimarySet(links=(make_link(8, 100.0, 0.0, 101.0, 0.0),
                             make_link(9, 300.0, 0.0, 301.0, 0.0)), powers=(1.0, 1.0))
    # link 0 sits right next to primary 8's receiver; link 1 is far away
    sec = (make_link(0, 101.5, 0.0, 102.5, 0.0), make_link(1, 0.0, 0.0, 1.0, 0.0))
    inst = Instance(links=sec, alpha=2.5, primaries=prim)
    ctx = AffectanceContext(inst, UNIFORM, primaries=prim)
    res = admit_large_opt(ctx, policy("admission_large", trials=30))
    assert 0 not in res.admitted.ids
    assert res.notes["filtered_to"] == 1


def test_large_opt_single_primary_flagged():
    ctx = prim_ctx(5, n=8, R=10.0, primaries=1)
    res = admit_large_opt(ctx, policy("admission_large", trials=10))
    assert res.notes["k1_fallback"]
    assert res.verified


def test_nearly_uniform_classes_uniform_power():
    ctx = random_ctx(7, n=8, R=5.0)
    assert len(nearly_uniform_classes(ctx)) == 1


def test_nearly_uniform_classes_hand_powers():
    # lengths 1, 2.5, 7 with tau such that P = length: anchored doubling
    # classes split {1}, {2.5}, {7}
    links = (make_link(0, 0, 0, 1, 0), make_link(1, 50, 0, 52.5, 0),
             make_link(2, 100, 0, 107, 0))
    inst = Instance(links=links, alpha=1.0, primaries=None)
    ctx = AffectanceContext(inst, PowerAssignment.linear())  # P = length here
    classes = nearly_uniform_classes(ctx, c1=2.0)
    assert [list(c.ids) for c in classes] == [[0], [1], [2]]
    for sub in classes:
        assert sub.nearly_uniform()


def test_nearly_uniform_classes_linear_power_bound():
    # delta = 16, alpha = 2: power ratio 256, at most 8 classes
    rng = np.random.default_rng(0)
    links = tuple(make_link(i, 200.0 * i, 0.0, 200.0 * i + l, 0.0)
                  for i, l in enumerate(rng.uniform(1.0, 16.0, 12)))
    links += (make_link(12, 5000.0, 0.0, 5001.0, 0.0),
              make_link(13, 6000.0, 0.0, 6016.0, 0.0))  # hit both extremes
    inst = Instance(links=links, alpha=2.0)
    ctx = AffectanceContext(inst, PowerAssignment.linear())
    classes = nearly_uniform_classes(ctx, c1=2.0)
    assert len(classes) <= 8
    covered = sorted(int(i) for c in classes for i in c.ids)
    assert covered == sorted(int(i) for i in ctx.ids)


def test_per_class_admission_extends_to_length_based_power():
    # mean power is not nearly uniform in general; splitting into nearly
    # uniform power classes and admitting per class recovers a verified
    # result under the same guarantees
    ctx = feasible_prim_ctx(70, n=12, R=6.0, delta=4.0, primaries=2,
                            power=PowerAssignment.mean())
    classes = nearly_uniform_classes(ctx, c1=2.0)
    assert sum(c.n for c in classes) == ctx.n
    best = None
    for sub in classes:
        assert sub.nearly_uniform()
        res = admit_general(sub, policy("admission_general", trials=10))
        if best is None or res.admitted.size > best.admitted.size:
            best = res
    assert best is not None and best.verified
    # the winning class result is also valid against the full context
    assert verify_admission(ctx, best.admitted.ids)


def test_verify_admission_cases():
    # empty admitted set with feasible primaries
    ctx = prim_ctx(11, n=6, primaries=2)
    assert verify_admission(ctx, ())
    # a secondary co-located with the primary receiver at equal power breaks it
    prim = PrimarySet(links=(make_link(9, 0.0, 0.0, 1.0, 0.0),), powers=(1.0,))
    sec = (make_link(0, 1.0, 0.0, 2.0, 0.0),)
    inst = Instance(links=sec, alpha=2.0, noise=0.01, primaries=prim)
    ctx2 = AffectanceContext(inst, UNIFORM, primaries=prim)
    assert not verify_admission(ctx2, (0,))


def test_admission_with_all_secondaries_removed():
    # every secondary is individually infeasible; both pipelines must come
    # back empty and verified rather than erroring
    bad = tuple(make_link(i, 10.0 * i, 0.0, 10.0 * i + 1.0, 0.0, noise_override=5.0)
                for i in range(3))
    prim = PrimarySet(links=(make_link(99, 100.0, 0.0, 101.0, 0.0),), powers=(1.0,))
    inst = Instance(links=bad, alpha=2.0, beta=1.0, noise=0.0, primaries=prim)
    ctx = AffectanceContext(inst, UNIFORM, primaries=prim)
    assert ctx.n == 0 and ctx.removed_ids == (0, 1, 2)
    res = admit_general(ctx, policy("admission_general", trials=3))
    assert res.admitted.ids == () and res.verified
    res2 = admit_large_opt(ctx, policy("admission_large", trials=3))
    assert res2.admitted.ids == () and res2.verified
    assert exact_admission(ctx).ids == ()


def test_admission_results_pass_verification_sweep():
    for seed in range(4):
        ctx = prim_ctx(seed + 50, n=10, R=5.0, primaries=4)
        res = admit_general(ctx, policy("admission_general", seed=seed, trials=15))
        assert res.verified
        assert verify_admission(ctx, res.admitted.ids)
        # hat-affectance one-feasibility of the admitted set
        assert check_feasibility(ctx, res.admitted.ids, 1.0, "feasible")
