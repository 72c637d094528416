import numpy as np
import pytest

from sinrcap import (DistanceMatrix, Instance, PowerAssignment,
                     PrimarySet, cross_distance, length_ratio, power_of,
                     read_instance, validate_power_class, write_instance)
from sinrcap.model import instance_from_dict, parse_power

from conftest import far_instance, line_links, make_link


def test_cross_distance_pythagorean():
    w = make_link(0, 0.0, 0.0, 1.0, 0.0)
    v = make_link(1, 10.0, 10.0, 3.0, 4.0)
    inst = Instance(links=(w, v), alpha=2.0)
    assert cross_distance(inst, 0, 1) == pytest.approx(5.0)


def test_cross_distance_self_is_length():
    v = make_link(0, 0.0, 0.0, 2.0, 0.0)
    inst = Instance(links=(v,), alpha=2.0)
    assert cross_distance(inst, 0, 0) == pytest.approx(2.0)


def test_cross_distance_unknown_id():
    inst = far_instance(2)
    with pytest.raises(KeyError):
        cross_distance(inst, 0, 99)


def test_cross_distance_matrix_entry():
    # points on a line at 0, 1, 8.5, 7.0 (s0, r0, s1, r1); distances |xi - xj|
    xs = [0.0, 1.0, 8.5, 7.0]
    mat = [[abs(a - b) for b in xs] for a in xs]
    links = line_links((0.0, 1.0), (8.5, 7.0))
    inst = Instance(links=links, alpha=2.0, metric=DistanceMatrix(mat))
    assert cross_distance(inst, 1, 0) == 7.5
    assert inst.length_of(1) == 1.5


def test_matrix_validation_rejects_asymmetry():
    mat = np.ones((2, 2)) - np.eye(2)
    mat[0, 1] = 2.0
    with pytest.raises(ValueError, match="symmetric"):
        DistanceMatrix(mat)


def test_matrix_validation_rejects_triangle_violation():
    # d(0,1) = 10 but d(0,2) + d(2,1) = 2
    mat = np.array([[0.0, 10.0, 1.0], [10.0, 0.0, 1.0], [1.0, 1.0, 0.0]])
    with pytest.raises(ValueError, match="triangle"):
        DistanceMatrix(mat)


@pytest.mark.parametrize("segments,expected", [
    (((0, 1), (5, 6), (10, 11)), 1.0),
    (((0, 1), (5, 9)), 4.0),
    (((0, 2), (5, 8), (20, 30)), 5.0),
])
def test_length_ratio(segments, expected):
    inst = Instance(links=line_links(*segments), alpha=2.0)
    assert length_ratio(inst) == pytest.approx(expected)


def test_length_ratio_empty():
    inst = Instance(links=(), alpha=2.0)
    with pytest.raises(ValueError):
        length_ratio(inst)


def test_length_ratio_scale_invariant():
    segments = ((0.0, 1.3), (2.0, 4.7), (8.0, 8.9))
    inst = Instance(links=line_links(*segments), alpha=2.0)
    scaled = Instance(links=line_links(*[(3.7 * a, 3.7 * b) for a, b in segments]),
                      alpha=2.0)
    assert length_ratio(scaled) == pytest.approx(length_ratio(inst), rel=1e-12)


def test_power_of_uniform():
    lk = make_link(0, 0.0, 0.0, 3.0, 0.0)
    assert power_of(PowerAssignment.uniform(1.0), lk, 2.5) == 1.0


def test_power_of_linear():
    lk = make_link(0, 0.0, 0.0, 2.0, 0.0)
    assert power_of(PowerAssignment.linear(), lk, 2.5) == pytest.approx(5.656854249492381)


def test_power_of_mean():
    lk = make_link(0, 0.0, 0.0, 4.0, 0.0)
    assert power_of(PowerAssignment.mean(), lk, 2.0) == pytest.approx(4.0)


@pytest.mark.parametrize("pa", [
    PowerAssignment.uniform(2.0),
    PowerAssignment.linear(),
    PowerAssignment.mean(),
    PowerAssignment.exponent(0.0),
    PowerAssignment.exponent(0.37),
    PowerAssignment.exponent(1.0),
])
def test_power_class_all_length_based_assignments(pa):
    rng = np.random.default_rng(7)
    segs = [(s, s + l) for s, l in zip(rng.uniform(0, 50, 12), rng.uniform(0.2, 9, 12))]
    inst = Instance(links=line_links(*segs), alpha=2.5)
    result = validate_power_class(inst, pa)
    assert result == {"non_decreasing": True, "sub_linear": True}


def test_exponent_tau_out_of_range():
    with pytest.raises(ValueError):
        PowerAssignment.exponent(1.5)


def test_zero_length_link_rejected():
    with pytest.raises(ValueError, match="length"):
        Instance(links=(make_link(0, 1.0, 1.0, 1.0, 1.0),), alpha=2.0)


def test_duplicate_ids_rejected():
    links = (make_link(0, 0, 0, 1, 0), make_link(0, 5, 0, 6, 0))
    with pytest.raises(ValueError, match="distinct"):
        Instance(links=links, alpha=2.0)


def test_negative_weight_rejected():
    with pytest.raises(ValueError, match="weight"):
        make_link(0, 0, 0, 1, 0, weight=-1.0)


def test_zero_cross_distance_allowed():
    # sender of one link on the receiver of the other is valid input
    links = (make_link(0, 0.0, 0.0, 1.0, 0.0), make_link(1, 1.0, 0.0, 2.0, 0.0))
    inst = Instance(links=links, alpha=2.0)
    assert cross_distance(inst, 1, 0) == 0.0


def test_roundtrip_bytes_identical(tmp_path):
    links = (
        make_link(0, 0.25, 0.5, 1.75, 0.5, weight=2.5),
        make_link(1, 3.0, 0.125, 4.5, 0.125, weight=1.0, beta_override=1.5,
                  noise_override=0.01),
    )
    prim = PrimarySet(links=(make_link(7, 10.0, 0.0, 11.0, 0.0),), powers=(2.0,))
    inst = Instance(links=links, alpha=2.5, beta=1.0, noise=0.1, primaries=prim)
    p1 = tmp_path / "a.json"
    p2 = tmp_path / "b.json"
    write_instance(inst, p1)
    again = read_instance(p1)
    write_instance(again, p2)
    assert p1.read_bytes() == p2.read_bytes()
    assert again.link(1).beta_override == 1.5
    assert again.primaries.powers == (2.0,)


def test_matrix_instance_roundtrip(tmp_path):
    xs = [0.0, 1.0, 8.5, 7.0]
    mat = [[abs(a - b) for b in xs] for a in xs]
    inst = Instance(links=line_links((0.0, 1.0), (8.5, 7.0)), alpha=3.0,
                    metric=DistanceMatrix(mat))
    path = tmp_path / "m.json"
    write_instance(inst, path)
    back = read_instance(path)
    assert cross_distance(back, 1, 0) == 7.5


def test_parse_error_reports_position(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"alpha": 2.0,\n  "links": [}')
    with pytest.raises(ValueError, match="line 2"):
        read_instance(path)


def test_missing_field_error():
    with pytest.raises(ValueError, match="missing field"):
        instance_from_dict({"alpha": 2.0, "links": [{"id": 0, "sx": 0, "sy": 0}]})


def test_parse_power_specs():
    assert parse_power("uniform").p0 == 1.0
    assert parse_power("uniform:3.5").p0 == 3.5
    assert parse_power("linear").kind == "linear"
    assert parse_power("mean").kind == "mean"
    assert parse_power("exp:0.5").tau == 0.5
    with pytest.raises(ValueError):
        parse_power("quadratic")
