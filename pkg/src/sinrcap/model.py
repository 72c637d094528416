"""Links, instances, power assignments, and the instance file format.

Geometry is planar by default.  An instance may instead carry an explicit
symmetric distance matrix over all sender/receiver points (validated for
the triangle inequality on load), in which case link coordinates are kept
only as labels.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

TRIANGLE_TOL = 1e-9

POWER_KINDS = ("uniform", "linear", "mean", "exponent")


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"point coordinates must be finite, got ({self.x}, {self.y})")

    def distance_to(self, other: "Point") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class Link:
    """A sender/receiver pair with a weight and optional per-link SINR
    threshold and noise overrides."""

    id: int
    sender: Point
    receiver: Point
    weight: float = 1.0
    beta_override: Optional[float] = None
    noise_override: Optional[float] = None

    def __post_init__(self):
        if self.weight < 0 or not math.isfinite(self.weight):
            raise ValueError(f"link {self.id}: weight must be a finite nonnegative real")
        if self.beta_override is not None and not self.beta_override > 0:
            raise ValueError(f"link {self.id}: beta override must be positive")
        if self.noise_override is not None and self.noise_override < 0:
            raise ValueError(f"link {self.id}: noise override must be nonnegative")

    @property
    def length(self) -> float:
        """Euclidean sender-receiver distance (matrix instances override this)."""
        return self.sender.distance_to(self.receiver)


@dataclass(frozen=True)
class PrimarySet:
    """Already-admitted links with explicit, fixed transmit powers."""

    links: tuple
    powers: tuple

    def __post_init__(self):
        if len(self.links) != len(self.powers):
            raise ValueError("primaries and powers must have equal length")
        for link, p in zip(self.links, self.powers):
            if not p > 0:
                raise ValueError(f"primary {link.id}: power must be positive")

    def __len__(self):
        return len(self.links)


class DistanceMatrix:
    """Symmetric distances over instance points in file order:
    sender, receiver of each link, then of each primary."""

    def __init__(self, values):
        d = np.asarray(values, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValueError("distance matrix must be square")
        if not np.all(np.isfinite(d)):
            raise ValueError("distance matrix entries must be finite")
        if np.any(d < 0):
            raise ValueError("distance matrix entries must be nonnegative")
        if np.any(np.abs(np.diag(d)) > 0):
            raise ValueError("distance matrix diagonal must be zero")
        if np.max(np.abs(d - d.T)) > TRIANGLE_TOL:
            raise ValueError("distance matrix must be symmetric")
        # d[i,j] <= d[i,k] + d[k,j] for all triples, within tolerance
        p = d.shape[0]
        for k in range(p):
            via_k = d[:, k:k + 1] + d[k:k + 1, :]
            excess = d - via_k
            if np.max(excess) > TRIANGLE_TOL:
                i, j = np.unravel_index(np.argmax(excess), d.shape)
                raise ValueError(
                    f"triangle inequality violated: d[{i},{j}]={d[i, j]} > "
                    f"d[{i},{k}]+d[{k},{j}]={via_k[i, j]}"
                )
        self.values = d

    @property
    def size(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True, eq=False)
class Instance:
    """A set of links plus global propagation parameters.

    ``metric`` is either the string "euclidean" or a :class:`DistanceMatrix`
    over the points of all links (and primaries, if present).
    """

    links: tuple
    alpha: float
    beta: float = 1.0
    noise: float = 0.0
    metric: Union[str, DistanceMatrix] = "euclidean"
    primaries: Optional[PrimarySet] = None

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if not self.beta > 0:
            raise ValueError("beta must be positive")
        if self.noise < 0:
            raise ValueError("noise must be nonnegative")
        ids = [lk.id for lk in self.links]
        if self.primaries is not None:
            ids += [lk.id for lk in self.primaries.links]
        if len(set(ids)) != len(ids):
            raise ValueError("link ids (including primaries) must be distinct")
        if isinstance(self.metric, DistanceMatrix):
            expected = 2 * (len(self.links) + (len(self.primaries) if self.primaries else 0))
            if self.metric.size != expected:
                raise ValueError(
                    f"distance matrix has {self.metric.size} points, expected {expected}"
                )
        elif self.metric != "euclidean":
            raise ValueError(f"unknown metric {self.metric!r}")
        object.__setattr__(self, "_by_id", self._build_index())
        for lk in self._all_links():
            if not self.length_of(lk.id) > 0:
                raise ValueError(f"link {lk.id}: length must be positive")

    def _all_links(self):
        out = list(self.links)
        if self.primaries is not None:
            out += list(self.primaries.links)
        return out

    def _build_index(self):
        by_id = {}
        for i, lk in enumerate(self.links):
            by_id[lk.id] = ("link", i, lk)
        if self.primaries is not None:
            for j, lk in enumerate(self.primaries.links):
                by_id[lk.id] = ("primary", j, lk)
        return by_id

    @property
    def n(self) -> int:
        return len(self.links)

    def link(self, link_id: int) -> Link:
        try:
            return self._by_id[link_id][2]
        except KeyError:
            raise KeyError(f"unknown link id {link_id}") from None

    def is_primary(self, link_id: int) -> bool:
        return self._by_id[link_id][0] == "primary"

    def _point_index(self, link_id: int, role: str) -> int:
        kind, pos, _ = self._by_id[link_id]
        base = 2 * pos if kind == "link" else 2 * self.n + 2 * pos
        return base + (0 if role == "sender" else 1)

    def distance(self, from_id: int, to_id: int) -> float:
        """Distance from ``from_id``'s sender to ``to_id``'s receiver."""
        a = self.link(from_id)
        b = self.link(to_id)
        if isinstance(self.metric, DistanceMatrix):
            i = self._point_index(from_id, "sender")
            j = self._point_index(to_id, "receiver")
            return float(self.metric.values[i, j])
        return a.sender.distance_to(b.receiver)

    def length_of(self, link_id: int) -> float:
        return self.distance(link_id, link_id)

    def sr_matrix(self, from_ids: Sequence[int], to_ids: Sequence[int]) -> np.ndarray:
        """Matrix of sender(from) -> receiver(to) distances."""
        if isinstance(self.metric, DistanceMatrix):
            rows = [self._point_index(i, "sender") for i in from_ids]
            cols = [self._point_index(j, "receiver") for j in to_ids]
            return self.metric.values[np.ix_(rows, cols)].copy()
        sx = np.array([self.link(i).sender.x for i in from_ids])
        sy = np.array([self.link(i).sender.y for i in from_ids])
        rx = np.array([self.link(j).receiver.x for j in to_ids])
        ry = np.array([self.link(j).receiver.y for j in to_ids])
        return np.hypot(sx[:, None] - rx[None, :], sy[:, None] - ry[None, :])

    def restrict(self, keep_ids) -> "Instance":
        """Sub-instance with only the given (non-primary) links; primaries kept."""
        keep = set(keep_ids)
        links = tuple(lk for lk in self.links if lk.id in keep)
        metric = self.metric
        if isinstance(self.metric, DistanceMatrix):
            rows = []
            for lk in links:
                rows += [self._point_index(lk.id, "sender"), self._point_index(lk.id, "receiver")]
            if self.primaries is not None:
                for lk in self.primaries.links:
                    rows += [self._point_index(lk.id, "sender"), self._point_index(lk.id, "receiver")]
            metric = DistanceMatrix(self.metric.values[np.ix_(rows, rows)])
        return Instance(links=links, alpha=self.alpha, beta=self.beta, noise=self.noise,
                        metric=metric, primaries=self.primaries)


@dataclass(frozen=True)
class PowerAssignment:
    """Length-based transmit power rule.

    kind is one of ``uniform`` (P = p0), ``linear`` (P = l**alpha),
    ``mean`` (P = l**(alpha/2)), or ``exponent`` (P = l**(tau*alpha)).
    """

    kind: str
    p0: float = 1.0
    tau: Optional[float] = None

    def __post_init__(self):
        if self.kind not in POWER_KINDS:
            raise ValueError(f"unknown power assignment kind {self.kind!r}")
        if self.kind == "uniform" and not self.p0 > 0:
            raise ValueError("uniform power requires p0 > 0")
        if self.kind == "exponent":
            if self.tau is None or not (0.0 <= self.tau <= 1.0):
                raise ValueError("exponent power requires tau in [0, 1]")

    @classmethod
    def uniform(cls, p0: float = 1.0) -> "PowerAssignment":
        return cls("uniform", p0=p0)

    @classmethod
    def linear(cls) -> "PowerAssignment":
        return cls("linear")

    @classmethod
    def mean(cls) -> "PowerAssignment":
        return cls("mean")

    @classmethod
    def exponent(cls, tau: float) -> "PowerAssignment":
        return cls("exponent", tau=tau)

    def power(self, length, alpha: float):
        """Transmit power for a link of the given length (scalar or array)."""
        length = np.asarray(length, dtype=float)
        if self.kind == "uniform":
            out = np.full_like(length, self.p0)
        elif self.kind == "linear":
            out = length ** alpha
        elif self.kind == "mean":
            out = length ** (alpha / 2.0)
        else:
            out = length ** (self.tau * alpha)
        return float(out) if out.ndim == 0 else out

    def describe(self) -> str:
        if self.kind == "uniform":
            return f"uniform({self.p0})"
        if self.kind == "exponent":
            return f"exp:{self.tau}"
        return self.kind


def cross_distance(instance: Instance, w: int, v: int) -> float:
    """Distance from w's sender to v's receiver; the link length when w == v."""
    return instance.distance(w, v)


def length_ratio(instance: Instance) -> float:
    """Max/min link length over the instance's (non-primary) links."""
    if instance.n == 0:
        raise ValueError("length ratio is undefined for an empty instance")
    lengths = [instance.length_of(lk.id) for lk in instance.links]
    return max(lengths) / min(lengths)


def power_of(assignment: PowerAssignment, link, alpha: float) -> float:
    """Power assigned to a link (or to an explicit length)."""
    length = link.length if isinstance(link, Link) else float(link)
    return float(assignment.power(length, alpha))


def validate_power_class(instance: Instance, assignment: PowerAssignment) -> dict:
    """Check monotonicity (P non-decreasing in length) and sub-linearity
    (P/l**alpha non-increasing in length) over all link pairs."""
    lengths = np.array([instance.length_of(lk.id) for lk in instance.links])
    if lengths.size == 0:
        return {"non_decreasing": True, "sub_linear": True}
    powers = np.asarray(assignment.power(lengths, instance.alpha), dtype=float)
    order = np.argsort(lengths)
    p_sorted = np.atleast_1d(powers)[order]
    ratio_sorted = np.atleast_1d(powers / lengths ** instance.alpha)[order]
    tol = 1e-12
    non_dec = bool(np.all(np.diff(p_sorted) >= -tol * np.maximum(p_sorted[:-1], 1.0))) \
        if p_sorted.size > 1 else True
    sub_lin = bool(np.all(np.diff(ratio_sorted) <= tol * np.maximum(ratio_sorted[:-1], 1.0))) \
        if ratio_sorted.size > 1 else True
    return {"non_decreasing": non_dec, "sub_linear": sub_lin}


def parse_power(text: str) -> PowerAssignment:
    """Parse a power assignment spec: uniform[:P0] | linear | mean | exp:tau."""
    if text.startswith("exp:"):
        return PowerAssignment.exponent(float(text[4:]))
    if text.startswith("uniform:"):
        return PowerAssignment.uniform(float(text[8:]))
    if text == "uniform":
        return PowerAssignment.uniform()
    if text == "linear":
        return PowerAssignment.linear()
    if text == "mean":
        return PowerAssignment.mean()
    raise ValueError(f"cannot parse power assignment {text!r}")


# ---------------------------------------------------------------------------
# Instance file format (JSON)

def instance_to_dict(instance: Instance) -> dict:
    d = {
        "alpha": instance.alpha,
        "beta": instance.beta,
        "noise": instance.noise,
    }
    if isinstance(instance.metric, DistanceMatrix):
        d["metric"] = {"matrix": instance.metric.values.tolist()}
    else:
        d["metric"] = "euclidean"
    links = []
    for lk in instance.links:
        entry = {
            "id": lk.id,
            "sx": lk.sender.x, "sy": lk.sender.y,
            "rx": lk.receiver.x, "ry": lk.receiver.y,
            "weight": lk.weight,
        }
        if lk.beta_override is not None:
            entry["beta"] = lk.beta_override
        if lk.noise_override is not None:
            entry["noise"] = lk.noise_override
        links.append(entry)
    d["links"] = links
    if instance.primaries is not None:
        d["primaries"] = [
            {
                "id": lk.id,
                "sx": lk.sender.x, "sy": lk.sender.y,
                "rx": lk.receiver.x, "ry": lk.receiver.y,
                "power": p,
            }
            for lk, p in zip(instance.primaries.links, instance.primaries.powers)
        ]
    return d


def _parse_link(entry: dict, where: str) -> Link:
    try:
        return Link(
            id=int(entry["id"]),
            sender=Point(float(entry["sx"]), float(entry["sy"])),
            receiver=Point(float(entry["rx"]), float(entry["ry"])),
            weight=float(entry.get("weight", 1.0)),
            beta_override=float(entry["beta"]) if "beta" in entry else None,
            noise_override=float(entry["noise"]) if "noise" in entry else None,
        )
    except KeyError as exc:
        raise ValueError(f"{where}: missing field {exc}") from None


def instance_from_dict(d: dict) -> Instance:
    for field in ("alpha", "links"):
        if field not in d:
            raise ValueError(f"instance: missing field {field!r}")
    links = tuple(_parse_link(e, f"link #{i}") for i, e in enumerate(d["links"]))
    primaries = None
    if "primaries" in d and d["primaries"] is not None:
        plinks, powers = [], []
        for i, e in enumerate(d["primaries"]):
            if "power" not in e:
                raise ValueError(f"primary #{i}: missing field 'power'")
            plinks.append(_parse_link(e, f"primary #{i}"))
            powers.append(float(e["power"]))
        primaries = PrimarySet(links=tuple(plinks), powers=tuple(powers))
    metric = d.get("metric", "euclidean")
    if isinstance(metric, dict):
        if "matrix" not in metric:
            raise ValueError("metric object must contain a 'matrix' field")
        metric = DistanceMatrix(metric["matrix"])
    return Instance(
        links=links,
        alpha=float(d["alpha"]),
        beta=float(d.get("beta", 1.0)),
        noise=float(d.get("noise", 0.0)),
        metric=metric,
        primaries=primaries,
    )


def write_instance(instance: Instance, path) -> None:
    with open(path, "w") as fh:
        json.dump(instance_to_dict(instance), fh, indent=2)
        fh.write("\n")


def read_instance(path) -> Instance:
    with open(path) as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(
                f"{path}: parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
            ) from None
    return instance_from_dict(d)
