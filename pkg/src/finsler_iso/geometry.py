"""Curve lengths, projective pseudodistances and numerical geodesics.

Lengths integrate rho along a curve (composite Simpson for parametric
curves, per-segment midpoint sums for polylines).  Geodesic distance is
estimated by derivative-free coordinate descent over the interior vertices
of a polyline, which yields an upper bound on the infimum.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NonPositiveMetricError, OutOfDomainError, ZeroVectorError
from .linalg import (
    Field,
    Vector,
    canonical_invariants,
    inner,
    norm,
)
from .metrics import MetricSpec, eval_finsler


@dataclass(frozen=True)
class ParametricCurve:
    """t -> gamma(t) on [a, b]; derivatives by centered finite differences.

    The map must be evaluable slightly beyond the endpoints (one fd step).
    """

    fn: Callable[[float], Vector]
    a: float
    b: float
    fd_step: float = 1e-6

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError("curve needs a < b")

    def point(self, t: float) -> Vector:
        return self.fn(t)

    def velocity(self, t: float) -> Vector:
        s = self.fd_step * max(1.0, abs(t))
        p1, p0 = self.fn(t + s), self.fn(t - s)
        return Vector((p1.entries - p0.entries) / (2.0 * s), p1.field)


@dataclass(frozen=True)
class Polyline:
    """Ordered vertices with strictly increasing parameter values."""

    vertices: tuple[Vector, ...]
    params: tuple[float, ...] | None = None

    def __post_init__(self):
        if len(self.vertices) < 2:
            raise ValueError("polyline needs at least two vertices")
        if self.params is None:
            n = len(self.vertices)
            object.__setattr__(self, "params", tuple(i / (n - 1) for i in range(n)))
        if len(self.params) != len(self.vertices):
            raise ValueError("one parameter per vertex")
        if any(t1 >= t2 for t1, t2 in zip(self.params, self.params[1:])):
            raise ValueError("parameters must be strictly increasing")

    @property
    def a(self) -> float:
        return self.params[0]

    @property
    def b(self) -> float:
        return self.params[-1]

    def point(self, t: float) -> Vector:
        ts = np.asarray(self.params)
        k = int(np.clip(np.searchsorted(ts, t) - 1, 0, len(ts) - 2))
        w = (t - ts[k]) / (ts[k + 1] - ts[k])
        u, v = self.vertices[k], self.vertices[k + 1]
        return Vector((1.0 - w) * u.entries + w * v.entries, u.field)


Curve = ParametricCurve | Polyline


def curve_length(spec: MetricSpec, curve: Curve, n_nodes: int = 1001) -> float:
    """Length of the curve under the metric.

    Parametric curves use composite Simpson quadrature on n_nodes (odd,
    >= 3); polylines use the exact sum of per-segment midpoint evaluations
    rho_mid(delta).  Negative integrand values raise a warning but still
    integrate.
    """
    if isinstance(curve, Polyline):
        total = 0.0
        for u, v in zip(curve.vertices, curve.vertices[1:]):
            mid = Vector(0.5 * (u.entries + v.entries), u.field)
            total += eval_finsler(spec, mid, Vector(v.entries - u.entries, u.field))
        return total
    if n_nodes < 3 or n_nodes % 2 == 0:
        raise ValueError("Simpson quadrature needs an odd node count >= 3")
    ts = np.linspace(curve.a, curve.b, n_nodes)
    values = np.array([eval_finsler(spec, curve.point(t), curve.velocity(t)) for t in ts])
    if np.any(values < 0.0):
        warnings.warn("metric takes negative values along the curve; the "
                      "integral is signed", RuntimeWarning, stacklevel=2)
    hstep = (curve.b - curve.a) / (n_nodes - 1)
    weights = np.ones(n_nodes)
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    return float(hstep / 3.0 * np.dot(weights, values))


# ---------------------------------------------------------------------------
# Projective pseudodistances

def delta1(g: Vector, h: Vector) -> float:
    """sin of the acute angle between the F-lines of g and h.

    Evaluated through the orthogonal component of h against g, which stays
    accurate for nearly collinear pairs.
    """
    nh = norm(h)
    if nh == 0.0:
        raise ZeroVectorError("delta1 needs non-zero vectors")
    _, _, q = canonical_invariants(g, h)  # raises on g = 0
    return min(1.0, q / (norm(g) * nh))


def delta2(g: Vector, h: Vector) -> float:
    """Chord distance between the unit-sphere intersections of the two F-lines."""
    ng, nh = norm(g), norm(h)
    if ng == 0.0 or nh == 0.0:
        raise ZeroVectorError("delta2 needs non-zero vectors")
    c = min(1.0, abs(inner(h, g)) / (ng * nh))
    return math.sqrt(max(0.0, 2.0 - 2.0 * c))


def polygonal_delta_length(which: str, curve: Curve, n_segments: int = 1000) -> float:
    """Sum of delta over a uniform parameter partition of the curve."""
    fn = {"delta1": delta1, "delta2": delta2}.get(which)
    if fn is None:
        raise ValueError("which must be 'delta1' or 'delta2'")
    ts = np.linspace(curve.a, curve.b, n_segments + 1)
    points = [curve.point(t) for t in ts]
    return float(sum(fn(u, v) for u, v in zip(points, points[1:])))


@dataclass(frozen=True)
class IntrinsificationTable:
    rows: tuple[tuple[float, float, float], ...]  # (step, delta1 ratio, delta2 ratio)
    sigma_value: float
    degenerate: bool


def intrinsification_ratio(curve: ParametricCurve, t: float,
                           s_steps: list[float]) -> IntrinsificationTable:
    """Ratios delta_i(gamma(t+s), gamma(t)) / s against the local sigma value.

    The reference is sqrt(sigma_gamma(gamma', gamma')) for the Fubini-Study
    form; the ratios converge to it as the steps shrink.  A vanishing
    derivative is reported, not asserted.
    """
    base = curve.point(t)
    if norm(base) == 0.0:
        raise ZeroVectorError("intrinsification needs gamma(t) != 0")
    vel = curve.velocity(t)
    degenerate = norm(vel) == 0.0
    r, _, q = canonical_invariants(base, vel)
    sigma_value = q / (r * r)
    rows = []
    for s in s_steps:
        u = t + s if t + s <= curve.b else t - s
        other = curve.point(u)
        rows.append((s, delta1(other, base) / s, delta2(other, base) / s))
    return IntrinsificationTable(tuple(rows), sigma_value, degenerate)


# ---------------------------------------------------------------------------
# Geodesic distance by polyline descent

@dataclass(frozen=True)
class GeodesicResult:
    distance: float
    path: Polyline
    initial_length: float
    iterations: int
    history: tuple[float, ...]


_CHUNK_CAP = 4096


def _segment_length(spec: MetricSpec, u: np.ndarray, v: np.ndarray,
                    field: Field, ell0: float) -> float:
    """Refined midpoint length of the straight segment u -> v.

    Two refinement rules guard the descent against quadrature exploits: a
    floor of chunks per unit ell0 (a single midpoint has spurious minimizers
    that collapse interior vertices onto the endpoints), and chunks no longer
    than 1/16 of the segment's distance to the origin (metrics can sweep
    their whole angular variation inside a near-origin passage, which coarse
    chunks would miss and undercount).  Segments that would need more than
    _CHUNK_CAP chunks are refused as unresolvable.
    """
    d = v - u
    length = float(np.linalg.norm(d))
    if length == 0.0:
        return 0.0
    t_star = float(np.clip(-np.real(np.vdot(d, u)) / (length * length), 0.0, 1.0))
    origin_gap = float(np.linalg.norm(u + t_star * d))
    # chunk <= gap/16 keeps the midpoint bias of a near-origin sweep below
    # ~5e-4 even when the descent adversarially seeks quadrature error
    needed = max(length / ell0, 16.0 * length / max(origin_gap, 1e-300))
    if needed > _CHUNK_CAP:
        raise OutOfDomainError("segment passes too close to the excluded origin "
                               "to be resolved")
    m = int(np.clip(math.ceil(needed), 4, _CHUNK_CAP))
    step = d / m
    step_v = Vector(step, field)
    total = 0.0
    for j in range(m):
        mid = Vector(u + (j + 0.5) / m * d, field)
        val = eval_finsler(spec, mid, step_v)
        if val < 0.0:
            raise NonPositiveMetricError("metric is negative along the path")
        total += val
    return total


def _initial_vertices(spec: MetricSpec, g: Vector, h: Vector, n_vertices: int,
                      rng: np.random.Generator, ell0: float) -> list[np.ndarray]:
    """Straight chord, or an arc through a perturbed midpoint when the chord
    leaves the domain."""
    ts = np.linspace(0.0, 1.0, n_vertices)
    chord = [(1.0 - t) * g.entries + t * h.entries for t in ts]
    for attempt in range(8):
        verts = chord if attempt == 0 else _lifted_chord(g, h, n_vertices, rng)
        try:
            for u, v in zip(verts, verts[1:]):
                _segment_length(spec, u, v, g.field, ell0)
            return [np.array(v) for v in verts]
        except OutOfDomainError:
            continue
    raise ValueError("no valid initialization found inside the metric's domain")


def _lifted_chord(g: Vector, h: Vector, n_vertices: int,
                  rng: np.random.Generator) -> list[np.ndarray]:
    mid = 0.5 * (g.entries + h.entries)
    if g.field is Field.REAL:
        d = rng.standard_normal(g.dim)
    else:
        d = rng.standard_normal(g.dim) + 1j * rng.standard_normal(g.dim)
    d = d / np.linalg.norm(d)
    lift = mid + d * 0.75 * max(norm(g), norm(h))
    half = (n_vertices + 1) // 2
    ts1 = np.linspace(0.0, 1.0, half)
    ts2 = np.linspace(0.0, 1.0, n_vertices - half + 1)
    leg1 = [(1.0 - t) * g.entries + t * lift for t in ts1]
    leg2 = [(1.0 - t) * lift + t * h.entries for t in ts2]
    return leg1 + leg2[1:]


def geodesic_distance(spec: MetricSpec, g: Vector, h: Vector, n_vertices: int = 13,
                      n_iterations: int = 150, seed: int = 0,
                      n_starts: int = 1) -> GeodesicResult:
    """Upper bound on the geodesic distance between g and h.

    Coordinate descent over the interior vertices of a polyline: each vertex
    is line-searched along seeded random directions with a step that halves
    whenever a sweep brings no improvement.  The length sequence is
    non-increasing; negative metrics are refused.
    """
    if n_vertices < 3:
        raise ValueError("need at least one interior vertex")
    root = np.random.SeedSequence(seed)
    best: GeodesicResult | None = None
    for ss in root.spawn(max(1, n_starts)):
        result = _descend(spec, g, h, n_vertices, n_iterations, np.random.default_rng(ss))
        if best is None or result.distance < best.distance:
            best = result
    return best


def _descend(spec: MetricSpec, g: Vector, h: Vector, n_vertices: int,
             n_iterations: int, rng: np.random.Generator) -> GeodesicResult:
    field = spec.field
    chord_len = float(np.linalg.norm(h.entries - g.entries))
    if chord_len == 0.0:
        line = Polyline((g, h) if n_vertices == 2 else tuple([g] * (n_vertices - 1) + [h]))
        return GeodesicResult(0.0, line, 0.0, 0, (0.0,))
    ell0 = chord_len / (4.0 * (n_vertices - 1))
    verts = _initial_vertices(spec, g, h, n_vertices, rng, ell0)
    seglen = [_segment_length(spec, u, v, field, ell0) for u, v in zip(verts, verts[1:])]
    total = sum(seglen)
    initial = total
    history = [total]
    step = chord_len / (n_vertices - 1)
    step_floor = 1e-6 * chord_len

    for _ in range(n_iterations):
        improved = False
        for i in range(1, n_vertices - 1):
            local = seglen[i - 1] + seglen[i]
            for _ in range(2):
                if field is Field.REAL:
                    d = rng.standard_normal(spec.dim)
                else:
                    d = rng.standard_normal(spec.dim) + 1j * rng.standard_normal(spec.dim)
                d = d / np.linalg.norm(d)
                for sgn in (1.0, -1.0):
                    cand = verts[i] + sgn * step * d
                    try:
                        a = _segment_length(spec, verts[i - 1], cand, field, ell0)
                        b = _segment_length(spec, cand, verts[i + 1], field, ell0)
                    except (OutOfDomainError, NonPositiveMetricError):
                        continue
                    if a + b < local - 1e-15 * (1.0 + local):
                        verts[i] = cand
                        seglen[i - 1], seglen[i] = a, b
                        local = a + b
                        improved = True
        total = sum(seglen)
        history.append(total)
        if not improved:
            step *= 0.5
            if step < step_floor:
                break

    path = Polyline(tuple(Vector(np.array(v), field) for v in verts))
    return GeodesicResult(total, path, initial, len(history) - 1, tuple(history))


def path_rows(path: Polyline) -> list[list[float]]:
    """CSV rows (t, x_1..x_n[, y_1..y_n]) for an optimized path."""
    rows = []
    for t, v in zip(path.params, path.vertices):
        if v.field is Field.REAL:
            rows.append([float(t)] + [float(x) for x in v.entries])
        else:
            rows.append([float(t)] + [float(x.real) for x in v.entries]
                        + [float(x.imag) for x in v.entries])
    return rows


def segment_curve(g: Vector, h: Vector) -> ParametricCurve:
    """The straight segment from g to h on [0, 1]."""
    def fn(t: float) -> Vector:
        return Vector((1.0 - t) * g.entries + t * h.entries, g.field)
    return ParametricCurve(fn, 0.0, 1.0)


def circle_arc(dim: int = 2, field: Field = Field.REAL, radius: float = 1.0,
               t0: float = 0.0, t1: float = 0.5 * math.pi) -> ParametricCurve:
    """The arc t -> radius (cos t, sin t, 0, ...) on [t0, t1]."""
    def fn(t: float) -> Vector:
        e = np.zeros(dim, dtype=field.dtype)
        e[0] = radius * math.cos(t)
        e[1] = radius * math.sin(t)
        return Vector(e, field)
    if dim < 2:
        raise ValueError("circle arc needs dim >= 2")
    return ParametricCurve(fn, t0, t1)
