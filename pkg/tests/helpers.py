"""Shared fixtures: the standard spec battery and independent oracles."""

from __future__ import annotations

import heapq
import math

import numpy as np

from finsler_iso import linalg as la
from finsler_iso import metrics as mm

POS = mm.RadiusDomain.positive()


# Three fixed theta profiles.  All are smooth with vanishing tau-derivative
# at tau = 0, the regularity the canonical-form round-trips rely on.

def theta_angular(r, tau):
    return 1.0 + math.cos(tau)


def theta_radial(r, tau):
    # log-periodic in r with period log 2: invariant under the homothety alpha = 2
    return (2.0 + math.sin(2.0 * math.pi * math.log(r) / math.log(2.0))) / r


def theta_mixed(r, tau):
    return (1.0 + math.sin(tau) ** 2) * (1.0 + 1.0 / (1.0 + r * r))


def nonsym_lambda(r, p, q):
    # positively homogeneous in (p, q), even in q, genuinely direction-dependent
    return math.sqrt(abs(p) ** 2 + q * q) + float(np.real(p))


def battery(dim: int, field: la.Field) -> list[tuple[str, mm.MetricSpec]]:
    """The standard spec battery used across invariance and round-trip suites."""
    specs = [
        ("euclidean", mm.euclidean(dim, field)),
        ("fubini-study", mm.fubini_study(dim, field)),
        ("norm-quotient", mm.norm_quotient(dim, field)),
        ("theta-angular", mm.FromTheta(dim, field, POS, mm.ThetaProfile(theta_angular))),
        ("theta-radial", mm.FromTheta(dim, field, POS, mm.ThetaProfile(theta_radial))),
        ("theta-mixed", mm.FromTheta(dim, field, POS, mm.ThetaProfile(theta_mixed))),
        ("nonsym", mm.FromNonSymLambda(dim, field, POS, mm.NonSymLambdaProfile(nonsym_lambda))),
    ]
    if dim == 2:
        specs.append(("area", mm.area_dim2(1.0, field)))
    return specs


def probe_battery(dim: int, field: la.Field) -> list[tuple[str, mm.MetricSpec]]:
    """The symmetric specs the congruence-theorem probe runs over."""
    return [(name, spec) for name, spec in battery(dim, field)
            if name not in ("nonsym", "area")]


def sample_pair(spec: mm.MetricSpec, rng: np.random.Generator):
    g = la.random_vector_with_norm(spec.dim, spec.field, mm.sample_radius(spec.domain, rng), rng)
    h = la.random_gaussian_vector(spec.dim, spec.field, rng)
    return g, h


def knn_graph_distance(n_points: int = 2000, k: int = 56, seed: int = 0,
                       dim: int = 3) -> float:
    """Independent geodesic oracle: Dijkstra over a k-NN graph on the unit
    sphere with chord (delta2) edge weights, from e1 to e2."""
    rng = np.random.default_rng(seed)
    pts = rng.standard_normal((n_points, dim))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    pts[0] = np.eye(dim)[0]
    pts[1] = np.eye(dim)[1]
    cos = np.abs(pts @ pts.T)
    np.clip(cos, 0.0, 1.0, out=cos)
    dmat = np.sqrt(np.maximum(0.0, 2.0 - 2.0 * cos))
    np.fill_diagonal(dmat, np.inf)
    nbrs = np.argsort(dmat, axis=1)[:, :k]
    dist = np.full(n_points, np.inf)
    dist[0] = 0.0
    pq = [(0.0, 0)]
    while pq:
        du, u = heapq.heappop(pq)
        if du > dist[u]:
            continue
        if u == 1:
            break
        for v in nbrs[u]:
            nd = du + dmat[u, v]
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(pq, (nd, int(v)))
    return float(dist[1])
