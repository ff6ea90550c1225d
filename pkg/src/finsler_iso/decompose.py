"""Extraction of canonical profiles from black-box metric oracles.

Given an isometry-invariant metric as an opaque callable, the canonical
profiles lambda(r, p, q), theta(r, tau) and (phi, psi) can be read off by
evaluating the oracle on a fixed orthonormal frame; extraction here returns
profiles that delegate to the oracle (no tabulation), so round-trips carry
no interpolation error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import MismatchError
from .linalg import (
    Field,
    Vector,
    basis_vector,
    inner,
    norm,
    random_gaussian_vector,
    random_vector_with_norm,
)
from .metrics import (
    MetricSpec,
    NonSymLambdaProfile,
    RadiusDomain,
    RiemannProfile,
    SymLambdaProfile,
    ThetaProfile,
    eval_finsler,
    eval_sesquilinear,
    sample_radius,
    sesquilinear_profile,
)


@dataclass(frozen=True)
class MetricOracle:
    """A black-box rho(g, h) with a declared homogeneity degree in h."""

    fn: Callable[[Vector, Vector], float]
    dim: int
    field: Field
    domain: RadiusDomain
    alpha: float = 1.0


@dataclass(frozen=True)
class SesquiOracle:
    """A black-box conjugate-symmetric sesquilinear sigma(g, f, h)."""

    fn: Callable[[Vector, Vector, Vector], complex]
    dim: int
    field: Field
    domain: RadiusDomain


def oracle_from_spec(spec: MetricSpec) -> MetricOracle:
    return MetricOracle(lambda g, h: eval_finsler(spec, g, h),
                        spec.dim, spec.field, spec.domain, alpha=1.0)


def sesqui_oracle_from_spec(spec: MetricSpec) -> SesquiOracle:
    profile = sesquilinear_profile(spec)
    if profile is None:
        raise ValueError(f"family {spec.family!r} has no sesquilinear form")
    return SesquiOracle(lambda g, f, h: eval_sesquilinear(profile, g, f, h),
                        spec.dim, spec.field, spec.domain)


def _default_frame(dim: int, field: Field) -> tuple[Vector, Vector]:
    return basis_vector(dim, 0, field), basis_vector(dim, 1, field)


def _check_frame(oracle, frame) -> tuple[Vector, Vector]:
    if oracle.dim < 2:
        raise MismatchError("extraction needs dimension >= 2")
    if frame is None:
        return _default_frame(oracle.dim, oracle.field)
    e, f = frame
    if abs(norm(e) - 1.0) > 1e-10 or abs(norm(f) - 1.0) > 1e-10 or abs(inner(e, f)) > 1e-10:
        raise ValueError("extraction frame must be an orthonormal pair")
    return e, f


def validate_alpha(oracle: MetricOracle, n_samples: int = 24, seed: int = 0,
                   tol: float = 1e-8) -> float:
    """Worst relative violation of rho_g(t h) = |t|^alpha rho_g(h) on samples."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_samples):
        g = random_vector_with_norm(oracle.dim, oracle.field, sample_radius(oracle.domain, rng), rng)
        h = random_gaussian_vector(oracle.dim, oracle.field, rng)
        base = oracle.fn(g, h)
        t = float(rng.uniform(0.2, 3.0))
        want = (t ** oracle.alpha) * base
        got = oracle.fn(g, Vector(t * h.entries, h.field))
        worst = max(worst, abs(got - want) / (1.0 + abs(want)))
    if worst > tol:
        raise ValueError(f"declared homogeneity degree {oracle.alpha} violated "
                         f"by {worst:g} on samples")
    return worst


def extract_lambda(oracle: MetricOracle, frame: tuple[Vector, Vector] | None = None,
                   check_alpha: bool = True) -> SymLambdaProfile:
    """lambda(r, p, q) = r^(-alpha) rho(r e, p e + q f) on the chosen frame."""
    e, f = _check_frame(oracle, frame)
    if check_alpha:
        validate_alpha(oracle)
    alpha = oracle.alpha

    def fn(r: float, p: float, q: float) -> float:
        g = Vector(r * e.entries, oracle.field)
        h = Vector(p * e.entries + q * f.entries, oracle.field)
        return oracle.fn(g, h) / (r ** alpha)

    return SymLambdaProfile(fn, alpha)


def extract_theta(oracle: MetricOracle, frame: tuple[Vector, Vector] | None = None) -> ThetaProfile:
    """theta(r, tau) = r lambda(r, cos tau, sin tau); needs alpha = 1."""
    if abs(oracle.alpha - 1.0) > 1e-12:
        raise ValueError("theta extraction needs a degree-1 oracle")
    lam = extract_lambda(oracle, frame)
    return ThetaProfile(lambda r, tau: r * lam.fn(r, math.cos(tau), math.sin(tau)))


def extract_nonsym_lambda(oracle: MetricOracle,
                          frame: tuple[Vector, Vector] | None = None) -> NonSymLambdaProfile:
    """Non-symmetric variant: p keeps the full scalar <h, g>, not its modulus."""
    e, f = _check_frame(oracle, frame)

    def fn(r: float, p: complex, q: float) -> float:
        g = Vector(r * e.entries, oracle.field)
        if oracle.field is Field.REAL:
            p = float(np.real(p))
        h = Vector(p * e.entries + q * f.entries, oracle.field)
        return oracle.fn(g, h) / r

    return NonSymLambdaProfile(fn)


def extract_phi_psi(oracle: SesquiOracle, frame: tuple[Vector, Vector] | None = None,
                    check_symmetry: bool = True) -> RiemannProfile:
    """phi(r) = sigma_{sqrt(r) e}(f, f) and psi(r) = (sigma_{sqrt(r) e}(e, e) - phi(r)) / r."""
    e, f = _check_frame(oracle, frame)
    if check_symmetry:
        _validate_conjugate_symmetry(oracle)

    def phi(r: float) -> float:
        g = Vector(math.sqrt(r) * e.entries, oracle.field)
        return float(np.real(oracle.fn(g, f, f)))

    def psi(r: float) -> float:
        g = Vector(math.sqrt(r) * e.entries, oracle.field)
        return (float(np.real(oracle.fn(g, e, e))) - phi(r)) / r

    return RiemannProfile(phi, psi, oracle.domain.squared())


def _validate_conjugate_symmetry(oracle: SesquiOracle, n_samples: int = 16,
                                 seed: int = 0, tol: float = 1e-8) -> None:
    rng = np.random.default_rng(seed)
    for _ in range(n_samples):
        g = random_vector_with_norm(oracle.dim, oracle.field, sample_radius(oracle.domain, rng), rng)
        f = random_gaussian_vector(oracle.dim, oracle.field, rng)
        h = random_gaussian_vector(oracle.dim, oracle.field, rng)
        a = oracle.fn(g, f, h)
        b = oracle.fn(g, h, f)
        if abs(a - np.conj(b)) > tol * (1.0 + abs(a)):
            raise ValueError("oracle is not conjugate-symmetric on samples")


# ---------------------------------------------------------------------------
# Round-trip verification

@dataclass(frozen=True)
class RoundtripReport:
    max_relative_deviation: float
    witness: tuple[Vector, ...] | None
    samples: int
    passed: bool


def _sample_pair(dim, field, domain, rng, kind: str) -> tuple[Vector, Vector]:
    g = random_vector_with_norm(dim, field, sample_radius(domain, rng), rng)
    if kind == "collinear":
        c = rng.standard_normal()
        if field is Field.COMPLEX:
            ang = rng.uniform(0.0, 2.0 * math.pi)
            c = c * complex(math.cos(ang), math.sin(ang))
        h = Vector(c * g.entries, field)
    elif kind == "orthogonal":
        raw = random_gaussian_vector(dim, field, rng)
        ng2 = norm(g) ** 2
        h = Vector(raw.entries - (inner(raw, g) / ng2) * g.entries, field)
    else:
        h = random_gaussian_vector(dim, field, rng)
    return g, h


def roundtrip_check(oracle: MetricOracle | SesquiOracle, extracted_spec: MetricSpec,
                    n_samples: int = 1000, seed: int = 0, tol: float = 1e-9) -> RoundtripReport:
    """Compare the oracle against its reconstruction on seeded samples.

    Every tenth sample is an edge pair (h collinear with g, then h
    orthogonal to g): those are the degenerate strata of the canonical
    invariants.  For a sesquilinear oracle the comparison runs on random
    triples against the reconstructed form.
    """
    rng = np.random.default_rng(seed)
    worst, witness = 0.0, None
    sesqui = isinstance(oracle, SesquiOracle)
    profile = sesquilinear_profile(extracted_spec) if sesqui else None
    if sesqui and profile is None:
        raise ValueError("sesquilinear round-trip needs a Riemann-backed spec")
    for i in range(n_samples):
        kind = "collinear" if i % 10 == 0 else ("orthogonal" if i % 10 == 5 else "generic")
        g, h = _sample_pair(oracle.dim, oracle.field, oracle.domain, rng, kind)
        if sesqui:
            f = random_gaussian_vector(oracle.dim, oracle.field, rng)
            got = oracle.fn(g, f, h)
            want = eval_sesquilinear(profile, g, f, h)
            args = (g, f, h)
        else:
            got = oracle.fn(g, h)
            want = eval_finsler(extracted_spec, g, h)
            args = (g, h)
        dev = abs(got - want) / (1.0 + abs(got))
        if dev > worst:
            worst, witness = dev, args
    return RoundtripReport(worst, witness if worst > tol else None, n_samples, worst <= tol)


# ---------------------------------------------------------------------------
# Tabulation for CSV export

def tabulate_theta(profile: ThetaProfile, r_values: list[float],
                   tau_values: list[float]) -> list[tuple[float, float, float]]:
    """(r, tau, theta_value) rows over the grid, row-major in r."""
    return [(r, tau, float(profile.fn(r, tau))) for r in r_values for tau in tau_values]


def tabulate_phi_psi(profile: RiemannProfile,
                     r_values: list[float]) -> list[tuple[float, float, float]]:
    """(r, phi, psi) rows; r here is the squared-norm argument."""
    return [(r, float(profile.phi(r)), float(profile.psi(r))) for r in r_values]
