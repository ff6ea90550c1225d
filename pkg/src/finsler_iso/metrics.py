"""Metric families on inner-product spaces.

A MetricSpec is a constructible, evaluable metric: a canonical profile
(lambda/theta/vartheta or a sesquilinear phi/psi pair), one of the named
built-ins (Euclidean, Fubini-Study, the dim-2 area metric, the norm
quotient), or a zero-extension.  Pointwise criteria (positive definiteness,
the Kaehler condition psi = phi', homothety invariance) live here too.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, replace
from typing import Callable, ClassVar

import numpy as np

from . import expressions
from .errors import MismatchError, OutOfDomainError, ZeroVectorError
from .linalg import (
    Field,
    Vector,
    acute_angle,
    canonical_invariants,
    inner,
    norm,
    random_gaussian_vector,
    random_vector_with_norm,
)

LAMBDA_VARS = frozenset({"r", "p", "q"})
THETA_VARS = frozenset({"r", "tau"})
VARTHETA_VARS = frozenset({"tau"})
RADIAL_VARS = frozenset({"r"})
NONSYM_VARS_REAL = frozenset({"r", "p", "q"})
NONSYM_VARS_COMPLEX = frozenset({"r", "pre", "pim", "q"})


# ---------------------------------------------------------------------------
# Radius domains

@dataclass(frozen=True)
class RadiusDomain:
    """A union of open intervals in [0, inf), with an optional zero point."""

    intervals: tuple[tuple[float, float], ...]
    includes_zero: bool = False

    def __post_init__(self):
        ivs = tuple(sorted((float(lo), float(hi)) for lo, hi in self.intervals))
        for lo, hi in ivs:
            if lo < 0.0 or not lo < hi:
                raise ValueError(f"invalid radius interval ({lo}, {hi})")
        for (_, hi1), (lo2, _) in zip(ivs, ivs[1:]):
            if hi1 > lo2:
                raise ValueError("radius intervals must be pairwise disjoint")
        object.__setattr__(self, "intervals", ivs)

    @staticmethod
    def positive() -> "RadiusDomain":
        return RadiusDomain(((0.0, math.inf),))

    def contains(self, r: float) -> bool:
        if r == 0.0:
            return self.includes_zero
        return any(lo < r < hi for lo, hi in self.intervals)

    def squared(self) -> "RadiusDomain":
        """Image under r -> r^2 (norm radii to sesquilinear arguments)."""
        return RadiusDomain(tuple((lo * lo, hi * hi) for lo, hi in self.intervals),
                            self.includes_zero)

    def sqrt_image(self) -> "RadiusDomain":
        """Image under r -> sqrt(r) (sesquilinear arguments to norm radii)."""
        return RadiusDomain(tuple((math.sqrt(lo), math.sqrt(hi)) for lo, hi in self.intervals),
                            self.includes_zero)


def sample_radius(domain: RadiusDomain, rng: np.random.Generator) -> float:
    """A reproducible radius strictly inside one of the domain's intervals."""
    lo, hi = domain.intervals[int(rng.integers(len(domain.intervals)))]
    if math.isfinite(hi):
        pad = 0.01 * (hi - lo)
        return float(rng.uniform(lo + pad, hi - pad))
    lo_eff = lo * 1.01 if lo > 0.0 else 0.05
    hi_eff = max(8.0, 4.0 * lo_eff)
    return float(math.exp(rng.uniform(math.log(lo_eff), math.log(hi_eff))))


def domain_grid(domain: RadiusDomain, points_per_interval: int = 4) -> list[float]:
    """Deterministic interior sample radii, for validation grids."""
    out: list[float] = []
    for lo, hi in domain.intervals:
        if math.isfinite(hi):
            step = (hi - lo) / (points_per_interval + 1)
            out.extend(lo + step * (i + 1) for i in range(points_per_interval))
        else:
            base = lo * 1.25 if lo > 0.0 else 0.25
            out.extend(base * (2.0 ** i) for i in range(points_per_interval))
    return out


# ---------------------------------------------------------------------------
# Profiles

@dataclass(frozen=True)
class SymLambdaProfile:
    """lambda(r, p, q): even in p and in q, homogeneous of degree alpha in (p, q)."""

    fn: Callable[[float, float, float], float]
    alpha: float = 1.0
    expr_text: str | None = None


@dataclass(frozen=True)
class ThetaProfile:
    """theta(r, tau) with tau in [0, pi/2]."""

    fn: Callable[[float, float], float]
    expr_text: str | None = None


@dataclass(frozen=True)
class NonSymLambdaProfile:
    """lambda(r, p, q) with p a scalar in F; positively homogeneous, even in q."""

    fn: Callable[[float, complex, float], float]
    expr_text: str | None = None


@dataclass(frozen=True)
class RiemannProfile:
    """The (phi, psi) pair of an invariant sesquilinear form; arguments are |g|^2."""

    phi: Callable[[float], float]
    psi: Callable[[float], float]
    domain: RadiusDomain = RadiusDomain.positive()
    phi_expr: str | None = None
    psi_expr: str | None = None


def lambda_profile(text: str, alpha: float = 1.0) -> SymLambdaProfile:
    expr = expressions.parse(text, LAMBDA_VARS)
    return SymLambdaProfile(
        lambda r, p, q: expressions.evaluate(expr, {"r": r, "p": p, "q": q}),
        alpha, text)


def theta_profile(text: str) -> ThetaProfile:
    expr = expressions.parse(text, THETA_VARS)
    return ThetaProfile(
        lambda r, tau: expressions.evaluate(expr, {"r": r, "tau": tau}), text)


def nonsym_lambda_profile(text: str, field: Field) -> NonSymLambdaProfile:
    # Complex p enters the expression as the real pair (pre, pim).
    if field is Field.REAL:
        expr = expressions.parse(text, NONSYM_VARS_REAL)
        fn = lambda r, p, q: expressions.evaluate(expr, {"r": r, "p": float(np.real(p)), "q": q})
    else:
        expr = expressions.parse(text, NONSYM_VARS_COMPLEX)
        fn = lambda r, p, q: expressions.evaluate(
            expr, {"r": r, "pre": float(np.real(p)), "pim": float(np.imag(p)), "q": q})
    return NonSymLambdaProfile(fn, text)


def riemann_profile(phi_text: str, psi_text: str,
                    domain: RadiusDomain | None = None) -> RiemannProfile:
    phi_expr = expressions.parse(phi_text, RADIAL_VARS)
    psi_expr = expressions.parse(psi_text, RADIAL_VARS)
    return RiemannProfile(
        lambda r: expressions.evaluate(phi_expr, {"r": r}),
        lambda r: expressions.evaluate(psi_expr, {"r": r}),
        domain if domain is not None else RadiusDomain.positive(),
        phi_text, psi_text)


def congruence_invariant_riemann(a: float, b: float) -> RiemannProfile:
    """The pair phi(r) = a/r, psi(r) = b/r^2; (1, -1) is the Fubini-Study profile.

    Under the pointwise criterion, positive definiteness of this family needs
    both a > 0 and a + b > 0 (the weaker condition a + b > 0 alone is
    sometimes quoted; the strict form is what check_positive_definite tests).
    """
    return RiemannProfile(
        lambda r: a / r,
        lambda r: b / (r * r),
        RadiusDomain.positive(),
        f"{float(a)!r}/r",
        f"{float(b)!r}/(r^2)")


def fubini_study_profile() -> RiemannProfile:
    return congruence_invariant_riemann(1.0, -1.0)


# ---------------------------------------------------------------------------
# Metric specs

@dataclass(frozen=True)
class MetricSpec:
    dim: int
    field: Field
    domain: RadiusDomain

    family: ClassVar[str] = "?"
    congruence_invariant: ClassVar[bool] = False

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")

    def _value(self, g: Vector, h: Vector, r: float) -> float:
        raise NotImplementedError


@dataclass(frozen=True)
class Euclidean(MetricSpec):
    family: ClassVar[str] = "euclidean"

    def _value(self, g, h, r):
        return norm(h)


@dataclass(frozen=True)
class FubiniStudy(MetricSpec):
    """Fubini-Study on the punctured space, evaluated in canonical form.

    The value q/r^2 equals sqrt of the sesquilinear diagonal but stays
    accurate for nearly collinear (g, h), where the phi/psi expression
    cancels catastrophically.
    """

    family: ClassVar[str] = "fubini-study"
    congruence_invariant: ClassVar[bool] = True

    def _value(self, g, h, r):
        _, _, q = canonical_invariants(g, h)
        return q / (r * r)


@dataclass(frozen=True)
class FromLambda(MetricSpec):
    profile: SymLambdaProfile
    family: ClassVar[str] = "lambda"

    def _value(self, g, h, r):
        _, p, q = canonical_invariants(g, h)
        return float(self.profile.fn(r, p, q))


@dataclass(frozen=True)
class FromTheta(MetricSpec):
    profile: ThetaProfile
    family: ClassVar[str] = "theta"

    def _value(self, g, h, r):
        nh = norm(h)
        if nh == 0.0:
            return 0.0
        return nh * float(self.profile.fn(r, acute_angle(g, h)))


@dataclass(frozen=True)
class FromNonSymLambda(MetricSpec):
    profile: NonSymLambdaProfile
    family: ClassVar[str] = "nonsym-lambda"

    def _value(self, g, h, r):
        p = inner(h, g)
        _, _, q = canonical_invariants(g, h)
        return float(self.profile.fn(r, p, q))


@dataclass(frozen=True)
class FromRiemann(MetricSpec):
    """Finsler metric induced by a sesquilinear profile: sign(v) sqrt|v|."""

    profile: RiemannProfile
    indefinite_warning: bool = False
    family: ClassVar[str] = "riemann"

    def _value(self, g, h, r):
        r2 = r * r
        nh = norm(h)
        v = float(self.profile.phi(r2)) * nh * nh \
            + float(self.profile.psi(r2)) * abs(inner(h, g)) ** 2
        if v == 0.0:
            return 0.0
        return math.copysign(math.sqrt(abs(v)), v)


@dataclass(frozen=True)
class CongruenceInvariant(MetricSpec):
    """rho_g(h) = (|h|/|g|) vartheta(angle(g, h)); invariant under all congruences."""

    vartheta: Callable[[float], float]
    vartheta_expr: str | None = None
    family: ClassVar[str] = "congruence-invariant"
    congruence_invariant: ClassVar[bool] = True

    def _value(self, g, h, r):
        nh = norm(h)
        if nh == 0.0:
            return 0.0
        return (nh / r) * float(self.vartheta(acute_angle(g, h)))


@dataclass(frozen=True)
class AreaDim2(MetricSpec):
    """b * |g| |h| sin(angle): b times the parallelogram area over R^2.

    Evaluated as b * q through the canonical invariants, which equals the
    sine form exactly but avoids the ill-conditioned arccos near collinear
    pairs.
    """

    b: float = 1.0
    family: ClassVar[str] = "area"

    def __post_init__(self):
        super().__post_init__()
        if self.dim != 2:
            raise ValueError("the area metric is defined in dimension 2 only")

    def _value(self, g, h, r):
        if norm(h) == 0.0:
            return 0.0
        _, _, q = canonical_invariants(g, h)
        return self.b * q


@dataclass(frozen=True)
class ZeroExtended(MetricSpec):
    """An invariant metric on the punctured space extended by rho_0(h) = b |h|."""

    b: float = 0.0
    inner_spec: MetricSpec | None = None
    family: ClassVar[str] = "zero-extended"

    def __post_init__(self):
        super().__post_init__()
        if self.inner_spec is None:
            raise ValueError("zero extension needs an inner spec")
        if not self.domain.includes_zero:
            raise ValueError("zero extension requires a domain including 0")
        if self.inner_spec.domain.includes_zero:
            raise ValueError("the wrapped spec must exclude 0")

    def _value(self, g, h, r):
        return eval_finsler(self.inner_spec, g, h)


@dataclass(frozen=True)
class Custom(MetricSpec):
    """A black-box metric callable; usable everywhere but not serializable."""

    fn: Callable[[Vector, Vector], float] = None  # type: ignore[assignment]
    family: ClassVar[str] = "custom"

    def __post_init__(self):
        super().__post_init__()
        if self.fn is None:
            raise ValueError("a custom metric needs its callable")

    def _value(self, g, h, r):
        return float(self.fn(g, h))


def euclidean(dim: int, field: Field = Field.REAL) -> Euclidean:
    return Euclidean(dim, field, RadiusDomain.positive())


def fubini_study(dim: int, field: Field = Field.REAL) -> FubiniStudy:
    return FubiniStudy(dim, field, RadiusDomain.positive())


def norm_quotient(dim: int, field: Field = Field.REAL) -> CongruenceInvariant:
    return CongruenceInvariant(dim, field, RadiusDomain.positive(),
                               vartheta=lambda tau: 1.0, vartheta_expr="1")


def area_dim2(b: float = 1.0, field: Field = Field.REAL) -> AreaDim2:
    return AreaDim2(2, field, RadiusDomain.positive(), b)


def zero_extended(b: float, inner_spec: MetricSpec) -> ZeroExtended:
    domain = replace(inner_spec.domain, includes_zero=True)
    return ZeroExtended(inner_spec.dim, inner_spec.field, domain, b, inner_spec)


# ---------------------------------------------------------------------------
# Evaluation

def _check_compatible(spec: MetricSpec, *vs: Vector) -> None:
    for v in vs:
        if v.dim != spec.dim:
            raise MismatchError(f"vector dimension {v.dim} != spec dimension {spec.dim}")
        if v.field is not spec.field:
            raise MismatchError(f"vector field {v.field.value} != spec field {spec.field.value}")


def eval_finsler(spec: MetricSpec, g: Vector, h: Vector) -> float:
    """rho_g(h).  g = 0 is allowed only when the spec extends through zero."""
    _check_compatible(spec, g, h)
    r = norm(g)
    if r == 0.0:
        if isinstance(spec, ZeroExtended):
            return spec.b * norm(h)
        raise OutOfDomainError("base point g = 0 is outside the metric's domain")
    if not spec.domain.contains(r):
        raise OutOfDomainError(f"|g| = {r} is outside the radius domain")
    return spec._value(g, h, r)


def eval_sesquilinear(profile: RiemannProfile, g: Vector, f: Vector, h: Vector):
    """sigma_g(f, h) = phi(|g|^2) <f,h> + psi(|g|^2) <f,g> <g,h>."""
    if not (g.dim == f.dim == h.dim) or not (g.field is f.field is h.field):
        raise MismatchError("sigma needs three vectors of one dimension and field")
    r2 = norm(g) ** 2
    if r2 == 0.0:
        raise ZeroVectorError("sigma is undefined at g = 0")
    if not profile.domain.contains(r2):
        raise OutOfDomainError(f"|g|^2 = {r2} is outside the profile domain")
    val = float(profile.phi(r2)) * inner(f, h) + float(profile.psi(r2)) * inner(f, g) * inner(g, h)
    return val


def sesquilinear_profile(spec: MetricSpec) -> RiemannProfile | None:
    """The (phi, psi) pair behind a spec, when it has one."""
    if isinstance(spec, FromRiemann):
        return spec.profile
    if isinstance(spec, FubiniStudy):
        return fubini_study_profile()
    return None


def induced_finsler(profile: RiemannProfile, dim: int, field: Field = Field.REAL,
                    n_probe: int = 64, seed: int = 0) -> FromRiemann:
    """The Finsler metric sign(v) sqrt|v| with v = sigma_g(h, h).

    Probes v on seeded samples and flags the spec (plus a RuntimeWarning)
    when any sampled v is negative, i.e. the profile is not positive
    semi-definite there.
    """
    domain = profile.domain.sqrt_image()
    spec = FromRiemann(dim, field, domain, profile)
    rng = np.random.default_rng(seed)
    for _ in range(n_probe):
        g = random_vector_with_norm(dim, field, sample_radius(domain, rng), rng)
        h = random_gaussian_vector(dim, field, rng)
        r2 = norm(g) ** 2
        v = float(profile.phi(r2)) * norm(h) ** 2 + float(profile.psi(r2)) * abs(inner(h, g)) ** 2
        if v < -1e-12:
            warnings.warn("sesquilinear profile takes negative values; induced "
                          "metric uses sign(v) sqrt|v|", RuntimeWarning, stacklevel=2)
            return FromRiemann(dim, field, domain, profile, indefinite_warning=True)
    return spec


# ---------------------------------------------------------------------------
# Pointwise criteria

class PDVerdict(enum.Enum):
    POSITIVE_DEFINITE = "PD"
    SEMI_DEFINITE_DEGENERATE = "PSD-degenerate"
    INDEFINITE = "indefinite"


def check_positive_definite(profile: RiemannProfile, r_samples: list[float],
                            tol: float = 1e-8) -> list[PDVerdict]:
    """Per-sample verdict from the pair (phi(r), phi(r) + r psi(r)).

    PD needs both strictly positive; the degenerate verdict means both are
    non-negative with at least one vanishing (within tol).
    """
    verdicts = []
    for r in r_samples:
        if not profile.domain.contains(r):
            raise OutOfDomainError(f"sample r = {r} is outside the profile domain")
        a = float(profile.phi(r))
        c = a + r * float(profile.psi(r))
        m = min(a, c)
        if m > tol:
            verdicts.append(PDVerdict.POSITIVE_DEFINITE)
        elif m >= -tol:
            verdicts.append(PDVerdict.SEMI_DEFINITE_DEGENERATE)
        else:
            verdicts.append(PDVerdict.INDEFINITE)
    return verdicts


def check_kaehler(profile: RiemannProfile, r_samples: list[float],
                  fd_step: float | None = None, tol: float | None = None) -> list[bool]:
    """Whether psi matches the centered finite difference of phi at each sample.

    Meaningful over the complex field, where it characterizes the Kaehler
    property of the invariant Hermitean metric.
    """
    out = []
    for r in r_samples:
        step = fd_step if fd_step is not None else max(1e-5, 1e-5 * r)
        if not (profile.domain.contains(r - step) and profile.domain.contains(r + step)):
            raise ValueError(f"sample r = {r} is closer than {step} to the domain boundary")
        d = (float(profile.phi(r + step)) - float(profile.phi(r - step))) / (2.0 * step)
        t = tol if tol is not None else 1e-6 * (1.0 + abs(float(profile.psi(r))))
        out.append(abs(float(profile.psi(r)) - d) <= t)
    return out


@dataclass(frozen=True)
class HomothetyVerdict:
    invariant: bool
    max_deviation: float
    witness: tuple[Vector, Vector] | None
    samples_used: int
    skipped: int


def check_homothety_invariance(spec: MetricSpec, alpha: float, n_samples: int = 200,
                               seed: int = 0, tol: float = 1e-10) -> HomothetyVerdict:
    """Test rho_{alpha g}(alpha h) = rho_g(h) on seeded samples.

    Samples whose scaled radius leaves the domain are skipped and counted;
    the check fails loudly if every sample is skipped.
    """
    if alpha <= 0.0 or alpha == 1.0:
        raise ValueError("alpha must be positive and != 1")
    rng = np.random.default_rng(seed)
    max_dev, witness, used, skipped = 0.0, None, 0, 0
    for _ in range(n_samples):
        r = sample_radius(spec.domain, rng)
        if not spec.domain.contains(alpha * r):
            skipped += 1
            continue
        g = random_vector_with_norm(spec.dim, spec.field, r, rng)
        h = random_gaussian_vector(spec.dim, spec.field, rng)
        base = eval_finsler(spec, g, h)
        mapped = eval_finsler(spec, Vector(alpha * g.entries, g.field),
                              Vector(alpha * h.entries, h.field))
        dev = abs(mapped - base)
        if dev > max_dev:
            max_dev, witness = dev, (g, h)
        used += 1
    if used == 0:
        raise ValueError("all samples skipped: alpha * R does not meet R on the sampler")
    ok = max_dev <= tol
    return HomothetyVerdict(ok, max_dev, None if ok else witness, used, skipped)


# ---------------------------------------------------------------------------
# Profile validation (sampling-based; profiles are black-box callables)

@dataclass(frozen=True)
class ProfileValidation:
    ok: bool
    worst_homogeneity: float
    worst_evenness: float
    checked: int


_T_FACTORS = (0.0, 0.5, 1.0, 2.0)


def _pq_grid(points: int) -> list[tuple[float, float]]:
    grid = []
    for rho in (0.3, 1.0, 3.0):
        for k in range(points):
            ang = 0.5 * math.pi * (k + 0.5) / points
            grid.append((rho * math.cos(ang), rho * math.sin(ang)))
    return grid


def validate_profile(spec: MetricSpec, grid_size: int = 4, seed: int = 0,
                     tol: float = 1e-9) -> ProfileValidation:
    """Sample the homogeneity/evenness hypotheses of the underlying profile.

    Families without a lambda-type profile are only checked for finite
    values on the grid.  Report-only: never raises on a violation.
    """
    radii = domain_grid(spec.domain, grid_size)
    worst_h, worst_e, checked = 0.0, 0.0, 0

    if isinstance(spec, FromLambda):
        fn, alpha = spec.profile.fn, spec.profile.alpha
        for r in radii:
            for p, q in _pq_grid(grid_size):
                base = float(fn(r, p, q))
                for t in _T_FACTORS:
                    if t == 0.0 and alpha <= 0.0:
                        continue
                    want = (t ** alpha) * base
                    got = float(fn(r, t * p, t * q))
                    worst_h = max(worst_h, abs(got - want) / (1.0 + abs(want)))
                for mirrored in (fn(r, -p, q), fn(r, p, -q)):
                    worst_e = max(worst_e, abs(float(mirrored) - base) / (1.0 + abs(base)))
                checked += 1
    elif isinstance(spec, FromNonSymLambda):
        fn = spec.profile.fn
        phases = (1.0,) if spec.field is Field.REAL else (1.0, complex(math.cos(2.1), math.sin(2.1)))
        for r in radii:
            for p0, q in _pq_grid(grid_size):
                for ph in phases:
                    p = p0 * ph
                    base = float(fn(r, p, q))
                    for t in _T_FACTORS:
                        want = t * base
                        worst_h = max(worst_h, abs(float(fn(r, t * p, t * q)) - want) / (1.0 + abs(want)))
                        worst_h = max(worst_h, abs(float(fn(r, t * p, -t * q)) - want) / (1.0 + abs(want)))
                    worst_e = max(worst_e, abs(float(fn(r, p, -q)) - base) / (1.0 + abs(base)))
                    checked += 1
    else:
        rng = np.random.default_rng(seed)
        for r in radii:
            g = random_vector_with_norm(spec.dim, spec.field, r, rng)
            for _ in range(grid_size):
                h = random_gaussian_vector(spec.dim, spec.field, rng)
                if not math.isfinite(eval_finsler(spec, g, h)):
                    worst_h = math.inf
                checked += 1

    return ProfileValidation(worst_h <= tol and worst_e <= tol, worst_h, worst_e, checked)


# ---------------------------------------------------------------------------
# JSON serialization (shared by the CLI and test fixtures)

def domain_to_json(domain: RadiusDomain) -> dict:
    return {
        "intervals": [[lo, hi if math.isfinite(hi) else None] for lo, hi in domain.intervals],
        "includes_zero": domain.includes_zero,
    }


def domain_from_json(obj: dict) -> RadiusDomain:
    ivs = tuple((float(lo), math.inf if hi is None else float(hi))
                for lo, hi in obj["intervals"])
    return RadiusDomain(ivs, bool(obj.get("includes_zero", False)))


def _require_expr(text: str | None, what: str) -> str:
    if text is None:
        raise ValueError(f"{what} is not expression-backed and cannot be serialized")
    return text


def spec_to_json(spec: MetricSpec) -> dict:
    params: dict = {}
    if isinstance(spec, FromLambda):
        params = {"lam": _require_expr(spec.profile.expr_text, "lambda profile"),
                  "alpha": spec.profile.alpha}
    elif isinstance(spec, FromTheta):
        params = {"theta": _require_expr(spec.profile.expr_text, "theta profile")}
    elif isinstance(spec, FromNonSymLambda):
        params = {"lam": _require_expr(spec.profile.expr_text, "non-symmetric profile")}
    elif isinstance(spec, FromRiemann):
        params = {"phi": _require_expr(spec.profile.phi_expr, "phi"),
                  "psi": _require_expr(spec.profile.psi_expr, "psi")}
    elif isinstance(spec, CongruenceInvariant):
        params = {"vartheta": _require_expr(spec.vartheta_expr, "vartheta")}
    elif isinstance(spec, AreaDim2):
        params = {"b": spec.b}
    elif isinstance(spec, ZeroExtended):
        params = {"b": spec.b, "inner": spec_to_json(spec.inner_spec)}
    elif not isinstance(spec, (Euclidean, FubiniStudy)):
        raise ValueError(f"family {spec.family!r} is not serializable")
    return {
        "family": spec.family,
        "dim": spec.dim,
        "field": spec.field.value,
        "domain": domain_to_json(spec.domain),
        "params": params,
    }


def spec_from_json(obj: dict) -> MetricSpec:
    family = obj["family"]
    dim = int(obj["dim"])
    field = Field(obj["field"])
    domain = domain_from_json(obj["domain"]) if "domain" in obj else RadiusDomain.positive()
    params = obj.get("params", {})
    if family == "euclidean":
        return Euclidean(dim, field, domain)
    if family == "fubini-study":
        return FubiniStudy(dim, field, domain)
    if family == "lambda":
        return FromLambda(dim, field, domain,
                          lambda_profile(params["lam"], float(params.get("alpha", 1.0))))
    if family == "theta":
        return FromTheta(dim, field, domain, theta_profile(params["theta"]))
    if family == "nonsym-lambda":
        return FromNonSymLambda(dim, field, domain,
                                nonsym_lambda_profile(params["lam"], field))
    if family == "riemann":
        profile = riemann_profile(params["phi"], params["psi"], domain.squared())
        return replace(induced_finsler(profile, dim, field), domain=domain)
    if family == "congruence-invariant":
        expr = expressions.parse(params["vartheta"], VARTHETA_VARS)
        return CongruenceInvariant(
            dim, field, domain,
            vartheta=lambda tau: expressions.evaluate(expr, {"tau": tau}),
            vartheta_expr=params["vartheta"])
    if family == "area":
        return AreaDim2(dim, field, domain, float(params.get("b", 1.0)))
    if family == "zero-extended":
        inner_spec = spec_from_json(params["inner"])
        return ZeroExtended(dim, field, domain, float(params["b"]), inner_spec)
    raise ValueError(f"unknown metric family {family!r}")
