import math

import numpy as np
import pytest

from finsler_iso import linalg as la
from finsler_iso import metrics as mm
from finsler_iso.errors import OutOfDomainError
from helpers import POS, battery, sample_pair

R, C = la.Field.REAL, la.Field.COMPLEX


# ---------------------------------------------------------------------------
# Radius domains

def test_domain_membership():
    d = mm.RadiusDomain(((0.0, 1.0), (2.0, math.inf)), includes_zero=True)
    assert d.contains(0.0) and d.contains(0.5) and d.contains(3.0)
    assert not d.contains(1.0) and not d.contains(1.5) and not d.contains(2.0)


def test_domain_rejects_overlap_and_negatives():
    with pytest.raises(ValueError):
        mm.RadiusDomain(((0.0, 2.0), (1.0, 3.0)))
    with pytest.raises(ValueError):
        mm.RadiusDomain(((-1.0, 2.0),))
    with pytest.raises(ValueError):
        mm.RadiusDomain(((2.0, 2.0),))


# ---------------------------------------------------------------------------
# Finsler evaluation

def test_euclidean_eval():
    spec = mm.euclidean(3)
    assert mm.eval_finsler(spec, la.vector([1, 0, 0]), la.vector([3, 4, 0])) == pytest.approx(5.0)


def test_fubini_study_eval():
    spec = mm.fubini_study(2)
    # sqrt(|h|^2/|g|^2 - |<h,g>|^2/|g|^4) at g=(1,0), h=(0,2)
    assert mm.eval_finsler(spec, la.vector([1, 0]), la.vector([0, 2])) == pytest.approx(2.0)


def test_zero_extension():
    spec = mm.zero_extended(3.0, mm.euclidean(2))
    assert mm.eval_finsler(spec, la.zero_vector(2), la.vector([1, 0])) == pytest.approx(3.0)
    assert mm.eval_finsler(spec, la.vector([1, 1]), la.vector([1, 0])) == pytest.approx(1.0)
    with pytest.raises(OutOfDomainError):
        mm.eval_finsler(mm.euclidean(2), la.zero_vector(2), la.vector([1, 0]))


def test_constant_theta_profile_gives_norm():
    spec = mm.FromTheta(3, R, POS, mm.ThetaProfile(lambda r, tau: 1.0))
    rng = np.random.default_rng(0)
    for _ in range(20):
        g, h = sample_pair(spec, rng)
        assert mm.eval_finsler(spec, g, h) == pytest.approx(la.norm(h), rel=1e-12)
    assert mm.eval_finsler(spec, la.vector([1, 0, 0]), la.zero_vector(3)) == 0.0


def test_out_of_domain_is_an_error():
    spec = mm.Euclidean(2, R, mm.RadiusDomain(((1.0, 2.0),)))
    with pytest.raises(OutOfDomainError):
        mm.eval_finsler(spec, la.vector([3, 0]), la.vector([1, 0]))


def test_area_requires_dim2():
    with pytest.raises(ValueError):
        mm.AreaDim2(3, R, POS, 1.0)


def test_area_value_is_parallelogram_area():
    spec = mm.area_dim2(2.0)
    rng = np.random.default_rng(1)
    for _ in range(50):
        g, h = sample_pair(spec, rng)
        det = abs(g.entries[0] * h.entries[1] - g.entries[1] * h.entries[0])
        assert mm.eval_finsler(spec, g, h) == pytest.approx(2.0 * det, rel=1e-10, abs=1e-12)


@pytest.mark.parametrize("field", [R, C])
def test_scaling_law(field):
    rng = np.random.default_rng(2)
    for name, spec in battery(3, field):
        for _ in range(40):
            g, h = sample_pair(spec, rng)
            base = mm.eval_finsler(spec, g, h)
            if name == "nonsym":
                t = float(rng.uniform(0.0, 3.0))
            else:
                t = rng.standard_normal()
                if field is C:
                    ang = rng.uniform(0, 2 * math.pi)
                    t = t * complex(math.cos(ang), math.sin(ang))
            got = mm.eval_finsler(spec, g, la.scale(t, h))
            assert got == pytest.approx(abs(t) * base, abs=1e-10 * (1 + abs(base)))


@pytest.mark.parametrize("field", [R, C])
def test_isometry_invariance_sampled(field):
    rng = np.random.default_rng(3)
    for name, spec in battery(3, field):
        for _ in range(50):
            g, h = sample_pair(spec, rng)
            u = la.random_unitary(3, field, int(rng.integers(2 ** 31)))
            a = mm.eval_finsler(spec, g, h)
            b = mm.eval_finsler(spec, la.apply_map(u, g), la.apply_map(u, h))
            assert abs(a - b) <= 1e-9 * (1 + abs(a)), name


# ---------------------------------------------------------------------------
# Sesquilinear forms

def test_sesquilinear_identity_profile():
    prof = mm.riemann_profile("1", "0")
    rng = np.random.default_rng(4)
    for _ in range(20):
        g = la.random_gaussian_vector(3, C, rng)
        f = la.random_gaussian_vector(3, C, rng)
        h = la.random_gaussian_vector(3, C, rng)
        assert mm.eval_sesquilinear(prof, g, f, h) == pytest.approx(la.inner(f, h), abs=1e-12)


def test_sesquilinear_fubini_study_values():
    prof = mm.fubini_study_profile()
    g = la.vector([1, 0])
    f = h = la.vector([0, 1])
    assert mm.eval_sesquilinear(prof, g, f, h) == pytest.approx(1.0)
    assert mm.eval_sesquilinear(prof, g, g, g) == pytest.approx(0.0, abs=1e-15)


def test_sesquilinear_conjugate_symmetry_and_linearity():
    prof = mm.congruence_invariant_riemann(0.7, -0.3)
    rng = np.random.default_rng(5)
    for _ in range(1000):
        g = la.random_gaussian_vector(3, C, rng)
        f1 = la.random_gaussian_vector(3, C, rng)
        f2 = la.random_gaussian_vector(3, C, rng)
        h = la.random_gaussian_vector(3, C, rng)
        a = mm.eval_sesquilinear(prof, g, f1, h)
        b = mm.eval_sesquilinear(prof, g, h, f1)
        assert abs(a - np.conj(b)) <= 1e-10 * (1 + abs(a))
        c = complex(rng.standard_normal(), rng.standard_normal())
        lhs = mm.eval_sesquilinear(prof, g, la.add(la.scale(c, f1), f2), h)
        rhs = c * a + mm.eval_sesquilinear(prof, g, f2, h)
        assert abs(lhs - rhs) <= 1e-10 * (1 + abs(rhs))


def test_induced_finsler_euclidean_profile():
    spec = mm.induced_finsler(mm.riemann_profile("1", "0"), 3)
    rng = np.random.default_rng(6)
    for _ in range(20):
        g, h = sample_pair(spec, rng)
        assert mm.eval_finsler(spec, g, h) == pytest.approx(la.norm(h), rel=1e-12)


def test_induced_finsler_negative_profile_signs_and_warns():
    with pytest.warns(RuntimeWarning):
        spec = mm.induced_finsler(mm.riemann_profile("-1", "0"), 2)
    assert spec.indefinite_warning
    assert mm.eval_finsler(spec, la.vector([1, 1]), la.vector([1, 0])) == pytest.approx(-1.0)


def test_induced_fubini_study_vanishes_on_the_line():
    # the generic phi/psi path cancels to eps before the sqrt, so the induced
    # value on the degenerate line carries sqrt(eps)-level noise
    spec = mm.induced_finsler(mm.fubini_study_profile(), 2)
    g = la.vector([1.3, 0.4])
    assert abs(mm.eval_finsler(spec, g, g)) <= 1e-7
    # the dedicated family evaluates through the canonical invariants and is exact
    assert abs(mm.eval_finsler(mm.fubini_study(2), g, g)) <= 1e-12


# ---------------------------------------------------------------------------
# Positive definiteness and the eigenvalue oracle

def test_pd_examples():
    pd = mm.check_positive_definite
    assert pd(mm.riemann_profile("1", "0"), [0.5, 1.0, 7.0]) == [mm.PDVerdict.POSITIVE_DEFINITE] * 3
    assert pd(mm.fubini_study_profile(), [0.5, 1.0, 2.0]) == [mm.PDVerdict.SEMI_DEFINITE_DEGENERATE] * 3
    assert pd(mm.riemann_profile("1", "-2/r"), [1.0]) == [mm.PDVerdict.INDEFINITE]


def gram_min_eigenvalue(profile, r2, dim, field, seed):
    """Independent oracle: smallest eigenvalue of the Gram matrix of sigma_g
    on a random orthonormal basis, with |g|^2 = r2."""
    u = la.random_unitary(dim, field, seed)
    cols = [la.Vector(np.ascontiguousarray(u.entries[:, i]), field) for i in range(dim)]
    rng = np.random.default_rng(seed + 1)
    g = la.random_vector_with_norm(dim, field, math.sqrt(r2), rng)
    m = np.array([[mm.eval_sesquilinear(profile, g, ci, cj) for cj in cols] for ci in cols])
    return float(np.linalg.eigvalsh(m).min())


@pytest.mark.parametrize("field", [R, C])
def test_pd_criterion_matches_eigenvalue_oracle(field):
    rng = np.random.default_rng(8)
    for case in range(40):
        dim = int(rng.integers(2, 7))
        r2 = float(rng.uniform(0.3, 3.0))
        if case % 4 == 0:
            s = float(rng.uniform(0.5, 2.0))
            profile = mm.congruence_invariant_riemann(s, -s)  # degenerate family
        else:
            a, b = rng.uniform(-2, 2, size=2)
            profile = mm.RiemannProfile(lambda r, a=a: a, lambda r, b=b: b)
        verdict = mm.check_positive_definite(profile, [r2])[0]
        eig = gram_min_eigenvalue(profile, r2, dim, field, 100 + case)
        if eig > 1e-8:
            assert verdict is mm.PDVerdict.POSITIVE_DEFINITE
        elif eig >= -1e-8:
            assert verdict is mm.PDVerdict.SEMI_DEFINITE_DEGENERATE
        else:
            assert verdict is mm.PDVerdict.INDEFINITE


# ---------------------------------------------------------------------------
# Kaehler criterion

def test_kaehler_examples():
    assert all(mm.check_kaehler(mm.fubini_study_profile(), [0.5, 1.0, 2.0, 5.0]))
    assert all(mm.check_kaehler(mm.riemann_profile("1", "0"), [1.0, 2.0]))
    assert not any(mm.check_kaehler(mm.riemann_profile("1", "1"), [1.0, 2.0]))


def test_kaehler_near_boundary_rejected():
    prof = mm.RiemannProfile(lambda r: r, lambda r: 1.0, mm.RadiusDomain(((1.0, 2.0),)))
    with pytest.raises(ValueError):
        mm.check_kaehler(prof, [1.0 + 1e-9])


def test_congruence_invariant_kaehler_iff_opposite():
    assert all(mm.check_kaehler(mm.congruence_invariant_riemann(1.3, -1.3), [0.5, 1.0, 3.0]))
    assert not any(mm.check_kaehler(mm.congruence_invariant_riemann(1.0, -0.5), [0.5, 1.0, 3.0]))


# ---------------------------------------------------------------------------
# Homothety invariance

def test_homothety_congruence_invariant_passes():
    v = mm.check_homothety_invariance(mm.norm_quotient(3), 2.0, 100, seed=0)
    assert v.invariant and v.max_deviation <= 1e-10 and v.witness is None


def test_homothety_log_periodic_theta_passes():
    prof = mm.theta_profile("(2+sin(2*3.141592653589793*log(r)/log(2)))/r")
    spec = mm.FromTheta(3, R, POS, prof)
    v = mm.check_homothety_invariance(spec, 2.0, 100, seed=1, tol=1e-10)
    assert v.invariant, v.max_deviation


def test_homothety_euclidean_fails_with_witness():
    v = mm.check_homothety_invariance(mm.euclidean(3), 2.0, 100, seed=2)
    assert not v.invariant and v.witness is not None
    g, h = v.witness
    # scaling doubles the value, so the worst deviation is |h| itself
    assert v.max_deviation == pytest.approx(la.norm(h), rel=1e-9)


def test_homothety_skips_and_rejects_bad_alpha():
    spec = mm.Euclidean(2, R, mm.RadiusDomain(((1.0, 2.0),)))
    with pytest.raises(ValueError):
        mm.check_homothety_invariance(spec, 10.0, 50, seed=0)  # everything skipped
    with pytest.raises(ValueError):
        mm.check_homothety_invariance(spec, 1.0)


# ---------------------------------------------------------------------------
# Profile validation

def test_validate_profile_pass():
    spec = mm.FromLambda(2, R, POS, mm.lambda_profile("sqrt(p^2+q^2)/r"))
    report = mm.validate_profile(spec)
    assert report.ok and report.worst_homogeneity <= 1e-9 and report.worst_evenness <= 1e-9


def test_validate_profile_evenness_violation():
    spec = mm.FromLambda(2, R, POS, mm.lambda_profile("p+q"))
    report = mm.validate_profile(spec)
    assert not report.ok and report.worst_evenness > 1e-3


def test_validate_profile_homogeneity_violation():
    spec = mm.FromLambda(2, R, POS, mm.lambda_profile("p^2+q^2", alpha=1.0))
    report = mm.validate_profile(spec)
    assert not report.ok and report.worst_homogeneity > 1e-3


def test_validate_nonsym_profile():
    spec = mm.FromNonSymLambda(2, C, POS, mm.nonsym_lambda_profile("sqrt(pre^2+pim^2+q^2)+pre", C))
    report = mm.validate_profile(spec)
    assert report.ok


# ---------------------------------------------------------------------------
# Seminorm null-space trichotomy

def classify_null_set(fn, r):
    grid = np.linspace(-2, 2, 9)
    zero_p_axis = all(abs(fn(r, p, 0.0)) < 1e-12 for p in grid)   # lambda vanishes on the p-axis
    zero_q_axis = all(abs(fn(r, 0.0, q)) < 1e-12 for q in grid)
    zero_generic = all(abs(fn(r, p, q)) < 1e-12 for p in grid for q in grid if p and q)
    if zero_generic and zero_p_axis and zero_q_axis:
        return "all"
    if zero_p_axis and not zero_generic:
        return "p-axis"
    if zero_q_axis and not zero_generic:
        return "q-axis"
    return "origin"


def test_seminorm_null_space_trichotomy():
    cases = {
        "q-axis": lambda r, p, q: abs(p),   # vanishes where p = 0
        "p-axis": lambda r, p, q: abs(q),
        "origin": lambda r, p, q: math.hypot(p, q),
    }
    for expected, fn in cases.items():
        for r in (0.5, 1.0, 2.0):
            assert classify_null_set(fn, r) == expected


# ---------------------------------------------------------------------------
# Serialization

def spec_cases():
    yield mm.euclidean(3, C)
    yield mm.fubini_study(2)
    yield mm.norm_quotient(3)
    yield mm.FromLambda(3, R, POS, mm.lambda_profile("sqrt(p^2+q^2)/r"))
    yield mm.FromTheta(3, R, POS, mm.theta_profile("1+cos(tau)^2"))
    yield mm.FromNonSymLambda(2, C, POS, mm.nonsym_lambda_profile("sqrt(pre^2+pim^2+q^2)+pre", C))
    yield mm.induced_finsler(mm.riemann_profile("1/r", "-1/(r^2)"), 3)
    yield mm.area_dim2(2.5)
    yield mm.zero_extended(1.5, mm.euclidean(2))


@pytest.mark.parametrize("spec", list(spec_cases()), ids=lambda s: s.family)
def test_spec_json_roundtrip(spec):
    back = mm.spec_from_json(mm.spec_to_json(spec))
    assert back.family == spec.family
    assert back.dim == spec.dim and back.field is spec.field
    rng = np.random.default_rng(9)
    for _ in range(20):
        g, h = sample_pair(spec, rng)
        assert mm.eval_finsler(back, g, h) == pytest.approx(
            mm.eval_finsler(spec, g, h), rel=1e-12, abs=1e-12)


def test_zero_extended_json_includes_zero():
    spec = mm.zero_extended(2.0, mm.euclidean(2))
    back = mm.spec_from_json(mm.spec_to_json(spec))
    assert mm.eval_finsler(back, la.zero_vector(2), la.vector([1, 0])) == pytest.approx(2.0)


def test_callable_profile_not_serializable():
    spec = mm.FromTheta(3, R, POS, mm.ThetaProfile(lambda r, tau: 1.0))
    with pytest.raises(ValueError):
        mm.spec_to_json(spec)
    with pytest.raises(ValueError):
        mm.spec_to_json(mm.Custom(3, R, POS, fn=lambda g, h: 0.0))


def test_congruence_invariant_family_b_zero():
    prof = mm.congruence_invariant_riemann(1.0, 0.0)
    rng = np.random.default_rng(14)
    for _ in range(20):
        g = la.random_gaussian_vector(3, C, rng)
        f = la.random_gaussian_vector(3, C, rng)
        h = la.random_gaussian_vector(3, C, rng)
        want = la.inner(f, h) / la.norm(g) ** 2
        assert mm.eval_sesquilinear(prof, g, f, h) == pytest.approx(want, rel=1e-12)
