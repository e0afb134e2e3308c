import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from s3verify import sphere_groups as sg
from s3verify import surface_family as sf

FAM = sf.SurfaceFamily()
seeds = st.integers(0, 2**32 - 1)
coef = st.floats(-3, 3, allow_nan=False)
six = st.lists(coef, min_size=6, max_size=6)
SINGULAR = (0, 0, 0, 0, 0, 1)


def live_param(seed, r=None):
    return sf.sample_near_singular(np.random.default_rng(seed), r)


@given(six, st.floats(0.1, 10) | st.floats(-10, -0.1))
def test_projective_normalisation_scale_invariant(a, s):
    assume(np.linalg.norm(a) > 1e-3)
    assert sf.same_projective_point(a, [s * x for x in a])


def test_projective_rejects_zero():
    with pytest.raises(sf.ParameterError):
        sf.normalize_projective([0] * 6)


def test_disc_radius_validated():
    with pytest.raises(sf.ParameterError):
        sf.FamilyParameter(SINGULAR, 1.5, 0.0)


def test_zeta_plateaus():
    assert sf.zeta(0.5) == 1.0 and sf.zeta(-3.0) == 1.0
    assert sf.zeta(1.0) == 0.0 and sf.zeta(7.0) == 0.0


@given(st.floats(-1, 2, allow_nan=False), st.floats(-1, 2, allow_nan=False))
def test_zeta_non_increasing(s, t):
    lo, hi = min(s, t), max(s, t)
    assert sf.zeta(lo) >= sf.zeta(hi)


@given(st.floats(0.51, 0.99))
def test_zeta_derivative_matches_difference(s):
    h = 1e-6
    fd = (sf.zeta(s + h) - sf.zeta(s - h)) / (2 * h)
    assert sf.zeta_prime(s) == pytest.approx(fd, abs=1e-6)


@given(st.floats(-1.5, 1.5, allow_nan=False))
def test_delta_even_and_supported(s):
    assert sf.delta(s) == sf.delta(-s)
    if abs(s) >= 1:
        assert sf.delta(s) == 0.0
    assert sf.delta(s) <= sf.DELTA0


def test_delta_small_near_rim():
    assert 0 < sf.delta(0.99) < 1e-25
    assert sf.delta(0.0) == sf.DELTA0


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_f_degree_zero_in_a(seed):
    p = live_param(seed)
    q = sf.FamilyParameter(tuple(-2.5 * x for x in p.a), p.r, p.theta)
    pts = sf.random_points_near_circle(np.random.default_rng(seed), p, 20)
    assert np.allclose(FAM.F_points(p, pts), FAM.F_points(q, pts), atol=1e-14)


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_chart_and_ambient_evaluation_agree(seed):
    rng = np.random.default_rng(seed)
    p = live_param(seed)
    pts = sf.random_points_near_circle(rng, p, 40)
    x1, x2, al = sg.r4_to_chart(pts)
    assert np.allclose(FAM.F(p, x1, x2, al), FAM.F_points(p, pts), atol=1e-12)


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_x_gradient_matches_difference(seed):
    rng = np.random.default_rng(seed)
    p = live_param(seed)
    b = p.affine
    t = rng.uniform(0, 2 * np.pi)
    rr = (1 - b[1] ** 2 - b[2] ** 2) / 8 * rng.uniform(0.05, 1.2)
    x1, x2, al = -b[2] + rr * np.cos(t), -b[1] + rr * np.sin(t), rng.uniform(0, 2 * np.pi)
    g1, g2 = FAM.grad_x_F(p, x1, x2, al)
    h = 1e-6
    d1 = (FAM.F(p, x1 + h, x2, al) - FAM.F(p, x1 - h, x2, al)) / (2 * h)
    d2 = (FAM.F(p, x1, x2 + h, al) - FAM.F(p, x1, x2 - h, al)) / (2 * h)
    assert g1 == pytest.approx(d1, abs=1e-6) and g2 == pytest.approx(d2, abs=1e-6)


@pytest.mark.parametrize("g", ["g1", "g2"])
@given(seed=seeds)
@settings(max_examples=40, deadline=None)
def test_equivariance(g, seed):
    p = live_param(seed)
    assert FAM.equivariance_residual(p, g, sample_points=50, seed=seed) < 1e-10


@pytest.mark.parametrize("g", ["g1", "g2"])
@given(seed=seeds)
@settings(max_examples=20, deadline=None)
def test_rho_symmetry(g, seed):
    p = live_param(seed)
    assert FAM.rho_symmetry_residual(p.a, g, n=100, seed=seed) < 1e-12


def test_equivariance_detects_wrong_parameter_map():
    p = live_param(5)
    pts = sf.random_points_near_circle(np.random.default_rng(0), p, 50)
    gp = sg.G1.apply(pts)
    wrong = sf.sigma_action("g1", p)  # the inverse is the correct map
    assert np.abs(FAM.F_points(wrong, pts) + FAM.F_points(p, gp)).max() > 1e-6


@given(seeds)
@settings(max_examples=20, deadline=None)
def test_parameter_action_relations(seed):
    p = sf.FamilyParameter.from_z(tuple(np.random.default_rng(seed).normal(size=6)), 0.3 + 0.4j)
    for word in ([2, 2], [1] * 12, [2, 1, 2, 1]):
        q = sf.sigma_action(word, p)
        assert sf.same_projective_point(q.a, p.a, tol=1e-10)
        assert abs(q.z - p.z) < 1e-12


@given(seeds)
@settings(max_examples=15, deadline=None)
def test_critical_curve_is_critical(seed):
    p = live_param(seed)
    curve = FAM.critical_curve(p, n_alpha=256)
    assert curve.residual < 1e-10
    assert curve.max_deviation < curve.kappa / 4
    g1, g2 = FAM.grad_x_F(p, curve.points[:, 0], curve.points[:, 1], curve.alpha)
    assert np.abs(np.hypot(g1, g2)).max() < 1e-10


@given(seeds)
@settings(max_examples=10, deadline=None)
def test_contraction_constant_below_half(seed):
    assert FAM.contraction_constant(live_param(seed)) < 0.5


def test_delta0_preflight():
    d0, c = sf.SurfaceFamily().validate_delta0(n_s=4)
    assert d0 == sf.DELTA0 and c < 0.5


def test_fixed_genera():
    assert sf.psi_genus(sf.FamilyParameter(SINGULAR, 0.0, 0.0))[0] == 2
    for k in range(8):
        assert sf.psi_genus(sf.FamilyParameter(SINGULAR, 1.0, k * np.pi / 4))[0] == 1


def test_rho_zero_branch():
    g, info = sf.psi_genus(sf.FamilyParameter((0.3, 0.2, 0.1, 0.5, 0.0, 1.0), 0.5, 0.0))
    assert g == 0 and info["branch"] == "rho_zero"


def test_restricted_function_needs_live_cutoff():
    with pytest.raises(sf.ParameterError):
        FAM.restricted_function(sf.FamilyParameter((1, 0, 0, 0, 0, 0)))


def test_restricted_function_of_singular_member():
    # at a = [0:...:0:1] the restricted function is delta0 * cos(3 alpha) at z = 0
    f = FAM.restricted_function(sf.FamilyParameter(SINGULAR, 0.0, 0.0))
    a = np.linspace(0, 2 * np.pi, 13)
    assert np.allclose(f(a), sf.DELTA0 * np.cos(3 * a), atol=1e-15)


@pytest.mark.parametrize("a,kind", [
    (SINGULAR, "singular_pair"),
    ((0, 0, 0, 1, 0, 0), "great_sphere"),
    ((2, 1, 0, 0, 0, 0), "empty"),
    ((0.5, 1, 0, 0, 0, 0), "plane_section"),
    ((0.3, 0, 0, 0, 0, 1), "quadric"),
    ((-5, 0, 0, 0, 0, 1), "empty"),
])
def test_phi5_classification(a, kind):
    assert sf.classify_phi5(a).kind == kind


def test_genus_by_zero_count():
    from s3verify import trigpoly as tp

    for k, g in ((1, 0), (2, 1), (3, 2)):
        sd = tp.signed_zeros(tp.TrigPoly((0.0,) * k + (1.0,), (0.0,) * k))
        assert sf.genus_by_zeros(sd) == g


@given(seeds)
@settings(max_examples=200, deadline=None)
def test_near_singular_sampler_keeps_rho_alive(seed):
    assert not FAM.rho_identically_zero(live_param(seed).a)
