import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from s3verify import links_config as lc
from s3verify import sphere_groups as sg
from s3verify import surface_family as sf
from s3verify import trigpoly as tp
from s3verify.suites import four_zero_boundary_parameters, random_degree_two_configs

seeds = st.integers(0, 2**32 - 1)
SINGULAR = (0, 0, 0, 0, 0, 1)


def config_for(seed):
    return random_degree_two_configs(np.random.default_rng(seed), 1)[0]


def test_cos2_configuration():
    c = lc.config_from_function(tp.signed_zeros(tp.TrigPoly((0.0, 0.0, 1.0), (0.0, 0.0))))
    assert c.canonical().distance(lc.Config4((np.pi / 4, 3 * np.pi / 4, 5 * np.pi / 4, 7 * np.pi / 4),
                                             (0.0, np.pi), (np.pi / 2, 3 * np.pi / 2))) < 1e-12
    assert tp.circle_distance(lc.p_sum(c), 0.0) < 1e-12


def test_wrong_zero_count():
    with pytest.raises(lc.ConfigError) as err:
        lc.config_from_function(tp.signed_zeros(tp.TrigPoly((0.0, 1.0), (0.0,))))
    assert err.value.code == "ZERO_COUNT"


def test_adjacent_labels_flagged():
    c = lc.Config4((0.0, 1.0, 2.0, 3.0), (0.5, 1.5), (2.5, 3.0 + (2 * np.pi - 3.0) / 2))
    assert "non_adjacent" in c.violations()


@given(seeds)
@settings(max_examples=100, deadline=None)
def test_random_configs_satisfy_invariants(seed):
    c = config_for(seed)
    assert c.is_valid()
    assert tp.circle_distance(sum(c.mu_plus), np.pi + sum(c.mu_minus)) < 1e-9


@pytest.mark.parametrize("g", ["g1", "g2"])
@given(seed=seeds)
@settings(max_examples=50, deadline=None)
def test_action_preserves_validity_and_matches_psum(g, seed):
    c = config_for(seed)
    moved = lc.hat_rho_action(g, c)
    assert moved.is_valid()
    assert tp.circle_distance(lc.p_sum(moved), lc.bar_rho(g, lc.p_sum(c))) < 1e-12


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_action_relations(seed):
    c = config_for(seed)
    assert lc.hat_rho_action(["g2", "g2"], c).distance(c) < 1e-12
    assert lc.hat_rho_action(["g1"] * 12, c).distance(c) < 1e-12
    lhs = lc.hat_rho_action(["g2", "g1", "g2", "g1"], c)
    assert lhs.distance(c) < 1e-12


def test_standard_hopf_link():
    assert abs(lc.linking_number(*lc.standard_hopf_link())) == 1


def test_double_wrap_and_quadrature():
    a, b = lc.torus_knot_pair()
    lk = lc.linking_number(a, b)
    assert abs(lk) == 2
    assert abs(lc.gauss_integral(a, b) - lk) < 1e-3


def test_unlinked_circles():
    a, b = lc.standard_hopf_link(64)
    far = lc.PolylineLoop(b.points * 0.05 + np.array([1.0, 0, 0, 0]))
    near = lc.PolylineLoop(a.points * 0.05 + np.array([-1.0, 0, 0, 0]))
    assert lc.linking_number(far, near) == 0


def test_touching_loops_rejected():
    a, _ = lc.standard_hopf_link(32)
    with pytest.raises(lc.LinkError) as err:
        lc.linking_number(a, lc.PolylineLoop(a.points[::-1].copy()))
    assert err.value.code == "INTERSECT"


def test_orientation_reversal_flips_sign():
    a, b = lc.standard_hopf_link(64)
    rev = lc.PolylineLoop(b.points[::-1].copy())
    assert lc.linking_number(a, b) == -lc.linking_number(a, rev)
    assert lc.linking_number(a, b) == lc.linking_number(b, a)


@given(seeds)
@settings(max_examples=20, deadline=None)
def test_linking_invariant_under_rotation(seed):
    R = sg.random_rotation(np.random.default_rng(seed))
    a, b = lc.standard_hopf_link(64)
    ra, rb = lc.PolylineLoop(R.apply(a.points)), lc.PolylineLoop(R.apply(b.points))
    assert lc.linking_number(ra, rb) == lc.linking_number(a, b)


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_configuration_links_are_hopf(seed):
    c = config_for(seed)
    plus, minus = lc.hopf_link_pl(c, 32)
    lk = lc.linking_number(plus, minus)
    assert abs(lk) == 1
    assert abs(lc.gauss_integral(plus, minus, quad=8) - lk) < 2e-2


def test_upsilon_link_of_singular_boundary_member():
    u = lc.upsilon_link(sf.FamilyParameter(SINGULAR, 1.0, 0.7))
    assert abs(u.linking) == 1
    assert u.min_plus > 0 > u.max_minus


def test_upsilon_link_needs_cutoff():
    with pytest.raises(sf.ParameterError):
        lc.upsilon_link(sf.FamilyParameter((0.1, 0.2, 0, 0.3, 0, 1), 1.0, 0.0))


def test_theta_map_boundary_only():
    with pytest.raises(sf.ParameterError):
        lc.theta_map(sf.FamilyParameter(SINGULAR, 0.5, 0.0))
    assert lc.theta_map(sf.FamilyParameter(SINGULAR, 1.0, 0.5)) == pytest.approx(2 * np.pi - 0.5)


def test_boundary_members_track_theta_and_symmetry():
    fam = sf.SurfaceFamily()
    pairs = four_zero_boundary_parameters(np.random.default_rng(11), 4, fam)
    assert len(pairs) == 4
    for p, c in pairs:
        assert tp.circle_distance(lc.p_sum(c), lc.theta_map(p)) < 1e-3
        for g in ("g1", "g2"):
            moved = lc.member_config(sf.sigma_action(g, p), fam)
            assert moved.distance(lc.hat_rho_action(g, c)) < 1e-9


def test_loop_export(tmp_path):
    a, b = lc.standard_hopf_link(16)
    lc.write_loops_csv(tmp_path / "l.csv", [a, b])
    lc.write_loops_obj(tmp_path / "l.obj", [a, b])
    rows = (tmp_path / "l.csv").read_text().splitlines()
    assert len(rows) == 1 + 32
    assert (tmp_path / "l.obj").read_text().count("\nl ") + (tmp_path / "l.obj").read_text().startswith("l ") >= 2
