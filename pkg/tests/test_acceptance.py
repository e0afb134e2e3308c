"""Acceptance criteria, one test each.

Every test prints one ``ACCEPTANCE <n> PASS|FAIL`` line (also collected in the
terminal summary). Tolerances, sample sizes and runtime budgets are pinned here
and do not follow the package defaults.
"""
import json
import shutil
import subprocess
import sys
import time

import numpy as np

from conftest import ACCEPTANCE_LINES
from s3verify import level_topology as lt
from s3verify import surface_family as sf
from s3verify.config import RunConfig
from s3verify.suites import SUITE_BUILDERS

SEED = 7

GROUP_RELATION_TOL = 1e-12
EQUIVARIANCE_TOL = 1e-10
RHO_SYMMETRY_TOL = 1e-12
ZERO_SUM_TOL = 1e-8
PROXIMITY_TOL = 1e-3
WITNESS_RESIDUAL_TOL = 1e-10
FACTOR_FLOOR = 1e-3
SIGMA_MIN_FLOOR = 1e-3
SIGN_LAW_TOL = 1e-10

PINNED_SIZES = {
    "equivariance_params": 1000,  # two points per parameter: 2000 triples
    "trig_random": 1000,
    "trig_full_order": 200,
    "boundary_scan": 1000,
    "interior_scan": 1000,
    "rhozero_scan": 1000,
    "mesh_grid": 40,
    "mesh_resolution": 256,
    "quadric_samples": 10000,
    "proximity_params": 100,
}
RHOZERO_MESHES = 100
RHOZERO_MESH_RESOLUTION = 64



def pinned_config() -> RunConfig:
    cfg = RunConfig(seed=SEED)
    cfg.tolerances.update(group_relation=GROUP_RELATION_TOL, equivariance=EQUIVARIANCE_TOL,
                          rho_symmetry=RHO_SYMMETRY_TOL, zero_sum=ZERO_SUM_TOL, proximity=PROXIMITY_TOL,
                          witness_residual=WITNESS_RESIDUAL_TOL, factor_floor=FACTOR_FLOOR,
                          sigma_min=SIGMA_MIN_FLOOR, sign_law=SIGN_LAW_TOL)
    cfg.sizes.update(PINNED_SIZES)
    return cfg


def run_checks(suite: str, names: list[str]):
    """Run the named checks of one suite; returns reports by id and wall time in seconds."""
    checks = {c.__name__: c for c in SUITE_BUILDERS[suite](pinned_config())}
    t0 = time.perf_counter()
    reports = [checks[n]() for n in names]
    return {r.check_id: r for r in reports}, time.perf_counter() - t0


def verdict(number: int, title: str, failures: list[str], elapsed: float | None = None, budget: float | None = None):
    if budget is not None and elapsed > budget:
        failures = failures + [f"runtime {elapsed:.1f}s exceeds {budget:g}s"]
    timing = "" if elapsed is None else f" [{elapsed:.2f}s]"
    status = "FAIL" if failures else "PASS"
    line = f"ACCEPTANCE {number} {status}: {title}{timing}" + (f" -- {'; '.join(failures)}" if failures else "")
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert not failures, line


def test_criterion_1_group_orders():
    reps, dt = run_checks("groups", ["d24_order", "q48_order", "g96_order", "d24_relations", "h_relations"])
    bad = []
    for cid, order in (("groups/d24-order", 24), ("groups/q48-order", 48), ("groups/g96-order", 96)):
        if reps[cid].measured != order:
            bad.append(f"{cid} = {reps[cid].measured}")
    for cid in ("groups/d24-relations", "groups/h-relations"):
        if not reps[cid].measured < GROUP_RELATION_TOL:
            bad.append(f"{cid} residual {reps[cid].measured:.2e}")
    verdict(1, "group orders 24/48/96 and relations", bad, dt, 1.0)


def test_criterion_2_equivariance():
    # one closure pair per generator, sharing names, so run the whole suite
    checks = SUITE_BUILDERS["equivariance"](pinned_config())
    t0 = time.perf_counter()
    reps = {r.check_id: r for r in (c() for c in checks)}
    dt = time.perf_counter() - t0
    bad = []
    for g in ("g1", "g2"):
        f, r = reps[f"equivariance/F-{g}"], reps[f"equivariance/rho-{g}"]
        if f.detail["triples"] < 1000 or not f.measured < EQUIVARIANCE_TOL:
            bad.append(f"F-{g} residual {f.measured:.2e} over {f.detail['triples']} triples")
        if not r.measured < RHO_SYMMETRY_TOL:
            bad.append(f"rho-{g} residual {r.measured:.2e}")
    verdict(2, "equivariance of F and rho symmetry", bad, dt, 10.0)


def test_criterion_3_trig_polynomials():
    reps, dt = run_checks("trigpoly", ["order_bound", "zero_sum", "zminus_branch", "halving"])
    bad = []
    if reps["trigpoly/order-bound"].measured > 12:
        bad.append(f"order {reps['trigpoly/order-bound'].measured}")
    if reps["trigpoly/zero-sum"].status != "PASS" or not reps["trigpoly/zero-sum"].measured < ZERO_SUM_TOL:
        bad.append(f"zero sum {reps['trigpoly/zero-sum'].measured:.2e}")
    for cid in ("trigpoly/zminus-branch", "trigpoly/zero-sum-halving"):
        if not reps[cid].measured < ZERO_SUM_TOL:
            bad.append(f"{cid} {reps[cid].measured:.2e}")
    verdict(3, "trig-poly order bound, zero sum, half invariant", bad, dt, 5.0)


def test_criterion_4_genus():
    names = ["fixed_interior", "fixed_boundary", "boundary_scan", "interior_scan", "rhozero_scan", "mesh_regression"]
    reps, dt = run_checks("genus", names)
    bad = []
    if reps["genus/fixed-center"].measured != 2:
        bad.append(f"center genus {reps['genus/fixed-center'].measured}")
    if reps["genus/fixed-boundary"].measured != [1] * 8:
        bad.append(f"boundary genera {reps['genus/fixed-boundary'].measured}")
    for kind, bound in (("boundary", 1), ("interior", 2), ("rhozero", 0)):
        r = reps[f"genus/{kind}-scan"]
        if r.detail["records"] != 1000 or r.measured["errors"] or r.measured["max_genus"] > bound:
            bad.append(f"{kind} scan {r.measured}")
    mesh = reps["genus/mesh-regression"]
    if mesh.measured["members"] != 40 or mesh.measured["failures"] or mesh.detail["resolution"] != 256:
        bad.append(f"mesh regression {mesh.measured} {mesh.detail['failed']}")
    # the rhozero scan gets genus 0 from the zero-count rule; mesh those members directly as well
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    meshed = []
    for _ in range(RHOZERO_MESHES):
        try:
            meshed.append(lt.genus(lt.member_levelset(sf.sample_rho_zero(rng), RHOZERO_MESH_RESOLUTION)))
        except lt.ExtractionError as err:
            if err.code != "EMPTY_LEVELSET":
                bad.append(f"rhozero mesh error {err.code}")
    dt += time.perf_counter() - t0
    if not meshed or max(meshed) != 0:
        bad.append(f"rhozero mesh genera {sorted(set(meshed))} over {len(meshed)} nonempty members")
    verdict(4, "genus values, scans and mesh regression at resolution 256", bad, dt, 600.0)


def test_criterion_5_proximity():
    reps, dt = run_checks("links", ["proximity"])
    r = reps["links/p-m-proximity"]
    bad = [] if r.status == "PASS" and r.measured <= PROXIMITY_TOL and r.detail["params"] == 100 else \
        [f"max distance {r.measured:.2e} over {r.detail['params']} parameters"]
    verdict(5, "half invariant tracks -theta on 100 boundary parameters", bad, dt, 30.0)


def test_criterion_6_critical_points():
    reps, dt = run_checks("genus", ["count_bound", "special_values", "oracle_agreement"])
    bad = []
    if reps["genus/critical-count-bound"].measured > 9:
        bad.append(f"count {reps['genus/critical-count-bound'].measured}")
    special = reps["genus/critical-count-special"].measured
    if (special["b=0"], special["b=(0,0,10)"], special["oracle b=0"], special["oracle b=(0,0,10)"]) != (1, 3, 1, 3):
        bad.append(f"special values {special}")
    if reps["genus/critical-count-oracle"].measured != 0:
        bad.append(f"oracle mismatches {reps['genus/critical-count-oracle'].detail['mismatches']}")
    verdict(6, "critical point bound, special values, descent oracle", bad, dt, 30.0)


def test_criterion_7_witnesses():
    names = ["count", "residual", "factors", "sigma_v", "orbits", "sign_laws", "measured_table"]
    reps, dt = run_checks("witnesses", names)
    bad = []
    c = reps["witnesses/count"].measured
    if c["points"] != 336:
        bad.append(f"{c['points']} points")
    if not reps["witnesses/v-residual"].measured < WITNESS_RESIDUAL_TOL:
        bad.append(f"v residual {reps['witnesses/v-residual'].measured:.2e}")
    six, four = reps["witnesses/factor-floor"].measured.values()
    if not (six > FACTOR_FLOOR and four > FACTOR_FLOOR):
        bad.append(f"min |conj z1^6 + z2^6| = {six:.3e}, min |conj z1^4 + z2^4| = {four:.3e}, floor {FACTOR_FLOOR:g}")
    if not reps["witnesses/v-gradients"].measured > SIGMA_MIN_FLOOR:
        bad.append(f"sigma_min {reps['witnesses/v-gradients'].measured:.2e}")
    if reps["witnesses/orbits"].measured != 7:
        bad.append(f"{reps['witnesses/orbits'].measured} orbits")
    if not reps["witnesses/sign-laws"].measured < SIGN_LAW_TOL:
        bad.append(f"sign-law residual {reps['witnesses/sign-laws'].measured:.2e}")
    if reps["witnesses/sign-table"].status != "PASS":
        bad.append("measured sign table differs")
    verdict(7, "336 common zeros, factors, gradients, 7 orbits, sign tables", bad, dt, 10.0)


def test_criterion_8_links():
    reps, dt = run_checks("links", ["upsilon_links", "standard", "sum_relation"])
    bad = []
    u = reps["links/upsilon"]
    if u.status != "PASS":
        bad.append(f"upsilon links {u.measured} {u.detail['failed']}")
    if abs(reps["links/standard-hopf"].detail["signed"]) != 1:
        bad.append(f"standard Hopf link {reps['links/standard-hopf'].detail['signed']}")
    s = reps["links/sum-relation"]
    if s.status != "PASS":
        bad.append(f"sum relation {s.measured:.2e}, invalid {s.detail['invalid']}")
    verdict(8, "family Hopf links, standard Hopf link, label sum relation", bad, dt, 30.0)


def _verify_all(path):
    exe = shutil.which("s3verify")
    cmd = [exe] if exe else [sys.executable, "-m", "s3verify"]
    subprocess.run(cmd + ["verify", "all", "--seed", str(SEED), "--out", str(path)], check=False, timeout=3000)
    with open(path) as fh:
        report = json.load(fh)
    report.pop("timing")
    return report


def test_criterion_9_determinism(tmp_path):
    t0 = time.perf_counter()
    first = _verify_all(tmp_path / "a.json")
    second = _verify_all(tmp_path / "b.json")
    dt = time.perf_counter() - t0
    bad = []
    if first != second:
        diff = [a["id"] for a, b in zip(first["checks"], second["checks"]) if a != b]
        bad.append(f"reports differ in {diff or 'header'}")
    if not first["checks"]:
        bad.append("empty report")
    verdict(9, f"verify all --seed {SEED} twice gives identical reports ({len(first['checks'])} checks)", bad, dt)
