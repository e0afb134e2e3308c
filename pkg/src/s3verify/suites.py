"""Verification suites: named batteries of checks producing JSON-ready reports."""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import links_config as lc
from . import level_topology as lt
from . import sphere_groups as sg
from . import surface_family as sf
from . import trigpoly as tp
from . import witness as wf
from .config import RunConfig

SCHEMA_VERSION = 1
SUITES = ("groups", "equivariance", "trigpoly", "genus", "witnesses", "links")


@dataclass
class CheckReport:
    check_id: str
    status: str  # PASS | FAIL | SKIP
    measured: Any
    tolerance: Any
    detail: dict = field(default_factory=dict)
    runtime_ms: float = 0.0

    @property
    def anchor(self) -> str:
        return self.check_id

    def to_dict(self) -> dict:
        out = {"id": self.check_id, "status": self.status, "measured": _jsonable(self.measured),
               "tolerance": _jsonable(self.tolerance), "anchor": self.anchor}
        if self.detail:
            out["detail"] = _jsonable(self.detail)
        return out


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        v = float(x)
        return v if np.isfinite(v) else repr(v)
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def at_most(check_id, measured, tol, **detail) -> CheckReport:
    return CheckReport(check_id, "PASS" if measured <= tol else "FAIL", measured, tol, detail)


def at_least(check_id, measured, floor, **detail) -> CheckReport:
    return CheckReport(check_id, "PASS" if measured > floor else "FAIL", measured, {"greater_than": floor}, detail)


def equals(check_id, measured, expected, **detail) -> CheckReport:
    return CheckReport(check_id, "PASS" if measured == expected else "FAIL", measured, {"equals": expected}, detail)


def _family(cfg: RunConfig) -> sf.SurfaceFamily:
    return sf.SurfaceFamily(cfg.delta0)


# ---------------------------------------------------------------- groups


def groups_suite(cfg: RunConfig) -> list[Callable[[], CheckReport]]:
    tol = cfg.tol("group_relation")

    def d24_order():
        return equals("groups/d24-order", len(sg.group_closure([sg.G1, sg.G2])), 24)

    def q48_order():
        return equals("groups/q48-order", len(sg.group_closure(sg.hat_generators())), 48)

    def g96_order():
        return equals("groups/g96-order", len(sg.group_closure(sg.tilde_generators())), 96)

    def d24_relations():
        pts = sg.random_unit_quaternions(cfg.rng("groups/d24-relations"), 64)
        rep = sg.verify_relations([sg.G1, sg.G2], sg.D24_RELATIONS, points=pts)
        return at_most("groups/d24-relations", rep.max_residual, tol)

    def h_relations():
        pts = sg.random_h_points(cfg.rng("groups/h-relations"), 64)
        rep = sg.verify_relations(sg.h_generators(), list(sg.H_RELATIONS.values()), action="right", points=pts)
        return at_most("groups/h-relations", rep.max_residual, tol,
                       per_relation=dict(zip(sg.H_RELATIONS, np.maximum(rep.matrix_residuals, rep.point_residuals))))

    def free_action():
        grp = sg.group_closure(sg.tilde_generators())
        margin = sg.free_action_margin(grp, sg.random_tilde_points(cfg.rng("groups/free-action"), 200))
        return at_least("groups/free-action", margin, 1e-6)

    return [d24_order, q48_order, g96_order, d24_relations, h_relations, free_action]


# ---------------------------------------------------------------- equivariance


def random_family_parameters(rng: np.random.Generator, n: int, delta0: float) -> list[sf.FamilyParameter]:
    """Half with a live cut-off term, half generic (mostly rho = 0)."""
    out = []
    for i in range(n):
        if i % 2 == 0:
            out.append(sf.sample_near_singular(rng, None, delta0))
        else:
            a = rng.normal(size=6)
            z = np.sqrt(rng.uniform()) * np.exp(1j * rng.uniform(0, 2 * np.pi))
            out.append(sf.FamilyParameter.from_z(tuple(a), z))
    return out


def equivariance_suite(cfg: RunConfig) -> list[Callable[[], CheckReport]]:
    fam = _family(cfg)
    checks = []
    for g in ("g1", "g2"):
        def f_equivariance(g=g):
            cid = f"equivariance/F-{g}"
            rng = cfg.rng(cid)
            params = random_family_parameters(rng, cfg.size("equivariance_params"), cfg.delta0)
            worst = 0.0
            for p in params:
                pts = sf.random_points_near_circle(rng, p, 2)
                worst = max(worst, fam.equivariance_residual(p, g, points=pts))
            return at_most(cid, worst, cfg.tol("equivariance"), triples=2 * len(params))

        def rho_symmetry(g=g):
            cid = f"equivariance/rho-{g}"
            rng = cfg.rng(cid)
            worst = 0.0
            for k in range(cfg.size("rho_params")):
                p = sf.sample_near_singular(rng, None, cfg.delta0)
                worst = max(worst, fam.rho_symmetry_residual(p.a, g, n=200, seed=k))
            return at_most(cid, worst, cfg.tol("rho_symmetry"))

        checks += [f_equivariance, rho_symmetry]
    return checks


# ---------------------------------------------------------------- trig polynomials


def random_trigpoly(rng: np.random.Generator, k: int) -> tp.TrigPoly:
    return tp.TrigPoly(tuple(rng.normal(size=k + 1)), tuple(rng.uniform(0, 2 * np.pi, k)))


def full_order_trigpoly(rng: np.random.Generator, k: int) -> tp.TrigPoly:
    """Degree-k polynomial with 2k distinct simple zeros, built from its roots."""
    while True:
        roots = np.sort(rng.uniform(0, 2 * np.pi, 2 * k))
        gaps = np.diff(np.concatenate([roots, roots[:1] + 2 * np.pi]))
        if gaps.min() > 0.05:
            return tp.TrigPoly.from_roots(roots, scale=float(rng.uniform(0.5, 2.0)))


def trigpoly_suite(cfg: RunConfig) -> list[Callable[[], CheckReport]]:
    ztol = cfg.tol("zero_sum")

    def order_bound():
        rng = cfg.rng("trigpoly/order-bound")
        orders = [tp.companion_zeros(random_trigpoly(rng, 6)).total_order for _ in range(cfg.size("trig_random"))]
        return at_most("trigpoly/order-bound", max(orders), 12, samples=len(orders))

    def zero_sum():
        rng = cfg.rng("trigpoly/zero-sum")
        worst, bad_order = 0.0, 0
        for i in range(cfg.size("trig_full_order")):
            T = full_order_trigpoly(rng, 1 + i % 6)
            zs = tp.zero_sum(T)
            bad_order += int(not zs.full_order)
            worst = max(worst, float(tp.circle_distance(zs.value, -2 * T.theta[-1])))
        rep = at_most("trigpoly/zero-sum", worst, ztol, not_full_order=bad_order)
        if bad_order:
            rep.status = "FAIL"
        return rep

    def zminus_branch():
        rng = cfg.rng("trigpoly/zminus-branch")
        worst = 0.0
        for i in range(cfg.size("trig_full_order")):
            T = full_order_trigpoly(rng, 1 + i % 6)
            value = tp.zero_sum_minus(tp.signed_zeros(T))
            for form in (T, T.with_negated_leading()):
                worst = max(worst, float(tp.circle_distance(value, tp.zero_sum_minus_formula(form))))
        return at_most("trigpoly/zminus-branch", worst, ztol)

    def halving():
        rng = cfg.rng("trigpoly/zero-sum-halving")
        worst = 0.0
        polys = [random_trigpoly(rng, 6) for _ in range(cfg.size("trig_random"))]
        polys += [full_order_trigpoly(rng, 1 + i % 6) for i in range(cfg.size("trig_full_order"))]
        for T in polys:
            sd = tp.signed_zeros(T)
            if sd.count == 0:
                continue
            worst = max(worst, float(tp.circle_distance(tp.zero_sum_of(sd.zeros), 2 * tp.zero_sum_minus(sd))))
        return at_most("trigpoly/zero-sum-halving", worst, ztol, samples=len(polys))

    def sampled_route():
        rng = cfg.rng("trigpoly/sampled-route")
        worst, mismatches = 0.0, 0
        for _ in range(cfg.size("trig_sampled")):
            T = random_trigpoly(rng, int(rng.integers(1, 7)))
            a = tp.signed_zeros(T)
            try:
                b = tp.zeros_of_smooth(T)
            except tp.ZeroResolutionError:
                mismatches += 1
                continue
            if a.zeros.zeros and len(a.zeros) == len(b.zeros) and np.array_equal(a.zeros.orders, b.zeros.orders):
                worst = max(worst, float(tp.circle_distance(a.zeros.angles, b.zeros.angles).max()))
            elif len(a.zeros) != len(b.zeros):
                mismatches += 1
        rep = at_most("trigpoly/sampled-route", worst, ztol, mismatches=mismatches)
        if mismatches:
            rep.status = "FAIL"
        return rep

    return [order_bound, zero_sum, zminus_branch, halving, sampled_route]


# ---------------------------------------------------------------- genus and scans


def scan_parameters(kind: str, n: int, rng: np.random.Generator, delta0: float) -> list[sf.FamilyParameter]:
    out = []
    for i in range(n):
        if kind == "rhozero":
            out.append(sf.sample_rho_zero(rng, delta0))
            continue
        boundary = kind == "boundary"
        pick = i % 5
        if pick == 4:
            a = rng.normal(size=6)
            r = 1.0 if boundary else float(rng.uniform())
            out.append(sf.FamilyParameter(tuple(a), r, float(rng.uniform(0, 2 * np.pi))))
        elif boundary and pick == 3:
            out.append(sf.sample_four_zero_candidate(rng, delta0))
        elif pick == 3:
            # close to the singular member, where six zeros occur
            out.append(sf.sample_near_singular(rng, float(rng.uniform(0, 0.5)), delta0, radius_max=0.3,
                                              spread=float(0.5 * np.sqrt(delta0))))
        else:
            r = 1.0 if boundary else float(rng.uniform()) * 0.999
            out.append(sf.sample_near_singular(rng, r, delta0, spread=float(rng.uniform(0.2, 1.2))))
    if kind not in ("boundary", "interior", "rhozero"):
        raise ValueError(f"unknown scan kind {kind!r}")
    return out


def scan_record(args) -> dict:
    index, param, delta0 = args
    fam = sf.SurfaceFamily(delta0)
    rec = {"index": index, "param": param.to_dict()}
    try:
        g, info = fam.psi_genus(param)
        rec.update({"genus": g, "branch": info["branch"], "zero_count": info["zero_count"]})
        if "orders" in info:
            rec["orders"] = info["orders"]
    except Exception as err:  # a failure is recorded, the scan continues
        rec["error"] = {"type": type(err).__name__, "code": getattr(err, "code", None), "message": str(err)}
    return rec


def run_scan(kind: str, n: int, cfg: RunConfig, rng: np.random.Generator | None = None) -> list[dict]:
    rng = cfg.rng(f"scan/{kind}") if rng is None else rng
    params = scan_parameters(kind, n, rng, cfg.delta0)
    jobs = [(i, p, cfg.delta0) for i, p in enumerate(params)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            return list(pool.map(scan_record, jobs, chunksize=16))
    return [scan_record(j) for j in jobs]


SCAN_BOUNDS = {"boundary": (1, 4), "interior": (2, 6), "rhozero": (0, 0)}


def scan_summary(kind: str, records: list[dict]) -> dict:
    g_max, z_max = SCAN_BOUNDS[kind]
    ok = [r for r in records if "error" not in r]
    genera = [r["genus"] for r in ok]
    zeros = [r["zero_count"] for r in ok if r["zero_count"] is not None]
    hist: dict[int, int] = {}
    for g in genera:
        hist[g] = hist.get(g, 0) + 1
    return {
        "kind": kind,
        "records": len(records),
        "errors": len(records) - len(ok),
        "max_genus": max(genera, default=None),
        "max_zero_count": max(zeros, default=None),
        "genus_histogram": dict(sorted(hist.items())),
        "genus_bound": g_max,
        "zero_bound": z_max,
        "bounds_hold": all(g <= g_max for g in genera) and all(z <= z_max for z in zeros),
    }


def regression_grid(n: int, rng: np.random.Generator, delta0: float) -> list[sf.FamilyParameter]:
    """Fixed members first, then parameters with a live cut-off term."""
    grid = [sf.FamilyParameter((0, 0, 0, 0, 0, 1), 0.0, 0.0)]
    grid += [sf.FamilyParameter((0, 0, 0, 0, 0, 1), 1.0, k * np.pi / 4) for k in range(8)]
    i = 0
    while len(grid) < n:
        kind = i % 3
        if kind == 0:
            grid.append(sf.sample_near_singular(rng, None, delta0, spread=0.5))
        elif kind == 1:
            grid.append(sf.sample_four_zero_candidate(rng, delta0))
        else:
            grid.append(sf.sample_near_singular(rng, float(rng.uniform(0, 0.5)), delta0, radius_max=0.3,
                                                spread=float(0.5 * np.sqrt(delta0))))
        i += 1
    return grid[:n]


def mesh_record(args) -> dict:
    index, param, resolution, delta0 = args
    try:
        rep = lt.poincare_hopf_check(param, resolution, sf.SurfaceFamily(delta0))
        return {"index": index, "status": rep.status, "mesh_chi": rep.mesh_chi, "expected_chi": rep.expected_chi,
                "zero_count": rep.zero_count, "mesh_genus": rep.mesh_genus, "zero_genus": rep.zero_genus,
                "components": rep.components}
    except Exception as err:
        return {"index": index, "status": "FAIL", "error": f"{type(err).__name__}: {err}",
                "code": getattr(err, "code", None)}


def quadric_checks(cfg: RunConfig) -> list[Callable[[], CheckReport]]:
    def count_bound():
        rng = cfg.rng("genus/critical-count-bound")
        worst = 0
        for _ in range(cfg.size("quadric_samples")):
            b = tuple(rng.normal(scale=3.0, size=3))
            for surface in lt.QuadricSurface:
                worst = max(worst, lt.critical_count(lt.QuadricCase(surface, b)).count)
        return at_most("genus/critical-count-bound", worst, 9, samples=2 * cfg.size("quadric_samples"))

    def special_values():
        s0 = lt.critical_count(lt.QuadricCase(lt.QuadricSurface.SADDLE, (0.0, 0.0, 0.0))).count
        s10 = lt.critical_count(lt.QuadricCase(lt.QuadricSurface.SADDLE, (0.0, 0.0, 10.0))).count
        o0 = len(lt.critical_count_bruteforce(lt.QuadricCase(lt.QuadricSurface.SADDLE, (0.0, 0.0, 0.0))))
        o10 = len(lt.critical_count_bruteforce(lt.QuadricCase(lt.QuadricSurface.SADDLE, (0.0, 0.0, 10.0))))
        ok = (s0, s10, o0, o10) == (1, 3, 1, 3)
        return CheckReport("genus/critical-count-special", "PASS" if ok else "FAIL",
                           {"b=0": s0, "b=(0,0,10)": s10, "oracle b=0": o0, "oracle b=(0,0,10)": o10},
                           {"equals": {"b=0": 1, "b=(0,0,10)": 3}})

    def oracle_agreement():
        rng = cfg.rng("genus/critical-count-oracle")
        mismatches = []
        for i in range(cfg.size("quadric_oracle")):
            b = rng.normal(scale=3.0, size=3)
            if i % 10 == 0:
                b[1] = b[0] if i % 20 else -b[0]
            surface = list(lt.QuadricSurface)[i % 2]
            case = lt.QuadricCase(surface, tuple(b))
            a = lt.critical_count(case).count
            o = len(lt.critical_count_bruteforce(case, extent=12.0 + 2 * float(np.abs(b).max())))
            if a != o:
                mismatches.append({"surface": surface.value, "b": list(b), "solver": a, "oracle": o})
        return equals("genus/critical-count-oracle", len(mismatches), 0, mismatches=mismatches[:5])

    return [count_bound, special_values, oracle_agreement]


def genus_suite(cfg: RunConfig) -> list[Callable[[], CheckReport]]:
    fam = _family(cfg)
    base = (0, 0, 0, 0, 0, 1)

    def fixed_interior():
        g, _ = fam.psi_genus(sf.FamilyParameter(base, 0.0, 0.0))
        return equals("genus/fixed-center", g, 2)

    def fixed_boundary():
        got = [fam.psi_genus(sf.FamilyParameter(base, 1.0, k * np.pi / 4))[0] for k in range(8)]
        return equals("genus/fixed-boundary", got, [1] * 8)

    def scan_check(kind):
        def run():
            cid = f"genus/{kind}-scan"
            records = run_scan(kind, cfg.size(f"{kind}_scan"), cfg, cfg.rng(cid))
            summ = scan_summary(kind, records)
            ok = summ["bounds_hold"] and summ["errors"] == 0
            return CheckReport(cid, "PASS" if ok else "FAIL",
                               {"max_genus": summ["max_genus"], "max_zero_count": summ["max_zero_count"],
                                "errors": summ["errors"]},
                               {"genus_at_most": summ["genus_bound"], "zeros_at_most": summ["zero_bound"]},
                               {"histogram": summ["genus_histogram"], "records": summ["records"]})
        run.__name__ = f"{kind}_scan"
        return run

    def mesh_regression():
        cid = "genus/mesh-regression"
        grid = regression_grid(cfg.size("mesh_grid"), cfg.rng(cid), cfg.delta0)
        res = cfg.size("mesh_resolution")
        jobs = [(i, p, res, cfg.delta0) for i, p in enumerate(grid)]
        if cfg.workers > 1:
            with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
                recs = list(pool.map(mesh_record, jobs))
        else:
            recs = [mesh_record(j) for j in jobs]
        failures = [r for r in recs if r["status"] == "FAIL"]
        skipped = sum(r["status"] == "SKIP" for r in recs)
        hist: dict[int, int] = {}
        for r in recs:
            if r.get("mesh_genus") is not None:
                hist[r["mesh_genus"]] = hist.get(r["mesh_genus"], 0) + 1
        return CheckReport(cid, "PASS" if not failures else "FAIL",
                           {"failures": len(failures), "skipped": skipped, "members": len(recs)},
                           {"failures": 0}, {"resolution": res, "mesh_genus_histogram": dict(sorted(hist.items())),
                            "failed": failures[:5]})

    return ([fixed_interior, fixed_boundary] + [scan_check(k) for k in ("boundary", "interior", "rhozero")]
            + [mesh_regression] + quadric_checks(cfg))


# ---------------------------------------------------------------- witnesses


def witnesses_suite(cfg: RunConfig) -> list[Callable[[], CheckReport]]:
    state: dict[str, Any] = {}

    def points():
        if "q" not in state:
            state["q"] = wf.zero_set_array()
        return state["q"]

    def count():
        q = points()
        return CheckReport("witnesses/count", "PASS" if len(q) == 336 and wf.min_pairwise_distance(q) > 1e-3 else "FAIL",
                           {"points": len(q), "min_separation": wf.min_pairwise_distance(q)},
                           {"points": 336, "min_separation_above": 1e-3})

    def residual():
        return at_most("witnesses/v-residual", float(np.abs(wf.v_real(points())).max()), cfg.tol("witness_residual"))

    def factors():
        six, four = wf.nonvanishing_factors(points())
        floor = cfg.tol("factor_floor")
        ok = six > floor and four > floor
        return CheckReport("witnesses/factor-floor", "PASS" if ok else "FAIL",
                           {"min_abs_conj_z1^6+z2^6": six, "min_abs_conj_z1^4+z2^4": four}, {"greater_than": floor})

    def sigma_v():
        worst = min(wf.gradient_independence(q, wf.v_real) for q in points())
        return at_least("witnesses/v-gradients", worst, cfg.tol("sigma_min"))

    def sigma_f():
        worst = np.inf
        for pole in (1.0, -1.0):
            a = np.array([0, 0, 0, 0, 0, pole])
            for q in points():
                worst = min(worst, wf.gradient_independence(a, lambda x, q=q: wf.f_real(x, q)))
        return at_least("witnesses/f-gradients", float(worst), cfg.tol("sigma_min"))

    def f_zero_at_poles():
        q = points()
        worst = max(float(np.abs(wf.f_real(np.array([0, 0, 0, 0, 0, s]), q)).max()) for s in (1.0, -1.0))
        return at_most("witnesses/f-vanish-at-poles", worst, cfg.tol("witness_residual"))

    def orbits():
        n, sizes = wf.orbit_count(points())
        return equals("witnesses/orbits", n, 7, orbit_sizes=sizes)

    def sign_laws():
        rep = wf.equivariance_table_check(cfg.size("sign_samples"), points=wf.random_total_points(
            cfg.rng("witnesses/sign-laws"), cfg.size("sign_samples")))
        return at_most("witnesses/sign-laws", rep.max_residual, cfg.tol("sign_law"),
                       v_residual=rep.v_residual, f_residual=rep.f_residual)

    def measured_table():
        vt, ft = wf.measured_sign_table(50, seed=cfg.seed)
        ok = np.array_equal(vt, wf.V_SIGN_TABLE) and np.array_equal(ft, wf.F_SIGN_TABLE)
        return CheckReport("witnesses/sign-table", "PASS" if ok else "FAIL", {"v": vt, "f": ft},
                           {"v": wf.V_SIGN_TABLE, "f": wf.F_SIGN_TABLE})

    def holomorphy():
        rng = cfg.rng("witnesses/holomorphy")
        pts = rng.normal(size=(cfg.size("holomorphy_samples"), 4))
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)
        lin = wf.holomorphy_residual(lambda a, b: a, pts)
        big = wf.holomorphy_residual(lambda a, b: a**12 - b**12, pts)
        anti = wf.holomorphy_residual(lambda a, b: a.conjugate(), pts[:5])
        ok = max(lin, big) < cfg.tol("holomorphy") and anti > 1.0
        return CheckReport("witnesses/holomorphy", "PASS" if ok else "FAIL",
                           {"z1": lin, "z1^12-z2^12": big, "conj_z1_control": anti},
                           {"at_most": cfg.tol("holomorphy"), "control_above": 1.0})

    def oracle():
        found = wf.torus_zero_search()
        ok = wf.match_point_sets(found, points(), cfg.tol("point_match"))
        return CheckReport("witnesses/torus-oracle", "PASS" if ok else "FAIL", {"oracle_points": len(found),
                           "bijection": ok}, {"bijection_within": cfg.tol("point_match")})

    return [count, residual, factors, sigma_v, sigma_f, f_zero_at_poles, orbits, sign_laws, measured_table,
            holomorphy, oracle]


# ---------------------------------------------------------------- links


def four_zero_boundary_parameters(rng: np.random.Generator, n: int, fam: sf.SurfaceFamily,
                                  max_tries: int = 50) -> list[tuple[sf.FamilyParameter, lc.Config4]]:
    """Boundary parameters whose restricted function has four simple zeros, with their configurations."""
    out = []
    tries = 0
    while len(out) < n and tries < max_tries * max(n, 1):
        tries += 1
        p = sf.sample_four_zero_candidate(rng, fam.delta0)
        try:
            out.append((p, lc.member_config(p, fam)))
        except (lc.ConfigError, tp.ZeroResolutionError):
            continue
    return out


def random_degree_two_configs(rng: np.random.Generator, n: int) -> list[lc.Config4]:
    out = []
    while len(out) < n:
        T = random_trigpoly(rng, 2)
        sd = tp.signed_zeros(T)
        if sd.count == 4 and sd.all_simple:
            out.append(lc.config_from_function(sd))
    return out


def links_suite(cfg: RunConfig) -> list[Callable[[], CheckReport]]:
    fam = _family(cfg)
    nsub = cfg.size("link_subdiv")
    gap = cfg.tol("linking_gap")

    def standard():
        lk = lc.linking_number(*lc.standard_hopf_link())
        return equals("links/standard-hopf", abs(lk), 1, signed=lk)

    def double_wrap():
        pair = lc.torus_knot_pair()
        lk = lc.linking_number(*pair)
        quad = lc.gauss_integral(*pair)
        ok = abs(lk) == 2 and abs(quad - lk) < cfg.tol("gauss_quadrature")
        return CheckReport("links/double-wrap", "PASS" if ok else "FAIL", {"linking": lk, "quadrature": quad},
                           {"abs_linking": 2, "quadrature_gap": cfg.tol("gauss_quadrature")})

    def unlinked():
        a, b = lc.standard_hopf_link(64)
        far = lc.PolylineLoop(b.points * 0.05 + np.array([1.0, 0, 0, 0]))
        near = lc.PolylineLoop(a.points * 0.05 + np.array([-1.0, 0, 0, 0]))
        return equals("links/unlinked", lc.linking_number(far, near), 0)

    def model_config():
        c = lc.config_from_function(tp.signed_zeros(tp.TrigPoly((0.0, 0.0, 1.0), (0.0, 0.0))))
        expected = lc.Config4((np.pi / 4, 3 * np.pi / 4, 5 * np.pi / 4, 7 * np.pi / 4), (0.0, np.pi),
                              (np.pi / 2, 3 * np.pi / 2))
        lk = lc.linking_number(*lc.hopf_link_pl(c, nsub))
        ok = (c.distance(expected) < cfg.tol("config_angle") and abs(lk) == 1
              and tp.circle_distance(lc.p_sum(c), 0.0) < cfg.tol("config_angle"))
        return CheckReport("links/model-config", "PASS" if ok else "FAIL",
                           {"distance": c.distance(expected), "linking": lk, "p_sum": lc.p_sum(c)},
                           {"distance": cfg.tol("config_angle"), "abs_linking": 1})

    def upsilon_links():
        cid = "links/upsilon"
        pairs = four_zero_boundary_parameters(cfg.rng(cid), cfg.size("link_params"), fam)
        bad = []
        for p, _ in pairs:
            try:
                u = lc.upsilon_link(p, n_subdiv=nsub, family=fam)
                if abs(u.linking) != 1:
                    bad.append({"param": p.to_dict(), "linking": u.linking})
            except (lc.LinkError, lc.ConfigError) as err:
                bad.append({"param": p.to_dict(), "error": getattr(err, "code", ""), "message": str(err)})
        status = "PASS" if not bad and len(pairs) == cfg.size("link_params") else "FAIL"
        return CheckReport(cid, status, {"links": len(pairs), "failures": len(bad)}, {"failures": 0, "abs_linking": 1},
                           {"failed": bad[:5]})

    def homotopy():
        cid = "links/homotopy"
        pairs = four_zero_boundary_parameters(cfg.rng(cid), 3, fam)
        pairs.insert(0, (sf.FamilyParameter((0, 0, 0, 0, 0, 1), 1.0, 0.0), None))
        got = []
        for p, _ in pairs:
            got.append([lc.upsilon_link(p, scale=s, n_subdiv=nsub, check_sign=(s == 1.0), family=fam).linking
                        for s in (0.0, 0.5, 1.0)])
        flips = sum(len(set(row)) > 1 for row in got)
        ok = all(abs(x) == 1 for row in got for x in row) and flips == 0
        return CheckReport(cid, "PASS" if ok else "FAIL", got, {"abs_linking": 1, "sign_changes": 0},
                           {"sign_changes": flips})

    def sum_relation():
        cid = "links/sum-relation"
        rng = cfg.rng(cid)
        cfgs = random_degree_two_configs(rng, cfg.size("config_params"))
        cfgs += [c for _, c in four_zero_boundary_parameters(rng, cfg.size("config_params") // 5, fam)]
        invalid = sum(not c.is_valid(cfg.tol("config_angle")) for c in cfgs)
        worst = max(float(tp.circle_distance(sum(c.mu_plus), np.pi + sum(c.mu_minus))) for c in cfgs)
        rep = at_most(cid, worst, cfg.tol("config_angle") * 1e3, configs=len(cfgs), invalid=invalid)
        if invalid:
            rep.status = "FAIL"
        return rep

    def proximity():
        cid = "links/p-m-proximity"
        pairs = four_zero_boundary_parameters(cfg.rng(cid), cfg.size("proximity_params"), fam)
        worst = max(float(tp.circle_distance(lc.p_sum(c), lc.theta_map(p))) for p, c in pairs)
        rep = at_most(cid, worst, cfg.tol("proximity"), params=len(pairs))
        if len(pairs) < cfg.size("proximity_params"):
            rep.status = "FAIL"
        return rep

    def config_equivariance():
        cid = "links/config-equivariance"
        pairs = four_zero_boundary_parameters(cfg.rng(cid), cfg.size("config_params"), fam)
        worst_m = worst_p = 0.0
        for p, c in pairs:
            for g in ("g1", "g2"):
                moved = lc.member_config(sf.sigma_action(g, p), fam)
                worst_m = max(worst_m, moved.distance(lc.hat_rho_action(g, c)))
                worst_p = max(worst_p, float(tp.circle_distance(lc.p_sum(lc.hat_rho_action(g, c)),
                                                                lc.bar_rho(g, lc.p_sum(c)))))
        worst = max(worst_m, worst_p)
        return at_most(cid, worst, cfg.tol("config_angle"), config_map=worst_m, p_sum=worst_p, params=len(pairs))

    def involution():
        rng = cfg.rng("links/label-swap")
        cfgs = random_degree_two_configs(rng, 50)
        twice = max(lc.hat_rho_action(["g2", "g2"], c).distance(c) for c in cfgs)
        twelve = max(lc.hat_rho_action(["g1"] * 12, c).distance(c) for c in cfgs)
        return at_most("links/label-swap", max(twice, twelve), cfg.tol("config_angle"), g2_twice=twice, g1_twelve=twelve)

    return [standard, double_wrap, unlinked, model_config, upsilon_links, homotopy, sum_relation, proximity,
            config_equivariance, involution]


# ---------------------------------------------------------------- running


SUITE_BUILDERS = {
    "groups": groups_suite,
    "equivariance": equivariance_suite,
    "trigpoly": trigpoly_suite,
    "genus": genus_suite,
    "witnesses": witnesses_suite,
    "links": links_suite,
}


def run_suite(name: str, cfg: RunConfig) -> list[CheckReport]:
    reports = []
    for check in SUITE_BUILDERS[name](cfg):
        t0 = time.perf_counter()
        try:
            rep = check()
        except Exception as err:
            rep = CheckReport(f"{name}/{check.__name__}", "FAIL", None, None,
                              {"error": f"{type(err).__name__}: {err}"})
        rep.runtime_ms = (time.perf_counter() - t0) * 1e3
        reports.append(rep)
    return reports


def build_report(suite: str, cfg: RunConfig) -> dict:
    names = SUITES if suite == "all" else (suite,)
    started = time.time()
    checks: list[CheckReport] = []
    for name in names:
        checks += run_suite(name, cfg)
    counts = {s: sum(c.status == s for c in checks) for s in ("PASS", "FAIL", "SKIP")}
    return {
        "schema": SCHEMA_VERSION,
        "suite": suite,
        "config": cfg.to_dict(),
        "checks": [c.to_dict() for c in checks],
        "summary": {**counts, "ok": counts["FAIL"] == 0},
        "timing": {
            "started_unix": started,
            "total_ms": (time.time() - started) * 1e3,
            "checks_ms": {c.check_id: c.runtime_ms for c in checks},
        },
    }
