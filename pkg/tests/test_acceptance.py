"""Acceptance gate: one test per shipping criterion.

Each criterion lives in its own test named test_criterion_NN_*, so a verbose
run prints exactly one pass or fail line per criterion.  Tests also print the
measured quantity they gate on, which pytest shows whenever a criterion fails.
"""

import json
import math
import subprocess

import numpy as np
import pytest

import holonorm as hn
from holonorm import linescan as ls
from holonorm import metrics as mt
from holonorm import normality as nr
from holonorm import sampling as sp
from holonorm import series as se

FD_STEP = 1e-3

BATTERIES = {
    1: ["z1^3 - 2*z1", "(2*z1 - 1)/(2 - z1)", "exp(z1)", "z1*sin(z1)",
        "1/(2 - z1)", "cos(z1) + z1^2"],
    2: ["z1*z2", "z1^2 - z2^2", "exp(z1 + z2)", "(z1 + z2)/(2 - z1)",
        "sin(z1)*z2", "1/(2 - z1*z2)"],
    3: ["z1*z2*z3", "z1^2 + z2*z3", "exp(z1 + z2 + z3)",
        "(z1 + z2)/(2 - z3)", "sin(z1)*cos(z2)*z3", "1/(3 - z1 - z2*z3)"],
}


def levi_fd(f: hn.HoloExpr, z, v, step: float = FD_STEP) -> float:
    """Five-point Laplacian of log(1+|f(z+l*v)|^2) in l, divided by four.

    Richardson extrapolation over step and 2*step cancels the O(step^2)
    truncation term; what remains is stencil roundoff of order eps/step^2,
    below 1e-9 in absolute terms at this step size.
    """
    z = np.asarray(z, dtype=complex)
    v = np.asarray(v, dtype=complex)

    def h(lam: complex) -> float:
        w = hn.eval_jet(f, z + lam * v).value
        return math.log1p(abs(w) ** 2)

    def lap(d: float) -> float:
        return (h(d) + h(-d) + h(1j * d) + h(-1j * d) - 4.0 * h(0.0)) \
            / (4.0 * d * d)

    return (4.0 * lap(step) - lap(2.0 * step)) / 3.0


def sample_pairs(arity: int, count: int, radius: float, seed: int):
    Z = sp.uniform_ball_points(arity, count, radius, seed)
    V = sp.unit_sphere_points(arity, count, seed + 1)
    return Z, V


def test_criterion_01_levi_rank_one_matches_finite_differences():
    # relative error is floored at 1e-2: below that scale the stencil's own
    # roundoff (about 1e-9 absolute) dominates any implementation signal
    worst = 0.0
    for arity, texts in BATTERIES.items():
        Z, V = sample_pairs(arity, 100, 0.6, seed=100 + arity)
        for text in texts:
            f = hn.parse(text, arity)
            for z, v in zip(Z, V):
                cf = nr.levi_form(f, z, v)
                fd = levi_fd(f, z, v)
                rel = abs(cf - fd) / max(abs(cf), abs(fd), 1e-2)
                worst = max(worst, rel)
    print(f"criterion 1: worst relative FD error {worst:.3e}")
    assert worst <= 1e-6


def test_criterion_02_one_variable_reduction():
    worst = 0.0
    Z = sp.uniform_ball_points(1, 100, 0.8, seed=21)
    for text in BATTERIES[1]:
        f = hn.parse(text, 1)
        for z in Z:
            jet = hn.eval_jet(f, z)
            direct = abs(jet.gradient[0]) / (1.0 + abs(jet.value) ** 2)
            s = nr.sharp(f, z)
            m = nr.mu(f, z)
            scale = max(1.0, direct)
            worst = max(worst, abs(s - direct) / scale,
                        abs(m - 2.0 * s) / scale)
    print(f"criterion 2: worst deviation {worst:.3e}")
    assert worst <= 1e-12


def test_criterion_03_bergman_poincare_coincidence():
    B = mt.BallDomain(1)
    radii = np.linspace(0.0, 0.96, 25)
    angles = np.exp(2j * np.pi * np.arange(40) / 40)
    worst = 0.0
    points = 0
    for r in radii:
        for w in angles:
            z = r * w
            pt = mt.poincare_tensor(z)
            bg = mt.bergman_norm_sq(B, [z], [1.0])
            worst = max(worst, abs(bg - pt) / pt)
            points += 1
    print(f"criterion 3: {points} points, worst relative gap {worst:.3e}")
    assert points == 1000
    assert worst <= 1e-12


def test_criterion_04_invariance_suite():
    rng = np.random.default_rng(40)
    B1 = mt.BallDomain(1)
    B2 = mt.BallDomain(2)
    worst = {"poincare": 0.0, "bergman": 0.0, "kobayashi": 0.0, "kernel": 0.0}
    for _ in range(100):
        # disc: density and kernel transformation laws
        a = 0.7 * math.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        theta = float(rng.uniform(0.0, 2.0 * np.pi))
        z = 0.9 * math.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        h = mt.disc_automorphism(complex(a), theta)
        jet = hn.eval_jet(h, [z])
        hz, dh = jet.value, jet.gradient[0]
        pt = mt.poincare_tensor(z)
        worst["poincare"] = max(
            worst["poincare"],
            abs(mt.poincare_tensor(hz) * abs(dh) ** 2 - pt) / pt)
        K = mt.bergman_kernel_ball(B1, [z])
        Kh = mt.bergman_kernel_ball(B1, [hz])
        worst["kernel"] = max(worst["kernel"], abs(abs(dh) ** 2 * Kh - K) / K)

        # ball: Bergman norm and Kobayashi closed form under automorphisms
        aa = sp.uniform_ball_points(2, 1, 0.7, int(rng.integers(1 << 30)))[0]
        zz = sp.uniform_ball_points(2, 1, 0.9, int(rng.integers(1 << 30)))[0]
        vv = sp.unit_sphere_points(2, 1, int(rng.integers(1 << 30)))[0]
        phi = mt.ball_automorphism(aa)
        pz = phi(zz)
        pv = phi.pushforward(zz, vv)
        bn = mt.bergman_norm_sq(B2, zz, vv)
        worst["bergman"] = max(
            worst["bergman"], abs(mt.bergman_norm_sq(B2, pz, pv) - bn) / bn)
        fk = mt.kobayashi_closed_form_ball(zz, vv)
        worst["kobayashi"] = max(
            worst["kobayashi"],
            abs(mt.kobayashi_closed_form_ball(pz, pv) - fk) / fk)
    print("criterion 4: worst relative drifts "
          + ", ".join(f"{k}={v:.3e}" for k, v in worst.items()))
    assert all(v <= 1e-8 for v in worst.values())


def test_criterion_05_kobayashi_estimator():
    B = mt.BallDomain(2)
    Z, V = sample_pairs(2, 50, 0.85, seed=50)
    worst = 0.0
    for z, v in zip(Z, V):
        cf = mt.kobayashi_closed_form_ball(z, v)
        ub = mt.kobayashi_upper(B, z, v, budget=200, seed=11)
        assert ub >= cf * (1.0 - 1e-9)  # upper estimates never undercut
        worst = max(worst, (ub - cf) / cf)
    v0 = np.array([0.3 + 0.1j, -0.2j])
    at_zero = mt.kobayashi_upper(B, np.zeros(2), v0, budget=200, seed=11)
    gap0 = abs(at_zero - np.linalg.norm(v0)) / np.linalg.norm(v0)
    print(f"criterion 5: worst overshoot {worst:.3e}, origin gap {gap0:.3e}")
    assert worst <= 0.02
    assert gap0 <= 1e-6


def test_criterion_06_marty_detection():
    grid = sp.disc_grid(0.5, 16, 32)
    sups = []
    for J in (5, 10, 20, 40):
        fam = [hn.parse(f"({j}) * z1", 1) for j in range(1, J + 1)]
        est = nr.marty_sup(fam, grid)
        sups.append(est.sup_value)
    assert all(b > a for a, b in zip(sups, sups[1:]))
    final = sups[-1]
    assert abs(final - 40.0) <= 1e-12 * 40.0
    powers5 = nr.marty_sup([hn.parse(f"z1^{k}", 1) for k in range(1, 6)], grid)
    powers10 = nr.marty_sup([hn.parse(f"z1^{k}", 1) for k in range(1, 11)], grid)
    stable = abs(powers10.sup_value - powers5.sup_value)
    print(f"criterion 6: dilation sups {sups}, power sup {powers10.sup_value}")
    assert stable <= 1e-12
    assert math.isfinite(powers10.sup_value)
    assert abs(powers10.sup_value - 1.0) <= 1e-12


def test_criterion_07_yosida_certifier():
    v1 = nr.yosida_bound(hn.parse("z1", 1))
    assert v1.classification == nr.BOUNDED
    assert abs(v1.estimate.sup_value - 1.0) <= 1e-12

    v2 = nr.yosida_bound(hn.parse("sin(1/(1 - z1))", 1))
    sups = [s for _, s in v2.estimate.growth_series]
    ratios = [b / a for a, b in zip(sups, sups[1:])]
    print(f"criterion 7: f=z sup {v1.estimate.sup_value}, "
          f"singular rung ratios {[f'{r:.2f}' for r in ratios]}")
    assert v2.classification == nr.UNBOUNDED_TREND
    assert all(r >= 1.5 for r in ratios)


def test_criterion_08_line_slice_vs_kobayashi_consistency():
    # members are kept at unit derivative scale; the slack factor of two in
    # the bound does not absorb an overall rescaling of f
    battery = ["z1", "z1^2 - z2^2", "z1*z2", "(2*z1 - 1)/(2 - z1)",
               "exp(z1 + z2)"]
    D = ls.direction_set(2, count=16, seed=0)
    cs = np.asarray([ls.canonical_direction(c) for c in D.directions])

    # line-point grids nested rung by rung, so both certifiers see the
    # same boundary approach along the same slices
    disc_rungs = sp.disc_ladder_grids(sp.DEFAULT_LADDER, radii=48, angles=64)
    z_rungs, acc, prev_len = [], [], 0
    for g in disc_rungs:
        delta = g[prev_len:]
        prev_len = len(g)
        acc.append(np.concatenate([(delta[:, None] * c[None, :]) for c in cs]))
        z_rungs.append(np.concatenate(acc))

    singular = "sin(1/(1 - z1))"
    rows = []
    for text in battery + [singular]:
        f = hn.parse(text, 2)
        alex, reports = ls.alexander_function_test(f, D)
        kob = nr.kobayashi_normality_check(f, z_rungs=z_rungs, v_samples=cs)
        cb = kob.estimate.sup_value
        line_sups = [r.verdict.estimate.sup_value for r in reports]
        rows.append((text, alex.classification, kob.classification,
                     max(line_sups), cb))
        assert alex.classification == kob.classification, text
        for s in line_sups:
            assert s <= 2.0 * cb + 1e-6, (text, s, cb)
            assert s * s <= 2.0 * cb + 1e-6, (text, s, cb)
    for text, ca, ck, sl, cb in rows:
        print(f"criterion 8: {text!r}: {ca} == {ck}, "
              f"sup_line {sl:.4g} vs 2*C_ball {2 * cb:.4g}")


def test_criterion_09_hartogs_desk_scale():
    geo = se.PowerSeries(2, 20, {(k, 0): 1.0 for k in range(21)})
    vg, rg, _ = ls.hartogs_test(geo, ls.direction_set(2, 32, 0),
                                probe_partial_sums=False)
    min_geo = min(r.radius for r in rg)
    assert vg.classification == ls.CONVERGENT
    assert abs(min_geo - 1.0) <= 1e-9

    fact = se.PowerSeries(2, 64, {(k, 0): float(math.factorial(k))
                                  for k in range(65)})
    vf, rf, _ = ls.hartogs_test(fact, ls.direction_set(2, 16, 0),
                                probe_partial_sums=False)
    assert vf.classification == ls.DIVERGENT
    worst_dir = vf.estimate.argmax_point
    assert np.allclose(worst_dir, [1.0, 0.0], atol=1e-12)
    assert rf[0].radius < ls.DEFAULT_RMIN

    terms = {}
    for a in range(41):
        for b in range(41 - a):
            terms[(a, b)] = 1.0 / (math.factorial(a) * math.factorial(b))
    expF = se.PowerSeries(2, 40, terms)
    ve, re_, _ = ls.hartogs_test(expF, ls.direction_set(2, 16, 3),
                                 probe_partial_sums=False)
    min_exp = min(r.radius for r in re_)
    print(f"criterion 9: geometric {vg.classification} r={min_geo}, "
          f"factorial {vf.classification} via e1, "
          f"exp {ve.classification} r={min_exp:.3f}")
    assert ve.classification == ls.CONVERGENT
    assert min_exp >= 5.0


def test_criterion_10_mu_pole_continuity():
    worst_annulus = 0.0
    worst_limit = 0.0
    for text in ("1/z1", "(z1^2 + 1)/z1"):
        f = hn.parse(text, 1)
        rec = hn.reciprocal(f)
        for rho in (0.05, 0.1, 0.2):
            for k in range(32):
                z = rho * np.exp(2j * np.pi * k / 32)
                a = nr.mu(f, z)
                b = nr.mu(rec, z)
                worst_annulus = max(worst_annulus,
                                    abs(a - b) / max(1.0, abs(a)))
        at_pole = nr.mu(f, 0.0)
        assert math.isfinite(at_pole)
        for k in range(32):
            z = 1e-4 * np.exp(2j * np.pi * k / 32)
            worst_limit = max(worst_limit,
                              abs(nr.mu(f, z) - at_pole) / max(1.0, at_pole))
    print(f"criterion 10: annulus gap {worst_annulus:.3e}, "
          f"pole limit gap {worst_limit:.3e}")
    assert worst_annulus <= 1e-10
    assert worst_limit <= 1e-6


def test_criterion_11_cli_determinism(tmp_path):
    geo = se.PowerSeries(2, 20, {(k, 0): 1.0 for k in range(21)})
    series_path = tmp_path / "geo.json"
    series_path.write_text(json.dumps(se.series_to_dict(geo)))
    commands = [
        ["sharp", "--expr", "z1*z2", "--arity", "2"],
        ["mu", "--expr", "sin(z1)"],
        ["marty", "--expr", "z1", "--expr", "2*z1"],
        ["yosida", "--expr", "sin(1/(1-z1))"],
        ["ball-ratio", "--expr", "exp(z1+z2)", "--arity", "2"],
        ["kobayashi", "--expr", "z1*z2", "--arity", "2",
         "--directions", "16", "--radii", "8", "--vectors", "8"],
        ["disc-probe", "--expr", "z1+z2", "--arity", "2", "--count", "30"],
        ["linescan", "--expr", "z1^2", "--arity", "2",
         "--directions", "16", "--radii", "16", "--angles", "24"],
        ["hartogs", "--series", str(series_path), "--directions", "16"],
        ["orbit", "--expr", "1/(1 - z1)", "--count", "10"],
    ]
    for argv in commands:
        cmd = ["holonorm"] + argv + ["--seed", "7"]
        first = subprocess.run(cmd, capture_output=True)
        second = subprocess.run(cmd, capture_output=True)
        assert first.returncode == 0, (argv, first.stderr)
        assert second.returncode == 0
        assert first.stdout == second.stdout, argv
        json.loads(first.stdout)  # payload is well-formed JSON
    print(f"criterion 11: {len(commands)} commands replayed byte for byte")
