"""Numerical certifiers for normal functions and normal families.

The quantities: the spherical derivative mu(f) = 2|f'|/(1+|f|^2) of a
meromorphic function of one variable, its gradient analogue
sharp(f) = |grad f|/(1+|f|^2) in several variables, and the Levi form of
log(1+|f|^2), which for holomorphic f collapses to the rank-one closed form

    L_z(v) = |sum_k df/dz_k(z) v_k|^2 / (1 + |f(z)|^2)^2.

On top of these sit supremum reducers over seeded grids (Marty-type family
bounds, boundary-weighted ladders with trend classification, invariant-orbit
constructions, and Bergman/Kobayashi normalised ratios on the ball).

Classification semantics are deliberately coarse: a ladder of suprema whose
consecutive ratios all reach the growth factor reads UNBOUNDED_TREND, one
whose last three rungs agree within the stabilization tolerance reads
BOUNDED, anything else INCONCLUSIVE.  These are numerical verdicts about
sampled data, not proofs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, PoleError
from . import expr as ex
from . import metrics as mt
from . import sampling as sp

BOUNDED = "BOUNDED"
UNBOUNDED_TREND = "UNBOUNDED_TREND"
INCONCLUSIVE = "INCONCLUSIVE"

GROWTH_FACTOR = 1.5
STABILIZATION = 0.10


# --------------------------------------------------------------------------
# Report containers
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SupEstimate:
    """A supremum found by sampling, with the trail that produced it."""

    sup_value: float
    argmax_point: object  # complex, ndarray, or None
    samples: int
    growth_series: list = field(default_factory=list)  # [(parameter, sup)]

    def to_dict(self) -> dict:
        arg = self.argmax_point
        if arg is None:
            arg_out = None
        else:
            a = np.asarray(arg, dtype=complex).reshape(-1)
            arg_out = [{"re": float(w.real), "im": float(w.imag)} for w in a]
        return {
            "sup": self.sup_value,
            "argmax": arg_out,
            "samples": self.samples,
            "growth_series": [[float(p), float(s)] for p, s in self.growth_series],
        }


@dataclass(frozen=True)
class Verdict:
    """Trend classification of a ladder of suprema."""

    classification: str
    estimate: SupEstimate
    threshold: float
    trend_ratio: float

    def to_dict(self) -> dict:
        return {
            "classification": self.classification,
            "threshold": self.threshold,
            "trend_ratio": self.trend_ratio,
            "estimate": self.estimate.to_dict(),
        }


def classify_trend(sups, growth_factor: float = GROWTH_FACTOR,
                   stabilization: float = STABILIZATION) -> tuple[str, float]:
    """Classify a sequence of ladder suprema; returns (label, trend_ratio).

    trend_ratio is the smallest consecutive ratio, the binding one for an
    unbounded-growth claim.
    """
    s = [float(x) for x in sups]
    if len(s) < 2:
        return INCONCLUSIVE, 1.0
    ratios = []
    for a, b in zip(s, s[1:]):
        if a == 0.0 and b == 0.0:
            ratios.append(1.0)
        elif a == 0.0:
            ratios.append(math.inf)
        else:
            ratios.append(b / a)
    trend = min(ratios)
    if trend >= growth_factor:
        return UNBOUNDED_TREND, trend
    if len(s) >= 3:
        tail = s[-3:]
        hi, lo = max(tail), min(tail)
        if hi == 0.0 or (lo > 0.0 and hi / lo <= 1.0 + stabilization):
            return BOUNDED, trend
    return INCONCLUSIVE, trend


# --------------------------------------------------------------------------
# Pointwise quantities
# --------------------------------------------------------------------------

def mu(f: ex.HoloExpr, z) -> float:
    """Spherical derivative 2|f'|/(1+|f|^2) of a one-variable function.

    At a clean pole the identity mu(f) = mu(1/f) supplies the value, so
    rational expressions extend continuously across their poles.
    """
    if f.arity != 1:
        raise InputError("mu is defined for one-variable expressions")
    try:
        jet = ex.eval_jet(f, z)
    except PoleError:
        jet = ex.eval_jet(ex.reciprocal(f), z)
    d = abs(jet.gradient[0])
    return 2.0 * d / (1.0 + abs(jet.value) ** 2)


def mu_batch(f: ex.HoloExpr, Z) -> np.ndarray:
    """Vectorised mu with reciprocal fallback on pole-flagged points.

    Entries that fail both routes come back NaN.
    """
    if f.arity != 1:
        raise InputError("mu is defined for one-variable expressions")
    vals, grads, pole = ex.eval_jet_batch(f, Z)
    out = 2.0 * np.abs(grads[:, 0]) / (1.0 + np.abs(vals) ** 2)
    bad = pole | ~np.isfinite(out)
    if bad.any():
        pts = ex.as_points(Z, 1)[bad]
        rvals, rgrads, rpole = ex.eval_jet_batch(ex.reciprocal(f), pts)
        rout = 2.0 * np.abs(rgrads[:, 0]) / (1.0 + np.abs(rvals) ** 2)
        rout[rpole] = np.nan
        out[bad] = rout
    return out


def levi_form(f: ex.HoloExpr, z, v) -> float:
    """Levi form of log(1 + |f|^2) at z in direction v (holomorphic f).

    Rank-one closed form; only first derivatives enter.  Nonnegative, and
    scales by |t|^2 when v is scaled by t.
    """
    jet = ex.eval_jet(f, z)
    vv = np.asarray(v, dtype=complex).reshape(-1)
    if vv.shape[0] != f.arity:
        raise InputError(f"direction must have {f.arity} coordinates")
    pair = complex(np.sum(jet.gradient * vv))
    return abs(pair) ** 2 / (1.0 + abs(jet.value) ** 2) ** 2


def sharp(f: ex.HoloExpr, z) -> float:
    """Gradient spherical derivative |grad f|/(1+|f|^2).

    Equals the supremum over unit v of sqrt(levi_form(f, z, v)); for one
    variable it is mu/2 exactly.
    """
    jet = ex.eval_jet(f, z)
    return float(np.linalg.norm(jet.gradient)) / (1.0 + abs(jet.value) ** 2)


def sharp_batch(f: ex.HoloExpr, Z) -> np.ndarray:
    """Vectorised sharp; one-variable inputs get the mu pole fallback."""
    if f.arity == 1:
        return 0.5 * mu_batch(f, Z)
    vals, grads, pole = ex.eval_jet_batch(f, Z)
    out = np.linalg.norm(grads, axis=1) / (1.0 + np.abs(vals) ** 2)
    out[pole] = np.nan
    return out


def _finite_or_raise(arr: np.ndarray, what: str, limit: float = 0.05):
    bad = ~np.isfinite(arr)
    if bad.any():
        frac = float(bad.mean())
        if frac > limit:
            raise ArithmeticError(
                f"{what}: {frac:.1%} of samples failed to evaluate"
            )
    return np.where(bad, -np.inf, arr)


# --------------------------------------------------------------------------
# Family suprema on fixed compacts
# --------------------------------------------------------------------------

def _as_family(family) -> list:
    fam = list(family)
    if not fam:
        raise InputError("family must be nonempty")
    arities = {f.arity for f in fam}
    if len(arities) != 1:
        raise InputError("family members must share one arity")
    return fam


def marty_sup(family, K) -> SupEstimate:
    """sup of sharp over family x grid, with prefix growth per member.

    ``K`` is an array of points (complex for arity 1, or (m, n)).  The
    growth series records the running supremum after each family member,
    which is nondecreasing by construction.
    """
    fam = _as_family(family)
    pts = ex.as_points(K, fam[0].arity)
    best = -math.inf
    arg = None
    series = []
    for idx, f in enumerate(fam, start=1):
        vals = _finite_or_raise(sharp_batch(f, pts), "marty_sup")
        j = int(np.argmax(vals))
        if vals[j] > best:
            best = float(vals[j])
            arg = pts[j]
        series.append((float(idx), best))
    return SupEstimate(best, arg, samples=len(fam) * pts.shape[0],
                       growth_series=series)


def mu_local_boundedness(family, K) -> SupEstimate:
    """sup of mu over family x grid (arity 1), same report shape as marty_sup."""
    fam = _as_family(family)
    if fam[0].arity != 1:
        raise InputError("mu_local_boundedness applies to one-variable families")
    pts = ex.as_points(K, 1)
    best = -math.inf
    arg = None
    series = []
    for idx, f in enumerate(fam, start=1):
        vals = _finite_or_raise(mu_batch(f, pts), "mu_local_boundedness")
        j = int(np.argmax(vals))
        if vals[j] > best:
            best = float(vals[j])
            arg = pts[j]
        series.append((float(idx), best))
    return SupEstimate(best, arg, samples=len(fam) * pts.shape[0],
                       growth_series=series)


# --------------------------------------------------------------------------
# Boundary-weighted ladders on the disc
# --------------------------------------------------------------------------

def weighted_sharp_sups(family, ladder=sp.DEFAULT_LADDER,
                        radii: int = sp.DEFAULT_RADII,
                        angles: int = sp.DEFAULT_ANGLES):
    """Per-rung sup of (1-|z|^2) * sharp over a family on cumulative grids.

    Returns (sups, argmax, total_samples, per_member_final) where
    per_member_final[i] is the running prefix supremum over the first i+1
    members at the deepest rung.
    """
    fam = _as_family(family)
    if fam[0].arity != 1:
        raise InputError("ladder certifiers run on one-variable expressions")
    grids = sp.disc_ladder_grids(ladder, radii, angles)
    weights = [1.0 - np.abs(g) ** 2 for g in grids]
    sups = []
    best = -math.inf
    arg = None
    member_vals_deep = []
    total = 0
    deep_grid = grids[-1]
    per_member_tables = []
    for f in fam:
        vals = _finite_or_raise(sharp_batch(f, deep_grid), "weighted ladder")
        per_member_tables.append(vals)
        total += deep_grid.shape[0]
    lengths = [g.shape[0] for g in grids]
    for k, m in enumerate(lengths):
        rung_best = -math.inf
        for vals in per_member_tables:
            q = weights[k] * vals[:m]
            j = int(np.argmax(q))
            if q[j] > rung_best:
                rung_best = float(q[j])
                if rung_best > best:
                    best = rung_best
                    arg = grids[k][j]
        sups.append(rung_best)
    running = -math.inf
    deep_w = weights[-1]
    for vals in per_member_tables:
        running = max(running, float(np.max(deep_w * vals)))
        member_vals_deep.append(running)
    return sups, arg, total, member_vals_deep


def yosida_bound(f: ex.HoloExpr, ladder=sp.DEFAULT_LADDER,
                 radii: int = sp.DEFAULT_RADII,
                 angles: int = sp.DEFAULT_ANGLES) -> Verdict:
    """Trend of sup (1-|z|^2) sharp(f) over discs |z| <= 1 - eps.

    A normal function keeps this quantity bounded as eps shrinks; steady
    geometric growth along the ladder is the numerical signature of a
    non-normal one.
    """
    sups, arg, total, _ = weighted_sharp_sups([f], ladder, radii, angles)
    label, trend = classify_trend(sups)
    est = SupEstimate(max(sups), arg, total,
                      growth_series=list(zip([float(e) for e in ladder], sups)))
    return Verdict(label, est, threshold=GROWTH_FACTOR, trend_ratio=trend)


def lehto_virtanen_check(f: ex.HoloExpr, ladder=sp.DEFAULT_LADDER,
                         radii: int = sp.DEFAULT_RADII,
                         angles: int = sp.DEFAULT_ANGLES) -> Verdict:
    """Same ladder and verdict as yosida_bound, reported under the
    boundary-limit label used for line restrictions."""
    return yosida_bound(f, ladder, radii, angles)


# --------------------------------------------------------------------------
# Chordal-versus-Poincare Lipschitz ratio
# --------------------------------------------------------------------------

def lipschitz_ratio(f: ex.HoloExpr, pair_samples: int = 2000,
                    seed: int = 0, radius: float = 0.95) -> SupEstimate:
    """sup over sampled pairs of chordal(f(a), f(b)) / poincare(a, b).

    A normal function is Lipschitz between these metrics, so the sampled
    ratio should stabilise as pairs accumulate.  Pole values map to the
    point at infinity, which the chordal metric handles.
    """
    if f.arity != 1:
        raise InputError("lipschitz_ratio applies to one-variable expressions")
    if pair_samples < 1:
        raise InputError("need at least one pair")
    a = sp.uniform_disc_points(pair_samples, radius, seed)
    b = sp.uniform_disc_points(pair_samples, radius, seed + 1)
    near = np.abs(a - b) < 1e-9
    b[near] += 1e-3
    fa, pa = ex.eval_values(f, a)
    fb, pb = ex.eval_values(f, b)
    best = -math.inf
    arg = None
    series = []
    checkpoints = {max(1, pair_samples // 8), max(1, pair_samples // 4),
                   max(1, pair_samples // 2), pair_samples}
    for i in range(pair_samples):
        va = mt.INF if (pa[i] or not np.isfinite(fa[i])) else complex(fa[i])
        vb = mt.INF if (pb[i] or not np.isfinite(fb[i])) else complex(fb[i])
        num = mt.chordal_distance(va, vb)
        den = mt.poincare_distance(a[i], b[i])
        if den <= 0:
            continue
        r = num / den
        if r > best:
            best = r
            arg = np.array([a[i], b[i]])
        if (i + 1) in checkpoints:
            series.append((float(i + 1), best))
    return SupEstimate(best, arg, samples=pair_samples, growth_series=series)


# --------------------------------------------------------------------------
# Automorphism orbits
# --------------------------------------------------------------------------

def translate_orbit(f: ex.HoloExpr, params) -> list[ex.HoloExpr]:
    """Compositions f(e^{i theta}(a - z)/(1 - conj(a) z)) for (a, theta) pairs."""
    if f.arity != 1:
        raise InputError("translate_orbit applies to one-variable expressions")
    orbit = []
    for a, theta in params:
        phi = mt.disc_automorphism(a, theta)
        orbit.append(ex.substitute(f, [phi]))
    if not orbit:
        raise InputError("parameter list must be nonempty")
    return orbit


def ball_orbit(f: ex.HoloExpr, params) -> list[ex.HoloExpr]:
    """Compositions f(phi_a(z)) over ball automorphism centers a."""
    orbit = []
    for a in params:
        phi = mt.ball_automorphism(a)
        if phi.arity != f.arity:
            raise InputError("automorphism center arity mismatch")
        orbit.append(ex.substitute(f, list(phi.components)))
    if not orbit:
        raise InputError("parameter list must be nonempty")
    return orbit


def random_disc_params(count: int, seed: int, max_norm: float = 0.9):
    rng = np.random.default_rng(seed)
    r = max_norm * np.sqrt(rng.uniform(size=count))
    th = rng.uniform(0.0, 2.0 * np.pi, size=count)
    rot = rng.uniform(0.0, 2.0 * np.pi, size=count)
    return [(complex(r[i] * np.cos(th[i]), r[i] * np.sin(th[i])), float(rot[i]))
            for i in range(count)]


def random_ball_params(arity: int, count: int, seed: int, max_norm: float = 0.9):
    return list(sp.uniform_ball_points(arity, count, max_norm, seed))


# --------------------------------------------------------------------------
# Ball ratios: Levi form against invariant metrics
# --------------------------------------------------------------------------

def _levi_ratio_tables(f: ex.HoloExpr, z_points: np.ndarray, v_samples: np.ndarray):
    """Levi numerators and value row data for a block of points.

    Returns (levi, pairs_abs2, denominators...) laid out as matrices
    (num_z, num_v) ready for metric normalisation.
    """
    vals, grads, pole = ex.eval_jet_batch(f, z_points)
    if pole.any():
        raise InputError("pole signal inside the ball; certifier input must be holomorphic")
    contr = grads @ v_samples.T  # (mz, mv): sum_k d_k f * v_k
    levi = np.abs(contr) ** 2 / (1.0 + np.abs(vals) ** 2)[:, None] ** 2
    return levi


def ball_normal_ratio(f: ex.HoloExpr, z_samples, v_samples) -> SupEstimate:
    """sup of levi_form / bergman_norm_sq over sample pairs: the norm constant.

    A finite stable value certifies the Levi form is dominated by the Bergman
    metric on the sampled region, the defining estimate for ball normality.
    """
    Z = ex.as_points(z_samples, f.arity)
    V = ex.as_points(v_samples, f.arity)
    if np.any(np.linalg.norm(Z, axis=1) >= 1.0):
        raise InputError("z samples must lie in the open unit ball")
    levi = _levi_ratio_tables(f, Z, V)
    n = f.arity
    s = np.einsum("ij,ij->i", Z, Z.conjugate()).real
    d = 1.0 - s
    v2 = np.einsum("ij,ij->i", V, V.conjugate()).real
    pair = Z.conjugate() @ V.T  # (mz, mv): <v, z> transposed pairing
    berg = (n + 1) * (v2[None, :] / d[:, None] + np.abs(pair) ** 2 / (d ** 2)[:, None])
    ratio = levi / berg
    flat = int(np.argmax(ratio))
    i, j = divmod(flat, ratio.shape[1])
    series = []
    best = -math.inf
    for i2 in range(Z.shape[0]):
        best = max(best, float(np.max(ratio[i2])))
        series.append((float(i2 + 1), best))
    step = max(1, len(series) // 16)
    series = series[step - 1::step] if len(series) > 16 else series
    return SupEstimate(float(ratio[i, j]), Z[i], samples=int(ratio.size),
                       growth_series=series)


def kobayashi_normality_check(f: ex.HoloExpr, z_rungs=None, v_samples=None,
                              ladder=sp.DEFAULT_LADDER, directions: int = 64,
                              radii: int = 16, v_count: int = 32,
                              seed: int = 0) -> Verdict:
    """Trend of sup levi_form / F_K^2 along an exhaustion of the unit ball.

    Equals (n+1) times the Bergman-normalised ratio at every sample.  Rung
    grids are cumulative, so the ladder of suprema is nondecreasing;
    stabilization reads BOUNDED, sustained geometric growth reads
    UNBOUNDED_TREND.
    """
    lad = sp.check_ladder(ladder)
    n = f.arity
    if z_rungs is None:
        z_rungs = sp.ball_ladder_grids(n, lad, directions, radii, seed)
    if v_samples is None:
        v_samples = np.concatenate([sp.axis_directions(n),
                                    sp.unit_sphere_points(n, v_count, seed + 1)])
    V = ex.as_points(v_samples, n)
    sups = []
    best = -math.inf
    arg = None
    deep = ex.as_points(z_rungs[-1], n)
    levi = _levi_ratio_tables(f, deep, V)
    s = np.einsum("ij,ij->i", deep, deep.conjugate()).real
    d = 1.0 - s
    v2 = np.einsum("ij,ij->i", V, V.conjugate()).real
    pair = deep.conjugate() @ V.T
    fk2 = v2[None, :] / d[:, None] + np.abs(pair) ** 2 / (d ** 2)[:, None]
    ratio = levi / fk2
    for rung in z_rungs:
        m = ex.as_points(rung, n).shape[0]
        block = ratio[:m]
        j = int(np.argmax(block))
        i1, j1 = divmod(j, block.shape[1])
        if block[i1, j1] > best:
            best = float(block[i1, j1])
            arg = deep[i1]
        sups.append(float(np.max(block)))
    label, trend = classify_trend(sups)
    est = SupEstimate(max(sups), arg, samples=int(ratio.size),
                      growth_series=list(zip([float(e) for e in lad], sups)))
    return Verdict(label, est, threshold=GROWTH_FACTOR, trend_ratio=trend)


# --------------------------------------------------------------------------
# Analytic-disc probe
# --------------------------------------------------------------------------

def disc_family_probe(f: ex.HoloExpr, discs=None, count: int = 200,
                      degree: int = 2, seed: int = 0,
                      ladder=sp.DEFAULT_LADDER, radii: int = 24,
                      angles: int = 32) -> SupEstimate:
    """sup over analytic discs phi of (1-|l|^2) * sharp(f o phi)(l).

    Discs are either supplied (and re-verified) or sampled with the given
    count/degree/seed.  The derivative of f o phi is contracted exactly:
    (f o phi)'(l) = sum_k d_k f(phi(l)) phi_k'(l).
    """
    lad = sp.check_ladder(ladder)
    if discs is None:
        discs = mt.random_disc_maps(f.arity, count, degree, seed)
    else:
        discs = [mt.require_contained(d) for d in discs]
        if not discs:
            raise InputError("disc list must be nonempty")
    grids = sp.disc_ladder_grids(lad, radii, angles)
    deep = grids[-1]
    lengths = [g.shape[0] for g in grids]
    weights = 1.0 - np.abs(deep) ** 2
    per_disc = []
    for phi in discs:
        if phi.arity != f.arity:
            raise InputError("disc arity mismatch")
        pts = phi(deep)
        vals, grads, pole = ex.eval_jet_batch(f, pts)
        if pole.any():
            raise InputError("pole signal under a probe disc")
        dphi = phi.derivative(deep)
        gderiv = np.einsum("ij,ij->i", grads, dphi)
        q = weights * np.abs(gderiv) / (1.0 + np.abs(vals) ** 2)
        per_disc.append(q)
    sups = []
    best = -math.inf
    arg = None
    for m in lengths:
        rung_best = -math.inf
        for q in per_disc:
            j = int(np.argmax(q[:m]))
            if q[j] > rung_best:
                rung_best = float(q[j])
                if rung_best > best:
                    best = rung_best
                    arg = deep[j]
        sups.append(rung_best)
    series = list(zip([float(e) for e in lad], sups))
    return SupEstimate(best, arg, samples=len(per_disc) * deep.shape[0],
                       growth_series=series)
