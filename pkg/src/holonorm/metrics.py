"""Invariant metrics on the sphere, the disc, and the unit ball.

Contents: the chordal metric on the extended plane, the Poincare metric on
the unit disc, the Bergman kernel and metric of the ball, Moebius
automorphisms of disc and ball, the closed-form Kobayashi metric of the
ball, and a verified-disc upper estimator for the Kobayashi metric.

Conventions.  The Poincare tensor is 2/(1-|z|^2)^2, so for n = 1 it equals
the Bergman tensor of the unit disc exactly.  The Bergman length uses the
Hermitian pairing <v, z> = sum v_mu * conj(z_mu).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContainmentError, InputError
from . import expr as ex

#: Point at infinity for chordal-distance arguments.
INF = complex(math.inf, 0.0)

#: Analytic discs are verified on this many boundary samples at radius
#: CONTAINMENT_RING, with norm margin CONTAINMENT_MARGIN.
CONTAINMENT_SAMPLES = 256
CONTAINMENT_RING = 1.0 - 1e-6
CONTAINMENT_MARGIN = 1e-9


# --------------------------------------------------------------------------
# Chordal metric on the extended plane
# --------------------------------------------------------------------------

def _is_infinite(z: complex) -> bool:
    return math.isinf(z.real) or math.isinf(z.imag)


def chordal_distance(z1, z2) -> float:
    """Chordal distance on C union {inf}; bounded by 2."""
    a, b = complex(z1), complex(z2)
    for w in (a, b):
        if math.isnan(w.real) or math.isnan(w.imag):
            raise InputError("chordal distance is undefined for NaN input")
    ia, ib = _is_infinite(a), _is_infinite(b)
    if ia and ib:
        return 0.0
    if ia:
        return 2.0 / math.sqrt(1.0 + abs(b) ** 2)
    if ib:
        return 2.0 / math.sqrt(1.0 + abs(a) ** 2)
    return 2.0 * abs(a - b) / math.sqrt((1.0 + abs(a) ** 2) * (1.0 + abs(b) ** 2))


# --------------------------------------------------------------------------
# Poincare metric on the unit disc
# --------------------------------------------------------------------------

def poincare_tensor(z) -> float:
    """Metric coefficient 2/(1-|z|^2)^2 at a point of the open disc."""
    zz = complex(z)
    s = abs(zz) ** 2
    if s >= 1.0:
        raise InputError(f"point with |z| = {math.sqrt(s):.6g} is not in the open disc")
    return 2.0 / (1.0 - s) ** 2


def poincare_distance(z1, z2) -> float:
    """Geodesic distance for the 2/(1-|z|^2)^2 tensor."""
    a, b = complex(z1), complex(z2)
    if abs(a) >= 1.0 or abs(b) >= 1.0:
        raise InputError("poincare distance needs points of the open disc")
    delta = abs((a - b) / (1.0 - b.conjugate() * a))
    return math.sqrt(2.0) * math.atanh(delta)


# --------------------------------------------------------------------------
# Ball domain, Bergman kernel and metric
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class BallDomain:
    """The ball of the given radius in C^arity (radius 1 unless stated)."""

    arity: int
    radius: float = 1.0

    def __post_init__(self):
        if self.arity < 1:
            raise InputError("ball arity must be at least 1")
        if self.radius <= 0:
            raise InputError("ball radius must be positive")

    def contains(self, z, strict: bool = True) -> bool:
        nz = float(np.linalg.norm(np.asarray(z, dtype=complex)))
        return nz < self.radius if strict else nz <= self.radius


def _point(z, arity: int) -> np.ndarray:
    a = np.asarray(z, dtype=complex)
    if a.ndim == 0:
        a = a.reshape(1)
    if a.shape != (arity,):
        raise InputError(f"expected a point of C^{arity}, got shape {a.shape}")
    return a


def bergman_kernel_ball(B: BallDomain, z) -> float:
    """On-diagonal Bergman kernel of the unit ball, n!/pi^n (1-|z|^2)^-(n+1)."""
    if B.radius != 1.0:
        raise InputError("kernel closed form is stated for the unit ball")
    zz = _point(z, B.arity)
    s = float(np.vdot(zz, zz).real)
    if s >= 1.0:
        raise InputError("kernel evaluation point must lie in the open ball")
    n = B.arity
    return math.factorial(n) / math.pi ** n * (1.0 - s) ** (-(n + 1))


@dataclass(frozen=True)
class MetricSample:
    """A Hermitian metric tensor attached to a point."""

    point: np.ndarray
    tensor: np.ndarray  # (n, n) complex, Hermitian positive definite

    def norm_sq(self, v) -> float:
        """Squared length sum_{mu,nu} g_{mu nu} v_mu conj(v_nu)."""
        vv = np.asarray(v, dtype=complex).reshape(-1)
        val = np.einsum("mn,m,n->", self.tensor, vv, vv.conjugate())
        return float(val.real)


def bergman_tensor_ball(B: BallDomain, z) -> MetricSample:
    """Bergman metric tensor of the radius-r ball at z.

    g_{mu nu} = (n+1) [ delta_{mu nu}/(r^2-|z|^2) + conj(z_mu) z_nu/(r^2-|z|^2)^2 ].
    """
    zz = _point(z, B.arity)
    r2 = B.radius ** 2
    s = float(np.vdot(zz, zz).real)
    if s >= r2:
        raise InputError("metric evaluation point must lie in the open ball")
    n = B.arity
    d = r2 - s
    g = np.eye(n, dtype=complex) / d + np.outer(zz.conjugate(), zz) / (d * d)
    return MetricSample(point=zz, tensor=(n + 1) * g)


def bergman_norm_sq(B: BallDomain, z, v) -> float:
    """Closed-form squared Bergman length of tangent vector v at z."""
    zz = _point(z, B.arity)
    vv = _point(v, B.arity)
    r2 = B.radius ** 2
    s = float(np.vdot(zz, zz).real)
    if s >= r2:
        raise InputError("metric evaluation point must lie in the open ball")
    d = r2 - s
    v2 = float(np.vdot(vv, vv).real)
    pair = complex(np.sum(vv * zz.conjugate()))  # <v, z>
    return (B.arity + 1) * (v2 / d + abs(pair) ** 2 / (d * d))


# --------------------------------------------------------------------------
# Automorphisms
# --------------------------------------------------------------------------

def disc_automorphism(a: complex, theta: float) -> ex.HoloExpr:
    """The disc automorphism z -> e^{i theta} (a - z)/(1 - conj(a) z)."""
    aa = complex(a)
    if abs(aa) >= 1.0:
        raise InputError("automorphism parameter must satisfy |a| < 1")
    z = ex.var_expr(1, 1)
    phase = ex.const_expr(complex(math.cos(theta), math.sin(theta)), 1)
    return phase * ((ex.const_expr(aa, 1) - z) / (ex.const_expr(1.0, 1) - ex.const_expr(aa.conjugate(), 1) * z))


@dataclass(frozen=True)
class BallAutomorphism:
    """The involutive Moebius map phi_a of the unit ball with phi_a(0) = a.

    phi_a(z) = (a - P_a z - s_a Q_a z) / (1 - <z, a>), with P_a the
    projection onto span(a), Q_a = I - P_a, and s_a = sqrt(1 - |a|^2).
    Components are expression trees, so jets through the map are exact.
    """

    a: np.ndarray
    components: tuple  # of ex.HoloExpr

    @property
    def arity(self) -> int:
        return len(self.a)

    def __call__(self, z) -> np.ndarray:
        zz = _point(z, self.arity)
        return np.array([c(zz) for c in self.components])

    def jacobian(self, z) -> np.ndarray:
        """Matrix J[mu, k] = d phi_mu / d z_k, exact via jets."""
        zz = _point(z, self.arity)
        return np.array([c.jet(zz).gradient for c in self.components])

    def pushforward(self, z, v) -> np.ndarray:
        vv = _point(v, self.arity)
        return self.jacobian(z) @ vv


def ball_automorphism(a) -> BallAutomorphism:
    """Construct phi_a for a point a of the open unit ball."""
    aa = np.asarray(a, dtype=complex)
    if aa.ndim == 0:
        aa = aa.reshape(1)
    n = aa.shape[0]
    norm2 = float(np.vdot(aa, aa).real)
    if norm2 >= 1.0:
        raise InputError("automorphism center must lie in the open ball")
    comps = []
    if norm2 == 0.0:
        for mu in range(n):
            comps.append(-ex.var_expr(mu + 1, n))
        return BallAutomorphism(a=aa, components=tuple(comps))
    s = math.sqrt(1.0 - norm2)
    # <z, a> as an expression
    dot = None
    for k in range(n):
        piece = ex.const_expr(aa[k].conjugate(), n) * ex.var_expr(k + 1, n)
        dot = piece if dot is None else dot + piece
    den = ex.const_expr(1.0, n) - dot
    for mu in range(n):
        # numerator: a_mu - s z_mu - (1 - s) (a_mu / |a|^2) <z, a>
        num = ex.const_expr(aa[mu], n) \
            - ex.const_expr(s, n) * ex.var_expr(mu + 1, n) \
            - ex.const_expr((1.0 - s) * aa[mu] / norm2, n) * dot
        comps.append(num / den)
    return BallAutomorphism(a=aa, components=tuple(comps))


# --------------------------------------------------------------------------
# Kobayashi metric of the ball
# --------------------------------------------------------------------------

def kobayashi_closed_form_ball(z, v) -> float:
    """Infinitesimal Kobayashi metric of the unit ball.

    F_K(z, v) = sqrt( |v|^2/(1-|z|^2) + |<v, z>|^2/(1-|z|^2)^2 ),
    normalised so F_K(0, v) = |v|.
    """
    zz = np.asarray(z, dtype=complex).reshape(-1)
    vv = np.asarray(v, dtype=complex).reshape(-1)
    if zz.shape != vv.shape:
        raise InputError("point and vector must have matching arity")
    s = float(np.vdot(zz, zz).real)
    if s >= 1.0:
        raise InputError("Kobayashi evaluation point must lie in the open ball")
    d = 1.0 - s
    v2 = float(np.vdot(vv, vv).real)
    pair = complex(np.sum(vv * zz.conjugate()))
    return math.sqrt(v2 / d + abs(pair) ** 2 / (d * d))


# --------------------------------------------------------------------------
# Analytic discs with verified containment
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DiscMap:
    """Polynomial analytic disc lambda -> sum_j a_j lambda^j into C^n.

    ``coefficients`` has shape (degree + 1, n) with a_0 first.
    """

    coefficients: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=complex)
        if c.ndim != 2 or c.shape[0] < 1:
            raise InputError("disc coefficients must form a (degree+1, n) array")
        object.__setattr__(self, "coefficients", c)

    @property
    def degree(self) -> int:
        return self.coefficients.shape[0] - 1

    @property
    def arity(self) -> int:
        return self.coefficients.shape[1]

    def __call__(self, lam) -> np.ndarray:
        """Evaluate at points lam (any shape); returns (..., n)."""
        L = np.asarray(lam, dtype=complex)
        out = np.zeros(L.shape + (self.arity,), dtype=complex)
        for a in self.coefficients[::-1]:
            out = out * L[..., None] + a
        return out

    def derivative(self, lam) -> np.ndarray:
        L = np.asarray(lam, dtype=complex)
        out = np.zeros(L.shape + (self.arity,), dtype=complex)
        d = self.degree
        for j in range(d, 0, -1):
            out = out * L[..., None] + j * self.coefficients[j]
        return out

    def derivative_at_zero(self) -> np.ndarray:
        if self.degree < 1:
            return np.zeros(self.arity, dtype=complex)
        return self.coefficients[1].copy()

    def boundary_max(self, samples: int | None = None) -> float:
        """Max image norm over the verification ring |lambda| = CONTAINMENT_RING."""
        if samples is None:
            samples = max(CONTAINMENT_SAMPLES, 4 * (self.degree + 1))
        theta = 2.0 * np.pi * np.arange(samples) / samples
        lam = CONTAINMENT_RING * np.exp(1j * theta)
        vals = self(lam)
        return float(np.max(np.linalg.norm(vals, axis=-1)))

    def contained_in_unit_ball(self, samples: int | None = None) -> bool:
        return self.boundary_max(samples) <= 1.0 - CONTAINMENT_MARGIN


def require_contained(disc: DiscMap) -> DiscMap:
    if not disc.contained_in_unit_ball():
        raise ContainmentError(
            f"disc of degree {disc.degree} leaves the unit ball "
            f"(boundary max {disc.boundary_max():.6g})"
        )
    return disc


def affine_disc(z, direction, stretch: float) -> DiscMap:
    """lambda -> z + lambda * stretch * direction."""
    zz = np.asarray(z, dtype=complex).reshape(-1)
    dd = np.asarray(direction, dtype=complex).reshape(-1)
    return DiscMap(np.stack([zz, stretch * dd]))


def random_disc_maps(arity: int, count: int, degree: int, seed: int,
                     through_origin: bool = False) -> list[DiscMap]:
    """Seeded polynomial discs, rescaled into the unit ball and verified."""
    if count < 1 or degree < 1:
        raise InputError("need count >= 1 and degree >= 1")
    rng = np.random.default_rng(seed)
    discs = []
    for _ in range(count):
        coeffs = np.zeros((degree + 1, arity), dtype=complex)
        if not through_origin:
            raw = rng.standard_normal(2 * arity)
            center = raw[:arity] + 1j * raw[arity:]
            coeffs[0] = 0.4 * center / max(1.0, np.linalg.norm(center))
        for j in range(1, degree + 1):
            raw = rng.standard_normal(2 * arity)
            coeffs[j] = (raw[:arity] + 1j * raw[arity:]) * (0.5 / j)
        disc = DiscMap(coeffs)
        b = disc.boundary_max()
        scale = (1.0 - 2.0 * CONTAINMENT_MARGIN) / max(b, 1e-12)
        if scale < 1.0:
            disc = DiscMap(coeffs * scale)
        discs.append(require_contained(disc))
    return discs


# --------------------------------------------------------------------------
# Kobayashi upper estimator
# --------------------------------------------------------------------------

def _affine_candidate(z, v_hat, v_norm):
    """Largest safe affine disc in direction v_hat and its alpha."""
    R = 1.0 - CONTAINMENT_MARGIN
    pair = abs(complex(np.sum(z * v_hat.conjugate())))  # |<z, v_hat>|
    s2 = R * R - float(np.vdot(z, z).real) + pair * pair
    stretch = -pair + math.sqrt(max(s2, 0.0))
    disc = affine_disc(z, v_hat, stretch)
    return disc, v_norm / stretch


def _extremal_parameters(z, v_hat):
    """Scalar data (t, q) of the geodesic disc psi(l) = z + t v_hat l/(1 - q l)."""
    nz = float(np.linalg.norm(z))
    z_hat = z / nz
    p = complex(np.sum(v_hat * z_hat.conjugate()))  # <v_hat, z_hat>
    rho = math.sqrt(max(0.0, 1.0 - abs(p) ** 2))
    s2 = 1.0 - nz * nz
    t = s2 / math.sqrt(abs(p) ** 2 + rho * rho * s2)
    q = -t * p * nz / s2
    return t, q


def _geometric_boundary_max(z, v_hat, t, q, sigma, d, samples=512):
    """Exact boundary max of the degree-d truncation scaled by sigma.

    The truncated disc is z + t v_hat G(l) with
    G(l) = sum_{j=1..d} (sigma l)^j q^(j-1); the geometric form keeps the
    evaluation O(samples) independent of d.
    """
    theta = 2.0 * np.pi * np.arange(samples) / samples
    lam = CONTAINMENT_RING * np.exp(1j * theta)
    w = sigma * lam
    ratio = q * w
    G = w * (1.0 - ratio ** d) / (1.0 - ratio)
    nz2 = float(np.vdot(z, z).real)
    p_full = complex(np.sum(v_hat * z.conjugate()))  # <v_hat, z>
    norm2 = nz2 + (t * np.abs(G)) ** 2 + 2.0 * t * np.real(G * p_full)
    return math.sqrt(float(np.max(norm2)))


def _truncated_geodesic_candidate(z, v_hat, v_norm, t, q, d):
    """Degree-d truncation of the geodesic disc, argument-scaled to fit."""
    target = 1.0 - CONTAINMENT_MARGIN
    lo, hi = 0.0, 1.0
    if _geometric_boundary_max(z, v_hat, t, q, 1.0, d) <= target:
        sigma = 1.0
    else:
        for _ in range(48):
            mid = 0.5 * (lo + hi)
            if _geometric_boundary_max(z, v_hat, t, q, mid, d) <= target:
                lo = mid
            else:
                hi = mid
        sigma = lo
    if sigma <= 0.0:
        return None
    j = np.arange(1, d + 1)

    def build(sig):
        scale = (sig ** j) * (q ** (j - 1))
        coeffs = np.zeros((d + 1, len(z)), dtype=complex)
        coeffs[0] = z
        coeffs[1:] = t * scale[:, None] * v_hat[None, :]
        return DiscMap(coeffs)

    disc = build(sigma)
    for _ in range(8):
        if disc.contained_in_unit_ball():
            return disc, v_norm / (t * sigma)
        sigma *= 0.999
        disc = build(sigma)
    return None


def _quadratic_candidate(z, v_hat, v_norm, rng):
    """Seeded degree-2 perturbation: z + beta l v_hat + gamma l^2 u."""
    n = len(z)
    raw = rng.standard_normal(2 * n)
    u = raw[:n] + 1j * raw[n:]
    u /= np.linalg.norm(u)
    gmag = rng.uniform(0.0, 0.25) * (1.0 - float(np.linalg.norm(z)))
    gph = rng.uniform(0.0, 2.0 * np.pi)
    a2 = gmag * complex(math.cos(gph), math.sin(gph)) * u

    def fits(beta):
        coeffs = np.stack([z, beta * v_hat, a2])
        return DiscMap(coeffs).contained_in_unit_ball()

    lo, hi = 0.0, 1.5
    if fits(hi):
        lo = hi
    else:
        for _ in range(24):
            mid = 0.5 * (lo + hi)
            if fits(mid):
                lo = mid
            else:
                hi = mid
    if lo <= 0.0:
        return None
    disc = DiscMap(np.stack([z, lo * v_hat, a2]))
    return disc, v_norm / lo


_GEODESIC_DEGREES = (2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64, 96, 128, 192, 256, 384, 512)


def kobayashi_upper(B: BallDomain, z, v, budget: int, seed: int = 0) -> float:
    """Upper bound on the Kobayashi metric F_K(z, v) of the unit ball.

    Minimises alpha over a fixed, seed-deterministic sequence of candidate
    analytic discs phi with phi(0) = z and phi'(0) a positive multiple of v:
    the largest safe affine disc in direction v, truncations of the geodesic
    disc at increasing polynomial degree, then seeded degree-2
    perturbations.  Every accepted disc passes the sampled containment check
    (ring radius 1 - 1e-6, margin 1e-9), so each candidate's alpha is a
    genuine upper bound by the defining infimum.  The result is
    nonincreasing in ``budget`` and reproducible for a fixed seed.
    """
    if B.radius != 1.0:
        raise InputError("upper estimator is stated for the unit ball")
    if budget < 1:
        raise InputError("budget must be at least 1")
    zz = _point(z, B.arity)
    vv = _point(v, B.arity)
    v_norm = float(np.linalg.norm(vv))
    if v_norm == 0.0:
        raise InputError("direction vector must be nonzero")
    if float(np.linalg.norm(zz)) >= 1.0:
        raise InputError("base point must lie in the open ball")
    v_hat = vv / v_norm

    best = math.inf
    used = 0

    disc, alpha = _affine_candidate(zz, v_hat, v_norm)
    if disc.contained_in_unit_ball():
        best = min(best, alpha)
    used += 1

    nz = float(np.linalg.norm(zz))
    if nz > 1e-12:
        t, q = _extremal_parameters(zz, v_hat)
        if abs(q) > 1e-14:
            for d in _GEODESIC_DEGREES:
                if used >= budget:
                    break
                cand = _truncated_geodesic_candidate(zz, v_hat, v_norm, t, q, d)
                used += 1
                if cand is None:
                    continue
                cdisc, calpha = cand
                if cdisc.contained_in_unit_ball():
                    best = min(best, calpha)

    rng = np.random.default_rng(seed)
    while used < budget:
        cand = _quadratic_candidate(zz, v_hat, v_norm, rng)
        used += 1
        if cand is None:
            continue
        cdisc, calpha = cand
        if cdisc.contained_in_unit_ball():
            best = min(best, calpha)

    if not math.isfinite(best):
        raise ContainmentError("no admissible disc found within budget")
    return best
