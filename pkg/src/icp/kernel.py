"""Angle functions, conformal factors and their derivatives.

Conventions: a kite Q_e is spanned by the centers of circles v and w and
the two intersection points; its angle at an intersection point is
π - Θ.  ``α_v^w`` is the kite angle at the center of v.  All functions
accept numpy arrays and broadcast.

Half angles are evaluated with ``atan2`` instead of ``arccos``/``arccot``;
both sides are well defined for Θ in (0, π) so no clamping is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateQuad, DomainError, MissingRadius

EUCLIDEAN = "euclidean"
HYPERBOLIC = "hyperbolic"

CIRCLE = "circle"
HOROCYCLE = "horocycle"
HYPERCYCLE = "hypercycle"


def _out(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def _positive(*xs):
    for x in xs:
        if np.any(~(np.asarray(x, dtype=float) > 0)):
            raise DomainError("radii must be positive")


def _angle_ok(theta):
    t = np.asarray(theta, dtype=float)
    if np.any(~((t > 0) & (t < math.pi))):
        raise DomainError("intersection angle must lie in (0, pi)")


def background_name(b: str) -> str:
    b = b.lower()
    if b in ("euclidean", "euc", "e"):
        return EUCLIDEAN
    if b in ("hyperbolic", "hyp", "h"):
        return HYPERBOLIC
    raise DomainError(f"unknown background {b!r}")


# -- angle functions ---------------------------------------------------------


def alpha_euclid(r_v, r_w, theta):
    """Kite angle at the center of v, Euclidean background."""
    _positive(r_v, r_w)
    _angle_ok(theta)
    r_v, r_w, theta = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (r_v, r_w, theta)))
    return _out(2.0 * np.arctan2(r_w * np.sin(theta), r_v + r_w * np.cos(theta)))


def alpha_euclid_arccos(r_v, r_w, theta):
    """Same angle through the textbook arccos expression (reference form)."""
    _positive(r_v, r_w)
    c = np.cos(theta)
    num = r_v + r_w * c
    den = np.sqrt(r_v * r_v + r_w * r_w + 2 * r_v * r_w * c)
    x = num / den
    if np.any(np.abs(x) > 1 + 1e-12):
        raise DomainError("arccos argument out of range")
    return _out(2.0 * np.arccos(np.clip(x, -1.0, 1.0)))


def extended_alpha(q, theta):
    """α(q, Θ) with q = r_v / r_w extended to q = 0 (value 2Θ) and q = inf (value 0)."""
    q = np.asarray(q, dtype=float)
    theta = np.asarray(theta, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        inner = 2.0 * np.arctan2(np.sin(theta), q + np.cos(theta))
    val = np.where(q == 0, 2 * theta, np.where(np.isinf(q), 0.0, inner))
    return _out(val)


def g_factor(u):
    """coth r for a circle, tanh r for a hypercycle, 1 for a horocycle.

    Written in the conformal factor this is cosh u for u <= 0 and cos u for
    0 <= u < π/2, a C^1 function across the horocycle value u = 0.
    """
    u = np.asarray(u, dtype=float)
    return _out(np.where(u <= 0, np.cosh(np.minimum(u, 0)), np.cos(np.maximum(u, 0))))


def g_factor_slope(u):
    u = np.asarray(u, dtype=float)
    return _out(np.where(u <= 0, np.sinh(np.minimum(u, 0)), -np.sin(np.maximum(u, 0))))


def alpha_hyp(r_v, r_w, theta):
    """Kite angle at the center of v, hyperbolic background, both ordinary circles."""
    _positive(r_v, r_w)
    _angle_ok(theta)
    r_v, r_w, theta = (np.asarray(x, dtype=float) for x in (r_v, r_w, theta))
    x = np.sinh(r_v) / np.tanh(r_w) + np.cos(theta) * np.cosh(r_v)
    return _out(2.0 * np.arctan2(np.sin(theta), x))


def alpha_generalized(u_v, r_w, theta):
    """Angle at the center of the circle w next to a generalized circle v.

    ``u_v`` < 0 is a circle, 0 a horocycle, (0, π/2) a hypercycle.
    cot(α/2) = (G(u_v) sinh r_w + cos Θ cosh r_w) / sin Θ where G is
    :func:`g_factor`.
    """
    u_v = np.asarray(u_v, dtype=float)
    if np.any(u_v >= math.pi / 2):
        raise DomainError("generalized factor must be below pi/2")
    _positive(r_w)
    _angle_ok(theta)
    r_w, theta = np.asarray(r_w, dtype=float), np.asarray(theta, dtype=float)
    x = g_factor(u_v) * np.sinh(r_w) + np.cos(theta) * np.cosh(r_w)
    return _out(2.0 * np.arctan2(np.sin(theta), x))


def dalpha_generalized(u_v, r_w, theta):
    """∂α_w^v/∂u_v for :func:`alpha_generalized` (nonnegative, zero only at u_v = 0)."""
    a = np.asarray(alpha_generalized(u_v, r_w, theta))
    return _out(
        -2.0 * np.sin(a / 2) ** 2 * np.sinh(r_w) * np.asarray(g_factor_slope(u_v)) / np.sin(theta)
    )


# -- conformal factors -------------------------------------------------------


@dataclass(frozen=True)
class GeneralizedCircle:
    kind: str
    radius: float | None
    u: float


def conformal_factor(kind: str, r: float | None = None, background: str = HYPERBOLIC) -> float:
    """u from a radius: ln r (Euclidean), ln tanh(r/2), 0, or arccot(sinh r)."""
    background = background_name(background)
    if background == EUCLIDEAN:
        if kind != CIRCLE:
            raise DomainError("Euclidean background only has circles")
        if r is None or not r > 0:
            raise DomainError("radius must be positive")
        return math.log(r)
    if kind == HOROCYCLE:
        return 0.0
    if r is None or not r > 0 or not math.isfinite(r):
        raise DomainError("radius must be positive and finite")
    if kind == CIRCLE:
        # ln tanh(r/2) = log1p(-e^-r) - log1p(e^-r), accurate for large r
        t = math.exp(-r)
        return math.log1p(-t) - math.log1p(t)
    if kind == HYPERCYCLE:
        return math.atan2(1.0, math.sinh(r))
    raise DomainError(f"unknown kind {kind!r}")


def radius_from_factor(background: str, u: float) -> GeneralizedCircle:
    background = background_name(background)
    u = float(u)
    if not math.isfinite(u):
        raise DomainError("factor must be finite")
    if background == EUCLIDEAN:
        return GeneralizedCircle(CIRCLE, math.exp(u), u)
    if u < 0:
        return GeneralizedCircle(CIRCLE, 2 * math.atanh(math.exp(u)), u)
    if u == 0:
        return GeneralizedCircle(HOROCYCLE, None, 0.0)
    if u < math.pi / 2:
        return GeneralizedCircle(HYPERCYCLE, math.asinh(1.0 / math.tan(u)), u)
    raise DomainError("hyperbolic factor must be below pi/2")


def hyp_radius(u):
    """Hyperbolic radius of circles with factor u < 0 (vectorized)."""
    u = np.asarray(u, dtype=float)
    return _out(2.0 * np.arctanh(np.exp(u)))


def kind_of(background: str, u: float) -> str:
    if background_name(background) == EUCLIDEAN or u < 0:
        return CIRCLE
    return HOROCYCLE if u == 0 else HYPERCYCLE


# -- kite geometry -----------------------------------------------------------


@dataclass(frozen=True)
class QuadGeometry:
    l: float
    d: float
    half_angles: tuple
    background: str


def quad_geometry(background: str, r_v: float, r_w: float, theta: float) -> QuadGeometry:
    """Center distance, altitude and half angles of the kite of edge vw."""
    background = background_name(background)
    _positive(r_v, r_w)
    _angle_ok(theta)
    if background == EUCLIDEAN:
        l2 = r_v * r_v + r_w * r_w + 2 * r_v * r_w * math.cos(theta)
        if l2 <= 1e-18 * (r_v * r_v + r_w * r_w):
            raise DegenerateQuad("centers coincide")
        hv = alpha_euclid(r_v, r_w, theta) / 2
        hw = alpha_euclid(r_w, r_v, theta) / 2
        return QuadGeometry(math.sqrt(l2), r_v * math.sin(hv), (hv, hw), background)
    cl = math.cosh(r_v) * math.cosh(r_w) + math.sinh(r_v) * math.sinh(r_w) * math.cos(theta)
    if cl - 1 <= 1e-18:
        raise DegenerateQuad("centers coincide")
    hv = alpha_hyp(r_v, r_w, theta) / 2
    hw = alpha_hyp(r_w, r_v, theta) / 2
    d = math.asinh(math.sinh(r_v) * math.sin(hv))
    return QuadGeometry(math.acosh(cl), d, (hv, hw), background)


def dalpha_du(background: str, r_v, r_w, theta):
    """(∂α_v^w/∂u_v, ∂α_v^w/∂u_w) from the kite's center distance l and altitude d.

    Euclidean: (-2d/l, 2d/l).  Hyperbolic: (-2 cosh l sinh d / sinh l,
    2 sinh d / sinh l).
    """
    background = background_name(background)
    _positive(r_v, r_w)
    _angle_ok(theta)
    r_v, r_w, theta = (np.asarray(x, dtype=float) for x in (r_v, r_w, theta))
    if background == EUCLIDEAN:
        h = np.asarray(alpha_euclid(r_v, r_w, theta)) / 2
        l = np.sqrt(r_v * r_v + r_w * r_w + 2 * r_v * r_w * np.cos(theta))
        d = r_v * np.sin(h)
        return _out(-2 * d / l), _out(2 * d / l)
    h = np.asarray(alpha_hyp(r_v, r_w, theta)) / 2
    cl = np.cosh(r_v) * np.cosh(r_w) + np.sinh(r_v) * np.sinh(r_w) * np.cos(theta)
    sl = np.sqrt(np.maximum(cl * cl - 1, 0.0))
    sd = np.sinh(r_v) * np.sin(h)
    return _out(-2 * cl * sd / sl), _out(2 * sd / sl)


# -- vectorized pieces used by the solver ------------------------------------


def edge_terms(background: str, u_v, u_w, theta):
    """α_v^w and its partials in u_v, u_w for arrays of directed edges.

    v must be an ordinary circle.  In the hyperbolic background w may be a
    circle, horocycle or hypercycle (u_w in (-inf, π/2)).
    """
    u_v, u_w, theta = (np.asarray(x, dtype=float) for x in (u_v, u_w, theta))
    st, ct = np.sin(theta), np.cos(theta)
    if background == EUCLIDEAN:
        r_v, r_w = np.exp(u_v), np.exp(u_w)
        h = np.arctan2(r_w * st, r_v + r_w * ct)
        l = np.sqrt(r_v * r_v + r_w * r_w + 2 * r_v * r_w * ct)
        k = 2 * r_v * np.sin(h) / l
        return 2 * h, -k, k
    # circle v: sinh r = 1/sinh(-u), cosh r = cosh u / sinh(-u)
    s = np.sinh(-u_v)
    sh, ch = 1.0 / s, np.cosh(u_v) / s
    G = np.where(u_w <= 0, np.cosh(np.minimum(u_w, 0)), np.cos(np.maximum(u_w, 0)))
    Gp = np.where(u_w <= 0, np.sinh(np.minimum(u_w, 0)), -np.sin(np.maximum(u_w, 0)))
    x = G * sh + ct * ch
    h = np.arctan2(st, x)
    s2 = np.sin(h) ** 2
    d_v = -2 * s2 * (G * ch + ct * sh) * sh / st
    d_w = -2 * s2 * sh * Gp / st
    return 2 * h, d_v, d_w


def cone_angle_and_curvature(c, a, state, v):
    """(α_v, K_v) at one vertex for a state with attributes ``background`` and ``u``."""
    bg = state.background
    u = state.u
    total = 0.0
    for x in (v,) + tuple(c.neighbors[v]):
        if x not in u:
            raise MissingRadius(f"no radius for vertex {x}")
    for w in c.neighbors[v]:
        alpha, _, _ = edge_terms(bg, u[v], u[w], a[(v, w)])
        total += float(alpha)
    return total, 2 * math.pi - total
