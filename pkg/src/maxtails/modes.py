"""Spherical-harmonic bookkeeping for axisymmetric Maxwell modes.

Holds the zero-spherical-harmonic (radial) projection, the electric and
magnetic charge integrals, the stationary charge-sector field, and the maps
between per-mode null-frame amplitudes and full 2-form tensors at a point.

Conventions: real spherical harmonics, m = 0 for evolution; the charge
normalization is 1/4pi so the Coulomb coefficient equals the charge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import lpmv

from . import geometry as geo
from .errors import InputError, UnsupportedConfigurationError
from .geometry import MetricSpec, SpacetimePoint, TwoForm

TWO_FORM_ZERO = np.zeros(6)


# ---------------------------------------------------------------------------
# mode labels and harmonics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ModeIndex:
    l: int
    m: int = 0
    parity: str = "even"

    def __post_init__(self):
        if self.l < 0:
            raise InputError("l must be >= 0")
        if abs(self.m) > self.l:
            raise InputError("|m| must be <= l")
        if self.parity not in ("even", "odd"):
            raise InputError("parity must be 'even' or 'odd'")

    @property
    def lam(self) -> float:
        return float(self.l * (self.l + 1))


def y_l0(l: int, theta) -> np.ndarray:
    """Real Y_{l0}(theta) = sqrt((2l+1)/4pi) P_l(cos theta)."""
    nl = math.sqrt((2 * l + 1) / (4.0 * math.pi))
    return nl * lpmv(0, l, np.cos(theta))


def dtheta_y_l0(l: int, theta) -> np.ndarray:
    """d/dtheta Y_{l0} = sqrt((2l+1)/4pi) P_l^1(cos theta) (Condon-Shortley)."""
    nl = math.sqrt((2 * l + 1) / (4.0 * math.pi))
    return nl * lpmv(1, l, np.cos(theta))


# ---------------------------------------------------------------------------
# sphere quadrature (Gauss-Legendre in cos theta x uniform trapezoid in phi)
# ---------------------------------------------------------------------------

def sphere_quadrature(n_theta: int = 16):
    """Nodes (theta_k, phi_j) and weights w s.t. sum w f = \\oint f dOmega.

    Exact for spherical harmonics with l <= 2 n_theta - 1 in theta and
    |m| < n_phi in phi (n_phi = 2 n_theta)."""
    if n_theta < 8:
        raise InputError("quadrature needs n_theta >= 8")
    xs, ws = np.polynomial.legendre.leggauss(n_theta)
    thetas = np.arccos(xs)
    n_phi = 2 * n_theta
    phis = 2.0 * math.pi * np.arange(n_phi) / n_phi
    w = np.outer(ws, np.full(n_phi, 2.0 * math.pi / n_phi))
    return thetas, phis, w


@dataclass
class RadialPart:
    """Zero-harmonic part of F at one (t, r): F-bar = f_tr dt^dr + kappa dw^2.

    ``kappa`` is the coefficient of sin(theta) dtheta^dphi (the magnetic
    aspect); for the monopole field q_m sin(theta) dtheta^dphi it equals q_m.
    """

    t: float
    r: float
    f_tr: float
    kappa: float


@dataclass
class ChargePair:
    q_e: float
    q_m: float


def _sph_pieces(field, t: float, r: float, n_theta: int):
    thetas, phis, w = sphere_quadrature(n_theta)
    f_tr = np.zeros((len(thetas), len(phis)))
    kap = np.zeros_like(f_tr)
    for i, th in enumerate(thetas):
        for j, ph in enumerate(phis):
            p = geo.point_spherical(t, r, th, ph)
            fm = TwoForm(np.asarray(field(p))).as_matrix()
            n = p.x / r
            st = math.sin(th)
            theta_hat = np.array([math.cos(th) * math.cos(ph),
                                  math.cos(th) * math.sin(ph), -st])
            phi_hat = np.array([-math.sin(ph), math.cos(ph), 0.0])
            f_tr[i, j] = fm[0, 1:] @ n
            # F_(theta phi)/sin(theta) = r^2 F_ij thetahat_i phihat_j
            kap[i, j] = r ** 2 * theta_hat @ fm[1:, 1:] @ phi_hat
    return f_tr, kap, w


def radial_part(field, t: float, r: float, n_theta: int = 16) -> RadialPart:
    """Sphere average retaining the (tr) and angular components of F."""
    f_tr, kap, w = _sph_pieces(field, t, r, n_theta)
    quarter = 1.0 / (4.0 * math.pi)
    return RadialPart(t=t, r=r, f_tr=quarter * float(np.sum(w * f_tr)),
                      kappa=quarter * float(np.sum(w * kap)))


def charges(spec: MetricSpec, field, t: float, r: float,
            n_theta: int = 16) -> ChargePair:
    """q_m = (1/4pi) \\oint F, q_e = (1/4pi) \\oint *F over the sphere.

    Signs fixed so the Coulomb field q/r^2 dt^dr returns q_e = q and the
    monopole q_m sin(theta) dtheta^dphi returns q_m."""
    q_m = radial_part(field, t, r, n_theta).kappa

    def starred(p: SpacetimePoint) -> np.ndarray:
        return geo.hodge_star_2form(spec, p, TwoForm(np.asarray(field(p)))).comps

    q_e = -radial_part(starred, t, r, n_theta).kappa
    return ChargePair(q_e=q_e, q_m=q_m)


# ---------------------------------------------------------------------------
# stationary charge sector
# ---------------------------------------------------------------------------

@dataclass
class ChargeSectorField:
    """The unique stationary l = 0 solution with prescribed charges and
    decay at infinity: F-bar_tr = q_e / (r^2 (1 + g_omega)), kappa = q_m."""

    spec: MetricSpec
    q_e: float
    q_m: float

    def f_tr(self, r: float) -> float:
        w = 0.0
        if self.spec.family == "general_normalized" and self.spec.g_omega:
            w = self.spec.g_omega(r)
        return self.q_e / (r ** 2 * (1.0 + w))

    def profile(self, r: float, t: float = 0.0) -> RadialPart:
        return RadialPart(t=t, r=r, f_tr=self.f_tr(r), kappa=self.q_m)

    def field(self, p: SpacetimePoint) -> np.ndarray:
        r = p.r
        n = p.x / r
        m = np.zeros((4, 4))
        m[0, 1:] = self.f_tr(r) * n
        m = m - m.T
        if self.q_m != 0.0:
            rho = math.hypot(p.x[0], p.x[1])
            if rho == 0.0:
                raise geo.FrameUndefinedError("monopole field sampled on axis")
            ct, st = p.x[2] / r, rho / r
            cp, sp = p.x[0] / rho, p.x[1] / rho
            th = np.array([ct * cp, ct * sp, -st])
            ph = np.array([-sp, cp, 0.0])
            m[1:, 1:] += (self.q_m / r ** 2) * (np.outer(th, ph) - np.outer(ph, th))
        return TwoForm.from_matrix(m).comps


def charge_sector_evolution(q_e: float, q_m: float, spec: MetricSpec,
                            g_bar=None) -> ChargeSectorField:
    """Stationary charge-sector profile for the homogeneous radial system.

    Inhomogeneous radial sources belong to the zero-resolvent solver."""
    if g_bar is not None:
        raise UnsupportedConfigurationError(
            "nonzero radial source: use zeroresolvent.solve_radial")
    if spec.family == "schwarzschild" and spec.g_omega is not None:
        raise InputError("schwarzschild spec carries no g_omega")
    return ChargeSectorField(spec=spec, q_e=q_e, q_m=q_m)


# ---------------------------------------------------------------------------
# mode amplitudes <-> tensors
# ---------------------------------------------------------------------------

@dataclass
class ModeAmplitudes:
    """Null-frame mode amplitudes at one (t, r).

    For even parity: F_uv = uv Y_l0, F_uA = ua dtheta(Y_l0)/1, F_vA = va
    dtheta(Y_l0), F_AB = 0; odd parity carries (ab, ua, ub) on the dual legs
    (F_AB = ab Y_l0, F_uB = ua dtheta Y_l0, F_vB = va dtheta Y_l0).
    """

    uv: float = 0.0
    ua: float = 0.0
    va: float = 0.0
    ab: float = 0.0


def mode_sample_to_tensor(spec: MetricSpec, mode: ModeIndex,
                          amps: ModeAmplitudes, p: SpacetimePoint) -> np.ndarray:
    """Assemble the full Cartesian 2-form of an m = 0 mode at p."""
    if mode.l == 0:
        raise InputError("l = 0 is the charge sector; use charge_sector_evolution")
    r = p.r
    rho = math.hypot(p.x[0], p.x[1])
    theta = math.atan2(rho, p.x[2])
    Y = float(y_l0(mode.l, theta))
    dY = float(dtheta_y_l0(mode.l, theta))
    fvel = 1.0 - 2.0 * spec.mass / r if spec.family == "schwarzschild" else 1.0

    # invert the frame-amplitude relations to polar coordinate components
    f_sph = np.zeros((4, 4))
    if mode.parity == "even":
        a = 2.0 * amps.uv / fvel                 # F_tr = a Y
        b = r * (amps.ua + amps.va)              # F_t-theta = b dY
        c = r * (amps.va - amps.ua) / fvel       # F_r-theta = c dY
        f_sph[0, 1] = a * Y
        f_sph[0, 2] = b * dY
        f_sph[1, 2] = c * dY
    else:
        k = r ** 2 * amps.ab                     # F_theta-phi = k sin(th) Y
        h_t = r * (amps.va + amps.ua)            # F_t-phi = h_t sin(th) dY
        h_r = r * (amps.va - amps.ua) / fvel     # F_r-phi = h_r sin(th) dY
        st = math.sin(theta)
        f_sph[2, 3] = k * st * Y
        f_sph[0, 3] = h_t * st * dY
        f_sph[1, 3] = h_r * st * dY
    f_sph = f_sph - f_sph.T
    return geo.spherical_to_cartesian_2form(f_sph, p).comps


def mode_project(spec: MetricSpec, field, mode: ModeIndex, t: float, r: float,
                 n_theta: int = 16) -> ModeAmplitudes:
    """Project a 2-form field onto the (l, m=0, parity) frame amplitudes by
    sphere quadrature (the inverse of mode_sample_to_tensor)."""
    if mode.l == 0:
        raise InputError("l = 0 belongs to radial_part/charges")
    thetas, phis, w = sphere_quadrature(n_theta)
    lam = mode.lam
    acc = {"uv": 0.0, "ua": 0.0, "va": 0.0, "ab": 0.0}
    for i, th in enumerate(thetas):
        Y = float(y_l0(mode.l, th))
        dY = float(dtheta_y_l0(mode.l, th))
        for j, ph in enumerate(phis):
            p = geo.point_spherical(t, r, th, ph)
            fc = geo.frame_components(TwoForm(np.asarray(field(p))),
                                      geo.null_frame(spec, p))
            if mode.parity == "even":
                acc["uv"] += w[i, j] * fc.uv * Y
                acc["ua"] += w[i, j] * fc.ua * dY
                acc["va"] += w[i, j] * fc.va * dY
            else:
                acc["ab"] += w[i, j] * fc.ab * Y
                acc["ua"] += w[i, j] * fc.ub * dY
                acc["va"] += w[i, j] * fc.vb * dY
    return ModeAmplitudes(uv=acc["uv"], ua=acc["ua"] / lam, va=acc["va"] / lam,
                          ab=acc["ab"])
