"""Metric catalog and pointwise tensor algebra.

Everything lives in normalized Cartesian coordinates (t, x, y, z).  The
catalog holds three families of spherically symmetric asymptotically flat
backgrounds:

* ``minkowski``             flat space,
* ``schwarzschild``         mass M, exterior chart r > 2M,
* ``general_normalized``    -dt^2 + dx^2 + g_omega(r) r^2 domega^2 plus an
                            optional short-range perturbation g_sr with
                            O(r^-2) Cartesian components.

The module provides the pointwise operations the rest of the package is
built on: metric components and inverse, Hodge star on 2-forms, null
frames and frame components, tortoise coordinate maps, finite-difference
curvature, and symbol-class decay checks for radial coefficient functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import permutations
from typing import Callable

import numpy as np

from .errors import (
    DegenerateMetricError,
    DomainError,
    FrameUndefinedError,
    InputError,
)

# Coordinate order (t, x, y, z); component storage order for 2- and 3-forms.
PAIRS = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
TRIPLES = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]

_PAIR_INDEX = {p: k for k, p in enumerate(PAIRS)}
_TRIPLE_INDEX = {t: k for k, t in enumerate(TRIPLES)}


def _levi_civita4() -> np.ndarray:
    eps = np.zeros((4, 4, 4, 4))
    for perm in permutations(range(4)):
        sign = 1.0
        p = list(perm)
        for i in range(4):
            for j in range(i + 1, 4):
                if p[i] > p[j]:
                    sign = -sign
        eps[perm] = sign
    return eps


#: Levi-Civita symbol with eps_{txyz} = +1 (orientation fixed once for all).
EPS4 = _levi_civita4()


# ---------------------------------------------------------------------------
# points and simple containers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpacetimePoint:
    t: float
    x: np.ndarray  # shape (3,)

    @property
    def r(self) -> float:
        return float(np.linalg.norm(self.x))

    @property
    def omega(self) -> np.ndarray:
        r = self.r
        if r == 0.0:
            raise FrameUndefinedError("direction undefined at r = 0")
        return self.x / r

    def shifted(self, mu: int, h: float) -> "SpacetimePoint":
        if mu == 0:
            return SpacetimePoint(self.t + h, self.x)
        dx = self.x.copy()
        dx[mu - 1] += h
        return SpacetimePoint(self.t, dx)


def point(t: float, x: float, y: float, z: float) -> SpacetimePoint:
    return SpacetimePoint(float(t), np.array([x, y, z], dtype=float))


def point_spherical(t: float, r: float, theta: float, phi: float) -> SpacetimePoint:
    st, ct = math.sin(theta), math.cos(theta)
    return point(t, r * st * math.cos(phi), r * st * math.sin(phi), r * ct)


@dataclass
class TwoForm:
    """Antisymmetric rank-2 tensor at a point, Cartesian components.

    Stores the six independent entries F_{ab}, a < b, in PAIRS order.
    """

    comps: np.ndarray  # shape (6,)

    def as_matrix(self) -> np.ndarray:
        m = np.zeros((4, 4))
        for k, (a, b) in enumerate(PAIRS):
            m[a, b] = self.comps[k]
            m[b, a] = -self.comps[k]
        return m

    @staticmethod
    def from_matrix(m: np.ndarray) -> "TwoForm":
        return TwoForm(np.array([m[a, b] for a, b in PAIRS]))

    def __add__(self, other: "TwoForm") -> "TwoForm":
        return TwoForm(self.comps + other.comps)

    def __sub__(self, other: "TwoForm") -> "TwoForm":
        return TwoForm(self.comps - other.comps)

    def __mul__(self, c: float) -> "TwoForm":
        return TwoForm(self.comps * c)

    __rmul__ = __mul__

    def norm(self) -> float:
        return float(np.max(np.abs(self.comps)))


@dataclass
class ThreeForm:
    """Fully antisymmetric rank-3 tensor; four entries in TRIPLES order."""

    comps: np.ndarray  # shape (4,)

    def component(self, a: int, b: int, c: int) -> float:
        key = tuple(sorted((a, b, c)))
        sign = _perm_sign((a, b, c))
        return sign * self.comps[_TRIPLE_INDEX[key]]

    def __sub__(self, other: "ThreeForm") -> "ThreeForm":
        return ThreeForm(self.comps - other.comps)

    def norm(self) -> float:
        return float(np.max(np.abs(self.comps)))


def _perm_sign(idx) -> float:
    sign = 1.0
    p = list(idx)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


# ---------------------------------------------------------------------------
# radial coefficient profiles (named registry; configs never carry code)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RadialProfile:
    """Named radial function with an analytic first derivative."""

    name: str
    params: tuple
    fn: Callable[[float, tuple], float]
    dfn: Callable[[float, tuple], float]

    def __call__(self, r):
        return self.fn(r, self.params)

    def d(self, r):
        return self.dfn(r, self.params)


def _reg(name):
    def deco(builder):
        _PROFILE_BUILDERS[name] = builder
        return builder
    return deco


_PROFILE_BUILDERS: dict = {}


@_reg("zero")
def _p_zero() -> RadialProfile:
    return RadialProfile("zero", (), lambda r, p: 0.0 * r, lambda r, p: 0.0 * r)


@_reg("inverse_r")
def _p_inverse_r(c: float = 1.0) -> RadialProfile:
    return RadialProfile(
        "inverse_r", (c,),
        lambda r, p: p[0] / r,
        lambda r, p: -p[0] / r ** 2,
    )


@_reg("inverse_r2")
def _p_inverse_r2(c: float = 1.0) -> RadialProfile:
    # c/(4 + r^2): an exact member of S^Z(r^-2), smooth down to r = 0
    return RadialProfile(
        "inverse_r2", (c,),
        lambda r, p: p[0] / (4.0 + r ** 2),
        lambda r, p: -2.0 * p[0] * r / (4.0 + r ** 2) ** 2,
    )


@_reg("schwarzschild_gomega")
def _p_schw_gomega(mass: float = 1.0) -> RadialProfile:
    # Angular coefficient of Schwarzschild after dividing out f = 1 - 2M/r:
    # r^2/f = r^2 (1 + g_omega) with g_omega = 2M/(r - 2M), an S^Z(r^-1)
    # function on any chart r >= r0 > 2M.
    return RadialProfile(
        "schwarzschild_gomega", (mass,),
        lambda r, p: 2.0 * p[0] / (r - 2.0 * p[0]),
        lambda r, p: -2.0 * p[0] / (r - 2.0 * p[0]) ** 2,
    )


def profile(name: str, *params) -> RadialProfile:
    try:
        return _PROFILE_BUILDERS[name](*params)
    except KeyError:
        raise InputError(f"unknown radial profile {name!r}") from None


# ---------------------------------------------------------------------------
# metric specs
# ---------------------------------------------------------------------------

#: keys of the short-range block, symmetric spatial Cartesian components
SR_KEYS = ("xx", "xy", "xz", "yy", "yz", "zz")
_SR_SLOT = {"xx": (1, 1), "xy": (1, 2), "xz": (1, 3),
            "yy": (2, 2), "yz": (2, 3), "zz": (3, 3)}


@dataclass(frozen=True)
class MetricSpec:
    """A background spacetime in normalized coordinates.

    ``g_sr`` maps the six spatial component labels to radial profiles; each
    entry h(r) contributes h(r) dx_i dx_j to the metric and must lie in
    S^Z(r^-2).  Off-diagonal entries break spherical symmetry, which is what
    the rotation-commutator checks need.
    """

    family: str
    mass: float = 0.0
    g_omega: RadialProfile | None = None
    g_sr: dict = field(default_factory=dict)
    domain_r_min: float = 0.0

    def __post_init__(self):
        if self.family not in ("minkowski", "schwarzschild", "general_normalized"):
            raise InputError(f"unknown metric family {self.family!r}")
        if self.family == "schwarzschild" and self.mass <= 0.0:
            raise InputError("schwarzschild family needs mass > 0")
        for k in self.g_sr:
            if k not in SR_KEYS:
                raise InputError(f"unknown short-range component {k!r}")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def minkowski() -> "MetricSpec":
        return MetricSpec("minkowski")

    @staticmethod
    def schwarzschild(mass: float) -> "MetricSpec":
        return MetricSpec("schwarzschild", mass=mass, domain_r_min=2.0 * mass)

    @staticmethod
    def general_normalized(g_omega: RadialProfile | None = None,
                           g_sr: dict | None = None,
                           domain_r_min: float = 0.0) -> "MetricSpec":
        return MetricSpec("general_normalized", g_omega=g_omega,
                          g_sr=dict(g_sr or {}), domain_r_min=domain_r_min)

    # -- bookkeeping --------------------------------------------------------

    @property
    def horizon_radius(self) -> float:
        return 2.0 * self.mass if self.family == "schwarzschild" else 0.0

    def check_point(self, p: SpacetimePoint) -> None:
        r = p.r
        if r <= self.domain_r_min:
            raise DomainError(
                f"r = {r:.6g} inside excision radius {self.domain_r_min:.6g}")
        if self.family == "schwarzschild" and r <= 2.0 * self.mass:
            raise DomainError(f"r = {r:.6g} not outside horizon 2M = {2*self.mass:.6g}")

    def is_spherically_symmetric(self) -> bool:
        if not self.g_sr:
            return True
        # diagonal-equal spatial block would still be symmetric; the catalog
        # only uses g_sr for symmetry breaking, so any entry counts as not.
        return all(prof.name == "zero" for prof in self.g_sr.values())

    # -- serialization (External Interfaces: named registry, no code) -------

    def to_config(self) -> dict:
        cfg: dict = {"family": self.family, "mass": self.mass,
                     "domain_r_min": self.domain_r_min}
        if self.g_omega is not None:
            cfg["g_omega"] = {"name": self.g_omega.name,
                              "params": list(self.g_omega.params)}
        if self.g_sr:
            cfg["g_sr"] = {k: {"name": v.name, "params": list(v.params)}
                           for k, v in self.g_sr.items()}
        return cfg

    @staticmethod
    def from_config(cfg: dict) -> "MetricSpec":
        gom = cfg.get("g_omega")
        gsr = cfg.get("g_sr", {})
        return MetricSpec(
            cfg["family"], mass=float(cfg.get("mass", 0.0)),
            g_omega=profile(gom["name"], *gom.get("params", [])) if gom else None,
            g_sr={k: profile(v["name"], *v.get("params", [])) for k, v in gsr.items()},
            domain_r_min=float(cfg.get("domain_r_min", 0.0)),
        )


# ---------------------------------------------------------------------------
# metric evaluation
# ---------------------------------------------------------------------------

def metric(spec: MetricSpec, p: SpacetimePoint) -> np.ndarray:
    """Covariant metric g_{ab} at p, Cartesian components."""
    spec.check_point(p)
    g = np.diag([-1.0, 1.0, 1.0, 1.0])
    if spec.family == "minkowski":
        return g
    r = p.r
    n = p.x / r
    if spec.family == "schwarzschild":
        f = 1.0 - 2.0 * spec.mass / r
        g[0, 0] = -f
        g[1:, 1:] += (1.0 / f - 1.0) * np.outer(n, n)
    elif spec.family == "general_normalized":
        if spec.g_omega is not None:
            g[1:, 1:] += spec.g_omega(r) * (np.eye(3) - np.outer(n, n))
        for key, prof in spec.g_sr.items():
            i, j = _SR_SLOT[key]
            h = prof(r)
            g[i, j] += h
            if i != j:
                g[j, i] += h
    return g


def metric_components(spec: MetricSpec, p: SpacetimePoint):
    """Return (g, g_inverse, sqrt(-det g)) at p.

    Raises DegenerateMetricError when the spec fails to produce a Lorentzian
    invertible matrix there.
    """
    g = metric(spec, p)
    det = np.linalg.det(g)
    if not np.isfinite(det) or det >= 0.0:
        raise DegenerateMetricError(f"metric degenerate at r = {p.r:.6g} (det = {det:.3g})")
    ginv = np.linalg.inv(g)
    return g, ginv, math.sqrt(-det)


def metric_deriv(spec: MetricSpec, p: SpacetimePoint) -> np.ndarray:
    """Analytic first derivatives d_c g_{ab}; shape (4, 4, 4), index c first.

    All catalog metrics are stationary, so the t-derivative slot is zero.
    """
    spec.check_point(p)
    dg = np.zeros((4, 4, 4))
    r = p.r
    n = p.x / r
    # dn_i/dx_j = (delta_ij - n_i n_j)/r
    dn = (np.eye(3) - np.outer(n, n)) / r
    if spec.family == "minkowski":
        return dg
    if spec.family == "schwarzschild":
        M = spec.mass
        f = 1.0 - 2.0 * M / r
        c = 1.0 / f - 1.0
        dc_dr = -(2.0 * M / r ** 2) / f ** 2
        for k in range(3):
            dr_k = n[k]
            dg[k + 1, 0, 0] = -(2.0 * M / r ** 2) * dr_k
            block = dc_dr * dr_k * np.outer(n, n) + c * (
                np.outer(dn[:, k], n) + np.outer(n, dn[:, k]))
            dg[k + 1, 1:, 1:] = block
        return dg
    # general_normalized
    if spec.g_omega is not None:
        w, dw = spec.g_omega(r), spec.g_omega.d(r)
        proj = np.eye(3) - np.outer(n, n)
        for k in range(3):
            block = dw * n[k] * proj - w * (
                np.outer(dn[:, k], n) + np.outer(n, dn[:, k]))
            dg[k + 1, 1:, 1:] += block
    for key, prof in spec.g_sr.items():
        i, j = _SR_SLOT[key]
        dh = prof.d(r)
        for k in range(3):
            dg[k + 1, i, j] += dh * n[k]
            if i != j:
                dg[k + 1, j, i] += dh * n[k]
    return dg


def christoffel(spec: MetricSpec, p: SpacetimePoint) -> np.ndarray:
    """Gamma^a_{bc} from the analytic metric derivatives."""
    _, ginv, _ = metric_components(spec, p)
    dg = metric_deriv(spec, p)
    # Gamma^a_{bc} = 1/2 g^{ad} (d_b g_{dc} + d_c g_{db} - d_d g_{bc})
    sym = np.einsum("bdc->dbc", dg)  # d_b g_{dc} arranged as [d, b, c]
    term = sym + np.einsum("cdb->dbc", dg) - np.einsum("dbc->dbc", dg)
    return 0.5 * np.einsum("ad,dbc->abc", ginv, term)


def riemann_fd(spec: MetricSpec, p: SpacetimePoint, h: float | None = None):
    """Curvature by second-order centered differencing of the Christoffels.

    Returns (riemann R^a_{bcd}, ricci R_{bd}).  The stencil of radius h must
    stay inside the domain.
    """
    if h is None:
        h = 1.0e-4 * max(1.0, p.r)
    for mu in range(1, 4):
        for s in (-h, h):
            spec.check_point(p.shifted(mu, s))  # raises DomainError if outside
    gam = christoffel(spec, p)
    dgam = np.zeros((4, 4, 4, 4))  # index [c, a, b, d] = d_c Gamma^a_{bd}
    for mu in range(1, 4):  # stationary: t-derivative is zero
        gp = christoffel(spec, p.shifted(mu, h))
        gm = christoffel(spec, p.shifted(mu, -h))
        dgam[mu] = (gp - gm) / (2.0 * h)
    # R^a_{bcd} = d_c Gamma^a_{db} - d_d Gamma^a_{cb}
    #           + Gamma^a_{ce} Gamma^e_{db} - Gamma^a_{de} Gamma^e_{cb}
    riem = (np.einsum("cadb->abcd", dgam)
            - np.einsum("dacb->abcd", dgam)
            + np.einsum("ace,edb->abcd", gam, gam)
            - np.einsum("ade,ecb->abcd", gam, gam))
    ricci = np.einsum("abad->bd", riem)
    return riem, ricci


def kretschmann(spec: MetricSpec, p: SpacetimePoint, h: float | None = None) -> float:
    riem, _ = riemann_fd(spec, p, h)
    g, ginv, _ = metric_components(spec, p)
    r_low = np.einsum("ae,ebcd->abcd", g, riem)
    r_up = np.einsum("be,cf,dg,aefg->abcd", ginv, ginv, ginv, r_low)
    r_up = np.einsum("ah,hbcd->abcd", ginv, r_up)
    return float(np.einsum("abcd,abcd->", r_low, r_up))


# ---------------------------------------------------------------------------
# Hodge star on 2-forms
# ---------------------------------------------------------------------------

def hodge_star_2form(spec: MetricSpec, p: SpacetimePoint, F: TwoForm) -> TwoForm:
    """(*F)_{ab} = 1/2 sqrt(-g) eps_{abcd} g^{ce} g^{df} F_{ef}.

    Orientation eps_{txyz} = +1; on Lorentzian 2-forms ** = -1.
    """
    _, ginv, sq = metric_components(spec, p)
    fm = F.as_matrix()
    fup = ginv @ fm @ ginv.T  # F^{cd}
    starm = 0.5 * sq * np.einsum("abcd,cd->ab", EPS4, fup)
    return TwoForm.from_matrix(starm)


def hodge_star_3form(spec: MetricSpec, p: SpacetimePoint, G: ThreeForm) -> np.ndarray:
    """(*G)_a = 1/6 sqrt(-g) eps_{abcd} G^{bcd}; returns the four covector comps."""
    _, ginv, sq = metric_components(spec, p)
    gm = np.zeros((4, 4, 4))
    for k, (a, b, c) in enumerate(TRIPLES):
        v = G.comps[k]
        for perm in permutations((a, b, c)):
            gm[perm] = _perm_sign(perm_relative(perm, (a, b, c))) * v
    gup = np.einsum("be,cf,dg,efg->bcd", ginv, ginv, ginv, gm)
    return (sq / 6.0) * np.einsum("abcd,bcd->a", EPS4, gup)


def perm_relative(perm, base) -> tuple:
    pos = {v: i for i, v in enumerate(base)}
    return tuple(pos[v] for v in perm)


# ---------------------------------------------------------------------------
# tortoise coordinate
# ---------------------------------------------------------------------------

def tortoise(spec: MetricSpec, r):
    """r*(r).  Identity except for Schwarzschild, where dr*/dr = 1/f."""
    r = np.asarray(r, dtype=float)
    if spec.family != "schwarzschild":
        if np.any(r <= 0.0):
            raise DomainError("tortoise map needs r > 0")
        return r if r.ndim else float(r)
    M = spec.mass
    if np.any(r <= 2.0 * M):
        raise DomainError("tortoise map needs r > 2M")
    out = r + 2.0 * M * np.log(r / (2.0 * M) - 1.0)
    return out if out.ndim else float(out)


def inverse_tortoise(spec: MetricSpec, rstar):
    """r(r*), accurate to ~1e-13 relative.

    Solves u + e^u = r*/2M - 1 for u = ln(r/2M - 1) by a guarded Newton
    iteration (monotone convex scalar equation, vectorized over the input).
    Deeply negative r* underflows to r = 2M exactly, where f = 0; that is
    the correct double-precision limit of the map.
    """
    rs = np.asarray(rstar, dtype=float)
    scalar = rs.ndim == 0
    rs = np.atleast_1d(rs)
    if spec.family != "schwarzschild":
        if np.any(rs <= 0.0):
            raise DomainError("inverse tortoise needs r* > 0 off Schwarzschild")
        return float(rs[0]) if scalar else rs.copy()
    M = spec.mass
    y = rs / (2.0 * M) - 1.0
    u = np.where(y > 1.0, np.log(np.maximum(y, 1e-300)), y - 1.0)
    deep = y < -700.0
    u = np.where(deep, -745.0, u)
    for _ in range(60):
        eu = np.exp(np.minimum(u, 700.0))
        du = (u + eu - y) / (1.0 + eu)
        u = u - du
        if np.all(np.abs(du) <= 1e-15 * (1.0 + np.abs(u))):
            break
    else:  # pragma: no cover - guarded Newton on a convex monotone function
        from .errors import NumericError
        raise NumericError("inverse tortoise iteration did not converge")
    r = 2.0 * M * (1.0 + np.exp(np.minimum(u, 700.0)))
    r = np.where(deep, 2.0 * M, r)
    return float(r[0]) if scalar else r


# ---------------------------------------------------------------------------
# null frame and frame components
# ---------------------------------------------------------------------------

@dataclass
class NullFrame:
    """Frame vectors (coordinate components) adapted to the light cones.

    u_vec = d_t - d_{r*}, v_vec = d_t + d_{r*}; e_a, e_b are the orthonormal
    pair on the sphere of radius r.  Components of a 2-form are taken against
    the dual basis, i.e. with E_u = u_vec/2, E_v = v_vec/2, so F = dt^dr has
    F_uv = 1/2 (dt^dr = du^dv/2 for u = t - r*, v = t + r*).
    """

    u_vec: np.ndarray
    v_vec: np.ndarray
    e_a: np.ndarray
    e_b: np.ndarray

    def basis_matrix(self) -> np.ndarray:
        return np.stack([0.5 * self.u_vec, 0.5 * self.v_vec, self.e_a, self.e_b],
                        axis=1)

    def rotated(self, chi: float) -> "NullFrame":
        c, s = math.cos(chi), math.sin(chi)
        return NullFrame(self.u_vec, self.v_vec,
                         c * self.e_a + s * self.e_b,
                         -s * self.e_a + c * self.e_b)


@dataclass
class FrameComponents:
    uv: float
    ua: float
    ub: float
    va: float
    vb: float
    ab: float


def null_frame(spec: MetricSpec, p: SpacetimePoint) -> NullFrame:
    r = p.r
    if r == 0.0:
        raise FrameUndefinedError("null frame undefined at r = 0")
    n = p.x / r
    rho = math.hypot(p.x[0], p.x[1])
    if rho == 0.0:
        raise FrameUndefinedError("angular frame undefined on the z axis")
    ct = p.x[2] / r
    st = rho / r
    cp, sp = p.x[0] / rho, p.x[1] / rho
    theta_hat = np.array([ct * cp, ct * sp, -st])
    phi_hat = np.array([-sp, cp, 0.0])
    # radial null speed dr/dr* and sphere normalization
    if spec.family == "schwarzschild":
        spec.check_point(p)
        speed = 1.0 - 2.0 * spec.mass / r
        ang = 1.0
    elif spec.family == "general_normalized":
        speed = 1.0
        ang = math.sqrt(1.0 + (spec.g_omega(r) if spec.g_omega else 0.0))
    else:
        speed = 1.0
        ang = 1.0
    u_vec = np.concatenate(([1.0], -speed * n))
    v_vec = np.concatenate(([1.0], speed * n))
    e_a = np.concatenate(([0.0], theta_hat / ang))
    e_b = np.concatenate(([0.0], phi_hat / ang))
    return NullFrame(u_vec, v_vec, e_a, e_b)


def frame_components(F: TwoForm, frame: NullFrame) -> FrameComponents:
    B = frame.basis_matrix()
    fm = B.T @ F.as_matrix() @ B
    return FrameComponents(uv=fm[0, 1], ua=fm[0, 2], ub=fm[0, 3],
                           va=fm[1, 2], vb=fm[1, 3], ab=fm[2, 3])


def frame_to_cartesian(fc: FrameComponents, frame: NullFrame) -> TwoForm:
    fm = np.zeros((4, 4))
    fm[0, 1], fm[0, 2], fm[0, 3] = fc.uv, fc.ua, fc.ub
    fm[1, 2], fm[1, 3], fm[2, 3] = fc.va, fc.vb, fc.ab
    fm = fm - fm.T
    Binv = np.linalg.inv(frame.basis_matrix())
    return TwoForm.from_matrix(Binv.T @ fm @ Binv)


# ---------------------------------------------------------------------------
# spherical <-> Cartesian 2-form conversion (coordinates t, r, theta, phi)
# ---------------------------------------------------------------------------

def spherical_jacobian(p: SpacetimePoint) -> np.ndarray:
    """Columns are dx^mu/dq^a for q = (t, r, theta, phi)."""
    r = p.r
    rho = math.hypot(p.x[0], p.x[1])
    if r == 0.0 or rho == 0.0:
        raise FrameUndefinedError("spherical chart degenerate here")
    n = p.x / r
    ct, st = p.x[2] / r, rho / r
    cp, sp = p.x[0] / rho, p.x[1] / rho
    theta_hat = np.array([ct * cp, ct * sp, -st])
    phi_hat = np.array([-sp, cp, 0.0])
    J = np.zeros((4, 4))
    J[0, 0] = 1.0
    J[1:, 1] = n
    J[1:, 2] = r * theta_hat
    J[1:, 3] = r * st * phi_hat
    return J


def cartesian_to_spherical_2form(F: TwoForm, p: SpacetimePoint) -> np.ndarray:
    J = spherical_jacobian(p)
    return J.T @ F.as_matrix() @ J


def spherical_to_cartesian_2form(f_sph: np.ndarray, p: SpacetimePoint) -> TwoForm:
    J = spherical_jacobian(p)
    Jinv = np.linalg.inv(J)
    return TwoForm.from_matrix(Jinv.T @ f_sph @ Jinv)


def polar_metric(spec: MetricSpec, r: float, theta: float) -> np.ndarray:
    """Diagonal polar-coordinate metric of the long-range part at (r, theta).

    Valid for the spherically symmetric members of the catalog (g_sr = 0);
    used by the scaling-commutator checks, which the paper states for the
    diagonal normal form.
    """
    if spec.g_sr and not spec.is_spherically_symmetric():
        raise InputError("polar view defined for spherically symmetric specs only")
    st2 = math.sin(theta) ** 2
    if spec.family == "schwarzschild":
        f = 1.0 - 2.0 * spec.mass / r
        return np.diag([-f, 1.0 / f, r ** 2, r ** 2 * st2])
    w = spec.g_omega(r) if (spec.family == "general_normalized" and spec.g_omega) else 0.0
    return np.diag([-1.0, 1.0, r ** 2 * (1.0 + w), r ** 2 * (1.0 + w) * st2])


# ---------------------------------------------------------------------------
# symbol class check
# ---------------------------------------------------------------------------

def _fd_derivative(f: Callable[[float], float], r: float, order: int, h: float) -> float:
    if order == 0:
        return f(r)
    inner = lambda s: _fd_derivative(f, s, order - 1, h)
    return (inner(r + h) - inner(r - h)) / (2.0 * h)


def symbol_class_check(f: Callable[[float], float], k: int, orders: int = 3,
                       r_lo: float = 2.0, r_hi: float = 1.0e4,
                       n_samples: int = 80, c_j: list | None = None) -> dict:
    """Check membership of a radial function in S^Z(r^k) by sampling.

    Reports sup over log-spaced samples of |r^j d_r^j f| / <r>^k for each
    j <= orders.  Passes iff every ratio is finite and below the configured
    bound c_j (default 50 * max(1, j!)).  For stationary radial functions
    the Z-derivatives reduce to powers of r d_r, so this is the full check.
    """
    rs = np.geomspace(r_lo, r_hi, n_samples)
    if c_j is None:
        c_j = [50.0 * max(1.0, math.factorial(j)) for j in range(orders + 1)]
    sup = []
    for j in range(orders + 1):
        vals = []
        for r in rs:
            h = 1.0e-2 * r / (j + 1.0)
            d = _fd_derivative(f, float(r), j, h)
            if not np.isfinite(d):
                raise InputError(f"non-finite sample of derivative order {j} at r = {r:.3g}")
            vals.append(abs(r ** j * d) / math.sqrt(4.0 + r ** 2) ** k)
        sup.append(max(vals))
    ok = [s <= c for s, c in zip(sup, c_j)]
    return {"k": k, "orders": orders, "sup_ratios": sup, "bounds": list(c_j),
            "per_order_pass": ok, "passed": all(ok)}
