"""1+1D time-domain evolution of the spin-s master function on (t, r*).

The master variable psi carries the r^2 weight of the middle-component
amplitude: for the Maxwell mode (l, m=0) the polarization pair reads

    F_uv = f psi / (2 r^2),    F_AB = -psi / r^2,

and the extreme components are first derivatives along the null directions,

    F_uA = -D_u psi / (l(l+1) r),    F_vA = +D_v psi / (l(l+1) r),

with D_u = (d_t - d_{r*})/2, D_v = (d_t + d_{r*})/2.  The same relations,
read as null-transport equations, are integrated along recorded null lines
by reconstruct_extremes and cross-checked against the algebraic values.

Integrator: classical RK4 in time, centered differences in space (order 2
default, 4 optional), Sommerfeld conditions at open boundaries, and an
exact-parity staggered origin treatment for Minkowski interior runs.
"""

from __future__ import annotations

import math
import time as _time
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from . import geometry as geo
from . import modes
from . import tensorcalc as tc
from .errors import (
    InputError,
    ReconstructionError,
    UnstableEvolutionError,
    UnsupportedConfigurationError,
)
from .geometry import MetricSpec, SpacetimePoint
from .modes import ModeAmplitudes, ModeIndex


# ---------------------------------------------------------------------------
# configuration containers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Grid1D:
    rstar_min: float
    rstar_max: float
    n: int
    cfl: float = 0.5

    def __post_init__(self):
        if self.n < 16:
            raise InputError("grid needs at least 16 points")
        if self.rstar_max <= self.rstar_min:
            raise InputError("rstar_max must exceed rstar_min")
        if not (0.0 < self.cfl <= 0.5):
            raise InputError("CFL factor must satisfy 0 < cfl <= 0.5")

    @property
    def dr(self) -> float:
        return (self.rstar_max - self.rstar_min) / (self.n - 1)

    @property
    def dt(self) -> float:
        return self.cfl * self.dr

    def refined(self, k: int) -> "Grid1D":
        return replace(self, n=(self.n - 1) * k + 1)


@dataclass(frozen=True)
class InitialDataSpec:
    profile: str = "gaussian"  # gaussian | compact_bump | static_multipole
    center: float = 50.0
    sigma: float = 4.0
    amplitude: float = 1.0
    symmetry: str = "time_symmetric"  # | ingoing | outgoing

    def __post_init__(self):
        if self.profile not in ("gaussian", "compact_bump", "static_multipole"):
            raise InputError(f"unknown data profile {self.profile!r}")
        if self.symmetry not in ("time_symmetric", "ingoing", "outgoing"):
            raise InputError(f"unknown time symmetry {self.symmetry!r}")
        if self.sigma <= 0.0:
            raise InputError("sigma must be positive")
        if self.profile == "static_multipole" and self.symmetry != "time_symmetric":
            raise InputError("a released static multipole is time-symmetric")

    @property
    def support(self) -> tuple:
        return (self.center - 5.0 * self.sigma, self.center + 5.0 * self.sigma)

    def sample(self, x: np.ndarray, static_branch: np.ndarray | None = None):
        """(psi0, pi0) on the grid.

        ``static_branch`` must be supplied for the static_multipole profile:
        it is the decaying static solution of the mode equation, and the
        data equal that branch released outside the center (smoothly zeroed
        below it, mimicking the collapsed interior)."""
        if self.profile == "gaussian":
            psi = self.amplitude * np.exp(-((x - self.center) ** 2)
                                          / (2.0 * self.sigma ** 2))
            dpsi = -(x - self.center) / self.sigma ** 2 * psi
        elif self.profile == "compact_bump":
            w = 5.0 * self.sigma
            s = (x - self.center) / w
            psi = np.zeros_like(x)
            dpsi = np.zeros_like(x)
            inside = np.abs(s) < 1.0
            si = s[inside]
            val = self.amplitude * np.exp(1.0 - 1.0 / (1.0 - si ** 2))
            psi[inside] = val
            dpsi[inside] = val * (-2.0 * si / ((1.0 - si ** 2) ** 2 * w))
        else:
            if static_branch is None:
                raise InputError("static_multipole data need the static branch")
            step = _smooth_step_up(x, self.center - self.sigma,
                                   self.center + self.sigma)
            psi = static_branch * step
            peak = np.max(np.abs(psi))
            if peak == 0.0:
                raise InputError("static branch vanished on the grid")
            psi = self.amplitude * psi / peak
            dpsi = np.zeros_like(psi)  # unused: time symmetric
        if self.symmetry == "time_symmetric":
            pi = np.zeros_like(psi)
        elif self.symmetry == "ingoing":
            pi = dpsi.copy()
        else:
            pi = -dpsi
        return psi, pi


@dataclass(frozen=True)
class SourceSpec:
    """Compactly supported scalar source for the master equation."""

    amplitude: float
    center: float
    sigma: float
    t_center: float
    t_sigma: float

    def __call__(self, t: float, x: np.ndarray) -> np.ndarray:
        sx = (x - self.center) / (5.0 * self.sigma)
        st = (t - self.t_center) / (5.0 * self.t_sigma)
        out = np.zeros_like(x)
        if abs(st) >= 1.0:
            return out
        inside = np.abs(sx) < 1.0
        out[inside] = self.amplitude * np.exp(2.0 - 1.0 / (1.0 - sx[inside] ** 2)
                                              - 1.0 / (1.0 - st ** 2))
        return out


@dataclass
class ModeState:
    psi: np.ndarray
    pi: np.ndarray
    t: float
    mode: ModeIndex


@dataclass(frozen=True)
class EvolveConfig:
    spec: MetricSpec
    mode: ModeIndex
    s: int
    grid: Grid1D
    data: InitialDataSpec
    t_final: float
    source: SourceSpec | None = None
    probes: tuple = ()
    null_lines_u: tuple = ()
    null_lines_v: tuple = ()
    save_every: int = 0
    record_every: int = 1
    spatial_order: int = 2
    inner_boundary: str = "auto"  # auto | sommerfeld | origin
    tail_purity: bool = False
    potential_mass_coeff: float | None = None  # override for negative controls

    def __post_init__(self):
        if self.s not in (0, 1):
            raise InputError("spin s must be 0 or 1")
        if self.mode.l < self.s:
            raise InputError("mode needs l >= s")
        if self.spatial_order not in (2, 4):
            raise InputError("spatial_order must be 2 or 4")
        if self.inner_boundary not in ("auto", "sommerfeld", "origin"):
            raise InputError(f"unknown inner boundary {self.inner_boundary!r}")


def _smooth_step_up(x: np.ndarray, a: float, b: float) -> np.ndarray:
    s = np.clip((x - a) / (b - a), 0.0, 1.0)
    out = np.zeros_like(s)
    mid = (s > 0.0) & (s < 1.0)
    e1 = np.exp(-1.0 / np.maximum(s[mid], 1e-300))
    e2 = np.exp(-1.0 / np.maximum(1.0 - s[mid], 1e-300))
    out[mid] = e1 / (e1 + e2)
    out[s >= 1.0] = 1.0
    return out


# ---------------------------------------------------------------------------
# potential
# ---------------------------------------------------------------------------

def rw_potential(spec: MetricSpec, l: int, s: int, r, mass_coeff: float | None = None):
    """Master-equation potential.

    Schwarzschild: V = f (l(l+1)/r^2 + c 2M/r^3) with c = 1 - s^2; the s = 1
    coefficient (no mass term) is pinned by the Maxwell-residual gate.
    Minkowski: V = l(l+1)/r^2.  ``mass_coeff`` overrides c for negative
    controls only.
    """
    if s not in (0, 1):
        raise InputError("spin s must be 0 or 1")
    if l < s:
        raise InputError("invalid mode: l < s")
    r = np.asarray(r, dtype=float)
    lam = l * (l + 1)
    if spec.family == "schwarzschild":
        c = (1.0 - s * s) if mass_coeff is None else mass_coeff
        f = 1.0 - 2.0 * spec.mass / np.maximum(r, 2.0 * spec.mass)
        out = f * (lam / r ** 2 + c * 2.0 * spec.mass / r ** 3)
    elif spec.family == "minkowski":
        out = lam / r ** 2 if l > 0 else np.zeros_like(r)
    else:
        raise UnsupportedConfigurationError(
            "evolution supports minkowski and schwarzschild backgrounds")
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# engine
# ---------------------------------------------------------------------------

class _Engine:
    def __init__(self, cfg: EvolveConfig):
        self.cfg = cfg
        spec, grid = cfg.spec, cfg.grid
        inner = cfg.inner_boundary
        if inner == "auto":
            inner = ("origin" if spec.family == "minkowski"
                     and abs(grid.rstar_min) < 1e-12 else "sommerfeld")
        if inner == "origin":
            if spec.family != "minkowski":
                raise UnsupportedConfigurationError(
                    "origin boundary only applies to Minkowski interior runs")
            if abs(grid.rstar_min) > 1e-12:
                raise InputError("origin boundary requires rstar_min = 0")
            if cfg.mode.l < 1:
                raise UnsupportedConfigurationError(
                    "origin parity treatment needs l >= 1")
            # staggered nodes (i + 1/2) dr keep the potential finite at all
            # grid points and make the parity extension exact
            self.dr = (grid.rstar_max - grid.rstar_min) / grid.n
            self.x = grid.rstar_min + self.dr * (np.arange(grid.n) + 0.5)
        else:
            self.dr = grid.dr
            self.x = grid.rstar_min + self.dr * np.arange(grid.n)
        self.inner = inner
        self.dt = grid.cfl * self.dr
        if self.dt > 0.5 * self.dr + 1e-15:
            raise InputError("refusing dt > 0.5 dr*")

        if spec.family == "schwarzschild":
            self.r = geo.inverse_tortoise(spec, self.x)
            self.f = 1.0 - 2.0 * spec.mass / self.r
        else:
            self.r = self.x.copy()
            self.f = np.ones_like(self.x)
        with np.errstate(divide="ignore"):
            self.V = rw_potential(spec, cfg.mode.l, cfg.s, self.r,
                                  cfg.potential_mass_coeff)
        if not np.all(np.isfinite(self.V)):
            raise InputError(
                "potential singular on the grid (a node sits at r = 0); "
                "use the origin boundary or rstar_min > 0")
        # RK4 stability on the imaginary axis: |omega| dt <~ 2.8
        kmax2 = (4.0 if cfg.spatial_order == 2 else 16.0 / 3.0) / self.dr ** 2
        om = math.sqrt(kmax2 + float(np.max(self.V)))
        if om * self.dt > 2.7:
            raise InputError(
                f"RK4 stability violated: omega dt = {om*self.dt:.3f} > 2.7")
        self.parity_sign = (-1.0) ** (cfg.mode.l + 1)
        self.order = cfg.spatial_order
        self.inv_dr2 = 1.0 / self.dr ** 2
        self.lam = cfg.mode.lam

    # -- spatial operators --------------------------------------------------

    def second_derivative(self, ps: np.ndarray) -> np.ndarray:
        d2 = np.empty_like(ps)
        if self.inner == "origin":
            sgn = self.parity_sign
            ext = np.concatenate(([sgn * ps[1], sgn * ps[0]], ps))
            ps_l = ext  # indices shifted by 2
            if self.order == 2:
                d2[:-1] = (ps_l[3:] - 2.0 * ps_l[2:-1] + ps_l[1:-2]) * self.inv_dr2
            else:
                core = (-ps_l[4:] + 16.0 * ps_l[3:-1] - 30.0 * ps_l[2:-2]
                        + 16.0 * ps_l[1:-3] - ps_l[:-4]) * (self.inv_dr2 / 12.0)
                d2[:-2] = core
                d2[-2] = (ps[-1] - 2.0 * ps[-2] + ps[-3]) * self.inv_dr2
            d2[-1] = 0.0
            return d2
        if self.order == 2:
            d2[1:-1] = (ps[2:] - 2.0 * ps[1:-1] + ps[:-2]) * self.inv_dr2
        else:
            d2[2:-2] = (-ps[4:] + 16.0 * ps[3:-1] - 30.0 * ps[2:-2]
                        + 16.0 * ps[1:-3] - ps[:-4]) * (self.inv_dr2 / 12.0)
            d2[1] = (ps[2] - 2.0 * ps[1] + ps[0]) * self.inv_dr2
            d2[-2] = (ps[-1] - 2.0 * ps[-2] + ps[-3]) * self.inv_dr2
        d2[0] = d2[-1] = 0.0
        return d2

    def first_derivative(self, ps: np.ndarray) -> np.ndarray:
        dx = np.empty_like(ps)
        dr = self.dr
        if self.inner == "origin":
            sgn = self.parity_sign
            ext = np.concatenate(([sgn * ps[1], sgn * ps[0]], ps))
            dx[:-2] = (-ext[4:] + 8.0 * ext[3:-1] - 8.0 * ext[1:-3] + ext[:-4]) / (12.0 * dr)
            dx[-2] = (ps[-1] - ps[-3]) / (2.0 * dr)
            dx[-1] = (3.0 * ps[-1] - 4.0 * ps[-2] + ps[-3]) / (2.0 * dr)
            return dx
        dx[2:-2] = (-ps[4:] + 8.0 * ps[3:-1] - 8.0 * ps[1:-3] + ps[:-4]) / (12.0 * dr)
        dx[1] = (ps[2] - ps[0]) / (2.0 * dr)
        dx[-2] = (ps[-1] - ps[-3]) / (2.0 * dr)
        dx[0] = (-3.0 * ps[0] + 4.0 * ps[1] - ps[2]) / (2.0 * dr)
        dx[-1] = (3.0 * ps[-1] - 4.0 * ps[-2] + ps[-3]) / (2.0 * dr)
        return dx

    def rhs(self, t: float, ps: np.ndarray, pp: np.ndarray):
        dps = pp.copy()
        dpp = self.second_derivative(ps) - self.V * ps
        if self.cfg.source is not None:
            dpp += self.cfg.source(t, self.x)
        dr = self.dr
        # outgoing advection at open boundaries (Sommerfeld)
        if self.inner != "origin":
            dps[0] = (-3.0 * ps[0] + 4.0 * ps[1] - ps[2]) / (2.0 * dr)
            dpp[0] = (-3.0 * pp[0] + 4.0 * pp[1] - pp[2]) / (2.0 * dr)
        dps[-1] = -(3.0 * ps[-1] - 4.0 * ps[-2] + ps[-3]) / (2.0 * dr)
        dpp[-1] = -(3.0 * pp[-1] - 4.0 * pp[-2] + pp[-3]) / (2.0 * dr)
        return dps, dpp

    def rk4(self, t: float, ps: np.ndarray, pp: np.ndarray):
        dt = self.dt
        a1, b1 = self.rhs(t, ps, pp)
        a2, b2 = self.rhs(t + 0.5 * dt, ps + 0.5 * dt * a1, pp + 0.5 * dt * b1)
        a3, b3 = self.rhs(t + 0.5 * dt, ps + 0.5 * dt * a2, pp + 0.5 * dt * b2)
        a4, b4 = self.rhs(t + dt, ps + dt * a3, pp + dt * b3)
        ps = ps + (dt / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        pp = pp + (dt / 6.0) * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
        return ps, pp

    def static_branch(self) -> np.ndarray:
        """Decaying static solution psi'' = V psi, integrated inward from the
        outer edge with the 1/r^l asymptotic seed."""
        n = len(self.x)
        out = np.empty(n)
        l = self.cfg.mode.l
        ps = self.r[-1] ** (-l)
        dps = -l * self.r[-1] ** (-l - 1) * self.f[-1]
        out[-1] = ps
        h = -self.dr
        for i in range(n - 1, 0, -1):
            vm = 0.5 * (self.V[i] + self.V[i - 1])
            k1 = (dps, self.V[i] * ps)
            k2 = (dps + 0.5 * h * k1[1], vm * (ps + 0.5 * h * k1[0]))
            k3 = (dps + 0.5 * h * k2[1], vm * (ps + 0.5 * h * k2[0]))
            k4 = (dps + h * k3[1], self.V[i - 1] * (ps + h * k3[0]))
            ps += (h / 6.0) * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0])
            dps += (h / 6.0) * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])
            out[i - 1] = ps
        return out


def step(state: ModeState, grid: Grid1D, spec: MetricSpec, *, s: int = 1,
         spatial_order: int = 2, inner_boundary: str = "auto",
         source: SourceSpec | None = None) -> ModeState:
    """Advance one RK4 step of size grid.dt (contract entry point; evolve()
    is the fast path that reuses the engine)."""
    cfg = EvolveConfig(spec=spec, mode=state.mode, s=s, grid=grid,
                       data=InitialDataSpec(), t_final=grid.dt,
                       source=source, spatial_order=spatial_order,
                       inner_boundary=inner_boundary)
    eng = _Engine(cfg)
    ps, pp = eng.rk4(state.t, state.psi, state.pi)
    if not np.all(np.isfinite(ps)):
        bad = int(np.argmax(~np.isfinite(ps)))
        raise UnstableEvolutionError(bad, state.t + eng.dt)
    return ModeState(psi=ps, pi=pp, t=state.t + eng.dt, mode=state.mode)


def energy(psi: np.ndarray, pi: np.ndarray, V: np.ndarray, dr: float) -> float:
    """Discrete energy audit 1/2 int (pi^2 + psi_x^2 + V psi^2) dr*.

    The gradient term uses forward differences, which is the quadratic
    invariant of the order-2 semi-discrete flow; RK4 adds only
    O((omega dt)^6)-per-step dissipation on the excited modes.
    """
    px2 = np.diff(psi) ** 2 / dr ** 2
    return 0.5 * float((np.sum(pi ** 2 + V * psi ** 2) + np.sum(px2)) * dr)


# ---------------------------------------------------------------------------
# trajectory recording
# ---------------------------------------------------------------------------

@dataclass
class LineRecord:
    const_value: float       # u0 or v0
    kind: str                # "u" or "v"
    t: np.ndarray
    rstar: np.ndarray
    r: np.ndarray
    f: np.ndarray
    psi: np.ndarray
    pi: np.ndarray
    psix: np.ndarray

    @property
    def v(self) -> np.ndarray:
        return self.t + self.rstar

    @property
    def u(self) -> np.ndarray:
        return self.t - self.rstar


@dataclass
class Trajectory:
    config: EvolveConfig
    x: np.ndarray
    r: np.ndarray
    f: np.ndarray
    dr: float
    dt: float
    probes: dict
    ulines: dict
    vlines: dict
    slice_times: np.ndarray | None
    slices_psi: np.ndarray | None
    slices_pi: np.ndarray | None
    energies: np.ndarray
    energy_times: np.ndarray
    steps: int
    wall_time: float

    def probe_record(self, rstar: float) -> dict:
        key = min(self.probes, key=lambda q: abs(q - rstar))
        if abs(key - rstar) > self.dr:
            raise InputError(f"no probe recorded near r* = {rstar}")
        return self.probes[key]


class _LineTap:
    """Records (psi, pi, psi_x) along a null line by local interpolation."""

    def __init__(self, kind: str, value: float, eng: _Engine):
        self.kind = kind
        self.value = value
        self.eng = eng
        self.rows: list = []

    def position(self, t: float) -> float:
        return t - self.value if self.kind == "u" else self.value - t

    def sample(self, t: float, psi: np.ndarray, pi: np.ndarray):
        xl = self.position(t)
        x = self.eng.x
        if not (x[2] < xl < x[-3]):
            return
        dr = self.eng.dr
        i0 = int((xl - x[0]) // dr)
        i0 = min(max(i0 - 2, 0), len(x) - 6)
        xs = x[i0:i0 + 6]
        wts, dwts = _lagrange_weights(xs, xl)
        self.rows.append((
            t, xl,
            float(wts @ psi[i0:i0 + 6]),
            float(wts @ pi[i0:i0 + 6]),
            float(dwts @ psi[i0:i0 + 6]),
        ))

    def finalize(self, spec: MetricSpec) -> LineRecord:
        if not self.rows:
            arr = np.empty(0)
            return LineRecord(self.value, self.kind, arr, arr.copy(), arr.copy(),
                              arr.copy(), arr.copy(), arr.copy(), arr.copy())
        a = np.array(self.rows)
        rstar = a[:, 1]
        if spec.family == "schwarzschild":
            r = geo.inverse_tortoise(spec, rstar)
            f = 1.0 - 2.0 * spec.mass / r
        else:
            r = rstar.copy()
            f = np.ones_like(r)
        return LineRecord(self.value, self.kind, a[:, 0], rstar, r, f,
                          a[:, 2], a[:, 3], a[:, 4])


def _lagrange_weights(xs: np.ndarray, xq: float):
    """Weights for value and first derivative of the Lagrange interpolant."""
    n = len(xs)
    w = np.ones(n)
    dw = np.zeros(n)
    for j in range(n):
        others = [k for k in range(n) if k != j]
        denom = np.prod([xs[j] - xs[k] for k in others])
        w[j] = np.prod([xq - xs[k] for k in others]) / denom
        s = 0.0
        for m in others:
            s += np.prod([xq - xs[k] for k in others if k != m])
        dw[j] = s / denom
    return w, dw


def evolve(cfg: EvolveConfig) -> Trajectory:
    """Run the configured evolution; deterministic for a fixed config."""
    eng = _Engine(cfg)
    x = eng.x
    lo, hi = cfg.data.support
    if cfg.data.profile != "static_multipole":
        if lo <= x[0] or hi >= x[-1]:
            raise InputError("initial data support must lie inside the grid")
    static = eng.static_branch() if cfg.data.profile == "static_multipole" else None
    psi, pi = cfg.data.sample(x, static_branch=static)

    if cfg.tail_purity:
        margin = 5.0 * cfg.data.sigma + 10.0
        for pr in cfg.probes:
            if cfg.grid.rstar_max < pr + cfg.t_final + margin or \
               cfg.grid.rstar_min > pr - cfg.t_final - margin:
                raise InputError(
                    f"tail purity: probe r* = {pr} not causally isolated from "
                    f"the boundaries over t_final = {cfg.t_final}")

    probe_idx = {}
    for pr in cfg.probes:
        i = int(round((pr - x[0]) / eng.dr))
        if not 3 <= i <= len(x) - 4:
            raise InputError(f"probe r* = {pr} outside the grid interior")
        probe_idx[float(x[i])] = i

    taps = ([_LineTap("u", u0, eng) for u0 in cfg.null_lines_u]
            + [_LineTap("v", v0, eng) for v0 in cfg.null_lines_v])

    nsteps = int(round(cfg.t_final / eng.dt))
    nrec = nsteps // cfg.record_every
    probes = {key: {"t": np.empty(nrec), "psi": np.empty(nrec),
                    "pi": np.empty(nrec), "psix": np.empty(nrec)}
              for key in probe_idx}
    slices_t, slices_p, slices_q = [], [], []
    en_t, en_v = [], []
    t = 0.0
    krec = 0
    t0 = _time.time()
    for k in range(nsteps):
        psi, pi = eng.rk4(t, psi, pi)
        t += eng.dt
        if (k + 1) % 100 == 0 or k == nsteps - 1:
            if not np.all(np.isfinite(psi)):
                bad = int(np.argmax(~np.isfinite(psi)))
                raise UnstableEvolutionError(bad, t)
        if (k + 1) % cfg.record_every == 0 and krec < nrec:
            for key, i in probe_idx.items():
                rec = probes[key]
                rec["t"][krec] = t
                rec["psi"][krec] = psi[i]
                rec["pi"][krec] = pi[i]
                rec["psix"][krec] = ((-psi[i + 2] + 8.0 * psi[i + 1]
                                      - 8.0 * psi[i - 1] + psi[i - 2])
                                     / (12.0 * eng.dr))
            for tap in taps:
                tap.sample(t, psi, pi)
            krec += 1
        if cfg.save_every and (k + 1) % cfg.save_every == 0:
            slices_t.append(t)
            slices_p.append(psi.copy())
            slices_q.append(pi.copy())
        if (k + 1) % max(1, nsteps // 64) == 0:
            en_t.append(t)
            en_v.append(energy(psi, pi, eng.V, eng.dr))

    ulines = {tap.value: tap.finalize(cfg.spec) for tap in taps if tap.kind == "u"}
    vlines = {tap.value: tap.finalize(cfg.spec) for tap in taps if tap.kind == "v"}
    return Trajectory(
        config=cfg, x=x, r=eng.r, f=eng.f, dr=eng.dr, dt=eng.dt,
        probes=probes, ulines=ulines, vlines=vlines,
        slice_times=np.array(slices_t) if slices_t else None,
        slices_psi=np.array(slices_p) if slices_p else None,
        slices_pi=np.array(slices_q) if slices_q else None,
        energies=np.array(en_v), energy_times=np.array(en_t),
        steps=nsteps, wall_time=_time.time() - t0,
    )


# ---------------------------------------------------------------------------
# component reconstruction
# ---------------------------------------------------------------------------

def probe_components(traj: Trajectory, rstar: float) -> dict:
    """Polarization-pair component series at a probe.

    Returns arrays t, psi, F_uv, F_AB, F_uA, F_vA in the mode-amplitude
    normalization (harmonic factors divided out); F_uv carries the even
    polarization of the master, F_AB the odd one.
    """
    rec = traj.probe_record(rstar)
    key = min(traj.probes, key=lambda q: abs(q - rstar))
    i = int(round((key - traj.x[0]) / traj.dr))
    r = traj.r[i]
    f = traj.f[i]
    lam = traj.config.mode.lam
    du = 0.5 * (rec["pi"] - rec["psix"])
    dv = 0.5 * (rec["pi"] + rec["psix"])
    return {
        "t": rec["t"], "psi": rec["psi"],
        "F_uv": f * rec["psi"] / (2.0 * r ** 2),
        "F_AB": -rec["psi"] / r ** 2,
        "F_uA": -du / (lam * r),
        "F_vA": dv / (lam * r),
        "r": r, "f": f,
    }


def reconstruct_extremes(traj: Trajectory, check_tol: float = 5.0e-2) -> dict:
    """Integrate the null-transport relations along the recorded lines.

    Along u = const:   d(r F_uA)/dv = +f psi/(4 r^2) / lambda-normalized,
    along v = const:   d(r F_vA)/du = -f psi/(4 r^2),
    both scaled by 1/l(l+1) in the amplitude normalization used here.
    Initial values are taken at the line start, where the field is outside
    the data's domain of influence.  The result must agree with the
    algebraic values -D_u psi/lambda and +D_v psi/lambda; a mismatch above
    ``check_tol`` (relative to the line's peak) raises ReconstructionError.
    """
    lam = traj.config.mode.lam
    out = {"u": {}, "v": {}}
    for kind, lines in (("u", traj.ulines), ("v", traj.vlines)):
        for val, rec in lines.items():
            if len(rec.t) < 4:
                continue
            # D_v(r F_uA-amp) = +V psi/(4 lam) = f psi/(4 r^2) at s = 1,
            # D_u(r F_vA-amp) = -f psi/(4 r^2); the lam of the amplitude
            # normalization cancels against the potential's l(l+1).
            integrand = rec.f * rec.psi / (4.0 * rec.r ** 2)
            # dv/dt = 2 on u-lines, du/dt = 2 on v-lines
            sgn = 1.0 if kind == "u" else -1.0
            incr = np.concatenate((
                [0.0],
                np.cumsum(0.5 * (integrand[1:] + integrand[:-1])
                          * np.diff(rec.t) * 2.0)))
            if kind == "u":
                alg = -(rec.pi - rec.psix) / (2.0 * lam)
            else:
                alg = (rec.pi + rec.psix) / (2.0 * lam)
            transported = alg[0] + sgn * incr
            peak = float(np.max(np.abs(alg)))
            if peak < 1e-14:
                err = 0.0
            else:
                err = float(np.max(np.abs(transported - alg))) / peak
            if err > check_tol:
                raise ReconstructionError(
                    f"{kind}-line {val}: transport/algebraic mismatch {err:.3e}")
            amp = transported / rec.r  # F_uA or F_vA mode amplitude
            out[kind][val] = {
                "t": rec.t, "r": rec.r, "rstar": rec.rstar,
                "r_times_amp": transported, "amp": amp,
                "amp_algebraic": alg / rec.r,
                "psi": rec.psi, "f": rec.f,
                "mismatch": err,
            }
    return out


def peel_scan_data(traj: Trajectory, u0: float) -> dict:
    """Component magnitude series along the outgoing line u = u0 plus the
    F_vA samples gathered from the recorded ingoing lines at their crossing
    points with u0.  Feed to diagnostics.peeling_scan."""
    if u0 not in traj.ulines:
        raise InputError(f"no recorded u-line at u0 = {u0}")
    rec = traj.ulines[u0]
    ext = reconstruct_extremes(traj)
    lam = traj.config.mode.lam
    comps = {
        "F_uv": (rec.r, rec.f * rec.psi / (2.0 * rec.r ** 2)),
        "F_AB": (rec.r, -rec.psi / rec.r ** 2),
        "F_uA": (ext["u"][u0]["r"], ext["u"][u0]["amp"]),
    }
    rs, vals = [], []
    for v0, line in ext["v"].items():
        t_cross = 0.5 * (u0 + v0)
        tarr = line["t"]
        if len(tarr) < 4 or not (tarr[0] <= t_cross <= tarr[-1]):
            continue
        rs.append(float(np.interp(t_cross, tarr, line["r"])))
        vals.append(float(np.interp(t_cross, tarr, line["amp"])))
    order = np.argsort(rs)
    comps["F_vA"] = (np.array(rs)[order], np.array(vals)[order])
    return comps


# ---------------------------------------------------------------------------
# trajectory -> spacetime field (for the residual gate)
# ---------------------------------------------------------------------------

class TrajectoryField:
    """Interpolates saved slices into a 2-form field handle.

    Quintic Lagrange in r*, quartic in saved time; amplitudes are converted
    to the full tensor through modes.mode_sample_to_tensor.
    """

    def __init__(self, traj: Trajectory, parity: str | None = None):
        if traj.slices_psi is None:
            raise InputError("trajectory carries no slices; set save_every")
        self.traj = traj
        self.spec = traj.config.spec
        self.mode = (traj.config.mode if parity is None
                     else ModeIndex(traj.config.mode.l, traj.config.mode.m, parity))
        self.tgrid = traj.slice_times
        self.dt_save = float(self.tgrid[1] - self.tgrid[0])

    def amplitudes(self, t: float, rstar: float) -> ModeAmplitudes:
        traj = self.traj
        it = int((t - self.tgrid[0]) / self.dt_save)
        it = min(max(it - 2, 0), len(self.tgrid) - 5)
        ix = int((rstar - traj.x[0]) / traj.dr)
        ix = min(max(ix - 2, 0), len(traj.x) - 6)
        tw, _ = _lagrange_weights(self.tgrid[it:it + 5], t)
        xs = traj.x[ix:ix + 6]
        xw, dxw = _lagrange_weights(xs, rstar)
        block_p = traj.slices_psi[it:it + 5, ix:ix + 6]
        block_q = traj.slices_pi[it:it + 5, ix:ix + 6]
        psi = float(tw @ block_p @ xw)
        psix = float(tw @ block_p @ dxw)
        pi = float(tw @ block_q @ xw)
        spec = self.spec
        r = geo.inverse_tortoise(spec, rstar) if spec.family == "schwarzschild" else rstar
        f = 1.0 - 2.0 * spec.mass / r if spec.family == "schwarzschild" else 1.0
        lam = self.mode.lam
        du = 0.5 * (pi - psix)
        dv = 0.5 * (pi + psix)
        if self.mode.parity == "even":
            return ModeAmplitudes(uv=f * psi / (2.0 * r ** 2),
                                  ua=-du / (lam * r), va=dv / (lam * r))
        # dual (odd) polarization of the same master
        return ModeAmplitudes(ab=-psi / r ** 2,
                              ua=du / (lam * r), va=dv / (lam * r))

    def __call__(self, p: SpacetimePoint) -> np.ndarray:
        spec = self.spec
        r = p.r
        rstar = geo.tortoise(spec, r) if spec.family == "schwarzschild" else r
        amps = self.amplitudes(p.t, rstar)
        return modes.mode_sample_to_tensor(spec, self.mode, amps, p)


@dataclass
class ResidualGateReport:
    resolutions: list
    residuals: list
    orders: list
    finest_residual: float
    order_threshold: float
    residual_threshold: float

    @property
    def passed(self) -> bool:
        return (len(self.orders) > 0
                and min(self.orders) >= self.order_threshold
                and self.finest_residual <= self.residual_threshold)


def maxwell_residual_order(cfg: EvolveConfig, factors=(1, 2, 4),
                           sample_points=None, order_threshold: float = 1.8,
                           residual_threshold: float = 1.0e-3,
                           parity: str | None = None) -> ResidualGateReport:
    """Richardson-measured convergence of the Maxwell residual of the
    assembled (psi, extremes) tensor; the gate for every decay-rate claim.

    Runs the configuration at len(factors) resolutions (grid and time step
    refined together), assembles the full 2-form through the mode map and
    evaluates |dF| + |d*F| via tensorcalc at the sample points, normalized
    by the local field-gradient scale.
    """
    if sample_points is None:
        tq = 0.6 * cfg.t_final
        sample_points = [(tq, cfg.data.center - 8.0, 0.8),
                         (tq, cfg.data.center + 6.0, 1.9)]
    residuals = []
    for k in factors:
        c = replace(cfg, grid=cfg.grid.refined(k),
                    save_every=max(1, cfg.save_every) if cfg.save_every else 1)
        traj = evolve(c)
        fld = TrajectoryField(traj, parity=parity)
        h_fd = 2.0 * traj.dr
        worst = 0.0
        for (ts, rstars, theta) in sample_points:
            r = (geo.inverse_tortoise(cfg.spec, rstars)
                 if cfg.spec.family == "schwarzschild" else rstars)
            p = geo.point_spherical(ts, r, theta, 0.9)
            dF = tc.exterior_d(fld, p, h_fd)
            dsF = tc.codifferential_d_star(cfg.spec, fld, p, h_fd)
            scale = max(tc.gradient_scale(fld, p, h_fd), 1e-300)
            worst = max(worst, (dF.norm() + dsF.norm()) / scale)
        residuals.append(worst)
    orders = [math.log2(residuals[i] / residuals[i + 1])
              if residuals[i + 1] > 0 else math.inf
              for i in range(len(residuals) - 1)]
    return ResidualGateReport(
        resolutions=[cfg.grid.refined(k).n for k in factors],
        residuals=residuals, orders=orders,
        finest_residual=residuals[-1],
        order_threshold=order_threshold,
        residual_threshold=residual_threshold,
    )


def convergence_order(cfg: EvolveConfig, probe: float, factors=(1, 2, 4)) -> dict:
    """Three-resolution self-convergence of the psi probe series."""
    series = []
    for k in factors:
        c = replace(cfg, grid=cfg.grid.refined(k), record_every=cfg.record_every * k)
        traj = evolve(c)
        rec = traj.probe_record(probe)
        series.append((rec["t"], rec["psi"]))
    n = min(len(s[1]) for s in series)
    e1 = float(np.sqrt(np.mean((series[0][1][:n] - series[1][1][:n]) ** 2)))
    e2 = float(np.sqrt(np.mean((series[1][1][:n] - series[2][1][:n]) ** 2)))
    order = math.log2(e1 / e2) if e2 > 0 else math.inf
    return {"errors": [e1, e2], "order": order}
