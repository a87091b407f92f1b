"""Measurement layer: local-energy norms, dyadic regions, tail-exponent
fits, peeling-slope scans, and the Klainerman-Sobolev embedding monitors.

All radial weights use <r> = sqrt(4 + r^2) (smooth, >= 2); dyadic annuli
are A_R = {R <= <r> < 2R} with R = 2^k, the innermost bin absorbing
everything below its upper edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, TailNotReachedError


def japanese_bracket(r):
    """<r> = sqrt(4 + r^2)."""
    return np.sqrt(4.0 + np.asarray(r, dtype=float) ** 2)


def annulus_index(r) -> np.ndarray:
    """Dyadic index k with 2^k <= <r> < 2^(k+1); the k = 1 bin is the
    innermost (<r> >= 2 always)."""
    return np.floor(np.log2(japanese_bracket(r))).astype(int)


# ---------------------------------------------------------------------------
# regions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RegionSpec:
    """Dyadic spacetime regions of the forward cone.

    C_T = {T <= t <= 2T, r <= t + R1}; the R- and U-subregions partition it
    exactly on grid points by the half-cone rule: a point goes to the
    r-dyadic family when r <= (t + R1)/2 and to the (t - r)-dyadic family
    otherwise.  ``interior`` is the union of the r-family bins with
    r < T/2.
    """

    kind: str  # C_T | C_T_R | C_T_U | interior
    T: float
    R1: float = 10.0
    R: float | None = None
    U: float | None = None

    def __post_init__(self):
        if self.kind not in ("C_T", "C_T_R", "C_T_U", "interior"):
            raise InputError(f"unknown region kind {self.kind!r}")
        if self.kind == "C_T_R" and self.R is None:
            raise InputError("C_T_R needs R")
        if self.kind == "C_T_U" and self.U is None:
            raise InputError("C_T_U needs U")

    def contains(self, t, r) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        r = np.asarray(r, dtype=float)
        base = (t >= self.T) & (t <= 2.0 * self.T) & (r <= t + self.R1)
        if self.kind == "C_T":
            return base
        r_side = r <= 0.5 * (t + self.R1)
        if self.kind == "interior":
            return base & r_side & (r < 0.5 * self.T)
        if self.kind == "C_T_R":
            k = int(math.floor(math.log2(max(japanese_bracket(self.R), 2.0))))
            return base & r_side & (annulus_index(r) == k)
        u = t - r
        ku = np.floor(np.log2(np.maximum(japanese_bracket(np.maximum(u, 0.0)), 2.0))).astype(int)
        k = int(math.floor(math.log2(max(japanese_bracket(self.U), 2.0))))
        return base & ~r_side & (ku == k)


def partition_labels(T: float, R1: float, t, r):
    """Exact partition of C_T grid points into ('R', k) / ('U', k) bins."""
    t = np.asarray(t, dtype=float)
    r = np.asarray(r, dtype=float)
    inside = (t >= T) & (t <= 2.0 * T) & (r <= t + R1)
    r_side = r <= 0.5 * (t + R1)
    kr = annulus_index(r)
    ku = np.floor(np.log2(np.maximum(japanese_bracket(np.maximum(t - r, 0.0)), 2.0))).astype(int)
    return inside, r_side, kr, ku


# ---------------------------------------------------------------------------
# norms
# ---------------------------------------------------------------------------

@dataclass
class LENormData:
    """Spacetime mode-level data on a (t, r) grid.

    ``comps`` are harmonic-normalized component amplitudes (so the measure
    is r^2 dr dt); ``radial_comps`` hold the zero-harmonic part in the same
    normalization when present.
    """

    t: np.ndarray
    r: np.ndarray
    comps: dict
    radial_comps: dict = field(default_factory=dict)


@dataclass
class NormReport:
    le: float
    le_star: float
    le_max: float
    per_annulus: dict
    energies: list


def le_norms(data: LENormData, region: RegionSpec | None = None,
             derivative_counts: int = 0) -> NormReport:
    """LE, LE* and LE_Max of gridded mode data over a region.

    LE = sup_R <R>^(-1/2) ||u||_{L2(region ^ A_R)}, LE* the dyadic sum with
    <R>^(+1/2), LE_Max = LE(F) + LE(<r> F-bar).  E^k slice energies are
    returned for k <= derivative_counts using t/r finite differences.
    """
    t, r = data.t, data.r
    tt, rr = np.meshgrid(t, r, indexing="ij")
    if region is not None:
        mask = region.contains(tt, rr)
    else:
        mask = np.ones_like(tt, dtype=bool)
    if not mask.any():
        raise InputError("region does not intersect the data grid")
    dt = float(t[1] - t[0]) if len(t) > 1 else 1.0
    dr = float(r[1] - r[0]) if len(r) > 1 else 1.0
    wt = np.full(len(t), dt)
    wt[0] = wt[-1] = 0.5 * dt
    wr = np.full(len(r), dr)
    wr[0] = wr[-1] = 0.5 * dr
    measure = rr ** 2 * np.outer(wt, wr)
    ks = annulus_index(rr)

    def annulus_l2(values2) -> dict:
        out = {}
        for k in np.unique(ks[mask]):
            m = mask & (ks == k)
            out[int(k)] = math.sqrt(float(np.sum(values2[m] * measure[m])))
        return out

    total2 = sum(np.abs(v) ** 2 for v in data.comps.values())
    per = annulus_l2(total2)
    le = max((norm / math.sqrt(2.0 ** k) for k, norm in per.items()), default=0.0)
    le_star = sum(norm * math.sqrt(2.0 ** k) for k, norm in per.items())

    le_rad = 0.0
    if data.radial_comps:
        rad2 = sum(np.abs(v) ** 2 for v in data.radial_comps.values())
        rad2 = rad2 * japanese_bracket(rr) ** 2
        per_rad = annulus_l2(rad2)
        le_rad = max((n / math.sqrt(2.0 ** k) for k, n in per_rad.items()),
                     default=0.0)

    energies = []
    if derivative_counts >= 0:
        i0 = int(np.argmax(mask.any(axis=1)))
        stacks = list(data.comps.values())
        level = stacks
        for k in range(derivative_counts + 1):
            e2 = sum(float(np.sum(np.abs(v[i0]) ** 2 * rr[i0] ** 2 * dr))
                     for v in level)
            prev = energies[-1] if energies else 0.0
            energies.append(prev + math.sqrt(e2))
            nxt = []
            for v in level:
                nxt.append(np.gradient(v, dt, axis=0))
                nxt.append(np.gradient(v, dr, axis=1))
            level = nxt
    return NormReport(le=le, le_star=le_star, le_max=le + le_rad,
                      per_annulus=per, energies=energies)


# ---------------------------------------------------------------------------
# tail exponent fitting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WindowPolicy:
    min_decade: float = 1.0
    drift_tol: float = 0.02
    t_min: float | None = None


@dataclass
class DecayFit:
    exponent: float
    stderr: float
    window: tuple
    stable: bool
    drift: float
    n_points: int

    def __str__(self):
        flag = "" if self.stable else " [drift]"
        return (f"p = {self.exponent:.3f} +- {self.stderr:.3f} on "
                f"t in [{self.window[0]:.4g}, {self.window[1]:.4g}]{flag}")


def local_log_slope(t: np.ndarray, v: np.ndarray, n_out: int = 200):
    """Series p(t) = -d log|v| / d log t on a log-resampled time axis."""
    good = (t > 0) & (np.abs(v) > 0)
    lt = np.log(t[good])
    lv = np.log(np.abs(v[good]))
    ts = np.linspace(lt[0], lt[-1], n_out)
    vs = np.interp(ts, lt, lv)
    p = -np.gradient(vs, ts)
    return np.exp(ts), p


def fit_exponent(t: np.ndarray, v: np.ndarray,
                 policy: WindowPolicy = WindowPolicy()) -> DecayFit:
    """Least-squares power-law exponent over the latest stable decade.

    The window must be sign-definite; the reported exponent is positive for
    decay.  Raises TailNotReachedError when no decade-long sign-definite
    window exists after policy.t_min.
    """
    t = np.asarray(t, dtype=float)
    v = np.asarray(v, dtype=float)
    if len(t) < 16:
        raise InputError("series too short")
    sel = t > (policy.t_min if policy.t_min is not None else 0.0)
    t, v = t[sel], v[sel]
    if len(t) < 16 or not np.any(v != 0.0):
        raise TailNotReachedError("no usable samples after t_min; "
                                  "suggest a longer t_final")
    # largest sign-definite suffix
    nz = np.abs(v) > 0.0
    sign = np.sign(v)
    flips = np.nonzero((sign[1:] * sign[:-1] < 0) | ~nz[1:] | ~nz[:-1])[0]
    start = int(flips[-1] + 1) if len(flips) else 0
    t, v = t[start:], v[start:]
    if len(t) < 16 or t[-1] <= 0:
        raise TailNotReachedError("sign changes persist to the end of the "
                                  "series; suggest a longer t_final")
    t2 = t[-1]
    t1 = t2 / 10.0 ** policy.min_decade
    win = t >= t1
    if t[0] > t1 or win.sum() < 16:
        raise TailNotReachedError(
            f"stable window shorter than {policy.min_decade} decade(s); "
            "suggest a longer t_final")
    lt = np.log(t[win])
    lv = np.log(np.abs(v[win]))
    coef, cov = np.polyfit(lt, lv, 1, cov=True)
    p = -coef[0]
    stderr = math.sqrt(max(cov[0, 0], 0.0))
    half = len(lt) // 2
    p1 = -np.polyfit(lt[:half], lv[:half], 1)[0]
    p2 = -np.polyfit(lt[half:], lv[half:], 1)[0]
    drift = abs(p1 - p2) / max(abs(p), 1e-30)
    return DecayFit(exponent=p, stderr=stderr, window=(float(t[win][0]), float(t2)),
                    stable=bool(drift < policy.drift_tol), drift=float(drift),
                    n_points=int(win.sum()))


# ---------------------------------------------------------------------------
# peeling scan
# ---------------------------------------------------------------------------

@dataclass
class SlopeFit:
    slope: float
    stderr: float
    span: tuple


@dataclass
class PeelingReport:
    r_slopes: dict
    u_slope: SlopeFit | None
    targets: dict

    def table(self) -> list:
        rows = []
        for name, fitres in self.r_slopes.items():
            tgt = self.targets.get(name)
            rows.append({"component": name, "measured": fitres.slope,
                         "stderr": fitres.stderr, "target": tgt,
                         "span": fitres.span})
        if self.u_slope is not None:
            rows.append({"component": "r*F_uA vs u", "measured": self.u_slope.slope,
                         "stderr": self.u_slope.stderr,
                         "target": self.targets.get("u_slope"),
                         "span": self.u_slope.span})
        return rows


#: r-slope targets on outgoing null lines (the peeling display) and the
#: u-slope of the radiation field.
PEELING_TARGETS = {"F_uA": -1.0, "F_uv": -2.0, "F_AB": -2.0, "F_vA": -3.0,
                   "u_slope": -3.0}


def _log_slope_fit(x: np.ndarray, y: np.ndarray, lo: float, hi: float,
                   min_decade: float = 1.0) -> SlopeFit:
    m = (x >= lo) & (x <= hi) & (np.abs(y) > 0)
    if m.sum() < 12:
        raise InputError("insufficient samples in the fit span")
    # samples must cover at least 90% of the requested decade count
    if math.log10(x[m].max() / x[m].min()) < 0.9 * min_decade:
        raise InputError("fit span shorter than the required decade")
    lx = np.log(x[m])
    ly = np.log(np.abs(y[m]))
    coef, cov = np.polyfit(lx, ly, 1, cov=True)
    return SlopeFit(slope=float(coef[0]),
                    stderr=float(math.sqrt(max(cov[0, 0], 0.0))),
                    span=(float(x[m].min()), float(x[m].max())))


def peeling_scan(components: dict, r_window: tuple = (100.0, 1000.0),
                 radiation: tuple | None = None,
                 u_window: tuple | None = None,
                 targets: dict = PEELING_TARGETS) -> PeelingReport:
    """Fit log|component| vs log r along an outgoing line, plus the u-decay
    of the radiation field r F_uA at the largest recorded radius.

    ``components`` maps names to (r, values); ``radiation`` is (u, r*F_uA).
    Slopes are invariant under global amplitude rescaling.
    """
    r_slopes = {}
    for name, (r, vals) in components.items():
        r_slopes[name] = _log_slope_fit(np.asarray(r), np.asarray(vals),
                                        r_window[0], r_window[1])
    u_fit = None
    if radiation is not None:
        u, ru = radiation
        if u_window is None:
            u_window = (np.max(u) / 10.0, np.max(u))
        u_fit = _log_slope_fit(np.asarray(u), np.asarray(ru),
                               u_window[0], u_window[1])
    return PeelingReport(r_slopes=r_slopes, u_slope=u_fit, targets=dict(targets))


# ---------------------------------------------------------------------------
# Klainerman-Sobolev monitor
# ---------------------------------------------------------------------------

@dataclass
class KSMargin:
    kind: str
    index: float
    T: float
    lhs: float
    rhs: float

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    @property
    def tight(self) -> bool:
        return self.lhs > 0.25 * self.rhs


def ks_monitor(data: LENormData, T: float, R1: float = 10.0,
               lam: float = 2.0) -> list:
    """Both sides of the dyadic Sobolev embeddings on each C_T^R and C_T^U.

    LHS = sup |u| over the subregion; RHS combines T^(-1/2) R^(-3/2) ||u^(<=2)||
    and T^(-1/2) R^(-1/2) ||grad u^(<=2)|| on the R-side (and the U-weighted
    analogue near the cone).  Vector-field derivatives are realized at mode
    level by t/r* differences, the scaling combination, and sqrt(l(l+1))/r
    angular factors.  A sanity monitor, not an acceptance gate.
    """
    t, r = data.t, data.r
    tt, rr = np.meshgrid(t, r, indexing="ij")
    dt = float(t[1] - t[0])
    dr = float(r[1] - r[0])
    measure = rr ** 2 * dr * dt
    u = sum(np.abs(v) for v in data.comps.values())

    def vf_closure(base):
        dt_u = np.gradient(base, dt, axis=0)
        dr_u = np.gradient(base, dr, axis=1)
        s_u = tt * dt_u + rr * dr_u
        ang = math.sqrt(lam) * base / np.maximum(rr, 1.0)
        return [base, dt_u, dr_u, s_u, ang]

    lvl1 = vf_closure(u)
    lvl2 = []
    for w in lvl1[1:]:
        lvl2.extend(vf_closure(w)[1:])
    all_u = lvl1 + lvl2
    grads = [np.gradient(w, dt, axis=0) for w in all_u] + \
            [np.gradient(w, dr, axis=1) for w in all_u]

    inside, r_side, kr, ku = partition_labels(T, R1, tt, rr)
    out = []
    for kind, side_mask, kk in (("R", r_side, kr), ("U", ~r_side, ku)):
        for k in np.unique(kk[inside & side_mask]):
            m = inside & side_mask & (kk == k)
            if m.sum() < 8:
                continue
            scale = 2.0 ** k
            lhs = float(np.max(u[m]))
            l2u = math.sqrt(sum(float(np.sum(np.abs(w[m]) ** 2 * measure[m]))
                                for w in all_u))
            l2g = math.sqrt(sum(float(np.sum(np.abs(w[m]) ** 2 * measure[m]))
                                for w in grads))
            if kind == "R":
                rhs = (l2u / (math.sqrt(T) * scale ** 1.5)
                       + l2g / (math.sqrt(T) * math.sqrt(scale)))
            else:
                rhs = (l2u / (T ** 1.5 * math.sqrt(scale))
                       + l2g * math.sqrt(scale) / T ** 1.5)
            out.append(KSMargin(kind=kind, index=float(scale), T=T,
                                lhs=lhs, rhs=rhs))
    return out
