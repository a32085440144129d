"""Numerical geodesics ``x'' + G(x)(x', x') = 0`` with blow-up detection."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.integrate import DOP853

from .connection import Connection, TypeAModel, ricci_general, ricci_type_a

RTOL = 1e-10
ATOL = 1e-12
U_MAX = 1e12
H_MIN = 1e-14
T_MAX = 32.0
MAX_STEPS = 200_000

REACHED, BLOWUP, COLLAPSE, OVERFLOW = "ReachedTmax", "BlowUp", "StepCollapse", "Overflow"


@dataclass(frozen=True)
class Termination:
    kind: str
    t_star: float | None = None

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.t_star is not None:
            out["t_star"] = self.t_star
        return out

    def __str__(self):
        return self.kind if self.t_star is None else f"{self.kind}(t*={self.t_star:.6g})"


@dataclass(frozen=True, eq=False)
class GeodesicTrace:
    t: np.ndarray                 # (N,) strictly monotone
    x: np.ndarray                 # (N, 2)
    u: np.ndarray                 # (N, 2)
    termination: Termination
    _dense: list = field(default_factory=list, repr=False)
    _accel: object = field(default=None, repr=False)

    @cached_property
    def residual_max(self) -> float:
        """Relative geodesic-equation residual of the dense output (computed on first use)."""
        return _dense_residual(self._dense, self._accel) if self._accel else 0.0

    @property
    def samples(self) -> list:
        return [(float(t), tuple(x), tuple(u)) for t, x, u in zip(self.t, self.x, self.u)]

    @property
    def t_end(self) -> float:
        return float(self.t[-1])

    def state_at(self, t: float) -> np.ndarray:
        """``(x1, x2, u1, u2)`` at ``t`` from the dense output."""
        forward = self.t[-1] >= self.t[0]
        ts = self.t if forward else -self.t
        key = t if forward else -t
        if not ts[0] - 1e-12 <= key <= ts[-1] + 1e-12:
            raise ValueError(f"t={t} outside the traced interval")
        k = int(np.searchsorted(ts, key))
        k = min(max(k, 1), len(self._dense))
        return self._dense[k - 1](t)

    def position_at(self, t: float) -> np.ndarray:
        return self.state_at(t)[:2]

    def to_csv(self) -> str:
        lines = ["t,x1,x2,u1,u2"]
        for t, x, u in zip(self.t, self.x, self.u):
            lines.append(",".join(repr(float(v)) for v in (t, x[0], x[1], u[0], u[1])))
        return "\n".join(lines) + "\n"


def _rhs_factory(conn):
    if isinstance(conn, TypeAModel):
        a, b, c, d, e, f = (float(g) for g in conn.gamma)

        def rhs(_t, y):
            u1, u2 = y[2], y[3]
            return np.array([u1, u2,
                             -(a * u1 * u1 + 2 * c * u1 * u2 + e * u2 * u2),
                             -(b * u1 * u1 + 2 * d * u1 * u2 + f * u2 * u2)])

        def accel(x, u):
            return -np.array([a * u[0] ** 2 + 2 * c * u[0] * u[1] + e * u[1] ** 2,
                              b * u[0] ** 2 + 2 * d * u[0] * u[1] + f * u[1] ** 2])
        return rhs, accel

    gamma_at = conn.numeric_gamma()

    def accel(x, u):
        return -np.einsum("jki,j,k->i", gamma_at(x[0], x[1]), u, u)

    def rhs(_t, y):
        du = accel(y[:2], y[2:])
        return np.array([y[2], y[3], du[0], du[1]])
    return rhs, accel


def _estimate_t_star(ts, speeds) -> float:
    """Zero of a straight-line fit to ``1/|u|`` over the last decade of growth."""
    top = speeds[-1]
    keep = [i for i in range(len(ts)) if speeds[i] >= top / 10.0]
    if len(keep) < 2:
        keep = list(range(max(0, len(ts) - 3), len(ts)))
    tt = np.array([ts[i] for i in keep])
    inv = np.array([1.0 / speeds[i] for i in keep])
    if len(tt) < 2 or np.ptp(tt) == 0:
        return float(ts[-1])
    slope, intercept = np.polyfit(tt - tt[-1], inv, 1)
    if slope == 0:
        return float(ts[-1])
    return float(tt[-1] - intercept / slope)


def _pole_like(y, accel, t) -> bool:
    """Growth time ``|u|^2 / |u . u'|`` is negligible: a pole, not exponential growth."""
    u = y[2:]
    rate = abs(float(u @ accel(y[:2], u)))
    return rate > 0 and float(u @ u) / rate < 1e-6 * max(1.0, abs(t))


def _increasing(speeds) -> bool:
    tail = speeds[-4:]
    return len(tail) >= 2 and all(b >= a for a, b in zip(tail, tail[1:]))


def integrate(conn, x0, u0, t_span: float = T_MAX, rtol: float = RTOL, atol: float = ATOL,
              u_max: float = U_MAX, t0: float = 0.0) -> GeodesicTrace:
    """Integrate from ``(x0, u0)`` at ``t0`` over a signed span ``t_span``.

    Termination is ``ReachedTmax`` unless the speed escapes: once
    ``|u| > u_max`` with a negligible growth time ``|u|^2 / |u . u'|``,
    ``BlowUp`` is declared and its time extrapolated from ``1/|u|``.
    Exponential growth (no finite blow-up) keeps integrating.
    """
    if isinstance(conn, Connection) and conn.is_constant:
        conn = conn.to_type_a()
    rhs, accel = _rhs_factory(conn)
    y0 = np.array([*map(float, x0), *map(float, u0)])
    t_bound = t0 + float(t_span)
    ts, ys, dense = [t0], [y0], []
    speeds = [math.hypot(y0[2], y0[3])]
    termination = Termination(REACHED)
    if t_span == 0:
        return GeodesicTrace(np.array(ts), y0[None, :2], y0[None, 2:], termination)
    solver = DOP853(rhs, t0, y0, t_bound, rtol=rtol, atol=atol)
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(MAX_STEPS):
            if solver.status != "running":
                break
            msg = solver.step()
            if solver.status == "failed":
                if _increasing(speeds):
                    termination = Termination(BLOWUP, _estimate_t_star(ts, speeds))
                else:
                    termination = Termination(COLLAPSE)
                break
            y = solver.y
            if not np.all(np.isfinite(y)):
                termination = Termination(OVERFLOW)
                break
            if solver.t == ts[-1]:
                continue
            dense.append(solver.dense_output())
            ts.append(solver.t)
            ys.append(y.copy())
            speeds.append(math.hypot(y[2], y[3]))
            if speeds[-1] > u_max and _pole_like(y, accel, ts[-1]):
                termination = Termination(BLOWUP, _estimate_t_star(ts, speeds))
                break
            if solver.step_size is not None and solver.step_size < H_MIN and _increasing(speeds):
                termination = Termination(BLOWUP, _estimate_t_star(ts, speeds))
                break
            del msg
        else:
            termination = Termination(COLLAPSE)
    Y = np.array(ys)
    return GeodesicTrace(np.array(ts), Y[:, :2], Y[:, 2:], termination, dense, accel)


def _dense_residual(dense, accel) -> float:
    """Largest relative ``|x'' + G(x')| / (1 + |G(x')|)`` at step midpoints."""
    worst = 0.0
    for d in dense:
        t_lo, t_hi = d.t_min, d.t_max
        dt = t_hi - t_lo
        # finite differences cannot resolve steps this short against |t|
        if abs(dt) < 1e-6 * max(1.0, abs(t_lo)):
            continue
        tm = 0.5 * (t_lo + t_hi)
        h = 0.05 * dt
        ym = d(tm)
        if not np.all(np.isfinite(ym)):
            continue
        # five-point stencil on the dense interpolant's velocity
        xdd = (d(tm - 2 * h)[2:] - 8 * d(tm - h)[2:] + 8 * d(tm + h)[2:] - d(tm + 2 * h)[2:]) / (12 * h)
        g = accel(ym[:2], ym[2:])
        r = float(np.max(np.abs(xdd - g)) / (1.0 + np.max(np.abs(g))))
        worst = max(worst, r)
    return worst


def geodesic_residual(conn, curve, ts) -> float:
    """``sup |x'' + G(x)(x', x')|`` along a curve with ``pos/vel/acc`` methods."""
    if isinstance(conn, Connection) and conn.is_constant:
        conn = conn.to_type_a()
    _, accel = _rhs_factory(conn)
    worst = 0.0
    for t in ts:
        x, v, a = curve.pos(t), curve.vel(t), curve.acc(t)
        worst = max(worst, float(np.max(np.abs(a - accel(x, v)))))
    return worst


def ricci_diagnostic(model, trace: GeodesicTrace) -> np.ndarray:
    """Rows ``(t, |rho(u, d1)|, |rho(u, d2)|)`` along the trace."""
    if isinstance(model, TypeAModel):
        rho = np.array([[float(v) for v in row] for row in ricci_type_a(model).matrix()])

        def rho_at(_x):
            return rho
    else:
        ric = ricci_general(model)
        fns = [[v.numeric() for v in row] for row in ric.entries]

        def rho_at(x):
            return np.array([[fn(x[0], x[1]) for fn in row] for row in fns], dtype=float)
    out = np.empty((len(trace.t), 3))
    for n, (t, x, u) in enumerate(zip(trace.t, trace.x, trace.u)):
        r = rho_at(x)
        out[n] = (t, abs(u @ r[:, 0]), abs(u @ r[:, 1]))
    return out
