"""Geodesic completeness: the verdict table, a numerical probe and supporting checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np
from scipy.integrate import solve_ivp

from .catalogue import CanonicalLabel, canonical_model, check_params, label
from .closed_forms import closed_form_geodesic
from .connection import Connection, TypeAModel, geometry_n
from .errors import FactorError, ParamDomainError
from .exp_poly import ExpPoly, FuncSpan, span_canonicalize
from .geodesics import REACHED, T_MAX, GeodesicTrace, Termination, integrate, ricci_diagnostic
from .scalars import imag_part, is_exact, real_part

COMPLETE = "Complete"
COMPLETABLE = "Completable"
ESSENTIALLY_INCOMPLETE = "EssentiallyIncomplete"
UNRESOLVED = "IncompleteUnresolved"


@dataclass(frozen=True)
class CompletenessVerdict:
    kind: str
    target: CanonicalLabel | None = None
    evidence: tuple = ()

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.target is not None:
            out["target"] = str(self.target)
        out["evidence"] = list(self.evidence)
        return out

    def __str__(self):
        return f"{self.kind}({self.target})" if self.target is not None else self.kind


_HALF = Fraction(-1, 2)


def verdict(lab: CanonicalLabel) -> CompletenessVerdict:
    """Completeness of a catalogue surface, from the classification theorem."""
    fam, p = lab.family, lab.params
    if fam != "N":
        check_params(lab)
    if fam in ("M_0^0", "M_4^0"):
        why = "the flat plane" if fam == "M_0^0" else "affinely diffeomorphic to the flat plane via (x2, x2^2 + 2 x1)"
        return CompletenessVerdict(COMPLETE, None, (why,))
    if fam == "M_3^1" and p[0] == _HALF:
        return CompletenessVerdict(COMPLETE, None, (
            "homogeneous; every geodesic from the origin is ((a/b)(e^{bt}-1), bt) or (at, 0), defined for all t",))
    if fam == "M_2^2" and p[0] == -1:
        return CompletenessVerdict(COMPLETE, None, (
            "u2 keeps its sign and the velocity stays on a bounded tau-arc of length at most pi",))
    if fam == "N":
        return CompletenessVerdict(COMPLETE, None, (
            "homogeneous; geodesics from the origin are ((a/b) sin bt, bt) or (at, 0)",))
    if fam in ("M_1^0", "M_2^0", "M_3^0"):
        maps = {"M_1^0": "(e^{x1}, x2 e^{x1})", "M_2^0": "(e^{x2}, e^{-x1})", "M_3^0": "(x1, e^{x2})"}
        return CompletenessVerdict(COMPLETABLE, label("M_0^0"), (
            f"affine embedding {maps[fam]} into the flat plane",))
    if fam == "M_5^1" and p[0] == 0:
        return CompletenessVerdict(COMPLETABLE, label("N"), (
            "geodesic (log cos t, t) leaves every compact set as t -> pi/2",
            "affine embedding (e^{x1}, x2) into the complete surface N"))
    if fam == "M_2^1" and p[0] == _HALF:
        return CompletenessVerdict(COMPLETABLE, label("M_3^1", _HALF), (
            "geodesic (-log t, 0) is not defined at t = 0",
            "affine embedding (e^{-x1}, x2) into the complete model M_3^1(-1/2)"))
    if fam == "M_5^0":
        return CompletenessVerdict(UNRESOLVED, None, (
            "incomplete: u2 = 0 geodesics solve u1' = -u1^2",
            "(e^{x1} cos x2, e^{x1} sin x2) is only an immersion into the flat plane, not an embedding"))
    why = "a geodesic has unbounded velocity in finite time"
    if lab.rank >= 1:
        why += " while rho(u, d_i) is unbounded, so no affine extension can exist"
    return CompletenessVerdict(ESSENTIALLY_INCOMPLETE, None, (why,))


# -- probe ------------------------------------------------------------------------

def singular_directions(lab: CanonicalLabel) -> list:
    """Unit initial velocities of the explicit incomplete geodesics for ``lab``."""
    fam, p = lab.family, lab.params
    cases = []
    if fam == "M_1^1":
        cases.append(("M11-log", ()))
    elif fam in ("M_2^1", "M_3^1"):
        if p[0] != _HALF:
            cases.append(("M21-M31-log", p))
        elif fam == "M_2^1":
            cases.append(("M21-half-log", ()))
    elif fam == "M_4^1":
        cases.append(("M41-log", p))
    elif fam == "M_5^1":
        cases.append(("M51-log", p) if p[0] != 0 else ("M51-zero-cos", ()))
    elif fam == "M_1^2":
        cases.append(("M12-log", p))
    elif fam == "M_2^2" and p[0] != -1:
        cases.append(("M22-log", p))
    elif fam in ("M_3^2", "M_4^2"):
        cases.append(("M32-M42-log", ()))
    out = []
    for case, params in cases:
        g = closed_form_geodesic(case, *params)
        v = g.vel(g.t0)
        out.append(tuple(v / np.linalg.norm(v)))
    return out


@dataclass(frozen=True)
class RayOutcome:
    u0: tuple
    forward: Termination
    backward: Termination
    ricci_terminal: float          # largest |rho(u, d_i)| at the end of either trace

    @property
    def reached(self) -> bool:
        return self.forward.kind == REACHED and self.backward.kind == REACHED

    def to_json(self) -> dict:
        return {"u0": list(self.u0), "forward": self.forward.to_json(),
                "backward": self.backward.to_json(), "ricci_terminal": self.ricci_terminal}


@dataclass(frozen=True)
class ProbeReport:
    model: str
    fan: tuple
    t_max: float
    expected: CompletenessVerdict | None = None

    @property
    def all_reached(self) -> bool:
        return all(r.reached for r in self.fan)

    @property
    def agrees_with_table(self) -> bool | None:
        if self.expected is None:
            return None
        return self.all_reached == (self.expected.kind == COMPLETE)

    @property
    def ricci_max(self) -> float:
        return max((r.ricci_terminal for r in self.fan), default=0.0)

    def blowups(self) -> list:
        return [r for r in self.fan if not r.reached]

    def to_json(self) -> dict:
        return {"model": self.model, "t_max": self.t_max, "rays": len(self.fan),
                "all_reached": self.all_reached, "agrees_with_table": self.agrees_with_table,
                "expected": self.expected.to_json() if self.expected else None,
                "ricci_max": self.ricci_max, "fan": [r.to_json() for r in self.fan]}


def _resolve(target):
    """``(connection-or-model, name, label-or-None)``."""
    if isinstance(target, CanonicalLabel):
        if target.family == "N":
            return geometry_n(), "N", target
        return canonical_model(target), str(target), target
    if isinstance(target, Connection):
        if target.name == "N":
            return target, "N", label("N")
        return target, "connection", None
    return target, str(target), None


def _terminal_ricci(model, trace: GeodesicTrace) -> float:
    if len(trace.t) == 0:
        return 0.0
    d = ricci_diagnostic(model, trace)
    return float(max(d[-1, 1], d[-1, 2]))


def completeness_probe(target, n: int = 16, t_max: float = T_MAX) -> ProbeReport:
    """Integrate a fan of unit rays from the origin in both time directions.

    Translations are affine for Type A models (and for N), so rays from the
    origin probe every point.  For an even fan the backward ray of ``u`` is
    the forward ray of ``-u`` reversed, and is reused.
    """
    if n < 8:
        raise ParamDomainError("the probe needs at least 8 rays")
    conn, name, lab = _resolve(target)
    angles = [2 * math.pi * k / n for k in range(n)]
    rays = [(math.cos(a), math.sin(a)) for a in angles]
    forward = {}
    for k, u in enumerate(rays):
        forward[k] = integrate(conn, (0.0, 0.0), u, t_max)
    fan = []
    for k, u in enumerate(rays):
        back = forward[(k + n // 2) % n] if n % 2 == 0 else integrate(conn, (0.0, 0.0), u, -t_max)
        fwd = forward[k]
        btail = back.termination
        if n % 2 == 0 and btail.t_star is not None:
            btail = Termination(btail.kind, -btail.t_star)
        fan.append(RayOutcome(u, fwd.termination, btail,
                              max(_terminal_ricci(conn, fwd), _terminal_ricci(conn, back))))
    if lab is not None and lab.family != "N":
        for u in singular_directions(lab):
            fwd = integrate(conn, (0.0, 0.0), u, t_max)
            back = integrate(conn, (0.0, 0.0), u, -t_max)
            fan.append(RayOutcome(u, fwd.termination, back.termination,
                                  max(_terminal_ricci(conn, fwd), _terminal_ricci(conn, back))))
    expected = verdict(lab) if lab is not None else None
    return ProbeReport(name, tuple(fan), t_max, expected)


# -- the tau-family on M_2^2(-1, b2) -------------------------------------------------

@dataclass(frozen=True)
class TauFamily:
    """Velocities ``u(tau)`` of geodesics on M_2^2(-1, b2) with ``u(0) = (a, b)``.

    Along a geodesic ``u(t) = u(tau(t))`` where ``tau' = u2(tau)`` and ``tau(0) = 0``.
    """

    b2: float
    a: float
    b: float

    def u1(self, tau):
        b2, a, b = self.b2, self.a, self.b
        return np.exp(-b2 * tau) * (0.5 * (-2 * a * b2 + b * b2 * b2 + b) * np.sin(tau) + a * np.cos(tau))

    def u2(self, tau):
        b2, a, b = self.b2, self.a, self.b
        return np.exp(-b2 * tau) * ((b * b2 - 2 * a) * np.sin(tau) + b * np.cos(tau))

    def du1(self, tau):
        b2, a, b = self.b2, self.a, self.b
        p, q = 0.5 * (-2 * a * b2 + b * b2 * b2 + b), a
        return np.exp(-b2 * tau) * ((p - b2 * q) * np.cos(tau) - (q + b2 * p) * np.sin(tau))

    def du2(self, tau):
        b2, a, b = self.b2, self.a, self.b
        p, q = b * b2 - 2 * a, b
        return np.exp(-b2 * tau) * ((p - b2 * q) * np.cos(tau) - (q + b2 * p) * np.sin(tau))

    def residual(self, tau) -> np.ndarray:
        """Both geodesic equations after substituting ``d/dt = u2(tau) d/dtau``."""
        u1, u2 = self.u1(tau), self.u2(tau)
        r1 = self.du1(tau) * u2 + 2 * self.b2 * u1 * u2 - 0.5 * (1 + self.b2 ** 2) * u2 * u2
        r2 = self.du2(tau) * u2 + 2 * u1 * u2
        return np.maximum(np.abs(r1), np.abs(r2))

    def integrate_tau(self, t_span: float, n: int = 401):
        """Solve ``tau' = u2(tau)`` from ``tau(0) = 0``; returns ``(t, tau)`` arrays."""
        ts = np.linspace(0.0, t_span, n)
        sol = solve_ivp(lambda _t, y: [self.u2(y[0])], (0.0, t_span), [0.0], method="DOP853",
                        t_eval=ts, rtol=1e-12, atol=1e-14)
        return sol.t, sol.y[0]

    def model(self) -> TypeAModel:
        return canonical_model(label("M_2^2", -1, self.b2))


def tau_family(b2, a, b) -> TauFamily:
    if a == 0 and b == 0:
        raise ParamDomainError("the tau-family needs (a, b) != (0, 0)")
    return TauFamily(float(b2), float(a), float(b))


# -- collinearity in projective coordinates --------------------------------------------

def _real_exponents(span: FuncSpan):
    seen = []
    for f in span:
        for lam in f.exponents():
            if all((imag_part(v) == 0) if is_exact(v) else abs(complex(v).imag) < 1e-12 for v in lam):
                lam = tuple(real_part(v) if is_exact(v) else complex(v).real for v in lam)
                if lam not in seen:
                    seen.append(lam)
    return seen


def projective_coordinates(span: FuncSpan):
    """``(g, phi1, phi2)`` with ``span = e^g span{1, phi1, phi2}`` and ``g`` linear."""
    one = ExpPoly.const(1)
    for lam in _real_exponents(span):
        factor = ExpPoly.exp(-lam[0], -lam[1])
        normal = span_canonicalize([ExpPoly((f * factor).terms) for f in span])
        if not normal.contains(one):
            continue
        for p, q in combinations(normal.basis, 2):
            if span_canonicalize([one, p, q]).dim == 3:
                return lam, p, q
    raise FactorError("no exponential factor exposes the constant function in this span")


def collinearity_check(trace: GeodesicTrace, span: FuncSpan) -> float:
    """Deviation of ``(phi1, phi2)(trace)`` from its best-fit line.

    The largest perpendicular distance to the total-least-squares line,
    divided by ``max(1, extent)`` of the point cloud along the line.
    """
    _, p, q = projective_coordinates(span)
    with np.errstate(over="ignore", invalid="ignore"):
        P = np.column_stack([p.evaluate(trace.x[:, 0], trace.x[:, 1]),
                             q.evaluate(trace.x[:, 0], trace.x[:, 1])]).real
    P = P[np.all(np.isfinite(P), axis=1)]
    if len(P) < 3:
        return 0.0
    c = P.mean(axis=0)
    _, _, vt = np.linalg.svd(P - c)
    along, normal = vt[0], vt[1]
    extent = float(np.ptp((P - c) @ along))
    return float(np.max(np.abs((P - c) @ normal)) / max(1.0, extent))
