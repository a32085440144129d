"""Exponential polynomials on the plane.

An :class:`ExpPoly` is a finite sum of terms ``c * x1^i * x2^j * exp(l1*x1 + l2*x2)``
with complex coefficients and complex exponents.  Trigonometric factors are
stored as conjugate pairs of complex exponentials, so a real-valued function
is one whose term set is invariant under conjugating ``(c, l)``.

The class is closed under sums, products and partial derivatives.  Exact
scalars (``Fraction``/``CRat``) stay exact; floating exponents that agree to
within ``KEY_TOL`` are merged into one term.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .errors import ExpPolyParseError
from .scalars import (
    CRat,
    conj,
    exact,
    format_scalar,
    imag_part,
    is_exact,
    is_real,
    make_complex,
    real_part,
    sort_key,
)

KEY_TOL = 1e-10
EVAL_OVERFLOW = 700.0

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _lam_close(a, b) -> bool:
    if is_exact(a[0]) and is_exact(a[1]) and is_exact(b[0]) and is_exact(b[1]):
        return a == b
    return abs(complex(a[0]) - complex(b[0])) <= KEY_TOL and abs(complex(a[1]) - complex(b[1])) <= KEY_TOL


def _is_zero_coeff(c) -> bool:
    return c == 0


def _canon(terms):
    """Merge equal keys, drop zeros, sort."""
    merged: list[list] = []
    index: dict = {}
    for c, mono, lam in terms:
        if _is_zero_coeff(c):
            continue
        lam = (exact(lam[0]), exact(lam[1]))
        hit = None
        if is_exact(lam[0]) and is_exact(lam[1]):
            hit = index.get((lam, mono))
        if hit is None:
            for k, entry in enumerate(merged):
                if entry[1] == mono and _lam_close(entry[2], lam):
                    hit = k
                    break
        if hit is None:
            if is_exact(lam[0]) and is_exact(lam[1]):
                index[(lam, mono)] = len(merged)
            merged.append([c, mono, lam])
        else:
            merged[hit][0] = merged[hit][0] + c
    out = []
    for c, mono, lam in merged:
        if isinstance(c, CRat):
            c = CRat.make(c.re, c.im)
        elif isinstance(c, complex) and c.imag == 0:
            c = c.real
        if not _is_zero_coeff(c):
            out.append((c, mono, lam))
    out.sort(key=lambda t: (sort_key(t[2][0]), sort_key(t[2][1]), t[1]))
    return tuple(out)


class ExpPoly:
    """Immutable exponential polynomial in ``x1, x2``.

    ``ExpPoly(terms)`` checks real-closure; use :meth:`raw` for the complex
    intermediates that the solver builds before taking real parts.
    """

    __slots__ = ("terms",)
    __hash__ = None

    def __init__(self, terms: Iterable = (), *, check_real: bool = True):
        self.terms = _canon(terms)
        if check_real and not self.is_real_closed():
            raise ValueError("exponential polynomial is not real-closed")

    @classmethod
    def raw(cls, terms: Iterable = ()) -> "ExpPoly":
        return cls(terms, check_real=False)

    # -- constructors -------------------------------------------------------
    @classmethod
    def const(cls, c) -> "ExpPoly":
        return cls.raw([(exact(c), (0, 0), (_ZERO, _ZERO))])

    @classmethod
    def zero(cls) -> "ExpPoly":
        return cls.raw()

    @classmethod
    def monomial(cls, i: int, j: int, c=_ONE) -> "ExpPoly":
        return cls.raw([(exact(c), (i, j), (_ZERO, _ZERO))])

    @classmethod
    def x1(cls) -> "ExpPoly":
        return cls.monomial(1, 0)

    @classmethod
    def x2(cls) -> "ExpPoly":
        return cls.monomial(0, 1)

    @classmethod
    def exp(cls, l1, l2, c=_ONE) -> "ExpPoly":
        return cls.raw([(exact(c), (0, 0), (exact(l1), exact(l2)))])

    @classmethod
    def cos(cls, b1, b2) -> "ExpPoly":
        """``cos(b1*x1 + b2*x2)`` for real ``b``."""
        half = Fraction(1, 2)
        return cls.raw([(half, (0, 0), (make_complex(0, b1), make_complex(0, b2))),
                        (half, (0, 0), (make_complex(0, -exact(b1)), make_complex(0, -exact(b2))))])

    @classmethod
    def sin(cls, b1, b2) -> "ExpPoly":
        """``sin(b1*x1 + b2*x2)`` for real ``b``."""
        h = make_complex(0, Fraction(-1, 2))
        return cls.raw([(h, (0, 0), (make_complex(0, b1), make_complex(0, b2))),
                        (conj(h), (0, 0), (make_complex(0, -exact(b1)), make_complex(0, -exact(b2))))])

    # -- predicates ----------------------------------------------------------
    @property
    def is_exact(self) -> bool:
        return all(is_exact(c) and is_exact(l[0]) and is_exact(l[1]) for c, _, l in self.terms)

    def is_real_closed(self, tol: float = KEY_TOL) -> bool:
        for c, mono, lam in self.terms:
            target = (conj(lam[0]), conj(lam[1]))
            partner = None
            for c2, mono2, lam2 in self.terms:
                if mono2 == mono and _lam_close(lam2, target):
                    partner = c2
                    break
            if partner is None:
                return False
            if is_exact(partner) and is_exact(c):
                if partner != conj(c):
                    return False
            elif abs(complex(partner) - complex(c).conjugate()) > tol * max(1.0, abs(complex(c))):
                return False
        return True

    def is_zero(self, tol: float = 0.0) -> bool:
        if tol == 0:
            return not self.terms
        return all(abs(complex(c)) <= tol for c, _, _ in self.terms)

    def is_constant(self) -> bool:
        return all(m == (0, 0) and l[0] == 0 and l[1] == 0 for _, m, l in self.terms)

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.terms[0][0] if self.terms else _ZERO

    def exponents(self) -> list:
        out = []
        for _, _, lam in self.terms:
            if not any(_lam_close(lam, o) for o in out):
                out.append(lam)
        return out

    def degree(self) -> int:
        return max((i + j for _, (i, j), _ in self.terms), default=-1)

    # -- arithmetic --------------------------------------------------------------
    def _wrap(self, other):
        if isinstance(other, ExpPoly):
            return other
        return ExpPoly.const(other)

    def __add__(self, other):
        other = self._wrap(other)
        return ExpPoly.raw(self.terms + other.terms)

    __radd__ = __add__

    def __neg__(self):
        return ExpPoly.raw((-c, m, l) for c, m, l in self.terms)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        if not isinstance(other, ExpPoly):
            s = exact(other)
            return ExpPoly.raw((c * s, m, l) for c, m, l in self.terms)
        out = []
        for c1, (i1, j1), (a1, b1) in self.terms:
            for c2, (i2, j2), (a2, b2) in other.terms:
                out.append((c1 * c2, (i1 + i2, j1 + j2), (a1 + a2, b1 + b2)))
        return ExpPoly.raw(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        s = exact(other)
        return ExpPoly.raw((c / s, m, l) for c, m, l in self.terms)

    def __pow__(self, n: int):
        out = ExpPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def conj(self) -> "ExpPoly":
        return ExpPoly.raw((conj(c), m, (conj(l[0]), conj(l[1]))) for c, m, l in self.terms)

    def real_part(self) -> "ExpPoly":
        return (self + self.conj()) * Fraction(1, 2)

    def imag_part(self) -> "ExpPoly":
        return (self - self.conj()) * CRat(0, Fraction(-1, 2))

    def derive(self, axis: int) -> "ExpPoly":
        """Partial derivative along ``x1`` (axis 1) or ``x2`` (axis 2)."""
        if axis not in (1, 2):
            raise ValueError("axis must be 1 or 2")
        k = axis - 1
        out = []
        for c, (i, j), lam in self.terms:
            if lam[k] != 0:
                out.append((c * lam[k], (i, j), lam))
            p = (i, j)[k]
            if p:
                mono = (i - 1, j) if k == 0 else (i, j - 1)
                out.append((c * p, mono, lam))
        return ExpPoly.raw(out)

    def chop(self, tol: float) -> "ExpPoly":
        return ExpPoly.raw((c, m, l) for c, m, l in self.terms if is_exact(c) or abs(c) > tol)

    # -- evaluation --------------------------------------------------------------
    def __call__(self, x1, x2):
        return self.eval((x1, x2))

    def eval(self, point: Sequence[float]) -> float:
        """Value at a real point (the imaginary part of a real-closed sum cancels)."""
        x1, x2 = float(point[0]), float(point[1])
        total = 0j
        for c, (i, j), (a, b) in self.terms:
            arg = complex(a) * x1 + complex(b) * x2
            if arg.real > EVAL_OVERFLOW:
                raise OverflowError(f"exponent {arg.real:.1f} too large at {point}")
            total += complex(c) * (x1 ** i) * (x2 ** j) * cmath.exp(arg)
        return total.real

    def evaluate(self, x1, x2) -> np.ndarray:
        """Vectorised evaluation on arrays of coordinates."""
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        total = np.zeros(np.broadcast(x1, x2).shape, dtype=complex)
        for c, (i, j), (a, b) in self.terms:
            total += complex(c) * x1 ** i * x2 ** j * np.exp(complex(a) * x1 + complex(b) * x2)
        return total.real

    def numeric(self):
        """Fast scalar callable ``f(x1, x2) -> float``."""
        if not self.terms:
            return lambda x1, x2: 0.0
        if all(is_real(c, 0.0) and is_real(l[0], 0.0) and is_real(l[1], 0.0) for c, _, l in self.terms):
            fterms = [(float(real_part(c)), i, j, float(real_part(a)), float(real_part(b)))
                      for c, (i, j), (a, b) in self.terms]
            if len(fterms) == 1 and fterms[0][1:] == (1, 0, 0.0, 0.0):
                k = fterms[0][0]
                return lambda x1, x2: k * x1
            exp = math.exp

            def f(x1, x2):
                s = 0.0
                for c, i, j, a, b in fterms:
                    v = c
                    if i:
                        v *= x1 ** i
                    if j:
                        v *= x2 ** j
                    if a or b:
                        v *= exp(a * x1 + b * x2)
                    s += v
                return s
            return f
        return lambda x1, x2: self.eval((x1, x2))

    # -- comparison / display --------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, ExpPoly):
            try:
                other = ExpPoly.const(other)
            except TypeError:
                return NotImplemented
        diff = self - other
        if self.is_exact and other.is_exact:
            return diff.is_zero()
        scale = max([1.0] + [abs(complex(c)) for c, _, _ in self.terms + other.terms])
        return diff.is_zero(KEY_TOL * scale)

    def __repr__(self):
        try:
            return f"ExpPoly({ep_format(self)!r})"
        except ValueError:
            return f"ExpPoly.raw({list(self.terms)!r})"

    def __str__(self):
        return ep_format(self)


# ---------------------------------------------------------------------------
# thin functional API
# ---------------------------------------------------------------------------

def ep_add(f: ExpPoly, g: ExpPoly) -> ExpPoly:
    return f + g


def ep_mul(f: ExpPoly, g: ExpPoly) -> ExpPoly:
    return f * g


def ep_scale(f: ExpPoly, alpha) -> ExpPoly:
    return f * alpha


def ep_derive(f: ExpPoly, axis: int) -> ExpPoly:
    return f.derive(axis)


def ep_eval(f: ExpPoly, point) -> float:
    return f.eval(point)


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

def _fmt_linear(a, b) -> str:
    parts = []
    for coef, name in ((a, "x1"), (b, "x2")):
        if coef == 0:
            continue
        if coef == 1:
            s = name
        elif coef == -1:
            s = "-" + name
        else:
            s = f"{format_scalar(coef)}*{name}"
        if parts and not s.startswith("-"):
            s = "+" + s
        parts.append(s)
    return "".join(parts)


def _fmt_term(coef, mono, alpha, beta, trig) -> tuple[bool, str]:
    neg = coef < 0
    mag = -coef if neg else coef
    factors = []
    i, j = mono
    if i:
        factors.append("x1" if i == 1 else f"x1^{i}")
    if j:
        factors.append("x2" if j == 1 else f"x2^{j}")
    if alpha[0] != 0 or alpha[1] != 0:
        factors.append(f"exp({_fmt_linear(*alpha)})")
    if trig:
        factors.append(f"{trig}({_fmt_linear(*beta)})")
    if mag != 1 or not factors:
        factors.insert(0, format_scalar(mag))
    return neg, "*".join(factors)


def _positive_imag(lam) -> bool:
    i1, i2 = imag_part(lam[0]), imag_part(lam[1])
    return i1 > 0 or (i1 == 0 and i2 > 0)


def ep_format(f: ExpPoly) -> str:
    """Real text form; conjugate pairs are written with cos/sin factors."""
    pieces = []
    for c, mono, lam in f.terms:
        alpha = (real_part(lam[0]), real_part(lam[1]))
        beta = (imag_part(lam[0]), imag_part(lam[1]))
        if (is_exact(beta[0]) and is_exact(beta[1]) and beta == (0, 0)) or \
                (abs(beta[0]) <= KEY_TOL and abs(beta[1]) <= KEY_TOL and not (is_exact(beta[0]) and is_exact(beta[1]))):
            if abs(complex(c).imag) > KEY_TOL * max(1.0, abs(complex(c))):
                raise ValueError("term with real exponent has complex coefficient")
            pieces.append(_fmt_term(real_part(c), mono, alpha, beta, None))
            continue
        if not _positive_imag(lam):
            continue
        cr, ci = real_part(c), imag_part(c)
        if cr != 0:
            pieces.append(_fmt_term(2 * cr, mono, alpha, beta, "cos"))
        if ci != 0:
            pieces.append(_fmt_term(-2 * ci, mono, alpha, beta, "sin"))
    if not pieces:
        return "0"
    out = ("-" if pieces[0][0] else "") + pieces[0][1]
    for neg, s in pieces[1:]:
        out += (" - " if neg else " + ") + s
    return out


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
                    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>\*\*|[-+*/^()]))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ExpPolyParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}",
                                        len(text) - len(text[pos:].lstrip()))
            kind = m.lastgroup
            start = m.start(kind)
            self.tokens.append((kind, m.group(kind), start))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.take()
        if val != value:
            raise ExpPolyParseError(f"expected {value!r}", pos)

    def parse(self) -> ExpPoly:
        if not self.tokens:
            raise ExpPolyParseError("empty expression", 0)
        out = self.expr()
        kind, val, pos = self.peek()
        if kind is not None:
            raise ExpPolyParseError(f"unexpected token {val!r}", pos)
        return out

    def expr(self) -> ExpPoly:
        out = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self) -> ExpPoly:
        out = self.unary()
        while self.peek()[1] in ("*", "/"):
            op, pos = self.take()[1:]
            rhs = self.unary()
            if op == "*":
                out = out * rhs
            else:
                if not rhs.is_constant() or rhs.is_zero():
                    raise ExpPolyParseError("division only by a nonzero constant", pos)
                out = out / rhs.constant_value()
        return out

    def unary(self) -> ExpPoly:
        if self.peek()[1] in ("-", "+"):
            op = self.take()[1]
            val = self.unary()
            return -val if op == "-" else val
        return self.power()

    def power(self) -> ExpPoly:
        base = self.atom()
        if self.peek()[1] in ("^", "**"):
            _, _, pos = self.take()
            neg = False
            if self.peek()[1] == "-":
                self.take()
                neg = True
            kind, val, pos = self.take()
            if kind != "num" or not val.isdigit() or neg:
                raise ExpPolyParseError("exponent must be a non-negative integer", pos)
            base = base ** int(val)
        return base

    def atom(self) -> ExpPoly:
        kind, val, pos = self.take()
        if kind == "num":
            return ExpPoly.const(Fraction(val))
        if kind == "name":
            if val == "x1":
                return ExpPoly.x1()
            if val == "x2":
                return ExpPoly.x2()
            if val == "pi":
                return ExpPoly.const(math.pi)
            if val in ("exp", "cos", "sin"):
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return _apply_function(val, arg, pos)
            raise ExpPolyParseError(f"unknown name {val!r}", pos)
        if val == "(":
            out = self.expr()
            self.expect(")")
            return out
        if kind is None:
            raise ExpPolyParseError("unexpected end of input", pos)
        raise ExpPolyParseError(f"unexpected token {val!r}", pos)


def _linear_parts(arg: ExpPoly, pos: int):
    k0, k1, k2 = _ZERO, _ZERO, _ZERO
    for c, mono, lam in arg.terms:
        if lam[0] != 0 or lam[1] != 0 or mono not in ((0, 0), (1, 0), (0, 1)):
            raise ExpPolyParseError("function argument must be linear in x1, x2", pos)
        if imag_part(c) != 0:
            raise ExpPolyParseError("function argument must be real", pos)
        c = real_part(c)
        if mono == (0, 0):
            k0 = c
        elif mono == (1, 0):
            k1 = c
        else:
            k2 = c
    return k0, k1, k2


def _apply_function(name: str, arg: ExpPoly, pos: int) -> ExpPoly:
    k0, k1, k2 = _linear_parts(arg, pos)
    if name == "exp":
        return ExpPoly.exp(k1, k2, c=1 if k0 == 0 else math.exp(k0))
    if k0 == 0:
        return ExpPoly.cos(k1, k2) if name == "cos" else ExpPoly.sin(k1, k2)
    # shifted trig: cos(k0 + t) = cos k0 cos t - sin k0 sin t
    ck, sk = math.cos(k0), math.sin(k0)
    if name == "cos":
        return ExpPoly.cos(k1, k2) * ck - ExpPoly.sin(k1, k2) * sk
    return ExpPoly.sin(k1, k2) * ck + ExpPoly.cos(k1, k2) * sk


def ep_parse(text: str) -> ExpPoly:
    """Parse e.g. ``"x2^2 + 2*x1"`` or ``"exp(x1)*cos(x2)"``."""
    if not isinstance(text, str):
        raise ExpPolyParseError("expression must be a string")
    out = _Parser(text).parse()
    if not out.is_real_closed():
        raise ExpPolyParseError("expression is not real-valued")
    return ExpPoly(out.terms)


# ---------------------------------------------------------------------------
# spans
# ---------------------------------------------------------------------------

def _real_coordinates(funcs: Sequence[ExpPoly]):
    """Real coordinate rows of real-closed functions over a shared key set.

    A key with real exponent contributes one coordinate (the real
    coefficient); a conjugate pair contributes the real and imaginary part of
    the coefficient on its representative with positive imaginary exponent.
    """
    keys: list[tuple] = []   # (lam, mono, kind) kind in {"r", "c", "p"}
    for f in funcs:
        if not f.is_real_closed():
            raise ValueError("span elements must be real-closed")
        for _, mono, lam in f.terms:
            if any(m == mono and _lam_close(l, lam) for l, m, _ in keys):
                continue
            if imag_part(lam[0]) == 0 and imag_part(lam[1]) == 0 or \
                    (not (is_exact(lam[0]) and is_exact(lam[1])) and
                     abs(complex(lam[0]).imag) <= KEY_TOL and abs(complex(lam[1]).imag) <= KEY_TOL):
                kind = "r"
            else:
                kind = "c" if _positive_imag(lam) else "p"
            keys.append((lam, mono, kind))
    keys.sort(key=lambda k: (sort_key(k[0][0]), sort_key(k[0][1]), k[1]))
    cols = [k for k in keys if k[2] != "p"]
    rows = []
    exact_mode = all(f.is_exact for f in funcs)
    for f in funcs:
        row = []
        for lam, mono, kind in cols:
            c = next((c for c, m, l in f.terms if m == mono and _lam_close(l, lam)), _ZERO)
            if kind == "r":
                row.append(real_part(c) if exact_mode else float(complex(c).real))
            else:
                if exact_mode:
                    row.extend([real_part(c), imag_part(c)])
                else:
                    row.extend([float(complex(c).real), float(complex(c).imag)])
        rows.append(row)
    return cols, rows, exact_mode


def _from_coordinates(cols, row) -> ExpPoly:
    terms = []
    k = 0
    for lam, mono, kind in cols:
        if kind == "r":
            terms.append((row[k], mono, lam))
            k += 1
        else:
            c = make_complex(row[k], row[k + 1])
            terms.append((c, mono, lam))
            terms.append((conj(c), mono, (conj(lam[0]), conj(lam[1]))))
            k += 2
    return ExpPoly(terms)


def _normalise_rows(rows):
    out = []
    for r in rows:
        m = max((abs(v) for v in r), default=0.0)
        out.append([v / m for v in r] if m > 0 else list(r))
    return out


SPAN_TOL = 1e-8


def _span_rank(funcs: Sequence[ExpPoly]) -> int:
    funcs = [f for f in funcs if not f.is_zero()]
    if not funcs:
        return 0
    cols, rows, exact_mode = _real_coordinates(funcs)
    if exact_mode:
        return linalg.rank(rows, 0)
    rows = _normalise_rows(rows)
    return int(np.linalg.matrix_rank(np.array(rows, dtype=float), tol=SPAN_TOL))


@dataclass(frozen=True)
class FuncSpan:
    """Real span of linearly independent exponential polynomials."""

    basis: tuple

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(self.basis))
        if _span_rank(self.basis) != len(self.basis):
            raise ValueError("FuncSpan basis is not linearly independent")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def __len__(self):
        return len(self.basis)

    def contains(self, f: ExpPoly) -> bool:
        return _span_rank(list(self.basis) + [f]) == self.dim

    def scale(self, factor: ExpPoly) -> "FuncSpan":
        """The span ``factor * self``."""
        return FuncSpan(tuple(factor * b for b in self.basis))

    def __str__(self):
        return "span{" + ", ".join(ep_format(b) for b in self.basis) + "}"


def span_canonicalize(funcs: Iterable[ExpPoly]) -> FuncSpan:
    """Reduced row-echelon basis of the real span of ``funcs``."""
    funcs = [f for f in funcs if not f.is_zero()]
    if not funcs:
        return FuncSpan(())
    cols, rows, exact_mode = _real_coordinates(funcs)
    if exact_mode:
        red, piv = linalg.rref(rows, 0)
    else:
        red, piv = linalg.rref(_normalise_rows(rows), SPAN_TOL)
    return FuncSpan(tuple(_from_coordinates(cols, r) for r in red))


def span_equal(a: FuncSpan, b: FuncSpan) -> bool:
    """Mutual containment of two spans."""
    ra = _span_rank(list(a.basis))
    rb = _span_rank(list(b.basis))
    return ra == rb and _span_rank(list(a.basis) + list(b.basis)) == ra
