"""Truncated Levi-Civita numbers.

An :class:`LCNumber` is a finite formal sum ``sum(c_q * eps**q)`` with rational
exponents ``q`` and binary64 coefficients.  Smallest exponent leads: a number
whose leading exponent is positive is infinitesimal, negative is infinite.

Every operation that can produce an infinite series truncates it according to
a :class:`TruncationContext`: at most ``term_budget`` terms, and no exponent
more than ``exponent_window`` above the leading one.  Contexts work like the
``decimal`` module's: pass ``ctx=`` explicitly, or set one with
:func:`localcontext`.

>>> eps = epsilon()
>>> standard_part((1 + eps) * (1 - eps))
1.0
>>> render(inverse(1 + eps, TruncationContext(term_budget=4)))
'1.0 - 1.0*eps + 1.0*eps^2 - 1.0*eps^3'
"""

from __future__ import annotations

import contextlib
import contextvars
import enum
import heapq
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

__all__ = [
    "LCNumber",
    "TruncationContext",
    "Ordering",
    "LCError",
    "InfiniteNumberError",
    "LCZeroDivisionError",
    "LCDomainError",
    "ANALYTIC_FUNCTIONS",
    "getcontext",
    "setcontext",
    "localcontext",
    "from_real",
    "epsilon",
    "monomial",
    "add",
    "neg",
    "sub",
    "mul",
    "scale",
    "inverse",
    "div",
    "lc_pow",
    "lc_sqrt",
    "lift_analytic",
    "lc_compare",
    "lc_abs",
    "standard_part",
    "coefficient",
    "leading_exponent",
    "is_zero",
    "is_infinitesimal",
    "is_finite",
    "is_infinite",
    "infinitely_close",
    "d_deps",
    "integrate_eps",
    "render",
    "parse_lc",
]

Exponent = Fraction
Number = Union["LCNumber", float, int]

# Hard ceiling on series lengths and exponent-lattice sizes; protects against
# pathological exponent spacings such as eps^(1/1000).
_MAX_SERIES_ORDER = 4096


class LCError(ArithmeticError):
    """Base class for Levi-Civita arithmetic errors."""


class InfiniteNumberError(LCError):
    """Raised when an operation needs a finite number and gets an infinite one."""


class LCZeroDivisionError(LCError, ZeroDivisionError):
    pass


class LCDomainError(LCError, ValueError):
    pass


@dataclass(frozen=True)
class TruncationContext:
    """Precision policy for LC arithmetic."""

    term_budget: int = 32
    exponent_window: Fraction = Fraction(8)

    def __post_init__(self) -> None:
        window = Fraction(self.exponent_window)
        object.__setattr__(self, "exponent_window", window)
        if int(self.term_budget) != self.term_budget or self.term_budget <= 0:
            raise ValueError(f"term_budget must be a positive integer, got {self.term_budget!r}")
        if window <= 0:
            raise ValueError(f"exponent_window must be positive, got {window}")

    @classmethod
    def parse(cls, text: str) -> TruncationContext:
        """Parse ``"TERMS:WINDOW"``, e.g. ``"32:8"`` or ``"48:17/2"``."""
        try:
            terms, window = text.split(":")
            return cls(int(terms), Fraction(window))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"invalid truncation order {text!r}: expected TERMS:WINDOW") from exc


_context: contextvars.ContextVar[TruncationContext] = contextvars.ContextVar(
    "lc_context", default=TruncationContext()
)


def getcontext() -> TruncationContext:
    return _context.get()


def setcontext(ctx: TruncationContext) -> None:
    _context.set(ctx)


@contextlib.contextmanager
def localcontext(ctx: TruncationContext | None = None) -> Iterator[TruncationContext]:
    """Temporarily make ``ctx`` the default truncation context."""
    token = _context.set(ctx if ctx is not None else getcontext())
    try:
        yield _context.get()
    finally:
        _context.reset(token)


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


@dataclass(frozen=True)
class LCNumber:
    """Immutable truncated Levi-Civita number.

    ``terms`` is a tuple of ``(exponent, coefficient)`` pairs sorted strictly
    ascending by exponent, with no zero coefficients.  Use the module-level
    constructors rather than building one by hand.
    """

    terms: tuple[tuple[Fraction, float], ...] = ()

    def __post_init__(self) -> None:
        prev = None
        for q, c in self.terms:
            if not isinstance(q, Fraction):
                raise TypeError("exponents must be Fractions")
            if c == 0.0 or not math.isfinite(c):
                raise ValueError(f"invalid coefficient {c!r}")
            if prev is not None and q <= prev:
                raise ValueError("terms must be strictly ascending by exponent")
            prev = q

    # arithmetic sugar; all of it runs under the current context
    def __add__(self, other: Number) -> LCNumber:
        return add(self, _coerce(other))

    __radd__ = __add__

    def __sub__(self, other: Number) -> LCNumber:
        return sub(self, _coerce(other))

    def __rsub__(self, other: Number) -> LCNumber:
        return sub(_coerce(other), self)

    def __mul__(self, other: Number) -> LCNumber:
        return mul(self, _coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> LCNumber:
        return div(self, _coerce(other))

    def __rtruediv__(self, other: Number) -> LCNumber:
        return div(_coerce(other), self)

    def __pow__(self, q: Union[int, Fraction]) -> LCNumber:
        return lc_pow(self, Fraction(q))

    def __neg__(self) -> LCNumber:
        return neg(self)

    def __pos__(self) -> LCNumber:
        return self

    def __abs__(self) -> LCNumber:
        return lc_abs(self)

    def __lt__(self, other: Number) -> bool:
        return lc_compare(self, _coerce(other)) is Ordering.LESS

    def __le__(self, other: Number) -> bool:
        return lc_compare(self, _coerce(other)) is not Ordering.GREATER

    def __gt__(self, other: Number) -> bool:
        return lc_compare(self, _coerce(other)) is Ordering.GREATER

    def __ge__(self, other: Number) -> bool:
        return lc_compare(self, _coerce(other)) is not Ordering.LESS

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"LCNumber({render(self)!r})"

    @property
    def leading(self) -> tuple[Fraction, float]:
        if not self.terms:
            raise LCError("zero has no leading term")
        return self.terms[0]


def _coerce(x: Number) -> LCNumber:
    if isinstance(x, LCNumber):
        return x
    if isinstance(x, (int, float, Fraction)):
        return from_real(float(x))
    return NotImplemented  # type: ignore[return-value]


ZERO = LCNumber()


def _ctx(ctx: TruncationContext | None) -> TruncationContext:
    return ctx if ctx is not None else getcontext()


def _finish(acc: dict[Fraction, float], ctx: TruncationContext, cutoff: Fraction | None = None) -> LCNumber:
    """Drop exact zeros and truncate a coefficient map into an LCNumber."""
    items = sorted((q, c) for q, c in acc.items() if c != 0.0)
    if not items:
        return ZERO
    limit = items[0][0] + ctx.exponent_window
    if cutoff is not None:
        limit = min(limit, cutoff)
    kept = [(q, c) for q, c in items if q <= limit][: ctx.term_budget]
    return LCNumber(tuple(kept))


def from_real(r: float) -> LCNumber:
    r = float(r)
    if not math.isfinite(r):
        raise ValueError(f"cannot embed non-finite real {r!r}")
    return LCNumber(((Fraction(0), r),)) if r != 0.0 else ZERO


def monomial(coefficient: float, exponent: Union[int, Fraction]) -> LCNumber:
    """``coefficient * eps**exponent``."""
    c = float(coefficient)
    if not math.isfinite(c):
        raise ValueError(f"non-finite coefficient {c!r}")
    return LCNumber(((Fraction(exponent), c),)) if c != 0.0 else ZERO


def epsilon() -> LCNumber:
    """The generator ``eps``: positive, below every positive real."""
    return monomial(1.0, 1)


def add(a: LCNumber, b: LCNumber, ctx: TruncationContext | None = None) -> LCNumber:
    ctx = _ctx(ctx)
    acc: dict[Fraction, float] = dict(a.terms)
    for q, c in b.terms:
        acc[q] = acc.get(q, 0.0) + c
    return _finish(acc, ctx)


def neg(a: LCNumber, ctx: TruncationContext | None = None) -> LCNumber:
    return LCNumber(tuple((q, -c) for q, c in a.terms))


def sub(a: LCNumber, b: LCNumber, ctx: TruncationContext | None = None) -> LCNumber:
    return add(a, neg(b), ctx)


def scale(a: LCNumber, k: float, shift: Union[int, Fraction] = 0) -> LCNumber:
    """``k * eps**shift * a`` exactly (no truncation needed)."""
    k = float(k)
    if k == 0.0 or not a.terms:
        return ZERO
    shift = Fraction(shift)
    return LCNumber(tuple((q + shift, c * k) for q, c in a.terms if c * k != 0.0))


def _mul_cut(a: LCNumber, b: LCNumber, cutoff: Fraction) -> dict[Fraction, float]:
    # Accumulation order (a ascending, then b ascending) is fixed so that a
    # wider window never changes a retained coefficient.
    if all(q.denominator == 1 for q, _ in a.terms) and all(q.denominator == 1 for q, _ in b.terms):
        # same loop on plain ints; Fraction addition dominates otherwise
        cut = math.floor(cutoff)
        iacc: dict[int, float] = {}
        bi = [(int(q), c) for q, c in b.terms]
        for qa, ca in a.terms:
            ia = int(qa)
            for qb, cb in bi:
                q = ia + qb
                if q > cut:
                    break
                iacc[q] = iacc.get(q, 0.0) + ca * cb
        return {Fraction(q): c for q, c in iacc.items()}
    acc: dict[Fraction, float] = {}
    for qa, ca in a.terms:
        for qb, cb in b.terms:
            q = qa + qb
            if q > cutoff:
                break
            acc[q] = acc.get(q, 0.0) + ca * cb
    return acc


def mul(a: LCNumber, b: LCNumber, ctx: TruncationContext | None = None) -> LCNumber:
    ctx = _ctx(ctx)
    if not a.terms or not b.terms:
        return ZERO
    cutoff = a.terms[0][0] + b.terms[0][0] + ctx.exponent_window
    return _finish(_mul_cut(a, b, cutoff), ctx)


def _split(a: LCNumber) -> tuple[float, Fraction, LCNumber]:
    """Write ``a = c * eps**q * (1 + u)`` and return ``(c, q, u)``."""
    q, c = a.terms[0]
    u = LCNumber(tuple((p - q, d / c) for p, d in a.terms[1:] if d / c != 0.0))
    return c, q, u


def _compose(coeffs: Sequence[float] | Iterable[float], u: LCNumber, cutoff: Fraction,
             ctx: TruncationContext) -> LCNumber:
    """Evaluate ``sum(coeffs[k] * u**k)`` for infinitesimal ``u``, dropping
    exponents above ``cutoff``."""
    acc: dict[Fraction, float] = {}
    power = from_real(1.0)
    for c in coeffs:
        if not power.terms or power.terms[0][0] > cutoff:
            break
        if c != 0.0:
            for q, d in power.terms:
                acc[q] = acc.get(q, 0.0) + c * d
        power = _finish(_mul_cut(power, u, cutoff), ctx, cutoff)
    return _finish(acc, ctx, cutoff)


def _one_plus_power(u: LCNumber, alpha: Fraction, cutoff: Fraction, ctx: TruncationContext) -> LCNumber:
    """``(1 + u)**alpha`` for infinitesimal ``u``, up to exponent ``cutoff``.

    Uses the recurrence that follows from ``(1+u) g' = alpha u' g``:
    ``r b_r = sum_p (alpha p - (r - p)) u_p b_(r-p)``.  Unlike summing powers
    of ``u`` it never forms large intermediate terms that cancel, and for
    ``alpha = -1`` it is plain long division.  Each ``b_r`` depends only on
    smaller exponents, so widening the window leaves retained terms alone.
    """
    if not u.terms:
        return from_real(1.0)
    # scale exponents to integers on the lattice generated by u
    den = math.lcm(*(q.denominator for q, _ in u.terms))
    steps = [(int(q * den), c) for q, c in u.terms]
    top = math.floor(cutoff * den)
    num, dd = alpha.numerator, alpha.denominator
    b: dict[int, float] = {0: 1.0}
    pending = sorted({p for p, _ in steps if p <= top})
    seen = set(pending)
    while pending:
        r = heapq.heappop(pending)
        total = 0.0
        for p, c in steps:
            if p > r:
                break
            prev = b.get(r - p)
            if prev:
                total += (num * p - dd * (r - p)) / (dd * r) * c * prev
        b[r] = total
        if len(b) > _MAX_SERIES_ORDER:
            raise LCError("series lattice too large; reduce the exponent window")
        for p, _ in steps:
            nxt = r + p
            if nxt > top:
                break
            if nxt not in seen:
                seen.add(nxt)
                heapq.heappush(pending, nxt)
    return _finish({Fraction(r, den): c for r, c in b.items()}, ctx, cutoff)


def inverse(a: LCNumber, ctx: TruncationContext | None = None) -> LCNumber:
    """Multiplicative inverse: ``1/(c eps^q (1+u)) = eps^-q (1+u)^-1 / c``."""
    ctx = _ctx(ctx)
    if not a.terms:
        raise LCZeroDivisionError("inverse of zero")
    c, q, u = _split(a)
    return scale(_one_plus_power(u, Fraction(-1), ctx.exponent_window, ctx), 1.0 / c, -q)


def div(a: LCNumber, b: LCNumber, ctx: TruncationContext | None = None) -> LCNumber:
    return mul(a, inverse(b, ctx), ctx)


def lc_pow(a: LCNumber, power: Union[int, Fraction], ctx: TruncationContext | None = None) -> LCNumber:
    """``a ** power`` for a rational ``power``.

    Negative leading coefficients are accepted only when the power's
    denominator is odd (real odd roots).
    """
    ctx = _ctx(ctx)
    power = Fraction(power)
    if not a.terms:
        if power > 0:
            return ZERO
        if power == 0:
            return from_real(1.0)
        raise LCZeroDivisionError("zero raised to a non-positive power")
    c, q, u = _split(a)
    if power.denominator == 1 and 0 <= power <= 64:
        return _int_pow(a, int(power), ctx)
    if c < 0 and power.denominator % 2 == 0:
        raise LCDomainError(f"even root of a number with negative leading coefficient ({c!r})")
    lead = math.copysign(abs(c) ** float(power), c if power.numerator % 2 else 1.0)
    return scale(_one_plus_power(u, power, ctx.exponent_window, ctx), lead, q * power)


def _int_pow(a: LCNumber, n: int, ctx: TruncationContext) -> LCNumber:
    result = from_real(1.0)
    base = a
    while n:
        if n & 1:
            result = mul(result, base, ctx)
        n >>= 1
        if n:
            base = mul(base, base, ctx)
    return result


def lc_sqrt(a: LCNumber, ctx: TruncationContext | None = None) -> LCNumber:
    if not a.terms:
        raise LCDomainError("square root of zero is not supported; leading term required")
    if a.terms[0][1] <= 0:
        raise LCDomainError("square root of a number with nonpositive leading coefficient")
    return lc_pow(a, Fraction(1, 2), ctx)


# --- analytic functions -----------------------------------------------------

def _taylor_exp(x0: float, n: int) -> list[float]:
    out = [math.exp(x0)]
    for k in range(1, n + 1):
        out.append(out[-1] / k)
    return out


def _taylor_sincos(x0: float, n: int, phase: int) -> list[float]:
    # derivatives of sin cycle through sin, cos, -sin, -cos
    s, c = math.sin(x0), math.cos(x0)
    cycle = (s, c, -s, -c)
    out = []
    fact = 1.0
    for k in range(n + 1):
        if k:
            fact *= k
        out.append(cycle[(k + phase) % 4] / fact)
    return out


def _taylor_log(x0: float, n: int) -> list[float]:
    if x0 <= 0:
        raise LCDomainError(f"log of a number with standard part {x0!r} <= 0")
    out = [math.log(x0)]
    for k in range(1, n + 1):
        out.append((1.0 if k % 2 else -1.0) / (k * x0**k))
    return out


def _taylor_atan(x0: float, n: int) -> list[float]:
    # atan' = 1/(1 + (x0+h)^2); invert the quadratic as a power series in h
    p0, p1, p2 = 1.0 + x0 * x0, 2.0 * x0, 1.0
    g: list[float] = []
    for k in range(n):
        acc = 1.0 if k == 0 else 0.0
        if k >= 1:
            acc -= p1 * g[k - 1]
        if k >= 2:
            acc -= p2 * g[k - 2]
        g.append(acc / p0)
    return [math.atan(x0)] + [g[k - 1] / k for k in range(1, n + 1)]


def _taylor_tan(x0: float, n: int) -> list[float]:
    s = _taylor_sincos(x0, n, 0)
    c = _taylor_sincos(x0, n, 1)
    if c[0] == 0.0:
        raise LCDomainError("tan at a pole")
    t: list[float] = []
    for k in range(n + 1):
        acc = s[k] - sum(c[j] * t[k - j] for j in range(1, k + 1))
        t.append(acc / c[0])
    return t


_TAYLOR = {
    "exp": _taylor_exp,
    "sin": lambda x0, n: _taylor_sincos(x0, n, 0),
    "cos": lambda x0, n: _taylor_sincos(x0, n, 1),
    "tan": _taylor_tan,
    "log": _taylor_log,
    "atan": _taylor_atan,
}

ANALYTIC_FUNCTIONS = frozenset(_TAYLOR)


def taylor_real(name: str, x0: float, n: int) -> list[float]:
    """Taylor coefficients ``f^(k)(x0)/k!`` for ``k = 0..n``."""
    try:
        gen = _TAYLOR[name]
    except KeyError:
        raise ValueError(f"unsupported analytic function {name!r}") from None
    return gen(float(x0), n)


def lift_analytic(name: str, a: LCNumber, ctx: TruncationContext | None = None) -> LCNumber:
    """Extend ``name`` (one of :data:`ANALYTIC_FUNCTIONS`) to finite LC numbers.

    Expands ``f`` around ``st(a)`` and substitutes the infinitesimal part.
    """
    ctx = _ctx(ctx)
    x0 = standard_part(a)
    h = sub(a, from_real(x0), ctx)
    if not h.terms:
        coeffs = taylor_real(name, x0, 0)
        return from_real(coeffs[0])
    step = h.terms[0][0]
    # the result's leading exponent is k0*step where k0 is the first nonzero
    # Taylor coefficient; the window is measured from there
    n = 8
    while True:
        coeffs = taylor_real(name, x0, n)
        k0 = next((k for k, c in enumerate(coeffs) if c != 0.0), None)
        if k0 is None:
            if n >= _MAX_SERIES_ORDER:
                return ZERO
            n *= 2
            continue
        cutoff = k0 * step + ctx.exponent_window
        needed = min(math.floor(cutoff / step), _MAX_SERIES_ORDER)
        if needed <= n:
            break
        n = needed
    return _compose(coeffs[: needed + 1], h, cutoff, ctx)


# --- order and predicates ---------------------------------------------------

def lc_compare(a: LCNumber, b: LCNumber, ctx: TruncationContext | None = None) -> Ordering:
    d = sub(a, b, ctx)
    if not d.terms:
        return Ordering.EQUAL
    return Ordering.GREATER if d.terms[0][1] > 0 else Ordering.LESS


def lc_abs(a: LCNumber) -> LCNumber:
    if a.terms and a.terms[0][1] < 0:
        return neg(a)
    return a


def leading_exponent(a: LCNumber) -> Fraction | None:
    return a.terms[0][0] if a.terms else None


def coefficient(a: LCNumber, exponent: Union[int, Fraction]) -> float:
    q = Fraction(exponent)
    for p, c in a.terms:
        if p == q:
            return c
        if p > q:
            break
    return 0.0


def is_zero(a: LCNumber) -> bool:
    return not a.terms


def is_infinitesimal(a: LCNumber) -> bool:
    return not a.terms or a.terms[0][0] > 0


def is_finite(a: LCNumber) -> bool:
    return not a.terms or a.terms[0][0] >= 0


def is_infinite(a: LCNumber) -> bool:
    return not is_finite(a)


def infinitely_close(a: LCNumber, b: LCNumber, ctx: TruncationContext | None = None) -> bool:
    return is_infinitesimal(sub(a, b, ctx))


def standard_part(a: LCNumber) -> float:
    """The real number infinitely close to ``a``."""
    if is_infinite(a):
        raise InfiniteNumberError(f"{render(a)} is infinite and has no standard part")
    return coefficient(a, 0)


# --- formal calculus in eps -------------------------------------------------

def d_deps(a: LCNumber) -> LCNumber:
    """Term-by-term derivative with respect to ``eps``.

    Meaningful when ``a`` is a Taylor expansion ``f(t + eps)``: the result is
    then the expansion of ``f'(t + eps)``.
    """
    return LCNumber(tuple((q - 1, c * float(q)) for q, c in a.terms if q != 0))


def integrate_eps(a: LCNumber) -> LCNumber:
    """Antiderivative in ``eps`` vanishing at ``eps = 0``."""
    if any(q == -1 for q, _ in a.terms):
        raise LCDomainError("eps^-1 has no power antiderivative")
    return LCNumber(tuple((q + 1, c / float(q + 1)) for q, c in a.terms))


# --- text form --------------------------------------------------------------

def _render_exponent(q: Fraction) -> str:
    if q.denominator == 1 and q >= 0:
        return str(q.numerator)
    return f"({q})"


def render(a: LCNumber) -> str:
    """Render as ``"c0 + c1*eps^q1 + ..."``; :func:`parse_lc` reads it back."""
    if not a.terms:
        return "0"
    parts: list[str] = []
    for i, (q, c) in enumerate(a.terms):
        mag = repr(abs(c)) if i else repr(c)
        if q == 0:
            body = mag
        elif q == 1:
            body = f"{mag}*eps"
        else:
            body = f"{mag}*eps^{_render_exponent(q)}"
        if i == 0:
            parts.append(body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


def parse_lc(text: str, ctx: TruncationContext | None = None) -> LCNumber:
    """Read a Levi-Civita literal such as ``"1 - 2*eps^(1/2)"``.

    Any expression in the single variable ``eps`` is accepted.
    """
    from . import expr

    tree = expr.parse(text, ["eps"])
    return expr.eval_lc(tree, {"eps": epsilon()}, ctx)
