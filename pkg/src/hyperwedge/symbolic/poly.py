"""Sparse multivariate polynomials and rational functions over the rationals.

Variables are ``u, v, q, b, c, e``: the hodograph velocity, the limit
speed, two transcendental markers standing for ``B'`` and ``B''``, and the
incoming mass flux.  ``reduce`` rewrites ``v^2 -> u (q - u)``, the normal
form modulo the limit shock-polar circle; the quotient ring is an integral
domain, so rational expressions are compared by cross-multiplication.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb

from ..errors import ZeroDenominator

VARS = ("u", "v", "q", "b", "c", "e")
NV = len(VARS)
_IDX = {n: i for i, n in enumerate(VARS)}
_ZERO_EXP = (0,) * NV


def _coerce(x):
    if isinstance(x, PolyQ):
        return x
    if isinstance(x, (int, Fraction)):
        return PolyQ({_ZERO_EXP: Fraction(x)} if x else {})
    raise TypeError(f"cannot use {type(x).__name__} as a polynomial")


class PolyQ:
    """Polynomial as a map ``exponent tuple -> Fraction`` (zero terms dropped)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: Fraction(c) for k, c in (terms or {}).items() if c != 0}

    # construction
    @classmethod
    def var(cls, name: str) -> "PolyQ":
        e = [0] * NV
        e[_IDX[name]] = 1
        return cls({tuple(e): Fraction(1)})

    @classmethod
    def const(cls, c) -> "PolyQ":
        return _coerce(Fraction(c))

    # arithmetic
    def __add__(self, other):
        if isinstance(other, RatQ):
            return NotImplemented
        other = _coerce(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return PolyQ._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return PolyQ._raw({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, RatQ):
            return NotImplemented
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, RatQ):
            return NotImplemented
        other = _coerce(other)
        out = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                s = out.get(k, 0) + c1 * c2
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return PolyQ._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out, base = PolyQ.const(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, other):
        if isinstance(other, RatQ):
            return RatQ(self) / other
        return RatQ(self, _coerce(other))

    def __rtruediv__(self, other):
        return RatQ(_coerce(other), self)

    @classmethod
    def _raw(cls, terms):
        p = cls.__new__(cls)
        p.terms = terms
        return p

    # structure
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        try:
            return (self - _coerce(other)).is_zero()
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def degree(self, name: str) -> int:
        i = _IDX[name]
        return max((k[i] for k in self.terms), default=0)

    def diff(self, name: str) -> "PolyQ":
        i = _IDX[name]
        out = {}
        for k, c in self.terms.items():
            if k[i]:
                kk = list(k)
                kk[i] -= 1
                out[tuple(kk)] = c * k[i]
        return PolyQ._raw(out)

    def subs_zero(self, name: str) -> "PolyQ":
        i = _IDX[name]
        return PolyQ._raw({k: c for k, c in self.terms.items() if k[i] == 0})

    def truncate(self, name: str, degree: int) -> "PolyQ":
        """Drop terms of degree above ``degree`` in ``name``."""
        i = _IDX[name]
        return PolyQ._raw({k: c for k, c in self.terms.items() if k[i] <= degree})

    def evaluate(self, **values):
        """Numerical value (floats or numpy arrays) at the given variable values."""
        total = 0.0
        vals = [values.get(n, 0.0) for n in VARS]
        for k, c in self.terms.items():
            t = float(c)
            for x, p in zip(vals, k):
                if p:
                    t = t * x ** p
            total = total + t
        return total

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for k, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(f"{n}^{p}" if p > 1 else n for n, p in zip(VARS, k) if p)
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


_CIRCLE_CACHE = {}


def _circle_power(m: int) -> dict:
    """Terms of ``(u q - u^2)^m`` as ``{(u_exp, q_exp): coeff}``."""
    if m not in _CIRCLE_CACHE:
        _CIRCLE_CACHE[m] = {(m + j, m - j): Fraction((-1) ** j * comb(m, j)) for j in range(m + 1)}
    return _CIRCLE_CACHE[m]


def reduce(p: PolyQ) -> PolyQ:
    """Normal form with ``v``-degree at most one (rule ``v^2 -> u (q - u)``)."""
    iu, iv, iq = _IDX["u"], _IDX["v"], _IDX["q"]
    out = {}
    for k, c in p.terms.items():
        n = k[iv]
        if n < 2:
            out[k] = out.get(k, 0) + c
            continue
        for (du, dq), cc in _circle_power(n // 2).items():
            kk = list(k)
            kk[iv] = n % 2
            kk[iu] += du
            kk[iq] += dq
            kk = tuple(kk)
            out[kk] = out.get(kk, 0) + c * cc
    return PolyQ({k: c for k, c in out.items() if c})


class RatQ:
    """Quotient ``num / den`` of polynomials (no automatic cancellation)."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        self.num = _coerce(num)
        self.den = _coerce(den)
        if self.den.is_zero():
            raise ZeroDenominator("zero denominator")

    @staticmethod
    def _of(x):
        return x if isinstance(x, RatQ) else RatQ(_coerce(x))

    def __add__(self, other):
        o = RatQ._of(other)
        if self.den == o.den:
            return RatQ(self.num + o.num, self.den)
        return RatQ(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatQ(-self.num, self.den)

    def __sub__(self, other):
        return self + (-RatQ._of(other))

    def __rsub__(self, other):
        return RatQ._of(other) - self

    def __mul__(self, other):
        o = RatQ._of(other)
        return RatQ(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = RatQ._of(other)
        if o.num.is_zero():
            raise ZeroDenominator("division by zero rational")
        return RatQ(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return RatQ._of(other) / self

    def __pow__(self, n: int):
        return RatQ(self.num ** n, self.den ** n)

    def diff(self, name: str) -> "RatQ":
        n, d = self.num, self.den
        dn, dd = n.diff(name), d.diff(name)
        if dd.is_zero():
            return RatQ(dn, d)
        return RatQ(dn * d - n * dd, d * d)

    def subs_zero(self, name: str) -> "RatQ":
        return RatQ(self.num.subs_zero(name), self.den.subs_zero(name))

    def truncate(self, name: str, degree: int) -> "RatQ":
        """Truncate numerator and denominator in ``name`` (a first-order jet when
        ``degree`` is 1 and the denominator is free of ``name``)."""
        if self.den.degree(name):
            raise ValueError(f"denominator depends on {name}")
        return RatQ(self.num.truncate(name, degree), self.den)

    def evaluate(self, **values):
        return self.num.evaluate(**values) / self.den.evaluate(**values)

    def __repr__(self):
        return f"({self.num}) / ({self.den})"


def rat_eq(a, b) -> bool:
    """Equality on the limit circle: ``reduce(a.num b.den - b.num a.den) == 0``.

    Raises
    ------
    ZeroDenominator
        If a denominator vanishes identically on the circle.
    """
    a, b = RatQ._of(a), RatQ._of(b)
    for r in (a, b):
        if reduce(r.den).is_zero():
            raise ZeroDenominator("denominator vanishes on the circle")
    return reduce(a.num * b.den - b.num * a.den).is_zero()


def proportionality(lhs, rhs, **point):
    """Numerical ratio ``a / b`` at a point (diagnostic for failed identities)."""
    return RatQ._of(lhs).evaluate(**point) / RatQ._of(rhs).evaluate(**point)
