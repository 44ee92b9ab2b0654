"""Exact arithmetic in Q(q): reduced fractions of integer Laurent polynomials.

Exponents are stored in half-units: the internal variable u satisfies
u^2 = q, so a stored exponent t denotes q^(t/2).  Argument shifts like
q^(3/2) or q^(5/2) then stay integral and no square-root symbol is needed.

A value is kept canonical at all times: numerator and denominator share no
polynomial factor, their integer contents are coprime, the denominator has
a nonzero constant term (stray powers of u are pushed into the numerator,
which may be Laurent) and a positive leading coefficient.  Equality of
values is therefore structural equality of the two coefficient dicts.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd as _int_gcd


# ---------------------------------------------------------------------------
# Laurent dicts: exponent -> nonzero integer coefficient.


def _strip(d):
    return {e: c for e, c in d.items() if c}


def _ladd(a, b):
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) + c
        if v:
            out[e] = v
        elif e in out:
            del out[e]
    return out


def _lmul(a, b):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            v = out.get(e, 0) + ca * cb
            if v:
                out[e] = v
            elif e in out:
                del out[e]
    return out


def _lshift(a, t):
    if not t:
        return dict(a)
    return {e + t: c for e, c in a.items()}


def _lcontent(a):
    g = 0
    for c in a.values():
        g = _int_gcd(g, c if c > 0 else -c)
        if g == 1:
            return 1
    return g or 1


# Dense little-endian lists for gcd work.


def _dense(d):
    lo = min(d)
    out = [0] * (max(d) - lo + 1)
    for e, c in d.items():
        out[e - lo] = c
    return out, lo


def _dstrip(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _dcontent(f):
    g = 0
    for c in f:
        g = _int_gcd(g, c if c > 0 else -c)
        if g == 1:
            return 1
    return g or 1


def _dprimitive(f):
    f = _dstrip(list(f))
    if not f:
        return f
    g = _dcontent(f)
    if f[-1] < 0:
        g = -g
    return [c // g for c in f]


def _dpseudo_rem(f, g):
    f = list(f)
    dg = len(g) - 1
    lg = g[-1]
    while f and len(f) - 1 >= dg:
        top = f[-1]
        f = [c * lg for c in f]
        shift = len(f) - 1 - dg
        for i, gc in enumerate(g):
            f[i + shift] -= top * gc
        _dstrip(f)
    return f


def _dgcd(f, g):
    f = _dprimitive(f)
    g = _dprimitive(g)
    if not f:
        return g
    if not g:
        return f
    if len(f) < len(g):
        f, g = g, f
    while g:
        f, g = g, _dprimitive(_dpseudo_rem(f, g))
    return f


def _ddivexact(f, g):
    # f = g*h with h integral; plain long division from the top.
    f = list(f)
    lg = g[-1]
    h = [0] * (len(f) - len(g) + 1)
    for i in range(len(h) - 1, -1, -1):
        c = f[i + len(g) - 1]
        qc = c // lg
        h[i] = qc
        if qc:
            for j, gc in enumerate(g):
                f[i + j] -= qc * gc
    return h


def _divide_dict_by_dense(d, g, glo=0):
    num, lo = _dense(d)
    h = _ddivexact(num, g)
    return {e + lo - glo: c for e, c in enumerate(h) if c}


def _normalize(num, den):
    num = _strip(num)
    den = _strip(den)
    if not den:
        raise ZeroDivisionError("zero denominator in exact scalar")
    if not num:
        return {}, {0: 1}
    dmin = min(den)
    if dmin:
        den = _lshift(den, -dmin)
        num = _lshift(num, -dmin)
    if len(den) == 1:
        c = den[0]
        g = _int_gcd(_lcontent(num), c if c > 0 else -c)
        if c < 0:
            g = -g
        if g != 1:
            num = {e: v // g for e, v in num.items()}
            c //= g
        return num, {0: c}
    dd, _ = _dense(den)
    nmin = min(num)
    nd, _ = _dense(num)
    g = _dgcd(nd, dd)
    if len(g) > 1:
        nd = _ddivexact(nd, g)
        dd = _ddivexact(dd, g)
        num = {e + nmin: c for e, c in enumerate(nd) if c}
        den = {e: c for e, c in enumerate(dd) if c}
        return _normalize(num, den)
    cn = _lcontent(num)
    cd = _lcontent(den)
    g = _int_gcd(cn, cd)
    if den[max(den)] < 0:
        g = -g
    if g != 1:
        num = {e: v // g for e, v in num.items()}
        den = {e: v // g for e, v in den.items()}
    return num, den


_ONE_DEN = {0: 1}


class QScalar:
    """A reduced rational function of q with integer coefficients."""

    __slots__ = ("num", "den")

    def __init__(self, num=None, den=None):
        num = dict(num) if num else {}
        if den is None:
            self.num = _strip(num)
            self.den = {0: 1}
        else:
            self.num, self.den = _normalize(num, dict(den))

    @classmethod
    def _fast(cls, num, den):
        # Internal: trusted canonical parts, no copies, no reduction.
        self = object.__new__(cls)
        self.num = num
        self.den = den
        return self

    @classmethod
    def from_int(cls, n):
        return cls._fast({0: n} if n else {}, {0: 1})

    @classmethod
    def from_fraction(cls, fr):
        fr = Fraction(fr)
        return cls._fast({0: fr.numerator} if fr.numerator else {}, {0: fr.denominator})

    # -- predicates --------------------------------------------------------

    def is_zero(self):
        return not self.num

    def is_one(self):
        return self.num == {0: 1} and self.den == {0: 1}

    def __bool__(self):
        return bool(self.num)

    def is_laurent(self):
        return self.den == {0: 1}

    # -- ring operations ----------------------------------------------------

    @staticmethod
    def _coerce(x):
        if isinstance(x, QScalar):
            return x
        if isinstance(x, int):
            return QScalar.from_int(x)
        if isinstance(x, Fraction):
            return QScalar.from_fraction(x)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            num = _ladd(self.num, other.num)
            if self.den == _ONE_DEN or self.den == {0: 1}:
                return QScalar._fast(num, {0: 1})
            return QScalar(num, self.den)
        num = _ladd(_lmul(self.num, other.den), _lmul(other.num, self.den))
        return QScalar(num, _lmul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return QScalar._fast({e: -c for e, c in self.num.items()}, dict(self.den))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.num or not other.num:
            return ZERO
        if self.den == {0: 1} and other.den == {0: 1}:
            return QScalar._fast(_lmul(self.num, other.num), {0: 1})
        return QScalar(_lmul(self.num, other.num), _lmul(self.den, other.den))

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("division by zero scalar")
        return QScalar(self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if n == 0:
            return ONE
        base = self if n > 0 else self.inverse()
        out = base
        for _ in range(abs(n) - 1):
            out = out * base
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    __hash__ = None

    # -- misc ---------------------------------------------------------------

    def subs_q_one(self):
        """Formal substitution q -> 1; returns a Fraction."""
        dn = sum(self.den.values())
        if dn == 0:
            raise ZeroDivisionError("denominator vanishes at q = 1")
        return Fraction(sum(self.num.values()), dn)

    def pairs(self):
        """Serialization: ([ [t, c], ... ], [ ... ]) sorted by exponent.

        Exponents count half-powers of q (t stands for q^(t/2)).
        """
        return (
            [[e, self.num[e]] for e in sorted(self.num)],
            [[e, self.den[e]] for e in sorted(self.den)],
        )

    def _fmt_poly(self, d):
        if not d:
            return "0"
        bits = []
        for e in sorted(d, reverse=True):
            c = d[e]
            if e == 0:
                term = str(abs(c))
            else:
                if e % 2 == 0:
                    base = "q" if e == 2 else ("q^%d" % (e // 2) if e > 0 else "q^(%d)" % (e // 2))
                    if e == -2:
                        base = "q^(-1)"
                else:
                    base = "q^(%d/2)" % e
                term = base if abs(c) == 1 else "%d*%s" % (abs(c), base)
            bits.append(("+ " if c > 0 else "- ") + term)
        s = " ".join(bits)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def __repr__(self):
        n = self._fmt_poly(self.num)
        if self.den == {0: 1}:
            return n
        return "(%s)/(%s)" % (n, self._fmt_poly(self.den))


ZERO = QScalar.from_int(0)
ONE = QScalar.from_int(1)


@lru_cache(maxsize=None)
def upow(t):
    """q^(t/2) as a scalar (t in half-units)."""
    if t == 0:
        return ONE
    return QScalar._fast({t: 1}, {0: 1})


Q = upow(2)


@lru_cache(maxsize=None)
def qint(n):
    """The q-integer [n] = (q^n - q^-n)/(q - q^-1) as a Laurent polynomial."""
    if n == 0:
        return ZERO
    if n < 0:
        return -qint(-n)
    return QScalar._fast({t: 1 for t in range(-2 * (n - 1), 2 * n - 1, 4)}, {0: 1})


def heis_bracket(k, l, pairing=2):
    """Boson commutator value [a_k, a_l] = delta_{k+l,0} [p*k][k]/k.

    p is the symmetrized Cartan pairing of the two boson families
    (2 on the diagonal, -1 for adjacent nodes, 0 otherwise).
    """
    if k == 0 or l == 0:
        raise ValueError("boson modes are indexed by nonzero integers")
    if k + l != 0:
        return ZERO
    return qint(pairing * k) * qint(k) / QScalar.from_int(k)
