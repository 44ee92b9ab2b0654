"""Laurent polynomials in several spectral variables and factored rationals.

A MultiLaurent maps integer exponent tuples (one slot per variable) to
coefficient values.  Coefficients are usually QScalar but anything with
is_zero / + / * QScalar works, which lets correlation numerators carry
whole module vectors instead of single matrix entries.

A FactoredRational is  coeff * z^mono * num * prod (1 - u^t z_j/z_i)^e
with the binomial factors kept unexpanded: zero/pole statements about
correlation functions are statements about this factor list.
"""

from __future__ import annotations

from math import comb

from .scalars import ONE, QScalar, ZERO, upow


class PoleHit(Exception):
    """A substitution sent a denominator factor to zero."""


class MultiLaurent:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        self.terms = terms if terms is not None else {}

    @classmethod
    def unit(cls, nvars, value=ONE):
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def monomial(cls, nvars, exps, value=ONE):
        return cls(nvars, {tuple(exps): value})

    def is_zero(self):
        return all(_zeroish(v) for v in self.terms.values())

    def copy(self):
        return MultiLaurent(self.nvars, dict(self.terms))

    def iadd_term(self, exps, value):
        cur = self.terms.get(exps)
        if cur is None:
            if not _zeroish(value):
                self.terms[exps] = value
        else:
            s = cur + value
            if _zeroish(s):
                del self.terms[exps]
            else:
                self.terms[exps] = s

    def add(self, other):
        out = self.copy()
        for e, v in other.terms.items():
            out.iadd_term(e, v)
        return out

    def scale(self, q):
        if isinstance(q, QScalar) and q.is_zero():
            return MultiLaurent(self.nvars)
        return MultiLaurent(self.nvars, {e: v * q for e, v in self.terms.items()})

    def shift(self, exps, q=None):
        exps = tuple(exps)
        out = {}
        for e, v in self.terms.items():
            ne = tuple(a + b for a, b in zip(e, exps))
            out[ne] = v * q if q is not None else v
        return MultiLaurent(self.nvars, out)

    def mul(self, other, combine=None):
        if combine is None:
            combine = lambda a, b: a * b
        out = MultiLaurent(self.nvars)
        for e1, v1 in self.terms.items():
            for e2, v2 in other.terms.items():
                ne = tuple(a + b for a, b in zip(e1, e2))
                out.iadd_term(ne, combine(v1, v2))
        return out

    def specialize(self, subs):
        """Apply z_i := q^(t_i/2) z_{root(i)} given a resolved map i -> (root, t)."""
        out = MultiLaurent(self.nvars)
        for e, v in self.terms.items():
            ne = [0] * self.nvars
            t = 0
            for i, ei in enumerate(e):
                if not ei:
                    continue
                root, ti = subs.get(i, (i, 0))
                ne[root] += ei
                t += ti * ei
            out.iadd_term(tuple(ne), v * upow(t) if t else v)
        return out

    def var_range(self, i):
        lo = hi = None
        for e in self.terms:
            if lo is None or e[i] < lo:
                lo = e[i]
            if hi is None or e[i] > hi:
                hi = e[i]
        return lo, hi

    def __eq__(self, other):
        return self.nvars == other.nvars and _clean(self.terms) == _clean(other.terms)

    __hash__ = None

    def __repr__(self):
        if not self.terms:
            return "ML<0>"
        bits = []
        for e in sorted(self.terms):
            mono = " ".join(
                "z%d^%d" % (i + 1, x) for i, x in enumerate(e) if x
            ) or "1"
            bits.append("(%r)*%s" % (self.terms[e], mono))
        return "ML<" + " + ".join(bits) + ">"


def _zeroish(v):
    return v.is_zero() if hasattr(v, "is_zero") else not v


def _clean(terms):
    return {e: v for e, v in terms.items() if not _zeroish(v)}


def resolve_chain(chain, nvars):
    """Turn [(i, j, t), ...] meaning z_i := q^(t/2) z_j into a root map.

    Returns {var: (root, taccum)}.  Rejects cyclic chains.
    """
    step = {}
    for i, j, t in chain:
        if i in step:
            raise ValueError("variable z%d substituted twice" % (i + 1))
        step[i] = (j, t)
    resolved = {}

    def walk(i, seen):
        if i in resolved:
            return resolved[i]
        if i not in step:
            return (i, 0)
        if i in seen:
            raise ValueError("cyclic substitution chain")
        j, t = step[i]
        root, tj = walk(j, seen | {i})
        resolved[i] = (root, t + tj)
        return resolved[i]

    for i in range(nvars):
        walk(i, frozenset())
    return {i: resolved[i] for i in resolved}


def delta_pair(ml, shift, var=0):
    """Pair a one-variable Laurent polynomial with delta(q^(shift/2) z).

    Sums the coefficients weighted by q^(shift*k/2) at exponent k.
    """
    out = ZERO
    for e, v in ml.terms.items():
        out = out + v * upow(shift * e[var])
    return out


class FactoredRational:
    __slots__ = ("nvars", "coeff", "mono", "num", "factors")

    def __init__(self, nvars, coeff=ONE, mono=None, num=None, factors=None):
        self.nvars = nvars
        self.coeff = coeff
        self.mono = tuple(mono) if mono is not None else (0,) * nvars
        self.num = num if num is not None else MultiLaurent.unit(nvars)
        self.factors = dict(factors) if factors else {}

    @classmethod
    def unit(cls, nvars):
        return cls(nvars)

    @classmethod
    def from_ml(cls, ml):
        return cls(ml.nvars, num=ml)

    def is_zero(self):
        return self.coeff.is_zero() or self.num.is_zero()

    def copy(self):
        return FactoredRational(self.nvars, self.coeff, self.mono, self.num.copy(), self.factors)

    def times_factor(self, key, e=1):
        out = self.copy()
        ne = out.factors.get(key, 0) + e
        if ne:
            out.factors[key] = ne
        else:
            out.factors.pop(key, None)
        return out

    def scale(self, q):
        out = self.copy()
        out.coeff = out.coeff * q
        return out

    def times_monomial(self, exps, q=None):
        out = self.copy()
        out.mono = tuple(a + b for a, b in zip(out.mono, exps))
        if q is not None:
            out.coeff = out.coeff * q
        return out

    def mul(self, other, combine=None):
        """Product; numerators are combined with `combine` (default scalar *)."""
        factors = dict(self.factors)
        for k, e in other.factors.items():
            ne = factors.get(k, 0) + e
            if ne:
                factors[k] = ne
            else:
                del factors[k]
        return FactoredRational(
            self.nvars,
            self.coeff * other.coeff,
            tuple(a + b for a, b in zip(self.mono, other.mono)),
            self.num.mul(other.num, combine),
            factors,
        )

    def denominator_keys(self):
        return sorted(k for k, e in self.factors.items() if e < 0)

    def reciprocal(self):
        """Inverse of a purely factored value (unit numerator required)."""
        if self.num.terms != {(0,) * self.nvars: ONE}:
            raise ValueError("reciprocal needs a unit numerator")
        return FactoredRational(
            self.nvars,
            self.coeff.inverse(),
            tuple(-m for m in self.mono),
            factors={k: -e for k, e in self.factors.items()},
        )

    # -- numerator/denominator cancellation ---------------------------------

    def normalized(self):
        """Cancel denominator binomials that divide the numerator."""
        out = self.copy()
        changed = True
        while changed:
            changed = False
            for key in list(out.factors):
                while out.factors.get(key, 0) < 0:
                    ok, quot = factor_divides(out.num, key)
                    if not ok:
                        break
                    out.num = quot
                    out.factors[key] += 1
                    if not out.factors[key]:
                        del out.factors[key]
                    changed = True
        return out

    # -- expansion -----------------------------------------------------------

    def expand(self, region, window):
        """Exact series coefficients inside the window for a variable ordering.

        region lists variable indices from largest to smallest magnitude;
        window is a list of (lo, hi) exponent bounds, one per variable.
        Every denominator factor must involve two distinct ordered variables.
        """
        pos = {v: p for p, v in enumerate(region)}
        if len(pos) != self.nvars:
            raise ValueError("region must order every variable")
        ml = self.num.shift(self.mono, self.coeff if not self.coeff.is_one() else None)
        aligned = []
        for (i, j, t), e in sorted(self.factors.items()):
            if pos[i] > pos[j]:
                if e > 0:
                    aligned.append((i, j, t, e))
                    continue
                # reorient: (1 - u^t zj/zi) = (-u^t zj/zi) (1 - u^-t zi/zj)
                mono = [0] * self.nvars
                mono[j] = e
                mono[i] = -e
                sgn = ONE if e % 2 == 0 else -ONE
                ml = ml.shift(tuple(mono), sgn * upow(t * e))
                aligned.append((j, i, -t, e))
            else:
                aligned.append((i, j, t, e))

        finite = [(i, j, t, e) for (i, j, t, e) in aligned if e > 0]
        series = [(i, j, t, e) for (i, j, t, e) in aligned if e < 0]
        for i, j, t, e in finite:
            fac = MultiLaurent(self.nvars)
            exps = [0] * self.nvars
            for m in range(e + 1):
                exps[i], exps[j] = -m, m
                c = comb(e, m) * (1 if m % 2 == 0 else -1)
                fac.iadd_term(tuple(exps), QScalar.from_int(c) * upow(t * m))
            ml = fac.mul(ml, lambda s, v: v * s)

        # Sound truncation order for the geometric series: every series step
        # moves one exponent unit from an earlier region variable to a later
        # one, and the prefix sums of in-window exponents are bounded below.
        base_hi = [0] * self.nvars
        for v in range(self.nvars):
            _, hi = ml.var_range(v)
            base_hi[v] = hi if hi is not None else 0
        bound = 0
        run = 0
        for v in region[:-1]:
            run += base_hi[v] - window[v][0]
            bound += max(run, 0)
        bound = max(bound, 0)

        for i, j, t, e in series:
            fac = MultiLaurent(self.nvars)
            exps = [0] * self.nvars
            for m in range(bound + 1):
                exps[i], exps[j] = -m, m
                c = comb(-e - 1 + m, m)
                fac.iadd_term(tuple(exps), QScalar.from_int(c) * upow(t * m))
            ml = fac.mul(ml, lambda s, v: v * s)

        out = MultiLaurent(self.nvars)
        for exps, v in ml.terms.items():
            if all(window[k][0] <= exps[k] <= window[k][1] for k in range(self.nvars)):
                out.iadd_term(exps, v)
        return out

    # -- specialization ------------------------------------------------------

    def specialize_to_ml(self, chain):
        """Substitute a chain z_i := q^(t/2) z_j; returns a MultiLaurent.

        Surviving binomial factors must become nonzero scalars; a denominator
        factor going to zero raises PoleHit, a numerator factor going to zero
        returns the zero polynomial.
        """
        subs = resolve_chain(chain, self.nvars)
        scalar = self.coeff
        mono = [0] * self.nvars
        t_extra = 0
        for i, ei in enumerate(self.mono):
            if not ei:
                continue
            root, ti = subs.get(i, (i, 0))
            mono[root] += ei
            t_extra += ti * ei
        if t_extra:
            scalar = scalar * upow(t_extra)
        leftover = {}
        for (i, j, t), e in self.factors.items():
            ri, ti = subs.get(i, (i, 0))
            rj, tj = subs.get(j, (j, 0))
            nt = t + tj - ti
            if ri == rj:
                val = ONE - upow(nt)
                if val.is_zero():
                    if e < 0:
                        raise PoleHit("denominator factor vanishes under the chain")
                    return MultiLaurent(self.nvars)
                scalar = scalar * val ** e
            else:
                key = (ri, rj, nt)
                ne = leftover.get(key, 0) + e
                if ne:
                    leftover[key] = ne
                else:
                    del leftover[key]
        if leftover:
            raise ValueError("chain leaves a genuine rational factor: %r" % leftover)
        out = self.num.specialize(subs)
        return out.shift(tuple(mono), None if scalar.is_one() else scalar)

    def specialize(self, chain):
        """Like specialize_to_ml but keeps unresolved binomials factored."""
        subs = resolve_chain(chain, self.nvars)
        out = FactoredRational(self.nvars, self.coeff)
        mono = [0] * self.nvars
        t_extra = 0
        for i, ei in enumerate(self.mono):
            if not ei:
                continue
            root, ti = subs.get(i, (i, 0))
            mono[root] += ei
            t_extra += ti * ei
        out.mono = tuple(mono)
        if t_extra:
            out.coeff = out.coeff * upow(t_extra)
        for (i, j, t), e in self.factors.items():
            ri, ti = subs.get(i, (i, 0))
            rj, tj = subs.get(j, (j, 0))
            nt = t + tj - ti
            if ri == rj:
                val = ONE - upow(nt)
                if val.is_zero():
                    if e < 0:
                        raise PoleHit("denominator factor vanishes under the chain")
                    return FactoredRational(self.nvars, ZERO)
                out.coeff = out.coeff * val ** e
            else:
                key = (ri, rj, nt)
                ne = out.factors.get(key, 0) + e
                if ne:
                    out.factors[key] = ne
                else:
                    del out.factors[key]
        out.num = self.num.specialize(subs)
        return out

    def to_json(self):
        return {
            "coeff": self.coeff.pairs(),
            "monomial": list(self.mono),
            "numerator": [
                {"exps": list(e), "value": v.pairs() if hasattr(v, "pairs") else repr(v)}
                for e, v in sorted(self.num.terms.items())
            ],
            "factors": [
                {"big": i, "small": j, "upow": t, "exp": e}
                for (i, j, t), e in sorted(self.factors.items())
            ],
        }

    def __repr__(self):
        facs = " ".join(
            "(1-u^%d z%d/z%d)^%d" % (t, j + 1, i + 1, e)
            for (i, j, t), e in sorted(self.factors.items())
        )
        return "FR<%r * z^%r * %r * %s>" % (self.coeff, self.mono, self.num, facs or "1")


def factor_divides(num, key):
    """Does (1 - u^t z_j/z_i) divide the Laurent polynomial?

    Division by ascending powers of z_j; exact quotient returned on success.
    Works for any coefficient type supporting +, *, is_zero.
    """
    i, j, t = key
    if not num.terms:
        return True, MultiLaurent(num.nvars)
    levels = {}
    for e, v in num.terms.items():
        levels.setdefault(e[j], {})[e] = v
    lo = min(levels)
    hi = max(levels)
    u_t = upow(t)
    quot = MultiLaurent(num.nvars)
    carry = {}
    for ej in range(lo, hi + 1):
        cur = dict(levels.get(ej, {}))
        for e, v in carry.items():
            ne = list(e)
            ne[i] -= 1
            ne[j] += 1
            ne = tuple(ne)
            prev = cur.get(ne)
            nv = v * u_t if prev is None else prev + v * u_t
            if _zeroish(nv):
                cur.pop(ne, None)
            else:
                cur[ne] = nv
        if ej == hi:
            if cur:
                return False, None
            break
        for e, v in cur.items():
            quot.iadd_term(e, v)
        carry = cur
    return True, quot


def sum_rationals(frs):
    """Bring a list of factored rationals over one denominator and add.

    Numerator binomials (positive exponents) are expanded into the numerator;
    the result carries only denominator factors, already cancellation-tested.
    """
    frs = [f for f in frs if not f.is_zero()]
    if not frs:
        raise ValueError("empty sum")
    nvars = frs[0].nvars
    denom = {}
    for f in frs:
        for k, e in f.factors.items():
            if e < 0:
                denom[k] = max(denom.get(k, 0), -e)
    total = MultiLaurent(nvars)
    for f in frs:
        ml = f.num.shift(f.mono, None if f.coeff.is_one() else f.coeff)
        for k in set(list(denom) + list(f.factors)):
            e = f.factors.get(k, 0)
            mult = denom.get(k, 0) + e
            if mult < 0:
                raise AssertionError("denominator bookkeeping went negative")
            for _ in range(mult):
                ml = _mul_binomial(ml, k)
        total = total.add(ml)
    out = FactoredRational(nvars, num=total, factors={k: -e for k, e in denom.items()})
    return out.normalized()


def _mul_binomial(ml, key):
    i, j, t = key
    out = ml.copy()
    u_t = upow(t)
    for e, v in ml.terms.items():
        ne = list(e)
        ne[i] -= 1
        ne[j] += 1
        out.iadd_term(tuple(ne), v * (-u_t))
    return out
