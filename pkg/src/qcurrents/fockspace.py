"""Level-1 bosonic Fock modules with lattice charges.

A basis vector is a boson creation monomial prod a_i(-k)^m times a weight
lattice point e^(L_s + sum m_i alpha_i): `bosons` is a sorted tuple of
(node, k, mult) with k > 0, `charge` the root-lattice coordinates and
`sector` s the fundamental-weight shift (s = 0 is the vacuum sector).

States are finite linear combinations with exact scalar coefficients; the
same container carries tensor-product states keyed by tuples of basis
vectors, which is how level-k computations store their vectors.
"""

from __future__ import annotations

from typing import NamedTuple

from . import scalars
from .scalars import ONE, QScalar, ZERO, upow


class FockBasisVector(NamedTuple):
    bosons: tuple  # ((node, k, mult), ...) sorted, k > 0, mult > 0
    charge: tuple  # root lattice coordinates, one per node
    sector: int  # fundamental weight index, 0 = vacuum

    def boson_degree(self):
        return sum(k * m for _, k, m in self.bosons)

    def text(self):
        bits = []
        for node, k, m in self.bosons:
            name = "a[%d]" % (-k,) if len(self.charge) == 1 else "a%d[%d]" % (node, -k)
            bits.append(name + ("^%d" % m if m > 1 else ""))
        lat = "L%d" % self.sector
        for i, m in enumerate(self.charge):
            if m:
                nm = "alpha" if len(self.charge) == 1 else "a%d" % (i + 1)
                lat += " %+d*%s" % (m, nm)
        return "%s | %s >" % (" ".join(bits) or "1", lat)


def vacuum(sector=0, rank=1):
    return FockBasisVector((), (0,) * rank, sector)


def bosons_from_dict(d):
    return tuple(sorted((node, k, m) for (node, k), m in d.items() if m))


def with_bosons(bv, d):
    return bv._replace(bosons=bosons_from_dict(d))


def boson_dict(bv):
    return {(node, k): m for node, k, m in bv.bosons}


class State:
    """Finite linear combination of hashable keys with QScalar coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = terms if terms is not None else {}

    @classmethod
    def of(cls, key, coeff=ONE):
        return cls({key: coeff}) if not coeff.is_zero() else cls()

    def is_zero(self):
        return not self.terms

    def copy(self):
        return State(dict(self.terms))

    def iadd(self, key, coeff):
        cur = self.terms.get(key)
        if cur is None:
            if coeff.num:
                self.terms[key] = coeff
        else:
            s = cur + coeff
            if s.num:
                self.terms[key] = s
            else:
                del self.terms[key]

    def __add__(self, other):
        out = self.copy()
        for k, c in other.terms.items():
            out.iadd(k, c)
        return out

    def __sub__(self, other):
        out = self.copy()
        for k, c in other.terms.items():
            out.iadd(k, -c)
        return out

    def __neg__(self):
        return State({k: -c for k, c in self.terms.items()})

    def __mul__(self, q):
        if not q.num:
            return State()
        return State({k: c * q for k, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return self.terms == other.terms

    __hash__ = None

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for k in sorted(self.terms):
            label = k.text() if hasattr(k, "text") else repr(k)
            bits.append("(%r) %s" % (self.terms[k], label))
        return " + ".join(bits)


def tensor(a, b):
    """Tensor two states; keys concatenate into tuples of basis vectors."""
    out = State()
    for k1, c1 in a.terms.items():
        t1 = k1 if isinstance(k1, tuple) and not isinstance(k1, FockBasisVector) else (k1,)
        for k2, c2 in b.terms.items():
            t2 = k2 if isinstance(k2, tuple) and not isinstance(k2, FockBasisVector) else (k2,)
            out.iadd(t1 + t2, c1 * c2)
    return out


class Algebra:
    """Type A_{n-1} root data plus per-instance caches."""

    def __init__(self, n=2):
        if n < 2:
            raise ValueError("rank data needs n >= 2")
        self.n = n
        self.rank = n - 1
        self._bracket = {}
        self.mode_cache = {}

    def aij(self, i, j):
        if i == j:
            return 2
        if abs(i - j) == 1:
            return -1
        return 0

    def pairing(self, node, bv):
        """(alpha_node, weight of bv) = 2 m_node - m_{node +- 1} + delta_{node,sector}."""
        p = 0
        for j, m in enumerate(bv.charge):
            if m:
                p += self.aij(node, j + 1) * m
        if bv.sector == node:
            p += 1
        return p

    def cocycle(self, node, charge):
        """Sign of e^(+-alpha_node) acting on the lattice part.

        Bimultiplicative two-cocycle: eps(alpha_i, alpha_j) = 1 for i <= j,
        (-1)^(a_ij) for i > j; fundamental-weight shifts carry sign 1.
        """
        if node >= 2 and charge[node - 2] % 2:
            return -1
        return 1

    def bracket(self, i, j, k):
        """[a_i(k), a_j(-k)] for k > 0."""
        key = (i, j, k)
        got = self._bracket.get(key)
        if got is None:
            got = scalars.heis_bracket(k, -k, pairing=self.aij(i, j))
            self._bracket[key] = got
        return got

    def __repr__(self):
        return "Algebra(sl%d)" % self.n


def apply_boson(alg, k, state, node=1):
    """Act with a_node(k): creation for k < 0, derivation for k > 0."""
    if k == 0:
        raise ValueError("boson modes are indexed by nonzero integers")
    out = State()
    if k < 0:
        kk = -k
        for bv, c in state.terms.items():
            d = boson_dict(bv)
            d[(node, kk)] = d.get((node, kk), 0) + 1
            out.iadd(with_bosons(bv, d), c)
        return out
    for bv, c in state.terms.items():
        for bn, bk, m in bv.bosons:
            if bk != k:
                continue
            br = alg.bracket(node, bn, k)
            if br.is_zero():
                continue
            d = boson_dict(bv)
            if m == 1:
                del d[(bn, k)]
            else:
                d[(bn, k)] = m - 1
            out.iadd(with_bosons(bv, d), c * br * QScalar.from_int(m))
    return out


def apply_lattice(alg, op, state, node=1, power=0):
    """Lattice operators: op is "e+", "e-" or "qd" (q^(power/2 * d_alpha))."""
    out = State()
    if op in ("e+", "e-"):
        sign = 1 if op == "e+" else -1
        for bv, c in state.terms.items():
            eps = alg.cocycle(node, bv.charge)
            ch = list(bv.charge)
            ch[node - 1] += sign
            nbv = bv._replace(charge=tuple(ch))
            out.iadd(nbv, c if eps == 1 else -c)
        return out
    if op == "qd":
        for bv, c in state.terms.items():
            out.iadd(bv, c * upow(power * alg.pairing(node, bv)))
        return out
    raise ValueError("unknown lattice operator %r" % op)


def marker_exponents(alg, node, sign, state, offset=1):
    """z-exponents contributed by z^(sign*d_alpha + offset) per basis vector."""
    return [(bv, sign * alg.pairing(node, bv) + offset, c) for bv, c in state.terms.items()]


def dual_coefficient(target, state):
    """Coefficient of a basis vector against the monomial dual basis."""
    for bv in state.terms:
        if bv.sector != target.sector:
            raise ValueError("sector mismatch between state and target")
    return state.terms.get(target, ZERO)


def boson_monomials(rank, max_deg):
    """All boson dictionaries with total degree <= max_deg, sorted."""
    slots = [(node, k) for node in range(1, rank + 1) for k in range(1, max_deg + 1)]

    def rec(idx, budget):
        if idx == len(slots):
            yield ()
            return
        node, k = slots[idx]
        for rest in rec(idx + 1, budget):
            yield rest
        for m in range(1, budget // k + 1):
            for rest in rec(idx + 1, budget - m * k):
                yield ((node, k, m),) + rest

    out = [tuple(sorted(b)) for b in rec(0, max_deg)]
    out.sort(key=lambda b: (sum(k * m for _, k, m in b), b))
    return out


def enumerate_basis(alg, max_deg, max_charge, sector):
    """All basis vectors with boson degree <= max_deg and |charge_i| <= max_charge."""
    charges = [()]
    for _ in range(alg.rank):
        charges = [c + (m,) for c in charges for m in range(-max_charge, max_charge + 1)]
    out = []
    for bos in boson_monomials(alg.rank, max_deg):
        for ch in charges:
            out.append(FockBasisVector(bos, ch, sector))
    return out
