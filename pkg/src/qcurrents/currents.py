"""Level-1 current operators with two independent computation routes.

Mode route: apply a current to a graded state and read off exact
coefficients of each power of the formal argument.

Wick route: a product of currents equals the product of all pairwise
contraction scalars times the normal-ordered product, whose matrix
elements are finite Laurent polynomials.  The contraction of two
exponential vertex operators is read off from the commutator spectrum
c_k * k = ann_A(u^k) * cre_B(u^k) * [a_ij k]/[k]  via
exp(sum_k c_k x^k) = prod_t (1 - u^t x)^(-s_t),
so every table entry is derived, never transcribed.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from .fockspace import (
    FockBasisVector,
    State,
    bosons_from_dict,
    dual_coefficient,
)
from .polyring import FactoredRational, MultiLaurent
from .scalars import ONE, QScalar, ZERO, qint, upow

MARKER_OFFSET = 1  # the +1 in z^(sign * d_alpha + 1)

X_SIGN = {"xp": 1, "xm": -1}

# ann/cre entries are the series coefficients times [k], written in
# v = u^k: {t: c} stands for sum_t c * u^(t*k).
_ANN_VPOLY = {"xp": {-1: -1}, "xm": {1: 1}, "phi": {}, "psi": {2: 1, -2: -1}}
_CRE_VPOLY = {"xp": {-1: 1}, "xm": {1: -1}, "phi": {2: -1, -2: 1}, "psi": {}}


class CurrentSpec(NamedTuple):
    kind: str  # xp | xm | phi | psi
    node: int = 1
    shift: int = 0  # evaluated at z * q^(shift/2)
    inv: bool = False  # inverse current; phi/psi only

    def shifted(self, extra):
        return self._replace(shift=self.shift + extra)

    def text(self):
        name = {"xp": "x+", "xm": "x-", "phi": "phi", "psi": "psi"}[self.kind]
        if self.node != 1:
            name += str(self.node)
        if self.inv:
            name += "^-1"
        arg = "z" if not self.shift else "z*q^(%d/2)" % self.shift
        return "%s(%s)" % (name, arg)


@lru_cache(maxsize=None)
def _series_coeff(kind, part, k):
    vp = (_ANN_VPOLY if part == "ann" else _CRE_VPOLY)[kind]
    if not vp:
        return ZERO
    return QScalar({t * k: c for t, c in vp.items()}) / qint(k)


def _exp_ann(alg, kind, inv, node, bosons):
    """exp of the annihilation part on a boson monomial.

    Returns {(bosons', drop): coeff}; drop >= 0 is the lost boson degree,
    entering the argument exponent as -drop.
    """
    out = {(bosons, 0): ONE}
    if not _ANN_VPOLY[kind]:
        return out
    cur = {(bosons, 0): ONE}
    m = 1
    while cur:
        nxt = {}
        for (bos, drop), c in cur.items():
            for bn, bk, mult in bos:
                ck = _series_coeff(kind, "ann", bk)
                if ck.is_zero():
                    continue
                if inv:
                    ck = -ck
                br = alg.bracket(node, bn, bk)
                if br.is_zero():
                    continue
                d = {(n2, k2): m2 for n2, k2, m2 in bos}
                if mult == 1:
                    del d[(bn, bk)]
                else:
                    d[(bn, bk)] = mult - 1
                key = (bosons_from_dict(d), drop + bk)
                add = c * ck * br * QScalar.from_int(mult)
                prev = nxt.get(key)
                v = add if prev is None else prev + add
                if v.num:
                    nxt[key] = v
                elif key in nxt:
                    del nxt[key]
        if not nxt:
            break
        inv_m = QScalar.from_fraction(Fraction(1, m))
        cur = {k2: v * inv_m for k2, v in nxt.items()}
        for k2, v in cur.items():
            prev = out.get(k2)
            s = v if prev is None else prev + v
            if s.num:
                out[k2] = s
            elif k2 in out:
                del out[k2]
        m += 1
    return out


def _exp_cre(alg, kind, inv, node, bosons, budget):
    """exp of the creation part; {(bosons', added): coeff} with added <= budget."""
    out = {(bosons, 0): ONE}
    if budget <= 0 or not _CRE_VPOLY[kind]:
        return out
    cur = {(bosons, 0): ONE}
    m = 1
    while cur:
        nxt = {}
        for (bos, added), c in cur.items():
            for k in range(1, budget - added + 1):
                ck = _series_coeff(kind, "cre", k)
                if ck.is_zero():
                    continue
                if inv:
                    ck = -ck
                d = {(n2, k2): m2 for n2, k2, m2 in bos}
                d[(node, k)] = d.get((node, k), 0) + 1
                key = (bosons_from_dict(d), added + k)
                add = c * ck
                prev = nxt.get(key)
                v = add if prev is None else prev + add
                if v.num:
                    nxt[key] = v
        if not nxt:
            break
        inv_m = QScalar.from_fraction(Fraction(1, m))
        cur = {k2: v * inv_m for k2, v in nxt.items()}
        for k2, v in cur.items():
            prev = out.get(k2)
            s = v if prev is None else prev + v
            if s.num:
                out[k2] = s
            elif k2 in out:
                del out[k2]
        m += 1
    return out


def _mode_map(alg, kind, node, inv, bv, hi, dcap=None):
    """Exact map argument-exponent -> State for the unshifted current on bv.

    Complete for every exponent <= hi (below the intrinsic minimum the
    coefficients vanish).  With dcap set, output components above that
    boson degree are projected away, which is exact per graded component.
    Cached on the algebra instance.
    """
    ckey = (kind, node, inv, bv, dcap)
    got = alg.mode_cache.get(ckey)
    if got is not None and got[0] >= hi:
        return got[1]
    out = {}
    if kind in X_SIGN:
        if inv:
            raise ValueError("inverse flag is only defined for phi/psi")
        sgn = X_SIGN[kind]
        e0 = sgn * alg.pairing(node, bv) + MARKER_OFFSET
        eps = alg.cocycle(node, bv.charge)
        ch = list(bv.charge)
        ch[node - 1] += sgn
        ch = tuple(ch)
        base = ONE if eps == 1 else -ONE
        ann = _exp_ann(alg, kind, inv, node, bv.bosons)
        for (bos1, drop), c1 in ann.items():
            budget = hi - e0 + drop
            if dcap is not None:
                deg1 = sum(k * m for _, k, m in bos1)
                budget = min(budget, dcap - deg1)
            if e0 - drop > hi:
                continue
            cre = _exp_cre(alg, kind, inv, node, bos1, budget)
            for (bos2, add), c2 in cre.items():
                z = e0 - drop + add
                st = out.get(z)
                if st is None:
                    st = out[z] = State()
                st.iadd(FockBasisVector(bos2, ch, bv.sector), c1 * c2 * base)
    elif kind == "phi":
        p = alg.pairing(node, bv)
        eig = upow(2 * p if inv else -2 * p)
        budget = hi
        if dcap is not None:
            budget = min(budget, dcap - bv.boson_degree())
        for (bos2, add), c2 in _exp_cre(alg, kind, inv, node, bv.bosons, budget).items():
            st = out.get(add)
            if st is None:
                st = out[add] = State()
            st.iadd(bv._replace(bosons=bos2), c2 * eig)
    elif kind == "psi":
        p = alg.pairing(node, bv)
        eig = upow(-2 * p if inv else 2 * p)
        for (bos2, drop), c2 in _exp_ann(alg, kind, inv, node, bv.bosons).items():
            st = out.get(-drop)
            if st is None:
                st = out[-drop] = State()
            st.iadd(bv._replace(bosons=bos2), c2 * eig)
    else:
        raise ValueError("unknown current kind %r" % kind)
    out = {z: s for z, s in out.items() if not s.is_zero()}
    alg.mode_cache[ckey] = (hi, out)
    return out


def apply_current(alg, spec, state, window, dcap=None):
    """Coefficients of z^l, lo <= l <= hi, of the current applied to a state."""
    lo, hi = window
    out = {}
    for bv, c in state.terms.items():
        mp = _mode_map(alg, spec.kind, spec.node, spec.inv, bv, hi, dcap)
        for z, st in mp.items():
            if z < lo or z > hi:
                continue
            w = c * upow(spec.shift * z) if spec.shift else c
            tgt = out.get(z)
            if tgt is None:
                tgt = out[z] = State()
            for bv2, c2 in st.terms.items():
                tgt.iadd(bv2, c2 * w)
    return {z: s for z, s in out.items() if not s.is_zero()}


def zexp_lower_bound(alg, spec, state):
    """Lowest argument exponent with a possibly nonzero coefficient."""
    if spec.kind == "phi":
        return 0
    lo = None
    for bv in state.terms:
        if spec.kind == "psi":
            v = -bv.boson_degree()
        else:
            v = X_SIGN[spec.kind] * alg.pairing(spec.node, bv) + MARKER_OFFSET - bv.boson_degree()
        lo = v if lo is None else min(lo, v)
    return 0 if lo is None else lo


def apply_composite(alg, ops, state, window, dcap=None):
    """Product of currents sharing one formal argument, applied right to left.

    Supported shapes (they cover coproduct legs and antipode composites and
    admit exact finite coefficient windows): phi-kind operators form a left
    prefix, at most one x current, and no psi-kind operator left of it.
    Those shapes apply annihilation before creation, so a degree cap is
    again exact per graded component.
    """
    first_non_phi = next((i for i, op in enumerate(ops) if op.kind != "phi"), len(ops))
    if any(op.kind == "phi" for op in ops[first_non_phi:]):
        raise ValueError("phi-kind operators must form a left prefix")
    xs = [i for i, op in enumerate(ops) if op.kind in X_SIGN]
    if len(xs) > 1:
        raise ValueError("at most one x current per composite")
    if xs and any(op.kind == "psi" for op in ops[: xs[0]]):
        raise ValueError("psi-kind operators must not precede the x current")

    lo, hi = window
    partial = {0: state}
    for idx in range(len(ops) - 1, -1, -1):
        op = ops[idx]
        nxt = {}
        for pe, st in partial.items():
            if op.kind == "phi":
                w = (0, hi - pe)
            elif op.kind == "psi":
                w = (zexp_lower_bound(alg, op, st), 0)
            else:
                w = (zexp_lower_bound(alg, op, st), hi - pe)
            if w[0] > w[1]:
                continue
            for z, s2 in apply_current(alg, op, st, w, dcap).items():
                tgt = nxt.get(pe + z)
                if tgt is None:
                    tgt = nxt[pe + z] = State()
                for bv2, c2 in s2.terms.items():
                    tgt.iadd(bv2, c2)
        partial = nxt
    return {z: s for z, s in partial.items() if lo <= z <= hi and not s.is_zero()}


def apply_product(alg, ops, state, boxes):
    """Coefficient map of a product of currents in distinct formal variables.

    ops: [(variable index, CurrentSpec), ...] in written order; the
    rightmost operator acts first.  boxes: per-variable (lo, hi) exponent
    windows.  Returns {exponent tuple: State}, exact inside the box.
    """
    nvars = len(boxes)
    partial = {(0,) * nvars: state}
    for var, op in reversed(ops):
        nxt = {}
        for exps, st in partial.items():
            for z, s2 in apply_current(alg, op, st, boxes[var]).items():
                e = list(exps)
                e[var] += z
                key = tuple(e)
                tgt = nxt.get(key)
                if tgt is None:
                    nxt[key] = s2
                else:
                    merged = tgt + s2
                    if merged.is_zero():
                        del nxt[key]
                    else:
                        nxt[key] = merged
        partial = nxt
    return {e: s for e, s in partial.items() if not s.is_zero()}


# ---------------------------------------------------------------------------
# Contractions.


def _ratio_vpoly(aij):
    # [aij * k]/[k] as a polynomial in v = u^k
    if aij == 0:
        return {}
    a = abs(aij)
    sign = 1 if aij > 0 else -1
    return {t: sign for t in range(-2 * (a - 1), 2 * a - 1, 4)}


@lru_cache(maxsize=None)
def _spectrum(akind, ainv, bkind, binv, aij):
    """{t: s_t} with A(z)B(w) boson factor prod_t (1 - u^t w/z)^(-s_t)."""
    ann = _ANN_VPOLY[akind]
    cre = _CRE_VPOLY[bkind]
    ratio = _ratio_vpoly(aij)
    out = {}
    for t1, c1 in ann.items():
        if ainv:
            c1 = -c1
        for t2, c2 in cre.items():
            if binv:
                c2 = -c2
            for t3, c3 in ratio.items():
                t = t1 + t2 + t3
                v = out.get(t, 0) + c1 * c2 * c3
                if v:
                    out[t] = v
                elif t in out:
                    del out[t]
    return tuple(sorted(out.items()))


class ContractionTable:
    """Pairwise contraction scalars, derived once and cached per algebra.

    A(z)B(w) = C(z,w) :A(z)B(w): with all e^beta kept in written order and
    every marker acting on the incoming charge.  `perturb` lets the
    self-test displace one binomial's q-power to prove the checks bite.
    """

    def __init__(self, alg):
        self.alg = alg
        self.perturb = {}  # (akind, bkind, aij) -> {t: dt}
        self._cache = {}

    def _base(self, akind, ainv, bkind, binv, aij):
        key = (akind, ainv, bkind, binv, aij)
        got = self._cache.get(key)
        if got is not None:
            return got
        spec = dict(_spectrum(akind, ainv, bkind, binv, aij))
        tweak = self.perturb.get((akind, bkind, aij))
        if tweak:
            for t, dt in tweak.items():
                if t in spec:
                    s = spec.pop(t)
                    spec[t + dt] = spec.get(t + dt, 0) + s
        zpow = 0
        qpow = 0
        bsign = X_SIGN.get(bkind, 0)
        if bsign:
            if akind in X_SIGN:
                zpow = X_SIGN[akind] * bsign * aij
            elif akind == "phi":
                qpow = (2 if ainv else -2) * bsign * aij
            elif akind == "psi":
                qpow = (-2 if ainv else 2) * bsign * aij
        got = (spec, zpow, qpow)
        self._cache[key] = got
        return got

    def pair_fr(self, a, b, va, vb, nvars):
        aij = self.alg.aij(a.node, b.node)
        spec, zpow, qpow = self._base(a.kind, a.inv, b.kind, b.inv, aij)
        fr = FactoredRational(nvars, coeff=upow(qpow + a.shift * zpow))
        if zpow:
            mono = [0] * nvars
            mono[va] = zpow
            fr.mono = tuple(mono)
        for t, s in spec.items():
            fr.factors[(va, vb, t + b.shift - a.shift)] = -s
        return fr

    def contraction(self, a, b):
        """C(z, w) for the ordered pair, in variables z = 0, w = 1."""
        return self.pair_fr(a, b, 0, 1, 2)


# ---------------------------------------------------------------------------
# Wick route.


def charge_deltas(ops, rank):
    out = [0] * rank
    for _, op in ops:
        s = X_SIGN.get(op.kind, 0)
        if s:
            out[op.node - 1] += s
    return tuple(out)


def normal_ordered_apply(alg, ops, in_bv, dout, nvars):
    """Matrix of the normal-ordered product against one incoming vector.

    ops is an ordered list of (variable index, CurrentSpec).  Returns a
    MultiLaurent whose values are States, exact for all outgoing components
    of boson degree <= dout (normal ordering only creates above that).
    """
    scalar = ONE
    mono = [0] * nvars
    for var, op in ops:
        if op.kind in X_SIGN:
            e0 = X_SIGN[op.kind] * alg.pairing(op.node, in_bv) + MARKER_OFFSET
            mono[var] += e0
            if op.shift:
                scalar = scalar * upow(op.shift * e0)
        else:
            p = alg.pairing(op.node, in_bv)
            t = -2 * p if op.kind == "phi" else 2 * p
            if op.inv:
                t = -t
            if t:
                scalar = scalar * upow(t)
    charge = list(in_bv.charge)
    for var, op in reversed(ops):
        s = X_SIGN.get(op.kind, 0)
        if s:
            if alg.cocycle(op.node, tuple(charge)) == -1:
                scalar = -scalar
            charge[op.node - 1] += s
    out_charge = tuple(charge)

    cur = {(in_bv.bosons, (0,) * nvars): ONE}
    for var, op in ops:
        if not _ANN_VPOLY[op.kind]:
            continue
        nxt = {}
        for (bos, exps), c in cur.items():
            for (bos2, drop), c2 in _exp_ann(alg, op.kind, op.inv, op.node, bos).items():
                e = list(exps)
                e[var] -= drop
                w = c * c2
                if op.shift and drop:
                    w = w * upow(-op.shift * drop)
                key = (bos2, tuple(e))
                prev = nxt.get(key)
                v = w if prev is None else prev + w
                if v.num:
                    nxt[key] = v
                elif key in nxt:
                    del nxt[key]
        cur = nxt
    for var, op in ops:
        if not _CRE_VPOLY[op.kind]:
            continue
        nxt = {}
        for (bos, exps), c in cur.items():
            budget = dout - sum(k * m for _, k, m in bos)
            for (bos2, add), c2 in _exp_cre(alg, op.kind, op.inv, op.node, bos, budget).items():
                e = list(exps)
                e[var] += add
                w = c * c2
                if op.shift and add:
                    w = w * upow(op.shift * add)
                key = (bos2, tuple(e))
                prev = nxt.get(key)
                v = w if prev is None else prev + w
                if v.num:
                    nxt[key] = v
                elif key in nxt:
                    del nxt[key]
        cur = nxt

    ml = MultiLaurent(nvars)
    for (bos, exps), c in cur.items():
        e = tuple(a + b for a, b in zip(exps, mono))
        ml.iadd_term(e, State.of(FockBasisVector(bos, out_charge, in_bv.sector), c * scalar))
    return ml


def wick_state_fr(alg, table, ops, in_bv, dout, nvars):
    """Full Wick value of the product applied to one vector: contractions
    times the state-valued normal-ordered matrix polynomial."""
    fr = FactoredRational(nvars)
    for a in range(len(ops)):
        for b in range(a + 1, len(ops)):
            fr = fr.mul(table.pair_fr(ops[a][1], ops[b][1], ops[a][0], ops[b][0], nvars))
    ml = normal_ordered_apply(alg, ops, in_bv, dout, nvars)
    return FactoredRational(nvars, fr.coeff, fr.mono, ml, fr.factors)


def wick_correlation(alg, table, ops, out_bv, in_bv):
    """Exact matrix coefficient of a current product as a factored rational.

    Returns (rational, tag); a lattice imbalance short-circuits to exact
    zero with tag "charge-mismatch".
    """
    nvars = max(v for v, _ in ops) + 1 if ops else 1
    expect = tuple(a + d for a, d in zip(in_bv.charge, charge_deltas(ops, len(in_bv.charge))))
    if out_bv.sector != in_bv.sector or tuple(out_bv.charge) != expect:
        return FactoredRational(nvars, coeff=ZERO), "charge-mismatch"
    sfr = wick_state_fr(alg, table, ops, in_bv, out_bv.boson_degree(), nvars)
    num = MultiLaurent(nvars)
    for e, st in sfr.num.terms.items():
        c = st.terms.get(out_bv)
        if c is not None:
            num.iadd_term(e, c)
    return FactoredRational(nvars, sfr.coeff, sfr.mono, num, sfr.factors), None
