"""Drinfeld coproduct, counit and antipode; level-k actions on tensor powers.

A coproduct term is a per-slot list of currents acting on a k-fold tensor
product of level-1 Fock modules.  The central charge is static bookkeeping:
a leg standing for j tensor slots carries c = j, and splitting a leg
resolves every q^c shift into an explicit half-integer power.  Legs routed
through the counit carry c = 0 and legs routed through the antipode carry
the negated charge, which is exactly how the q^c factors sitting inside a
leg transform under those maps.
"""

from __future__ import annotations

from typing import NamedTuple

from .currents import CurrentSpec, X_SIGN, apply_composite, zexp_lower_bound
from .fockspace import State
from .scalars import ONE, QScalar, ZERO


class CoproductTerm(NamedTuple):
    scalar: QScalar
    slots: tuple  # tuple of tuples of CurrentSpec

    def text(self):
        bits = []
        for ops in self.slots:
            bits.append(" ".join(op.text() for op in ops) or "1")
        return " (x) ".join(bits)


def delta_split_op(op, c1, c2):
    """One current split across two legs with centers c1, c2 (integers).

    Returns [(sign, left ops, right ops)]; shifts are in half-units, so a
    center c contributes c to a q^(c/2) shift and 2c to a q^c shift.
    """
    t = op.shift
    if op.kind == "xp":
        if op.inv:
            raise ValueError("x currents have no inverse flag")
        return [
            (ONE, (op,), ()),
            (ONE, (CurrentSpec("phi", op.node, t + c1),), (CurrentSpec("xp", op.node, t + 2 * c1),)),
        ]
    if op.kind == "xm":
        if op.inv:
            raise ValueError("x currents have no inverse flag")
        return [
            (ONE, (), (op,)),
            (ONE, (CurrentSpec("xm", op.node, t + 2 * c2),), (CurrentSpec("psi", op.node, t + c2),)),
        ]
    if op.kind == "phi":
        return [
            (
                ONE,
                (CurrentSpec("phi", op.node, t - c2, op.inv),),
                (CurrentSpec("phi", op.node, t + c1, op.inv),),
            )
        ]
    if op.kind == "psi":
        return [
            (
                ONE,
                (CurrentSpec("psi", op.node, t + c2, op.inv),),
                (CurrentSpec("psi", op.node, t - c1, op.inv),),
            )
        ]
    raise ValueError("unknown current kind %r" % op.kind)


def split_leg(terms, leg, c1, c2):
    """Apply the coproduct to one leg of every term.

    terms: [(scalar, legs)] with legs = [(c, ops tuple)].  The chosen leg
    must carry center c1 + c2; products of currents split multiplicatively.
    """
    out = []
    for scalar, legs in terms:
        c, ops = legs[leg]
        if c != c1 + c2:
            raise ValueError("leg carries center %d, split says %d" % (c, c1 + c2))
        pieces = [(scalar, (), ())]
        for op in ops:
            nxt = []
            for s, l, r in pieces:
                for s2, l2, r2 in delta_split_op(op, c1, c2):
                    nxt.append((s * s2, l + l2, r + r2))
            pieces = nxt
        for s, l, r in pieces:
            out.append((s, legs[:leg] + ((c1, l), (c2, r)) + legs[leg + 1 :]))
    return out


def delta_terms(kind, node, level, direction="last"):
    """The level-k coproduct of a generator as explicit per-slot currents.

    direction "last" iterates (1 x ... x Delta), "first" iterates
    (Delta x ... x 1); both must agree, which the coassociativity check
    exercises.
    """
    terms = [(ONE, ((level, (CurrentSpec(kind, node),)),))]
    while True:
        idx = next((i for i, (c, _) in enumerate(terms[0][1]) if c > 1), None)
        if idx is None:
            break
        c = terms[0][1][idx][0]
        if direction == "last":
            terms = split_leg(terms, idx, 1, c - 1)
        else:
            terms = split_leg(terms, idx, c - 1, 1)
    return [CoproductTerm(s, tuple(ops for _, ops in legs)) for s, legs in terms]


def apply_term(alg, term, tstate, window, dcap=None):
    """Apply one coproduct term to a tensor state; {z exponent: tensor State}.

    dcap, when set, projects every slot onto boson degree <= dcap (exact
    per graded component).
    """
    lo, hi = window
    k = len(term.slots)
    out = {}
    for key, coeff in tstate.terms.items():
        if not isinstance(key, tuple):
            key = (key,)
        slot_lo = []
        for s in range(k):
            st = State.of(key[s])
            slot_lo.append(sum(zexp_lower_bound(alg, op, st) for op in term.slots[s]))
        acc = {0: {(): coeff * term.scalar}}
        for s in range(k):
            rest_lo = sum(slot_lo[s + 1 :])
            ops = term.slots[s]
            nxt = {}
            for pe, tensors in acc.items():
                cap = hi - pe - rest_lo
                if cap < slot_lo[s]:
                    continue
                got = apply_composite(alg, list(ops), State.of(key[s]), (slot_lo[s], cap), dcap)
                for z, st in got.items():
                    bucket = nxt.setdefault(pe + z, {})
                    for pref, c in tensors.items():
                        for bv2, c2 in st.terms.items():
                            nk = pref + (bv2,)
                            v = bucket.get(nk, ZERO) + c * c2
                            if v.num:
                                bucket[nk] = v
                            elif nk in bucket:
                                del bucket[nk]
            acc = nxt
        for z, tensors in acc.items():
            if z < lo or z > hi:
                continue
            tgt = out.setdefault(z, State())
            for nk, c in tensors.items():
                tgt.iadd(nk, c)
    return {z: s for z, s in out.items() if not s.is_zero()}


def apply_terms(alg, terms, tstate, window, dcap=None):
    """Sum of coproduct terms (the full level-k current action)."""
    out = {}
    for term in terms:
        for z, st in apply_term(alg, term, tstate, window, dcap).items():
            cur = out.get(z)
            if cur is None:
                out[z] = st
            else:
                merged = cur + st
                if merged.is_zero():
                    del out[z]
                else:
                    out[z] = merged
    return out


# ---------------------------------------------------------------------------
# Counit and antipode.


def counit_value(kind):
    return ZERO if kind in X_SIGN else ONE


def counit_terms(kind, node, side):
    """(eps x id) Delta or (id x eps) Delta as single-leg composites.

    The counited leg's center is 0; a term with an x current in that leg is
    annihilated, a phi/psi leg contributes its constant mode, i.e. factor 1.
    """
    c = (0, 1) if side == "left" else (1, 0)
    keep = 1 if side == "left" else 0
    out = []
    for sign, l, r in delta_split_op(CurrentSpec(kind, node), *c):
        drop = (l, r)[1 - keep]
        if any(op.kind in X_SIGN for op in drop):
            continue
        out.append((sign, (l, r)[keep]))
    return out


ANTIPODE_SIGN = -1  # sign in a(x+-) = -(...)


def antipode_ops(op, c=1):
    """Antipode image of a single current as (sign, composite op list).

    c is the central charge of the module the image finally acts on.
    """
    t = op.shift
    sgn = QScalar.from_int(ANTIPODE_SIGN)
    if op.kind == "xp":
        return (sgn, (CurrentSpec("phi", op.node, t - c, inv=True), CurrentSpec("xp", op.node, t - 2 * c)))
    if op.kind == "xm":
        return (sgn, (CurrentSpec("xm", op.node, t - 2 * c), CurrentSpec("psi", op.node, t - c, inv=True)))
    if op.kind == "phi":
        return (ONE, (op._replace(inv=not op.inv),))
    if op.kind == "psi":
        return (ONE, (op._replace(inv=not op.inv),))
    raise ValueError("unknown current kind %r" % op.kind)


def antipode_axiom_terms(kind, node, side):
    """m (a x id) Delta or m (id x a) Delta on a level-1 module.

    The leg passing through the antipode resolves its referenced center to
    -1 (the antipode inverts q^c); multiplication concatenates the antipode
    leg's reversed images with the other leg.
    """
    if side == "left":
        splits = delta_split_op(CurrentSpec(kind, node), -1, 1)
    else:
        splits = delta_split_op(CurrentSpec(kind, node), 1, -1)
    out = []
    for sign, l, r in splits:
        if side == "left":
            mapped = [antipode_ops(op) for op in reversed(l)]
            tail = r
        else:
            mapped = [antipode_ops(op) for op in reversed(r)]
            tail = l
        ops = ()
        for s2, body in mapped:
            sign = sign * s2
            ops = ops + body
        combined = ops + tail if side == "left" else tail + ops
        out.append((sign, combined))
    return out
