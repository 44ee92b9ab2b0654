import pytest

from qcurrents.fockspace import (
    Algebra,
    FockBasisVector,
    State,
    apply_boson,
    apply_lattice,
    boson_dict,
    bosons_from_dict,
    dual_coefficient,
    enumerate_basis,
    marker_exponents,
    tensor,
    vacuum,
    with_bosons,
)
from qcurrents.scalars import ONE, QScalar, ZERO, heis_bracket, qint, upow

SL2 = Algebra(2)


def st_of(bv):
    return State.of(bv)


def test_boson_annihilates_vacuum_and_single_commutator():
    v = vacuum()
    assert apply_boson(SL2, 1, st_of(v)).is_zero()
    s = apply_boson(SL2, -1, st_of(v))
    got = apply_boson(SL2, 1, s)
    assert got == st_of(v) * qint(2)  # (q + q^-1) |L0>


def _leibniz_oracle(alg, k, bosons):
    # independent expansion: a_k prod a(-k_i) |0> via repeated commutators
    out = {}
    lst = list(bosons)
    for idx, (node, bk, m) in enumerate(lst):
        if bk != k:
            continue
        br = alg.bracket(1, node, k)
        d = {(n, kk): mm for n, kk, mm in lst}
        if m == 1:
            del d[(node, bk)]
        else:
            d[(node, bk)] = m - 1
        key = bosons_from_dict(d)
        cur = out.get(key, ZERO)
        out[key] = cur + br * QScalar.from_int(m)
    return {k2: v for k2, v in out.items() if not v.is_zero()}


def test_boson_derivation_leibniz_oracle():
    v = with_bosons(vacuum(), {(1, 1): 2})
    got = apply_boson(SL2, 1, st_of(v))
    expect = _leibniz_oracle(SL2, 1, v.bosons)
    assert {bv.bosons: c for bv, c in got.terms.items()} == expect
    # the stated value: 2(q+q^-1) a(-1)|L0>
    single = with_bosons(vacuum(), {(1, 1): 1})
    assert got == st_of(single) * (qint(2) * QScalar.from_int(2))
    # mixed degrees
    w = with_bosons(vacuum(), {(1, 1): 1, (1, 2): 3})
    got2 = apply_boson(SL2, 2, st_of(w))
    assert {bv.bosons: c for bv, c in got2.terms.items()} == _leibniz_oracle(SL2, 2, w.bosons)


def test_heisenberg_relation_as_operators():
    # [a_k, a_l] = bracket * id on a few states
    states = [
        vacuum(),
        with_bosons(vacuum(), {(1, 1): 1}),
        with_bosons(vacuum(1), {(1, 2): 1, (1, 1): 2}),
    ]
    for k in (1, 2):
        for l in (-2, -1, 1, 2):
            for bv in states:
                s = st_of(bv)
                ab = apply_boson(SL2, k, apply_boson(SL2, l, s))
                ba = apply_boson(SL2, l, apply_boson(SL2, k, s))
                diff = ab - ba
                assert diff == s * heis_bracket(k, l)


def test_boson_degree_shifts():
    v = with_bosons(vacuum(), {(1, 2): 1})
    up = apply_boson(SL2, -3, st_of(v))
    (bv_up,) = up.terms
    assert bv_up.boson_degree() == v.boson_degree() + 3
    down = apply_boson(SL2, 2, st_of(v))
    (bv_down,) = down.terms
    assert bv_down.boson_degree() == v.boson_degree() - 2


def test_lattice_eigenvalues():
    # d_alpha on e^{L1} -> 1, on e^{L0 + alpha} -> 2
    assert SL2.pairing(1, vacuum(1)) == 1
    assert SL2.pairing(1, vacuum()._replace(charge=(1,))) == 2
    got = apply_lattice(SL2, "qd", st_of(vacuum(1)), power=2)
    assert got == st_of(vacuum(1)) * upow(2)


def test_lattice_shifts_and_inverse():
    start = vacuum()._replace(charge=(-1,))
    up = apply_lattice(SL2, "e+", st_of(start))
    assert up == st_of(vacuum())
    round_trip = apply_lattice(SL2, "e-", apply_lattice(SL2, "e+", st_of(start)))
    assert round_trip == st_of(start)


def test_marker_exponents():
    rows = marker_exponents(SL2, 1, 1, st_of(vacuum()._replace(charge=(1,))))
    assert rows == [(vacuum()._replace(charge=(1,)), 3, ONE)]  # 2m+i+1 = 3


def test_dual_coefficient():
    v = vacuum()
    s = st_of(v) * qint(2)
    assert dual_coefficient(v, s) == qint(2)
    other = with_bosons(v, {(1, 1): 1})
    assert dual_coefficient(other, s) == ZERO
    with pytest.raises(ValueError):
        dual_coefficient(vacuum(1), s)


def test_sl3_cross_node_brackets():
    sl3 = Algebra(3)
    v = with_bosons(vacuum(0, rank=2), {(2, 1): 1})
    got = apply_boson(sl3, 1, st_of(v), node=1)
    # [a_1(1), a_2(-1)] = [-1][1]/1 = -1
    assert got == State.of(vacuum(0, rank=2)) * (-ONE)
    far = Algebra(4)
    w = with_bosons(vacuum(0, rank=3), {(3, 1): 1})
    assert apply_boson(far, 1, State.of(w), node=1).is_zero()


def test_sl3_cocycle_antisymmetry():
    sl3 = Algebra(3)
    v = vacuum(0, rank=2)
    s = State.of(v)
    ab = apply_lattice(sl3, "e+", apply_lattice(sl3, "e+", s, node=2), node=1)
    ba = apply_lattice(sl3, "e+", apply_lattice(sl3, "e+", s, node=1), node=2)
    assert ab == -ba  # adjacent root operators anticommute


def test_text_notation():
    bv = FockBasisVector(bosons_from_dict({(1, 2): 1, (1, 1): 2}), (1,), 1)
    assert bv.text() == "a[-1]^2 a[-2] | L1 +1*alpha >"


def test_enumerate_basis_counts():
    basis = enumerate_basis(SL2, 3, 1, 0)
    # partitions of 0..3 -> 1+1+2+3 = 7 boson monomials, 3 charges
    assert len(basis) == 7 * 3
    degs = [bv.boson_degree() for bv in basis]
    assert max(degs) == 3


def test_tensor_states():
    a = State.of(vacuum()) * qint(2)
    b = State.of(vacuum(1))
    t = tensor(a, b)
    assert list(t.terms) == [(vacuum(), vacuum(1))]
    t2 = tensor(t, a)
    ((key, val),) = t2.terms.items()
    assert key == (vacuum(), vacuum(1), vacuum())
    assert val == qint(2) * qint(2)
