"""The four concrete instances: enumeration counts, validation, structure."""

from fractions import Fraction

import numpy as np
import pytest

from opcheck import ops
from opcheck.errors import (
    ChoiNotPositive,
    EntryOutOfRange,
    NotAvailable,
    NotSubUnital,
    RowSumExceedsOne,
    ValidationError,
)
from opcheck.instances import (
    CpsuTheory,
    FinHilbTheory,
    MatrixTheory,
    PFunTheory,
    SubStochTheory,
)
from opcheck.kernel import BOOLEANS, INTEGERS

F = Fraction


# -- partial functions -----------------------------------------------------

def test_pfun_composition_is_relational():
    pfun = PFunTheory()
    a = frozenset({"x1", "x2"})
    f = pfun.validate_event([("x1", "x2")], a, a)
    g = pfun.validate_event([("x2", "x1")], a, a)
    h = pfun.compose(g, f)
    assert h.payload == (("x1", "x1"),)


def test_pfun_complement_is_undefined_set():
    pfun = PFunTheory()
    a = frozenset({"x1", "x2"})
    e = pfun.validate_event([("x1", "*")], a, pfun.unit())
    (c,) = pfun.effect_complements(e)
    assert c.payload == (("x2", "*"),)


def test_pfun_tensor_is_product():
    pfun = PFunTheory()
    a = frozenset({"x1"})
    f = pfun.identity(a)
    g = pfun.identity(a)
    fg = pfun.tensor(f, g)
    assert fg.dom == pfun.tensor_obj(a, a)
    assert ops.is_total(fg)


def test_pfun_hom_count_matches_enumeration():
    pfun = PFunTheory()
    a = frozenset({"x1", "x2", "x3"})
    b = frozenset({"y"})
    assert pfun.hom_count(a, b) == 2 ** 3
    assert len(pfun.enumerate_hom(a, b)) == 8


# -- semiring matrices -----------------------------------------------------

def test_matrix_validation_errors():
    sub = SubStochTheory(grid=4)
    with pytest.raises(RowSumExceedsOne):
        sub.validate_event([[F(3, 4), F(1, 2)]], 1, 2)
    with pytest.raises(EntryOutOfRange):
        sub.validate_event([[F(3, 2)]], 1, 1)
    with pytest.raises(ValidationError):
        sub.validate_event([[F(1)]], 2, 1)


def test_matrix_enumeration_counts():
    sub = SubStochTheory(grid=2)
    # rows of length 1 over {0, 1/2, 1}: all three are sub-unit
    assert sub.hom_count(1, 1) == 3
    # rows of length 2 with sum at most one: (0,0),(0,1/2),(1/2,0),
    # (0,1),(1,0),(1/2,1/2)
    assert sub.hom_count(1, 2) == 6
    assert len(sub.enumerate_hom(2, 1)) == 9


def test_integer_matrices_include_negatives():
    mat = MatrixTheory(INTEGERS, grid=1)
    payloads = {f.payload for f in mat.enumerate_hom(1, 1)}
    assert ((-1,),) in payloads and ((1,),) in payloads


def test_boolean_matrix_composition_uses_or():
    matb = MatrixTheory(BOOLEANS)
    f = matb.validate_event([[1, 1]], 1, 2)
    g = matb.validate_event([[1], [1]], 2, 1)
    assert matb.compose(g, f).payload == ((1,),)


def test_matrix_tensor_is_kronecker():
    sub = SubStochTheory(grid=2)
    f = sub.validate_event([[F(1, 2)]], 1, 1)
    g = sub.identity(2)
    fg = sub.tensor(f, g)
    assert fg.payload == ((F(1, 2), F(0)), (F(0), F(1, 2)))


# -- completely positive maps ----------------------------------------------

def test_cpsu_identity_is_total():
    cpsu = CpsuTheory()
    for obj in [(2,), (1, 2), (3,)]:
        assert ops.is_total(cpsu.identity(obj))


def test_cpsu_compose_identity():
    cpsu = CpsuTheory()
    rng = __import__("random").Random(0)
    f = cpsu.sample_hom((2,), (2, 1), rng)
    assert cpsu.equal(cpsu.compose(cpsu.identity((2, 1)), f), f)
    assert cpsu.equal(cpsu.compose(f, cpsu.identity((2,))), f)


def test_cpsu_transpose_is_rejected():
    cpsu = CpsuTheory()
    # the transpose map on a qubit is positive but not completely positive
    c = np.zeros((2, 2, 2, 2), dtype=complex)
    for k in range(2):
        for l in range(2):
            c[k, l, l, k] = 1.0  # sends E_kl to E_lk
    with pytest.raises(ChoiNotPositive):
        cpsu.validate_event([[c]], (2,), (2,))


def test_cpsu_super_unital_rejected():
    cpsu = CpsuTheory()
    with pytest.raises(NotSubUnital):
        cpsu.validate_event([[2 * cpsu.identity((2,)).payload[0][0]]],
                            (2,), (2,))


def test_cpsu_discard_and_pairing():
    cpsu = CpsuTheory()
    top = cpsu.discard((2,))
    assert ops.is_total(top)
    (c,) = cpsu.effect_complements(top)
    assert cpsu.equal(c, cpsu.zero_morphism((2,), cpsu.unit()))
    halves = cpsu._m((2,), (1,), [[0.5 * np.eye(2).reshape(1, 2, 1, 2)]])
    assert cpsu.try_pairing([halves, halves]) is not None
    assert cpsu.try_pairing([top, halves]) is None


def test_finhilb_has_no_coproducts():
    fh = FinHilbTheory()
    with pytest.raises(NotAvailable):
        fh.coproduct(((2,), (2,)))
    with pytest.raises(NotAvailable):
        fh.zero()
    assert fh.probe_objects(3) == [(1,), (2,), (3,)]


def test_finhilb_direct_sum_decision():
    fh = FinHilbTheory()
    exists, reason = fh.direct_sum_decision(((2,), (2,)), (4,))
    assert not exists
    assert "rank" in reason
    exists, _ = fh.direct_sum_decision(((2,),), (2,))
    assert exists
