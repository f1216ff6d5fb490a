"""Property-based tests for the arithmetic kernel and derived operations."""

from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from opcheck import ops
from opcheck.errors import Incompatible
from opcheck.instances import SubStochTheory
from opcheck.kernel import parse_rational, rational_str

SUB = SubStochTheory(grid=4)

rationals = st.fractions(min_value=Fraction(-100), max_value=Fraction(100))
unit_fractions = st.integers(min_value=0, max_value=4).map(
    lambda k: Fraction(k, 4))


@given(rationals)
def test_rational_string_roundtrip(q):
    assert parse_rational(rational_str(q)) == q


@st.composite
def substoch_events(draw, dom=2, cod=2):
    rows = []
    for _ in range(dom):
        row = draw(st.lists(unit_fractions, min_size=cod, max_size=cod)
                   .filter(lambda r: sum(r) <= 1))
        rows.append(row)
    return SUB.validate_event(rows, dom, cod)


@settings(max_examples=60)
@given(substoch_events(), substoch_events())
def test_coarse_grain_is_commutative_when_defined(f, g):
    try:
        fg = ops.coarse_grain(f, g)
    except Incompatible:
        return
    assert SUB.equal(fg, ops.coarse_grain(g, f))


@settings(max_examples=60)
@given(substoch_events(dom=1, cod=2), substoch_events(dom=2, cod=2),
       substoch_events(dom=2, cod=1))
def test_composition_is_associative(f, g, h):
    lhs = SUB.compose(h, SUB.compose(g, f))
    rhs = SUB.compose(SUB.compose(h, g), f)
    assert SUB.equal(lhs, rhs)


@settings(max_examples=60)
@given(substoch_events(dom=2, cod=1))
def test_effect_complement_merges_to_discard(e):
    for c in SUB.effect_complements(e):
        assert SUB.equal(ops.coarse_grain(e, c), SUB.discard(2))


@settings(max_examples=40)
@given(substoch_events(dom=1, cod=2))
def test_total_extension_restricts_to_the_event(f):
    g = ops.total_extension(f)
    assert ops.is_total(g)
    proj = ops.projection(SUB, (2, SUB.unit()), 0)
    assert SUB.equal(SUB.compose(proj, g), f)
