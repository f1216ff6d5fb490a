"""Arithmetic substrates: exact rationals, semirings, complex-matrix checks.

Exact rational arithmetic is delegated to ``fractions.Fraction``, which
already keeps values in lowest terms with a positive denominator.  Floating
point is confined to the complex-matrix helpers; every tolerance is passed
explicitly.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

import numpy as np

from .errors import EigensolverError, SemiringLawError

DEFAULT_TOL = 1e-9


def parse_rational(text):
    """Parse a rational literal of the form ``"p/q"`` or ``"p"``.

    Floats are rejected on purpose: values read from files must stay exact.
    """
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"rational literal must be a string, got {text!r}")
    parts = text.split("/")
    if len(parts) == 1:
        return Fraction(int(parts[0]))
    if len(parts) == 2:
        return Fraction(int(parts[0]), int(parts[1]))
    raise ValueError(f"malformed rational literal {text!r}")


def rational_str(q):
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class Semiring:
    """A unital semiring with a complement oracle for its sub-unit subset.

    The sub-unit subset consists of the elements ``a`` for which some ``b``
    satisfies ``a + b = 1``.  ``complements(a)`` returns every such ``b``;
    an empty result means ``a`` lies outside the subset.  The oracle returns
    a collection rather than a single element because uniqueness is a
    property to be checked, not assumed (the boolean semiring violates it).
    """

    def __init__(self, name, *, zero, one):
        self.name = name
        self.zero = zero
        self.one = one

    # Subclasses implement: add, mul, contains, complements, grid_elements,
    # element_str, parse_element.  ``elements`` is a tuple for finite
    # carriers and None otherwise.
    elements = None

    # True when leaving the sub-unit subset is irreversible under addition
    # (no negative elements); enables pruning during row enumeration.
    monotone = False

    def in_unit_interval(self, a):
        return bool(self.complements(a))

    def __repr__(self):
        return f"Semiring({self.name})"


class FiniteSemiring(Semiring):
    """Semiring given by explicit addition/multiplication tables.

    The tables are validated eagerly and exhaustively against the semiring
    laws; a bad table raises :class:`SemiringLawError` naming the law.
    """

    def __init__(self, name, elements, add_table, mul_table, zero, one):
        super().__init__(name, zero=zero, one=one)
        self.elements = tuple(elements)
        if len(set(self.elements)) != len(self.elements):
            raise SemiringLawError(f"{name}: duplicate carrier elements")
        self._add = dict(add_table)
        self._mul = dict(mul_table)
        for x in (zero, one):
            if x not in self.elements:
                raise SemiringLawError(f"{name}: designated unit {x!r} not in carrier")
        self._validate()

    @classmethod
    def from_tables(cls, name, elements, add_rows, mul_rows, zero, one):
        """Build from full n-by-n tables of element names (row-major)."""
        n = len(elements)
        if len(add_rows) != n or len(mul_rows) != n:
            raise SemiringLawError(f"{name}: tables must be {n}x{n}")
        add_table, mul_table = {}, {}
        for i, a in enumerate(elements):
            if len(add_rows[i]) != n or len(mul_rows[i]) != n:
                raise SemiringLawError(f"{name}: tables must be {n}x{n}")
            for j, b in enumerate(elements):
                add_table[a, b] = add_rows[i][j]
                mul_table[a, b] = mul_rows[i][j]
        return cls(name, elements, add_table, mul_table, zero, one)

    def _validate(self):
        els = self.elements
        for a, b in product(els, repeat=2):
            for table, op in ((self._add, "+"), (self._mul, "*")):
                if (a, b) not in table or table[a, b] not in els:
                    raise SemiringLawError(f"{self.name}: table entry {a!r} {op} {b!r} missing or out of carrier")
        laws = [
            ("addition associativity", lambda a, b, c: self.add(self.add(a, b), c) == self.add(a, self.add(b, c))),
            ("addition commutativity", lambda a, b, c: self.add(a, b) == self.add(b, a)),
            ("additive unit", lambda a, b, c: self.add(a, self.zero) == a),
            ("multiplication associativity", lambda a, b, c: self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))),
            ("multiplicative unit", lambda a, b, c: self.mul(a, self.one) == a and self.mul(self.one, a) == a),
            ("left distributivity", lambda a, b, c: self.mul(a, self.add(b, c)) == self.add(self.mul(a, b), self.mul(a, c))),
            ("right distributivity", lambda a, b, c: self.mul(self.add(a, b), c) == self.add(self.mul(a, c), self.mul(b, c))),
            ("zero annihilation", lambda a, b, c: self.mul(a, self.zero) == self.zero and self.mul(self.zero, a) == self.zero),
        ]
        for lawname, law in laws:
            for a, b, c in product(els, repeat=3):
                if not law(a, b, c):
                    raise SemiringLawError(
                        f"{self.name}: {lawname} fails at ({a!r}, {b!r}, {c!r})")

    def add(self, a, b):
        return self._add[a, b]

    def mul(self, a, b):
        return self._mul[a, b]

    def contains(self, a):
        return a in self.elements

    def complements(self, a):
        if not self.contains(a):
            raise ValueError(f"{a!r} not in carrier of {self.name}")
        return tuple(b for b in self.elements if self.add(a, b) == self.one)

    def grid_elements(self, grid):
        return self.elements

    def element_str(self, a):
        return str(a)

    def parse_element(self, text):
        if text not in self.elements:
            raise ValueError(f"{text!r} not in carrier of {self.name}")
        return text


class RuleSemiring(Semiring):
    """Rule-defined carrier (a trusted builtin, not validated at load time)."""

    def __init__(self, name, *, zero, one, add, mul, contains, complements,
                 grid_elements, element_str=str, parse_element=None,
                 monotone=False):
        super().__init__(name, zero=zero, one=one)
        self.monotone = monotone
        self.add = add
        self.mul = mul
        self.contains = contains
        self._complements = complements
        self._grid = grid_elements
        self.element_str = element_str
        self._parse = parse_element

    def complements(self, a):
        if not self.contains(a):
            raise ValueError(f"{a!r} not in carrier of {self.name}")
        return self._complements(a)

    def grid_elements(self, grid):
        return self._grid(grid)

    def parse_element(self, text):
        if self._parse is None:
            raise ValueError(f"{self.name} has no element parser")
        return self._parse(text)


def _int_parse(text):
    return int(text)


INTEGERS = RuleSemiring(
    "integers",
    zero=0, one=1,
    add=lambda a, b: a + b,
    mul=lambda a, b: a * b,
    contains=lambda a: isinstance(a, int) and not isinstance(a, bool),
    complements=lambda a: (1 - a,),
    grid_elements=lambda grid: tuple(range(-grid, grid + 1)),
    parse_element=_int_parse,
)

NATURALS = RuleSemiring(
    "naturals",
    monotone=True,
    zero=0, one=1,
    add=lambda a, b: a + b,
    mul=lambda a, b: a * b,
    contains=lambda a: isinstance(a, int) and not isinstance(a, bool) and a >= 0,
    complements=lambda a: (1 - a,) if a <= 1 else (),
    grid_elements=lambda grid: tuple(range(0, grid + 1)),
    parse_element=_int_parse,
)

# The two-element semiring with OR as addition and AND as multiplication.
# Here 1 has two complements (1+0 = 1+1 = 1), which is exactly why Mat over
# this carrier is shipped as a negative fixture.
BOOLEANS = FiniteSemiring(
    "booleans",
    elements=(0, 1),
    add_table={(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 1},
    mul_table={(0, 0): 0, (0, 1): 0, (1, 0): 0, (1, 1): 1},
    zero=0, one=1,
)

# Nonnegative rationals; the sub-unit subset is the rationals in [0, 1].
RATIONALS01 = RuleSemiring(
    "rationals01",
    monotone=True,
    zero=Fraction(0), one=Fraction(1),
    add=lambda a, b: a + b,
    mul=lambda a, b: a * b,
    contains=lambda a: isinstance(a, Fraction) and a >= 0,
    complements=lambda a: (1 - a,) if a <= 1 else (),
    grid_elements=lambda grid: tuple(Fraction(k, grid) for k in range(grid + 1)),
    element_str=rational_str,
    parse_element=parse_rational,
)

BUILTIN_SEMIRINGS = {
    "integers": INTEGERS,
    "naturals": NATURALS,
    "booleans": BOOLEANS,
    "rationals01": RATIONALS01,
}


def semiring_complements(semiring, a):
    """All ``b`` with ``a + b = 1``; empty means ``a`` is not sub-unit."""
    return tuple(semiring.complements(a))


# ---------------------------------------------------------------------------
# Complex matrices with tolerance-based comparison.

def as_complex_matrix(entries):
    m = np.asarray(entries, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got array of ndim {m.ndim}")
    return m


def matrix_approx_eq(m, n, tol=DEFAULT_TOL):
    """Entrywise comparison; a dimension mismatch is just ``False``."""
    m = np.asarray(m)
    n = np.asarray(n)
    if m.shape != n.shape:
        return False
    if m.size == 0:
        return True
    return bool(np.max(np.abs(m - n)) <= tol)


def is_hermitian(m, tol=DEFAULT_TOL):
    m = np.asarray(m)
    return m.shape[0] == m.shape[1] and matrix_approx_eq(m, m.conj().T, tol)


def min_eigenvalue(m):
    try:
        return float(np.linalg.eigvalsh(np.asarray(m, dtype=complex)).min())
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigensolver failed: {exc}") from exc


def choi_positivity(c, tol=DEFAULT_TOL):
    """True iff ``c`` is Hermitian within ``tol`` with min eigenvalue >= -tol."""
    c = np.asarray(c, dtype=complex)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise ValueError(f"positivity check needs a square matrix, got shape {c.shape}")
    if c.size == 0:
        return True
    if not is_hermitian(c, tol):
        return False
    return min_eigenvalue(c) >= -tol
