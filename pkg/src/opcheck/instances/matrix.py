"""Matrix theories over a semiring, including the substochastic instance.

Objects are natural numbers; an event n -> m is an n-by-m matrix whose
entries and row sums all lie in the sub-unit subset of the carrier (row =
source element, column = target element: morphisms act on the left of
row-indexed states).  An event is total when every row sums to one.

The substochastic instance is the same structure over the nonnegative
rationals, where the sub-unit subset is the rationals in [0, 1]; it keeps
a denominator grid so homsets become enumerable (exhaustive relative to
the grid).
"""

from __future__ import annotations

from itertools import product

from .. import kernel
from ..errors import BoundExceeded, EntryOutOfRange, RowSumExceedsOne, ValidationError
from ..theory import Morphism, Theory


class MatrixTheory(Theory):
    monoidal = True

    def __init__(self, semiring, grid=2, name=None):
        self.semiring = semiring
        self.grid = grid
        self.name = name or f"mat_{semiring.name}"
        self._row_cache = {}

    # -- objects ----------------------------------------------------------
    def unit(self):
        return 1

    def zero(self):
        return 0

    def coproduct(self, summands):
        return sum(summands)

    def object_str(self, a):
        return str(a)

    def object_size(self, a):
        return a

    def probe_objects(self, bound):
        return list(range(0, bound + 1))

    # -- morphisms --------------------------------------------------------
    def _m(self, dom, cod, rows):
        return Morphism(self, dom, cod, tuple(tuple(r) for r in rows))

    def identity(self, a):
        s = self.semiring
        return self._m(a, a, [[s.one if i == j else s.zero for j in range(a)]
                              for i in range(a)])

    def _compose(self, g, f):
        s = self.semiring
        fa, ga = f.payload, g.payload
        rows = []
        for i in range(f.dom):
            row = []
            for k in range(g.cod):
                acc = s.zero
                for j in range(f.cod):
                    acc = s.add(acc, s.mul(fa[i][j], ga[j][k]))
                row.append(acc)
            rows.append(row)
        return self.validate_event(rows, f.dom, g.cod)

    def zero_morphism(self, a, b):
        s = self.semiring
        return self._m(a, b, [[s.zero] * b for _ in range(a)])

    def coprojection(self, summands, i):
        s = self.semiring
        total = sum(summands)
        offset = sum(summands[:i])
        n = summands[i]
        return self._m(n, total,
                       [[s.one if c == offset + r else s.zero for c in range(total)]
                        for r in range(n)])

    def cotuple(self, summands, fs):
        rows = []
        for f in fs:
            rows.extend(f.payload)
        return self._m(sum(summands), fs[0].cod if fs else 0, rows)

    def discard(self, a):
        s = self.semiring
        return self._m(a, 1, [[s.one]] * a)

    def equal(self, f, g):
        return f.dom == g.dom and f.cod == g.cod and f.payload == g.payload

    def payload_key(self, f):
        return f.payload

    # -- tests and merging -------------------------------------------------
    def try_pairing(self, events):
        s = self.semiring
        dom = events[0].dom
        rows = []
        for i in range(dom):
            row = []
            for f in events:
                row.extend(f.payload[i])
            total = s.zero
            for x in row:
                total = s.add(total, x)
            if not s.in_unit_interval(total):
                return None
            rows.append(row)
        return self._m(dom, sum(f.cod for f in events), rows)

    def effect_complements(self, e):
        s = self.semiring
        per_entry = [s.complements(e.payload[i][0]) for i in range(e.dom)]
        if any(not c for c in per_entry):
            return []
        return [self._m(e.dom, 1, [[c] for c in combo])
                for combo in product(*per_entry)]

    # -- enumeration -------------------------------------------------------
    def _valid_rows(self, m):
        key = (m, self.grid)
        if key not in self._row_cache:
            s = self.semiring
            els = [x for x in s.grid_elements(self.grid) if s.in_unit_interval(x)]
            rows = []
            # depth-first with running-sum pruning when addition cannot
            # bring an over-one sum back into the unit interval
            def extend(prefix, total):
                if len(prefix) == m:
                    if s.in_unit_interval(total):
                        rows.append(tuple(prefix))
                    return
                for x in els:
                    new_total = s.add(total, x)
                    if s.monotone and not s.in_unit_interval(new_total):
                        continue
                    prefix.append(x)
                    extend(prefix, new_total)
                    prefix.pop()
            extend([], s.zero)
            self._row_cache[key] = tuple(rows)
        return self._row_cache[key]

    def hom_count(self, a, b):
        return len(self._valid_rows(b)) ** a

    def enumerate_hom(self, a, b, cap=None):
        if cap is not None and self.hom_count(a, b) > cap:
            raise BoundExceeded(
                f"{self.name}: hom({a},{b}) has {self.hom_count(a, b)} elements",
                self.hom_count(a, b))
        rows = self._valid_rows(b)
        return [self._m(a, b, combo) for combo in product(rows, repeat=a)]

    def sample_hom(self, a, b, rng):
        rows = self._valid_rows(b)
        return self._m(a, b, [rows[rng.randrange(len(rows))] for _ in range(a)])

    # -- monoidal structure ------------------------------------------------
    def tensor_obj(self, a, b):
        return a * b

    def tensor(self, f, g):
        s = self.semiring
        rows = []
        for i in range(f.dom):
            for p in range(g.dom):
                row = []
                for j in range(f.cod):
                    for q in range(g.cod):
                        row.append(s.mul(f.payload[i][j], g.payload[p][q]))
                rows.append(row)
        return self._m(f.dom * g.dom, f.cod * g.cod, rows)

    def unitor_right(self, a):
        return self.identity(a)

    def unitor_left(self, a):
        return self.identity(a)

    def unitor_right_inv(self, a):
        return self.identity(a)

    def unitor_left_inv(self, a):
        return self.identity(a)

    # -- validation --------------------------------------------------------
    def validate_event(self, payload, dom, cod):
        s = self.semiring
        rows = [tuple(r) for r in payload]
        if len(rows) != dom or any(len(r) != cod for r in rows):
            raise ValidationError(
                f"{self.name}: payload shape does not match {dom} -> {cod}")
        for i, row in enumerate(rows):
            total = s.zero
            for j, x in enumerate(row):
                if not s.contains(x):
                    raise EntryOutOfRange(
                        f"{self.name}: entry ({i},{j}) = {x!r} not in carrier")
                if not s.in_unit_interval(x):
                    raise EntryOutOfRange(
                        f"{self.name}: entry ({i},{j}) = {x!r} has no complement")
                total = s.add(total, x)
            if not s.in_unit_interval(total):
                raise RowSumExceedsOne(
                    f"{self.name}: row {i} sums to {total!r}, which has no complement")
        return self._m(dom, cod, rows)


class SubStochTheory(MatrixTheory):
    """Substochastic rational matrices: probabilistic classical events."""

    def __init__(self, grid=4):
        super().__init__(kernel.RATIONALS01, grid=grid, name="substoch")
