"""Finite theories given by explicit tables.

A table theory lists a finite set of named base objects with sizes over a
semiring, and for every ordered pair of base objects an explicit set of
allowed event matrices.  Compound objects are tuples of base names (the
coproduct is concatenation, the empty tuple is the zero object); an event
between compound objects is a matrix assembled blockwise from allowed base
events, subject to the usual sub-unit row-sum condition.

The table must be closed: identities, zeros, the designated discard
effects, all composites and all merges of compatible listed events must
themselves be listed.  Closure is validated eagerly by
:func:`TableTheory.validate_tables`, so a malformed table fails at load
time with a located error instead of mid-check.
"""

from __future__ import annotations

from itertools import product

from .errors import BoundExceeded, NotEnumerable, TheoryFileError, ValidationError
from .theory import Morphism, Theory


class TableTheory(Theory):
    monoidal = False

    def __init__(self, name, semiring, sizes, unit_name, homs, discards,
                 tests=None, coarse_grain_table=None):
        """``sizes`` maps base-object names to positive sizes; ``homs`` maps
        ordered name pairs to lists of ``(event_name, payload)``; ``discards``
        maps each base name to the event name of its discard effect."""
        self.name = name
        self.semiring = semiring
        self.sizes = dict(sizes)
        self.unit_name = unit_name
        self.order = list(self.sizes)
        self.homs = {pair: list(entries) for pair, entries in homs.items()}
        self.discards = dict(discards)
        self.tests = dict(tests or {})
        self.coarse_grain_table = list(coarse_grain_table or [])
        self.tol = None
        self.validate_tables()

    # -- objects ----------------------------------------------------------
    def unit(self):
        return (self.unit_name,)

    def zero(self):
        return ()

    def coproduct(self, summands):
        return tuple(n for a in summands for n in a)

    def object_str(self, a):
        return "+".join(a) if a else "0"

    def object_size(self, a):
        return sum(self.sizes[n] for n in a)

    def probe_objects(self, bound):
        out = [()]
        singles = [(n,) for n in self.order if self.sizes[n] <= bound]
        out.extend(singles)
        for i, (x,) in enumerate(singles):
            for (y,) in singles[i:]:
                if self.sizes[x] + self.sizes[y] <= bound:
                    out.append((x, y))
        return out

    # -- matrix plumbing ---------------------------------------------------
    def _m(self, dom, cod, rows):
        return Morphism(self, dom, cod, tuple(tuple(r) for r in rows))

    def identity(self, a):
        s = self.semiring
        n = self.object_size(a)
        return self._m(a, a, [[s.one if i == j else s.zero for j in range(n)]
                              for i in range(n)])

    def _compose(self, g, f):
        s = self.semiring
        rows = []
        for i in range(self.object_size(f.dom)):
            row = []
            for k in range(self.object_size(g.cod)):
                acc = s.zero
                for j in range(self.object_size(f.cod)):
                    acc = s.add(acc, s.mul(f.payload[i][j], g.payload[j][k]))
                row.append(acc)
            rows.append(row)
        return self.validate_event(rows, f.dom, g.cod)

    def zero_morphism(self, a, b):
        s = self.semiring
        return self._m(a, b, [[s.zero] * self.object_size(b)
                              for _ in range(self.object_size(a))])

    def coprojection(self, summands, i):
        s = self.semiring
        total = self.object_size(self.coproduct(summands))
        offset = self.object_size(self.coproduct(summands[:i]))
        n = self.object_size(summands[i])
        return self._m(summands[i], self.coproduct(summands),
                       [[s.one if c == offset + r else s.zero
                         for c in range(total)] for r in range(n)])

    def cotuple(self, summands, fs):
        rows = []
        for f in fs:
            rows.extend(f.payload)
        cod = fs[0].cod if fs else ()
        return self._m(self.coproduct(summands), cod, rows)

    def discard(self, a):
        rows = []
        for n in a:
            rows.extend(self._discard_payload(n))
        return self._m(a, self.unit(), rows)

    def _discard_payload(self, base_name):
        ev = self.discards[base_name]
        for nm, payload in self.homs[(base_name, self.unit_name)]:
            if nm == ev:
                return payload
        raise TheoryFileError(f"discard event {ev!r} not found",
                              f"hom({base_name},{self.unit_name})")

    def equal(self, f, g):
        return f.dom == g.dom and f.cod == g.cod and f.payload == g.payload

    def payload_key(self, f):
        return f.payload

    # -- tests and merging -------------------------------------------------
    def try_pairing(self, events):
        s = self.semiring
        dom = events[0].dom
        rows = []
        for i in range(self.object_size(dom)):
            row = []
            for f in events:
                row.extend(f.payload[i])
            total = s.zero
            for x in row:
                total = s.add(total, x)
            if not s.in_unit_interval(total):
                return None
            rows.append(row)
        return self._m(dom, self.coproduct(tuple(f.cod for f in events)), rows)

    # -- enumeration -------------------------------------------------------
    def _base_payloads(self, x, y):
        if (x, y) not in self.homs:
            raise TheoryFileError(f"no hom table for ({x},{y})", f"hom({x},{y})")
        return [payload for _, payload in self.homs[(x, y)]]

    def hom_count(self, a, b):
        count = 1
        for x in a:
            for y in b:
                count *= len(self._base_payloads(x, y))
        return count

    def enumerate_hom(self, a, b, cap=None):
        count = self.hom_count(a, b)
        if cap is not None and count > cap:
            raise BoundExceeded(f"{self.name}: hom has {count} elements", count)
        s = self.semiring
        block_lists = [self._base_payloads(x, y) for x in a for y in b]
        out = []
        for choice in product(*block_lists):
            rows = []
            ok = True
            for ri, x in enumerate(a):
                for r in range(self.sizes[x]):
                    row = []
                    for ci, y in enumerate(b):
                        row.extend(choice[ri * len(b) + ci][r])
                    total = s.zero
                    for v in row:
                        total = s.add(total, v)
                    if not s.in_unit_interval(total):
                        ok = False
                        break
                    rows.append(row)
                if not ok:
                    break
            if ok:
                out.append(self._m(a, b, rows))
        return out

    def sample_hom(self, a, b, rng):
        all_homs = self.enumerate_hom(a, b)
        if not all_homs:
            raise NotEnumerable(f"{self.name}: empty hom set")
        return all_homs[rng.randrange(len(all_homs))]

    # -- validation --------------------------------------------------------
    def validate_event(self, payload, dom, cod):
        s = self.semiring
        rows = [tuple(r) for r in payload]
        n, m = self.object_size(dom), self.object_size(cod)
        if len(rows) != n or any(len(r) != m for r in rows):
            raise ValidationError(
                f"{self.name}: payload shape does not match "
                f"{self.object_str(dom)} -> {self.object_str(cod)}")
        for i, row in enumerate(rows):
            total = s.zero
            for j, v in enumerate(row):
                if not s.contains(v) or not s.in_unit_interval(v):
                    raise ValidationError(
                        f"{self.name}: entry ({i},{j}) = {v!r} out of range")
                total = s.add(total, v)
            if not s.in_unit_interval(total):
                raise ValidationError(
                    f"{self.name}: row {i} sums outside the unit interval")
        return self._m(dom, cod, rows)

    def _find(self, x, y, payload):
        for nm, p in self.homs[(x, y)]:
            if p == payload:
                return nm
        return None

    def validate_tables(self):
        s = self.semiring
        if self.unit_name not in self.sizes:
            raise TheoryFileError(f"unit object {self.unit_name!r} not declared",
                                  "objects")
        if self.sizes[self.unit_name] != 1:
            raise TheoryFileError("the unit object must have size 1", "objects")
        for (x, y), entries in self.homs.items():
            for nm, payload in entries:
                try:
                    self.validate_event(payload, (x,), (y,))
                except ValidationError as exc:
                    raise TheoryFileError(str(exc), f"event {nm!r}") from exc
        for x in self.sizes:
            for y in self.sizes:
                if (x, y) not in self.homs:
                    raise TheoryFileError(f"missing hom table for ({x},{y})",
                                          f"hom({x},{y})")
                zero = self.zero_morphism((x,), (y,)).payload
                if self._find(x, y, zero) is None:
                    raise TheoryFileError("zero event missing", f"hom({x},{y})")
            ident = self.identity((x,)).payload
            if self._find(x, x, ident) is None:
                raise TheoryFileError("identity event missing", f"hom({x},{x})")
            if x not in self.discards:
                raise TheoryFileError(f"no discard designated for {x!r}",
                                      "discards")
            self._discard_payload(x)
        # closure under composition
        for (x, y), fs in self.homs.items():
            for z in self.sizes:
                for fn, fp in fs:
                    f = self._m((x,), (y,), fp)
                    for gn, gp in self.homs[(y, z)]:
                        g = self._m((y,), (z,), gp)
                        comp = self._compose(g, f)
                        if self._find(x, z, comp.payload) is None:
                            raise TheoryFileError(
                                f"composite {gn!r} . {fn!r} not listed",
                                f"hom({x},{z})")
        # closure under merging of compatible events
        for (x, y), fs in self.homs.items():
            for fn, fp in fs:
                f = self._m((x,), (y,), fp)
                for gn, gp in fs:
                    g = self._m((x,), (y,), gp)
                    h = self.try_pairing([f, g])
                    if h is None:
                        continue
                    merged = tuple(
                        tuple(s.add(fp[i][j], gp[i][j]) for j in range(len(fp[i])))
                        for i in range(len(fp)))
                    if self._find(x, y, merged) is None:
                        raise TheoryFileError(
                            f"merge {fn!r} v {gn!r} not listed", f"hom({x},{y})")
        # declared tests must form partial tests
        by_name = {}
        for (x, y), entries in self.homs.items():
            for nm, payload in entries:
                by_name.setdefault(nm, []).append(self._m((x,), (y,), payload))
        for test_name, event_names in self.tests.items():
            events = []
            for nm in event_names:
                if nm not in by_name or len(by_name[nm]) != 1:
                    raise TheoryFileError(
                        f"test refers to unknown or ambiguous event {nm!r}",
                        f"test {test_name!r}")
                events.append(by_name[nm][0])
            if self.try_pairing(events) is None:
                raise TheoryFileError("events do not form a partial test",
                                      f"test {test_name!r}")
        # declared coarse-grain identities must agree with matrix merging
        for fn, gn, hn in self.coarse_grain_table:
            for nm in (fn, gn, hn):
                if nm not in by_name or len(by_name[nm]) != 1:
                    raise TheoryFileError(
                        f"coarse-grain entry names unknown event {nm!r}",
                        "coarse_grain")
            f, g, h = by_name[fn][0], by_name[gn][0], by_name[hn][0]
            if self.try_pairing([f, g]) is None:
                raise TheoryFileError(
                    f"{fn!r} and {gn!r} are not compatible", "coarse_grain")
            merged = tuple(
                tuple(s.add(f.payload[i][j], g.payload[i][j])
                      for j in range(len(f.payload[i])))
                for i in range(len(f.payload)))
            if merged != h.payload:
                raise TheoryFileError(
                    f"{fn!r} v {gn!r} does not equal {hn!r}", "coarse_grain")
