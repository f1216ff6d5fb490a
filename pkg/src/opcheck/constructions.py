"""Category-level transformers: total subcategories, the partial-morphism
category, the direct-sum completion, quotients, and extension of functors.

Each construction is a pure wrapper around one or two existing theories.
``TotalOf`` restricts a theory to its total events; ``ParTheory`` rebuilds a
partial-event theory out of a total one (morphisms into ``B + I``); the two
are mutually inverse up to the round-trip checked by :func:`roundtrip_check`.
``PlusTheory`` freely adds direct sums; ``QuotientTheory`` identifies events
indistinguishable on state/effect probes; :func:`extension_functor` lifts a
theory morphism to the completion.
"""

from __future__ import annotations

import random
from itertools import product

from . import ops
from .errors import (
    BoundExceeded,
    Incompatible,
    NoComplement,
    NotAPartialTest,
    NotATheoryMorphism,
    NotEnumerable,
    NonTotalClosure,
    ValidationError,
)
from .theory import Morphism, Theory, TotalCategory


# ---------------------------------------------------------------------------
# Total subcategory

class TotalOf(TotalCategory):
    """The subcategory of total events of a partial-form theory.

    Morphisms are plain base morphisms (membership is the predicate
    ``is_total``); the trivial object becomes terminal with ``discard`` as
    the unique map into it.
    """

    def __init__(self, base):
        self.base = base
        self.name = f"total({base.name})"

    def terminal(self):
        return self.base.unit()

    def initial(self):
        return self.base.zero()

    def bang(self, a):
        return self.base.discard(a)

    def coproduct(self, summands):
        return self.base.coproduct(summands)

    def coprojection(self, summands, i):
        return self.base.coprojection(summands, i)

    def cotuple(self, summands, fs):
        return self.base.cotuple(summands, fs)

    def identity(self, a):
        return self.base.identity(a)

    def compose(self, g, f):
        h = self.base.compose(g, f)
        if ops.is_total(f) and ops.is_total(g) and not ops.is_total(h):
            raise NonTotalClosure(
                f"{self.base.name}: composite of total events is not total")
        return h

    def equal(self, f, g):
        return self.base.equal(f, g)

    def payload_key(self, f):
        return self.base.payload_key(f)

    def enumerate_hom(self, a, b, cap=None):
        return [f for f in self.base.enumerate_hom(a, b, cap) if ops.is_total(f)]

    def sample_hom(self, a, b, rng, attempts=500):
        for _ in range(attempts):
            f = self.base.sample_hom(a, b, rng)
            if ops.is_total(f):
                return f
        raise NotEnumerable(f"{self.name}: rejection sampling found no total event")

    def probe_objects(self, bound):
        return self.base.probe_objects(bound)


def total_of(base):
    return TotalOf(base)


# ---------------------------------------------------------------------------
# Partial morphisms over a total category

class ParTheory(Theory):
    """Partial events over a total category: a morphism A to B is a total
    morphism A to B + I.  Composition grafts the second summand (the
    "undefined" branch) along, identities and discarding are the evident
    coprojection composites.
    """

    def __init__(self, total):
        if not isinstance(total, TotalOf):
            raise TypeError("ParTheory is built over a TotalOf view")
        self.total = total
        self.base = total.base
        self.name = f"par({total.name})"

    # -- objects -----------------------------------------------------------
    def unit(self):
        return self.base.unit()

    def zero(self):
        return self.base.zero()

    def coproduct(self, summands):
        return self.base.coproduct(summands)

    def object_str(self, a):
        return self.base.object_str(a)

    def object_size(self, a):
        return self.base.object_size(a)

    def probe_objects(self, bound):
        return self.base.probe_objects(bound)

    # -- morphisms ---------------------------------------------------------
    def _lift(self, b):
        return self.base.coproduct((b, self.base.unit()))

    def _wrap(self, dom, cod, payload):
        return Morphism(self, dom, cod, payload)

    def identity(self, a):
        return self._wrap(a, a, self.base.coprojection((a, self.base.unit()), 0))

    def _compose(self, g, f):
        b = self.base
        unit = b.unit()
        kappa2 = b.coprojection((g.cod, unit), 1)
        step = b.cotuple((f.cod, unit), [g.payload, kappa2])
        return self._wrap(f.dom, g.cod, b.compose(step, f.payload))

    def zero_morphism(self, a, b):
        base = self.base
        return self._wrap(a, b, base.compose(
            base.coprojection((b, base.unit()), 1), base.discard(a)))

    def coprojection(self, summands, i):
        base = self.base
        total = base.coproduct(summands)
        return self._wrap(summands[i], total, base.compose(
            base.coprojection((total, base.unit()), 0),
            base.coprojection(summands, i)))

    def cotuple(self, summands, fs):
        base = self.base
        return self._wrap(base.coproduct(summands), fs[0].cod,
                          base.cotuple(summands, [f.payload for f in fs]))

    def discard(self, a):
        base = self.base
        unit = base.unit()
        return self._wrap(a, unit, base.compose(
            base.coprojection((unit, unit), 0), base.discard(a)))

    def equal(self, f, g):
        return (f.dom == g.dom and f.cod == g.cod
                and self.base.equal(f.payload, g.payload))

    def payload_key(self, f):
        return self.base.payload_key(f.payload)

    # -- tests and merging -------------------------------------------------
    def to_event(self, f):
        """The base event underlying a partial morphism (drop the + I branch)."""
        base = self.base
        proj = ops.projection(base, (f.cod, base.unit()), 0)
        return base.compose(proj, f.payload)

    def from_event(self, dom, cod, event):
        """Wrap a base event as a partial morphism via its total extension."""
        return self._wrap(dom, cod, ops.total_extension(event))

    def try_pairing(self, events):
        base = self.base
        down = [self.to_event(f) for f in events]
        p = base.try_pairing(down)
        if p is None:
            return None
        try:
            ext = ops.total_extension(p)
        except (NoComplement, NotAPartialTest):
            return None
        return self._wrap(events[0].dom,
                          self.coproduct(tuple(f.cod for f in events)), ext)

    # -- enumeration -------------------------------------------------------
    def enumerate_hom(self, a, b, cap=None):
        return [self._wrap(a, b, m)
                for m in self.total.enumerate_hom(a, self._lift(b), cap)]

    def hom_count(self, a, b):
        return None

    def sample_hom(self, a, b, rng):
        return self.from_event(a, b, self.base.sample_hom(a, b, rng))

    # -- validation --------------------------------------------------------
    def validate_event(self, payload, dom, cod):
        if not isinstance(payload, Morphism) or payload.theory is not self.base:
            raise ValidationError(f"{self.name}: payload must be a base morphism")
        if payload.dom != dom or payload.cod != self._lift(cod):
            raise ValidationError(f"{self.name}: payload signature mismatch")
        if not ops.is_total(payload):
            raise ValidationError(f"{self.name}: payload must be total")
        return self._wrap(dom, cod, payload)


def par(total):
    return ParTheory(total)


def par_compose(p, g, f):
    return p.compose(g, f)


# ---------------------------------------------------------------------------
# Round-trip between the two presentations

def roundtrip_check(theory, bound=2, cap=None):
    """Verify that events of the base and total morphisms into ``B + I`` are
    in bijection on every probe homset, and that the bijection is the
    total-extension / first-projection pair.

    ``theory`` may be a partial-form theory or a :class:`TotalOf` view (in
    which case its base is checked).  The verdict dictionary carries every
    mismatch and every homset skipped for size.
    """
    if isinstance(theory, TotalOf):
        theory = theory.base
    base = theory
    unit = base.unit()
    failures = []
    skipped = []
    pairs = 0
    morphisms = 0
    for a in base.probe_objects(bound):
        for b in base.probe_objects(bound):
            lifted = base.coproduct((b, unit))
            try:
                events = base.enumerate_hom(a, b, cap)
                totals = [h for h in base.enumerate_hom(a, lifted, cap)
                          if ops.is_total(h)]
            except (NotEnumerable, BoundExceeded) as exc:
                skipped.append({"dom": base.object_str(a),
                                "cod": base.object_str(b),
                                "reason": str(exc)})
                continue
            pairs += 1
            morphisms += len(events)
            proj = ops.projection(base, (b, unit), 0)
            seen = set()
            for f in events:
                try:
                    ext = ops.total_extension(f)
                except (NoComplement, NotAPartialTest) as exc:
                    failures.append({"kind": "no-total-extension",
                                     "event": repr(f), "reason": str(exc)})
                    continue
                back = base.compose(proj, ext)
                if not base.equal(back, f):
                    failures.append({"kind": "projection-mismatch",
                                     "event": repr(f), "roundtrip": repr(back)})
                try:
                    seen.add(base.morphism_key(ext))
                except NotEnumerable:
                    seen.add(len(seen))
            if len(seen) != len(events):
                failures.append({"kind": "not-injective",
                                 "dom": base.object_str(a),
                                 "cod": base.object_str(b)})
            for t in totals:
                down = base.compose(proj, t)
                try:
                    again = ops.total_extension(down)
                except (NoComplement, NotAPartialTest) as exc:
                    failures.append({"kind": "no-total-extension",
                                     "event": repr(down), "reason": str(exc)})
                    continue
                if not base.equal(again, t):
                    failures.append({"kind": "extension-mismatch",
                                     "total": repr(t), "rebuilt": repr(again)})
    return {"ok": not failures, "pairs": pairs, "morphisms": morphisms,
            "failures": failures, "skipped": skipped}


# ---------------------------------------------------------------------------
# Direct-sum completion

class PlusTheory(Theory):
    """The free direct-sum completion of a base theory.

    Objects are finite tuples of base objects; a morphism from X to Y is a
    matrix of base events whose per-source-index families are partial tests.
    The payload stores the matrix together with the per-family pairing
    witnesses so composition never re-derives compatibility.
    """

    def __init__(self, base):
        self.base = base
        self.name = f"plus({base.name})"
        self.monoidal = base.monoidal
        self._row_cache = {}

    # -- objects -----------------------------------------------------------
    def unit(self):
        return (self.base.unit(),)

    def zero(self):
        return ()

    def coproduct(self, summands):
        return tuple(x for s in summands for x in s)

    def object_str(self, a):
        return "<" + ", ".join(self.base.object_str(x) for x in a) + ">"

    def object_size(self, a):
        return sum(self.base.object_size(x) for x in a)

    def probe_objects(self, bound):
        comps = [o for o in self.base.probe_objects(bound)
                 if self.base.object_size(o) >= 1]
        out = [()]
        frontier = [((), 0)]
        while frontier:
            prefix, size = frontier.pop(0)
            for o in comps:
                s = size + self.base.object_size(o)
                if s <= bound:
                    tup = prefix + (o,)
                    out.append(tup)
                    frontier.append((tup, s))
        return out

    # -- morphisms ---------------------------------------------------------
    def _make(self, dom, cod, rows):
        base = self.base
        rows = tuple(tuple(r) for r in rows)
        witnesses = []
        for i, row in enumerate(rows):
            if not cod:
                witnesses.append(None)
                continue
            w = base.try_pairing(list(row))
            if w is None:
                raise NotAPartialTest(
                    f"{self.name}: outcome family of source index {i} is not a partial test")
            witnesses.append(w)
        return Morphism(self, dom, cod, (rows, tuple(witnesses)))

    def rows(self, f):
        return f.payload[0]

    def identity(self, a):
        base = self.base
        rows = [[base.identity(x) if i == j else base.zero_morphism(x, y)
                 for j, y in enumerate(a)] for i, x in enumerate(a)]
        return self._make(a, a, rows)

    def _compose(self, g, f):
        base = self.base
        frows, grows = self.rows(f), self.rows(g)
        rows = []
        for i, x in enumerate(f.dom):
            row = []
            for k, z in enumerate(g.cod):
                parts = [base.compose(grows[j][k], frows[i][j])
                         for j in range(len(f.cod))]
                row.append(ops.coarse_grain_all(base, x, z, parts))
            rows.append(row)
        return self._make(f.dom, g.cod, rows)

    def zero_morphism(self, a, b):
        base = self.base
        return self._make(a, b, [[base.zero_morphism(x, y) for y in b] for x in a])

    def coprojection(self, summands, i):
        base = self.base
        total = self.coproduct(summands)
        offset = sum(len(s) for s in summands[:i])
        src = summands[i]
        rows = [[base.identity(x) if j == offset + r else base.zero_morphism(x, y)
                 for j, y in enumerate(total)] for r, x in enumerate(src)]
        return self._make(src, total, rows)

    def cotuple(self, summands, fs):
        rows = []
        for f in fs:
            rows.extend(self.rows(f))
        return self._make(self.coproduct(summands), fs[0].cod if fs else (), rows)

    def discard(self, a):
        return self._make(a, self.unit(), [[self.base.discard(x)] for x in a])

    def equal(self, f, g):
        if f.dom != g.dom or f.cod != g.cod:
            return False
        base = self.base
        for rf, rg in zip(self.rows(f), self.rows(g)):
            for ef, eg in zip(rf, rg):
                if not base.equal(ef, eg):
                    return False
        return True

    def payload_key(self, f):
        base = self.base
        return tuple(tuple(base.payload_key(e) for e in row)
                     for row in self.rows(f))

    # -- tests and merging -------------------------------------------------
    def try_pairing(self, events):
        rows = []
        for i in range(len(events[0].dom)):
            row = []
            for f in events:
                row.extend(self.rows(f)[i])
            rows.append(row)
        cod = self.coproduct(tuple(f.cod for f in events))
        try:
            return self._make(events[0].dom, cod, rows)
        except NotAPartialTest:
            return None

    def effect_complements(self, e):
        base = self.base
        per_row = [base.effect_complements(self.rows(e)[i][0])
                   for i in range(len(e.dom))]
        if any(not c for c in per_row):
            return []
        return [self._make(e.dom, self.unit(), [[c] for c in combo])
                for combo in product(*per_row)]

    # -- enumeration -------------------------------------------------------
    def _row_options(self, x, cod, cap):
        key = (x, cod)
        if key not in self._row_cache:
            base = self.base
            if not cod:
                self._row_cache[key] = [()]
                return self._row_cache[key]
            per_entry = [base.enumerate_hom(x, y, cap) for y in cod]
            options = []
            for combo in product(*per_entry):
                if base.try_pairing(list(combo)) is not None:
                    options.append(combo)
            self._row_cache[key] = options
        return self._row_cache[key]

    def enumerate_hom(self, a, b, cap=None):
        counts = 1
        for x in a:
            counts *= len(self._row_options(x, b, cap))
        if cap is not None and counts > cap:
            raise BoundExceeded(f"{self.name}: hom has {counts} elements", counts)
        options = [self._row_options(x, b, cap) for x in a]
        return [self._make(a, b, combo) for combo in product(*options)]

    def sample_hom(self, a, b, rng):
        base = self.base
        rows = []
        for x in a:
            if not b:
                rows.append(())
                continue
            if len(b) == 1:
                rows.append((base.sample_hom(x, b[0], rng),))
                continue
            h = base.sample_hom(x, base.coproduct(b), rng)
            rows.append(tuple(base.compose(ops.projection(base, b, j), h)
                              for j in range(len(b))))
        return self._make(a, b, rows)

    # -- monoidal structure ------------------------------------------------
    def tensor_obj(self, a, b):
        base = self.base
        return tuple(base.tensor_obj(x, y) for x in a for y in b)

    def tensor(self, f, g):
        base = self.base
        frows, grows = self.rows(f), self.rows(g)
        rows = []
        for i1 in range(len(f.dom)):
            for i2 in range(len(g.dom)):
                row = []
                for j1 in range(len(f.cod)):
                    for j2 in range(len(g.cod)):
                        row.append(base.tensor(frows[i1][j1], grows[i2][j2]))
                rows.append(row)
        return self._make(self.tensor_obj(f.dom, g.dom),
                          self.tensor_obj(f.cod, g.cod), rows)

    def _unitor(self, a, builder):
        base = self.base
        src = self.tensor_obj(a, self.unit())
        rows = [[builder(x) if i == j else base.zero_morphism(src[i], a[j])
                 for j in range(len(a))] for i, x in enumerate(a)]
        return self._make(src, a, rows)

    def unitor_right(self, a):
        return self._unitor(a, self.base.unitor_right)

    def unitor_left(self, a):
        base = self.base
        src = self.tensor_obj(self.unit(), a)
        rows = [[base.unitor_left(a[j]) if i == j else base.zero_morphism(src[i], a[j])
                 for j in range(len(a))] for i in range(len(src))]
        return self._make(src, a, rows)

    def unitor_right_inv(self, a):
        base = self.base
        cod = self.tensor_obj(a, self.unit())
        rows = [[base.unitor_right_inv(x) if i == j else base.zero_morphism(x, cod[j])
                 for j in range(len(cod))] for i, x in enumerate(a)]
        return self._make(a, cod, rows)

    def unitor_left_inv(self, a):
        base = self.base
        cod = self.tensor_obj(self.unit(), a)
        rows = [[base.unitor_left_inv(x) if i == j else base.zero_morphism(x, cod[j])
                 for j in range(len(cod))] for i, x in enumerate(a)]
        return self._make(a, cod, rows)

    # -- validation --------------------------------------------------------
    def validate_event(self, payload, dom, cod):
        base = self.base
        rows = payload[0] if (isinstance(payload, tuple) and len(payload) == 2
                              and payload and isinstance(payload[0], tuple)
                              and (not payload[0] or isinstance(payload[0][0], tuple))) else payload
        rows = tuple(tuple(r) for r in rows)
        if len(rows) != len(dom):
            raise ValidationError(f"{self.name}: expected {len(dom)} rows")
        for i, (x, row) in enumerate(zip(dom, rows)):
            if len(row) != len(cod):
                raise ValidationError(f"{self.name}: row {i} has wrong width")
            for e, y in zip(row, cod):
                if e.theory is not base or e.dom != x or e.cod != y:
                    raise ValidationError(
                        f"{self.name}: entry ({i}) is not a base event of the right signature")
        return self._make(dom, cod, rows)

    def singleton(self, f):
        """Embed a base event as a one-by-one matrix (the unit of the completion)."""
        return self._make((f.dom,), (f.cod,), ((f,),))


def plus_completion(theta):
    return PlusTheory(theta)


# ---------------------------------------------------------------------------
# Direct sums

def direct_sum_verify(theory, summands, candidate=None, coprojections=None,
                      projections=None):
    """Check the direct-sum equations for a candidate object.

    With no candidate supplied the canonical coproduct with its
    coprojections and projections is used.  The verdict names each failed
    equation; ``ok`` is the conjunction.
    """
    summands = tuple(summands)
    if candidate is None:
        candidate = theory.coproduct(summands)
    if coprojections is None:
        coprojections = [theory.coprojection(summands, i)
                         for i in range(len(summands))]
    if projections is None:
        projections = [ops.projection(theory, summands, i)
                       for i in range(len(summands))]
    failures = []
    if theory.try_pairing(projections) is None:
        failures.append("projections-form-test")
    for y, p in enumerate(projections):
        for x, k in enumerate(coprojections):
            got = theory.compose(p, k)
            want = (theory.identity(summands[x]) if x == y
                    else theory.zero_morphism(summands[x], summands[y]))
            if not theory.equal(got, want):
                failures.append(f"projection-{y}-after-injection-{x}")
    try:
        merged = ops.coarse_grain_all(
            theory, candidate, candidate,
            [theory.compose(k, p) for k, p in zip(coprojections, projections)])
        if not theory.equal(merged, theory.identity(candidate)):
            failures.append("sum-of-injections-not-identity")
    except (Incompatible, NotAPartialTest):
        failures.append("sum-of-injections-incompatible")
    return {"ok": not failures, "failures": failures,
            "candidate": theory.object_str(candidate)}


def search_direct_sum(theory, summands, bound):
    """Look for a direct sum of ``summands`` among objects of size up to
    ``bound``; verdicts for absence are always "absent-under-bound".

    Theories with an analytic decision procedure expose
    ``direct_sum_decision``; otherwise only the canonical coproduct
    candidate is examined.
    """
    summands = tuple(summands)
    decision = getattr(theory, "direct_sum_decision", None)
    candidates = []
    present = False
    if decision is not None:
        for candidate in theory.probe_objects(bound):
            exists, reason = decision(summands, candidate)
            candidates.append({"candidate": theory.object_str(candidate),
                               "exists": exists, "reason": reason})
            present = present or exists
    else:
        verdict = direct_sum_verify(theory, summands)
        candidates.append({"candidate": verdict["candidate"],
                           "exists": verdict["ok"],
                           "reason": ", ".join(verdict["failures"]) or "verified"})
        present = verdict["ok"]
    return {"verdict": "present" if present else "absent-under-bound",
            "bound": bound, "candidates": candidates}


# ---------------------------------------------------------------------------
# Quotient by operational indistinguishability

def probe_scalar_key(theory, s):
    """A hashable key for a scalar: exact payload key when available, a
    rounded numeric fingerprint for tolerance-based theories."""
    try:
        return theory.payload_key(s)
    except NotEnumerable:
        import numpy as np
        parts = [np.asarray(b, dtype=complex).ravel()
                 for row in s.payload for b in row]
        if not parts:
            return ()
        flat = np.concatenate(parts)
        return tuple((round(z.real, 6), round(z.imag, 6)) for z in flat)


class QuotientTheory(Theory):
    """Identify events whose state/effect probe statistics coincide.

    Morphisms carry a representative base event; equality compares probe
    signatures, and every operation delegates to the base and re-canonicalizes
    the result.  In monoidal mode the probes range over ancilla-extended
    states and effects.
    """

    def __init__(self, base, bound=2, cap=20000, samples=64, seed=0,
                 monoidal=False, ancilla_bound=2):
        self.base = base
        self.bound = bound
        self.cap = cap
        self.samples = samples
        self.seed = seed
        self.monoidal_probes = monoidal and base.monoidal
        self.ancilla_bound = ancilla_bound
        self.name = f"quotient({base.name})"
        self.monoidal = False
        self.tol = base.tol
        self._probe_cache = {}

    # -- objects -----------------------------------------------------------
    def unit(self):
        return self.base.unit()

    def zero(self):
        return self.base.zero()

    def coproduct(self, summands):
        return self.base.coproduct(summands)

    def object_str(self, a):
        return self.base.object_str(a)

    def object_size(self, a):
        return self.base.object_size(a)

    def probe_objects(self, bound):
        return self.base.probe_objects(bound)

    # -- probes ------------------------------------------------------------
    def _hom_probe(self, a, b, tag):
        key = (tag, a, b)
        if key not in self._probe_cache:
            base = self.base
            try:
                out = base.enumerate_hom(a, b, self.cap)
            except (NotEnumerable, BoundExceeded):
                rng = random.Random(f"{self.seed}:{tag}:{base.object_str(a)}:{base.object_str(b)}")
                out = [base.sample_hom(a, b, rng) for _ in range(self.samples)]
            self._probe_cache[key] = out
        return self._probe_cache[key]

    def _ancillas(self):
        if not self.monoidal_probes:
            return [None]
        base = self.base
        out = [None]
        for c in base.probe_objects(self.ancilla_bound):
            if 1 <= base.object_size(c):
                out.append(c)
        return out

    def _skey(self, s):
        return probe_scalar_key(self.base, s)

    def signature(self, f):
        base = self.base
        unit = base.unit()
        out = []
        for c in self._ancillas():
            if c is None:
                dom, cod, probe = f.dom, f.cod, f
            else:
                dom = base.tensor_obj(f.dom, c)
                cod = base.tensor_obj(f.cod, c)
                probe = base.tensor(f, base.identity(c))
            for omega in self._hom_probe(unit, dom, "state"):
                mid = base.compose(probe, omega)
                for e in self._hom_probe(cod, unit, "effect"):
                    out.append(self._skey(base.compose(e, mid)))
        return tuple(out)

    # -- morphisms ---------------------------------------------------------
    def _wrap(self, f):
        return Morphism(self, f.dom, f.cod, self.canonical_representative(f))

    def canonical_representative(self, f):
        try:
            homs = self.base.enumerate_hom(f.dom, f.cod, self.cap)
        except (NotEnumerable, BoundExceeded):
            return f
        sig = self.signature(f)
        for h in homs:
            if self.signature(h) == sig:
                return h
        return f

    def identity(self, a):
        return self._wrap(self.base.identity(a))

    def _compose(self, g, f):
        return self._wrap(self.base.compose(g.payload, f.payload))

    def zero_morphism(self, a, b):
        return self._wrap(self.base.zero_morphism(a, b))

    def coprojection(self, summands, i):
        return self._wrap(self.base.coprojection(summands, i))

    def cotuple(self, summands, fs):
        return self._wrap(self.base.cotuple(summands, [f.payload for f in fs]))

    def discard(self, a):
        return self._wrap(self.base.discard(a))

    def equal(self, f, g):
        if f.dom != g.dom or f.cod != g.cod:
            return False
        return self.signature(f.payload) == self.signature(g.payload)

    def try_pairing(self, events):
        h = self.base.try_pairing([f.payload for f in events])
        if h is None:
            return None
        return self._wrap(h)

    def effect_complements(self, e):
        out = []
        seen = []
        for c in self.base.effect_complements(e.payload):
            w = self._wrap(c)
            if not any(self.equal(w, prev) for prev in seen):
                seen.append(w)
                out.append(w)
        return out

    def enumerate_hom(self, a, b, cap=None):
        out = []
        sigs = set()
        for h in self.base.enumerate_hom(a, b, cap):
            sig = self.signature(h)
            if sig not in sigs:
                sigs.add(sig)
                out.append(Morphism(self, a, b, h))
        return out

    def sample_hom(self, a, b, rng):
        return self._wrap(self.base.sample_hom(a, b, rng))

    def validate_event(self, payload, dom, cod):
        return self._wrap(self.base.validate_event(payload, dom, cod))

    # -- reporting ---------------------------------------------------------
    def classes(self, a, b):
        """Probe homset partitioned into equivalence classes (signature order)."""
        groups = {}
        for h in self.base.enumerate_hom(a, b, self.cap):
            groups.setdefault(self.signature(h), []).append(h)
        return groups

    def class_counts(self, a, b):
        return sorted((len(v) for v in self.classes(a, b).values()), reverse=True)

    def is_separated(self, a, b):
        """Representatives of distinct classes stay distinguishable by probes."""
        reps = [v[0] for v in self.classes(a, b).values()]
        sigs = [self.signature(r) for r in reps]
        return len(set(sigs)) == len(sigs)


def quotient(theory, bound=2, cap=20000, samples=64, seed=0, monoidal=False,
             ancilla_bound=2):
    return QuotientTheory(theory, bound=bound, cap=cap, samples=samples,
                          seed=seed, monoidal=monoidal,
                          ancilla_bound=ancilla_bound)


# ---------------------------------------------------------------------------
# Extension of theory morphisms to the completion

class ExtendedFunctor:
    """The lift of a validated theory morphism to the direct-sum completion."""

    def __init__(self, source_plus, target, object_map, morphism_map):
        self.source_plus = source_plus
        self.target = target
        self.object_map = object_map
        self.morphism_map = morphism_map

    def apply_obj(self, x):
        return self.target.coproduct(tuple(self.object_map(o) for o in x))

    def apply(self, m):
        tgt = self.target
        src = self.source_plus
        rows = src.rows(m)
        dom_summands = tuple(self.object_map(o) for o in m.dom)
        cod_summands = tuple(self.object_map(o) for o in m.cod)
        dom = tgt.coproduct(dom_summands)
        cod = tgt.coproduct(cod_summands)
        parts = []
        for i in range(len(m.dom)):
            proj = ops.projection(tgt, dom_summands, i)
            for j in range(len(m.cod)):
                image = self.morphism_map(rows[i][j])
                kappa = tgt.coprojection(cod_summands, j)
                parts.append(tgt.compose(kappa, tgt.compose(image, proj)))
        out = ops.coarse_grain_all(tgt, dom, cod, parts)
        for i in range(len(m.dom)):
            for j in range(len(m.cod)):
                got = tgt.compose(ops.projection(tgt, cod_summands, j),
                                  tgt.compose(out, tgt.coprojection(dom_summands, i)))
                if not tgt.equal(got, self.morphism_map(rows[i][j])):
                    raise NotATheoryMorphism(
                        f"extension does not restrict to entry ({i},{j})")
        return out


def extension_functor(source, target, object_map, morphism_map, *, bound=2,
                      seed=0, samples=32, cap=2000):
    """Validate a theory morphism on probes and lift it to the completion.

    Raises :class:`NotATheoryMorphism` with a description of the violated
    preservation property; on success returns an :class:`ExtendedFunctor`
    acting on the source completion.
    """
    if object_map(source.unit()) != target.unit():
        raise NotATheoryMorphism("the trivial system is not preserved")
    if object_map(source.zero()) != target.zero():
        raise NotATheoryMorphism("the zero system is not preserved")
    probes = [o for o in source.probe_objects(bound)]
    for a in probes:
        fa = object_map(a)
        if not target.equal(morphism_map(source.identity(a)), target.identity(fa)):
            raise NotATheoryMorphism(
                f"identity on {source.object_str(a)} is not preserved")
        if not target.equal(morphism_map(source.discard(a)), target.discard(fa)):
            raise NotATheoryMorphism(
                f"discarding on {source.object_str(a)} is not preserved")
        for b in probes:
            fb = object_map(b)
            if not target.equal(morphism_map(source.zero_morphism(a, b)),
                                target.zero_morphism(fa, fb)):
                raise NotATheoryMorphism("a zero event is not preserved")
            rng = random.Random(f"{seed}:ext:{source.object_str(a)}:{source.object_str(b)}")
            try:
                events = source.enumerate_hom(a, b, cap)
            except (NotEnumerable, BoundExceeded):
                events = [source.sample_hom(a, b, rng) for _ in range(samples)]
            for _ in range(samples):
                if len(events) < 2:
                    break
                f = events[rng.randrange(len(events))]
                g = events[rng.randrange(len(events))]
                if source.try_pairing([f, g]) is None:
                    continue
                ff, fg = morphism_map(f), morphism_map(g)
                if target.try_pairing([ff, fg]) is None:
                    raise NotATheoryMorphism(
                        "a partial test maps to a family with no pairing")
                merged = morphism_map(ops.coarse_grain(f, g))
                if not target.equal(merged, ops.coarse_grain(ff, fg)):
                    raise NotATheoryMorphism("coarse-graining is not preserved")
    return ExtendedFunctor(PlusTheory(source), target, object_map, morphism_map)
