"""The verification engine: evaluates the structural conditions, axioms and
derived lemmas against a theory on a bounded probe set, and classifies it.

Every check item quantifies over probe objects of size up to the configured
bound.  Homsets are enumerated completely when possible; homsets whose size
passes the cap are skipped and recorded, and non-enumerable homsets are
sampled with a per-check deterministic seed.  A verdict is "holds-exhaustive"
only when no sampling was involved (the skipped list is part of the report),
"holds-sampled(n)" when it rests on n sampled instances, "fails" with a
replayable witness on the first counterexample in enumeration order, and
"inconclusive" when the theory lacks the structure the check needs.

For tolerance-based theories a failed comparison is retried at ten times the
tolerance and only counts as a counterexample if it still fails; uses of
the relaxed comparison are recorded on the check.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import ops
from .constructions import direct_sum_verify, probe_scalar_key
from .errors import (
    BoundExceeded,
    Incompatible,
    NoComplement,
    NonUniqueComplement,
    NotAPartialTest,
    NotAvailable,
    NotEnumerable,
    NotMonoidal,
    OpcheckError,
)

DEFAULT_CAP = 20000
DEFAULT_SAMPLES = 100


@dataclass(frozen=True)
class ProbeConfig:
    """Bounds, seeds and tolerances governing one verification run.

    Identical config and seed give an identical report body.
    """

    bound: int = 2
    cap: int = DEFAULT_CAP
    grid: int | None = None
    samples: int = DEFAULT_SAMPLES
    seed: int = 0
    tol: float = 1e-9
    ancilla_bound: int = 2

    def __post_init__(self):
        if self.bound < 0 or self.cap <= 0 or self.samples <= 0:
            raise ValueError("probe bounds must be positive")

    def to_json(self):
        return {"bound": self.bound, "cap": self.cap, "grid": self.grid,
                "samples": self.samples, "seed": self.seed, "tol": self.tol,
                "ancilla_bound": self.ancilla_bound}


class Witness:
    """A replayable counterexample: named parts, the violated equation, and
    the two evaluated sides.  ``replay()`` re-evaluates the violation."""

    def __init__(self, equation, parts, lhs, rhs, replay=None):
        self.equation = equation
        self.parts = dict(parts)
        self.lhs = lhs
        self.rhs = rhs
        self._replay = replay

    def replay(self):
        """True when the recorded violation still occurs."""
        if self._replay is None:
            return True
        return bool(self._replay())

    def to_json(self):
        return {"equation": self.equation, "parts": self.parts,
                "lhs": self.lhs, "rhs": self.rhs}

    def __repr__(self):
        return f"Witness({self.equation}: {self.lhs} != {self.rhs})"


class CheckResult:
    def __init__(self, check_id, paper_ref, status, *, samples=0, witness=None,
                 reason=None, skipped=(), instances=0, notes=()):
        self.id = check_id
        self.paper_ref = paper_ref
        self.status = status
        self.samples = samples
        self.witness = witness
        self.reason = reason
        self.skipped = list(skipped)
        self.instances = instances
        self.notes = list(notes)

    @property
    def verdict(self):
        if self.status == "holds-exhaustive":
            return "holds-exhaustive"
        if self.status == "holds-sampled":
            return f"holds-sampled({self.samples})"
        if self.status == "fails":
            return "fails"
        return f"inconclusive({self.reason})"

    @property
    def ok(self):
        return self.status in ("holds-exhaustive", "holds-sampled")

    def to_json(self):
        out = {"id": self.id, "paper_ref": self.paper_ref,
               "verdict": self.verdict, "instances": self.instances}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.skipped:
            out["skipped"] = self.skipped
        if self.notes:
            out["notes"] = self.notes
        return out


class CheckReport:
    def __init__(self, theory_name, config, results, flags):
        self.theory_name = theory_name
        self.config = config
        self.results = results
        self.flags = flags

    def result(self, check_id):
        for r in self.results:
            if r.id == check_id:
                return r
        raise KeyError(check_id)

    def to_json(self):
        return {"format": "opcheck/1", "theory": self.theory_name,
                "config": self.config.to_json(),
                "checks": [r.to_json() for r in self.results],
                "flags": self.flags}

    def render_text(self, color=False):
        def paint(text, code):
            return f"\x1b[{code}m{text}\x1b[0m" if color else text
        lines = [f"theory: {self.theory_name}",
                 f"config: {self.config.to_json()}", ""]
        for r in self.results:
            mark = paint("ok", "32") if r.ok else (
                paint("FAIL", "31") if r.status == "fails" else paint("??", "33"))
            lines.append(f"  [{mark}] {r.id}: {r.verdict}")
            if r.witness is not None:
                lines.append(f"        {r.witness.equation}")
                lines.append(f"        lhs={r.witness.lhs} rhs={r.witness.rhs}")
                for k, v in r.witness.parts.items():
                    lines.append(f"        {k} = {v}")
            if r.skipped:
                lines.append(f"        skipped {len(r.skipped)} homset(s) over the cap")
        lines.append("")
        lines.append("flags:")
        for k in sorted(self.flags):
            lines.append(f"  {k}: {self.flags[k]}")
        return "\n".join(lines)

    @property
    def any_failures(self):
        return any(r.status == "fails" for r in self.results)


# ---------------------------------------------------------------------------
# Per-check execution context

def _relaxed_equal(theory, f, g):
    """Equality with a ten-times-tolerance retry for numeric theories.

    Returns (equal, relaxed) where relaxed says the retry decided it.
    """
    if theory.equal(f, g):
        return True, False
    if theory.tol is None:
        return False, False
    saved = theory.tol
    try:
        theory.tol = saved * 10
        if theory.equal(f, g):
            return True, True
    finally:
        theory.tol = saved
    return False, False


class _Run:
    def __init__(self, theory, cfg, check_id):
        self.theory = theory
        self.cfg = cfg
        self.id = check_id
        self.rng = random.Random(f"{cfg.seed}:{check_id}")
        self.sampled = False
        self.instances = 0
        self.skipped = []
        self.witness = None
        self.reason = None
        self.notes = set()

    # -- quantification helpers -------------------------------------------
    def probes(self):
        return self.theory.probe_objects(self.cfg.bound)

    def skip(self, a, b, why):
        self.skipped.append({"dom": self.theory.object_str(a),
                             "cod": self.theory.object_str(b), "reason": why})

    def homs(self, a, b):
        """Probe homset: a complete enumeration, a sample, or None (skipped)."""
        th = self.theory
        count = th.hom_count(a, b)
        if count is not None and count > self.cfg.cap:
            self.skip(a, b, f"homset size {count} over cap")
            return None
        try:
            return th.enumerate_hom(a, b, self.cfg.cap)
        except BoundExceeded as exc:
            self.skip(a, b, str(exc))
            return None
        except NotEnumerable:
            pass
        try:
            out = [th.sample_hom(a, b, self.rng) for _ in range(self.cfg.samples)]
        except NotEnumerable:
            self.skip(a, b, "neither enumerable nor samplable")
            return None
        self.sampled = True
        return out

    def totals(self, a, b):
        hs = self.homs(a, b)
        if hs is None:
            return None
        return [f for f in hs if ops.is_total(f)]

    def totals_into_lift(self, a, b):
        """Total morphisms from ``a`` into ``b + I``.

        For non-enumerable theories these are produced as total extensions
        of sampled events (every such total arises this way)."""
        th = self.theory
        lifted = th.coproduct((b, th.unit()))
        count = th.hom_count(a, lifted)
        if count is not None and count > self.cfg.cap:
            self.skip(a, lifted, f"homset size {count} over cap")
            return None, lifted
        try:
            return ([f for f in th.enumerate_hom(a, lifted, self.cfg.cap)
                     if ops.is_total(f)], lifted)
        except BoundExceeded as exc:
            self.skip(a, lifted, str(exc))
            return None, lifted
        except NotEnumerable:
            pass
        out = []
        for _ in range(self.cfg.samples):
            f = self.theory.sample_hom(a, b, self.rng)
            try:
                out.append(ops.total_extension(f))
            except (NoComplement, NotAPartialTest, NonUniqueComplement):
                continue
        self.sampled = True
        return out, lifted

    def key(self, f):
        try:
            return self.theory.morphism_key(f)
        except NotEnumerable:
            return (f.dom, f.cod, probe_scalar_key(self.theory, f))

    # -- assertions --------------------------------------------------------
    def eq(self, f, g):
        equal, relaxed = _relaxed_equal(self.theory, f, g)
        if relaxed:
            self.notes.add("relaxed-tolerance-used")
        return equal

    def check_eq(self, f, g, equation, parts):
        self.instances += 1
        if self.eq(f, g):
            return True
        if self.witness is None:
            th = self.theory
            self.witness = Witness(
                equation, {k: repr(v) for k, v in parts.items()},
                repr(f), repr(g),
                replay=lambda: not _relaxed_equal(th, f, g)[0])
        return False

    def fail(self, equation, parts, lhs, rhs, replay=None):
        if self.witness is None:
            self.witness = Witness(equation,
                                   {k: repr(v) for k, v in parts.items()},
                                   lhs, rhs, replay=replay)

    def tick(self, n=1):
        self.instances += n

    def result(self, paper_ref):
        if self.witness is not None:
            status = "fails"
        elif self.reason is not None:
            status = "inconclusive"
        elif self.sampled:
            status = "holds-sampled"
        else:
            status = "holds-exhaustive"
        return CheckResult(self.id, paper_ref, status,
                           samples=self.instances if self.sampled else 0,
                           witness=self.witness, reason=self.reason,
                           skipped=self.skipped, instances=self.instances,
                           notes=sorted(self.notes))


# ---------------------------------------------------------------------------
# Individual checks.  Each mutates its run; the registry at the bottom maps
# stable ids to (paper_ref, function, needs_monoidal).

def _limited_pairs(run, items):
    """All pairs, or a deterministic capped subset with a recorded note.

    Capping an enumerable pair scan does not demote the verdict to sampled;
    the note marks the reduced coverage.
    """
    if items is None:
        return
    if len(items) ** 2 > run.cfg.cap:
        run.notes.add("pair-scan-capped")
        for _ in range(run.cfg.samples):
            yield (items[run.rng.randrange(len(items))],
                   items[run.rng.randrange(len(items))])
        return
    for f in items:
        for g in items:
            yield f, g


def _limited_product(run, fs, gs):
    """All pairs from two homsets, capped the same way as :func:`_limited_pairs`."""
    if len(fs) * len(gs) > run.cfg.cap:
        run.notes.add("pair-scan-capped")
        return [(fs[run.rng.randrange(len(fs))], gs[run.rng.randrange(len(gs))])
                for _ in range(run.cfg.samples)]
    return [(f, g) for f in fs for g in gs]


def check_cat_identity(run):
    th = run.theory
    for a in run.probes():
        for b in run.probes():
            hs = run.homs(a, b)
            if hs is None:
                continue
            ida, idb = th.identity(a), th.identity(b)
            for f in hs:
                if not run.check_eq(th.compose(idb, f), f,
                                    "id . f = f", {"f": f}):
                    return
                if not run.check_eq(th.compose(f, ida), f,
                                    "f . id = f", {"f": f}):
                    return


def check_cat_assoc(run):
    th = run.theory
    objs = [o for o in run.probes() if th.object_size(o) >= 1]
    if not objs:
        run.reason = "no nonempty probe objects"
        return
    run.sampled = True
    for _ in range(run.cfg.samples):
        a, b, c, d = (objs[run.rng.randrange(len(objs))] for _ in range(4))
        try:
            f = th.sample_hom(a, b, run.rng)
            g = th.sample_hom(b, c, run.rng)
            h = th.sample_hom(c, d, run.rng)
        except NotEnumerable:
            hs1, hs2, hs3 = run.homs(a, b), run.homs(b, c), run.homs(c, d)
            if not hs1 or not hs2 or not hs3:
                continue
            f = hs1[run.rng.randrange(len(hs1))]
            g = hs2[run.rng.randrange(len(hs2))]
            h = hs3[run.rng.randrange(len(hs3))]
        if not run.check_eq(th.compose(h, th.compose(g, f)),
                            th.compose(th.compose(h, g), f),
                            "h . (g . f) = (h . g) . f",
                            {"f": f, "g": g, "h": h}):
            return


def check_coarse_graining(run):
    """Commutativity, associativity and composition distributivity of merging."""
    th = run.theory
    for a in run.probes():
        for b in run.probes():
            hs = run.homs(a, b)
            if hs is None:
                continue
            for f, g in _limited_pairs(run, hs):
                if th.try_pairing([f, g]) is None:
                    continue
                run.tick()
                fg = ops.coarse_grain(f, g)
                gf = ops.coarse_grain(g, f)
                if not run.check_eq(fg, gf, "f v g = g v f", {"f": f, "g": g}):
                    return
                post = run.homs(b, a)
                if post:
                    k = post[run.rng.randrange(len(post))]
                    lhs = th.compose(k, fg)
                    if th.try_pairing([th.compose(k, f), th.compose(k, g)]) is None:
                        run.fail("k.(f v g) defined but k.f, k.g do not merge",
                                 {"f": f, "g": g, "k": k}, repr(lhs), "undefined")
                        return
                    rhs = ops.coarse_grain(th.compose(k, f), th.compose(k, g))
                    if not run.check_eq(lhs, rhs, "k.(f v g) = k.f v k.g",
                                        {"f": f, "g": g, "k": k}):
                        return


def check_zero_laws(run):
    th = run.theory
    for a in run.probes():
        for b in run.probes():
            z = th.zero_morphism(a, b)
            hs = run.homs(a, b)
            if hs is None:
                continue
            for f in hs:
                if th.try_pairing([f, z]) is None:
                    run.fail("f and 0 always merge", {"f": f}, repr(f), "no pairing")
                    return
                if not run.check_eq(ops.coarse_grain(f, z), f,
                                    "f v 0 = f", {"f": f}):
                    return
            for c in run.probes():
                pre = run.homs(c, a)
                if not pre:
                    continue
                g = pre[run.rng.randrange(len(pre))]
                if not run.check_eq(th.compose(z, g), th.zero_morphism(c, b),
                                    "0 . g = 0", {"g": g}):
                    return


def check_trivial_tests(run):
    th = run.theory
    for a in run.probes():
        run.tick()
        if not ops.is_total(th.identity(a)):
            run.fail("identity is deterministic", {"object": th.object_str(a)},
                     repr(th.compose(th.discard(a), th.identity(a))),
                     repr(th.discard(a)))
            return
    if th.monoidal:
        unit = th.unit()
        lam = th.unitor_left(unit)
        run.tick()
        if not ops.is_total(lam):
            run.fail("unit coherence is deterministic", {}, repr(lam), "total")


def check_complements(run):
    th = run.theory
    unit = th.unit()
    for a in run.probes():
        effects = run.homs(a, unit)
        if effects is None:
            continue
        for e in effects:
            run.tick()
            try:
                ops.complement_effect(e)
            except NoComplement:
                run.fail("every effect has a complement",
                         {"e": e}, repr(e), "no complement",
                         replay=lambda e=e: not th.effect_complements(e))
                return
            except NonUniqueComplement as exc:
                ws = ", ".join(repr(w) for w in exc.witnesses)
                run.fail("the complement of an effect is unique",
                         {"e": e, "complements": ws},
                         f"{len(exc.witnesses)} complements", "1",
                         replay=lambda e=e: len(th.effect_complements(e)) > 1)
                return


def check_causality(run):
    th = run.theory
    unit = th.unit()
    for a in run.probes():
        effects = run.totals(a, unit)
        if effects is None:
            continue
        top = th.discard(a)
        for e in effects:
            run.tick()
            if not run.check_eq(e, top, "the only total effect is discarding",
                                {"object": th.object_str(a)}):
                return


def check_cancellativity(run):
    th = run.theory
    unit = th.unit()
    for a in run.probes():
        effects = run.homs(a, unit)
        if effects is None:
            continue
        pool = effects
        if len(effects) ** 2 > run.cfg.cap:
            run.notes.add("pair-scan-capped")
            pool = [effects[run.rng.randrange(len(effects))]
                    for _ in range(max(2, int(run.cfg.samples ** 0.5)))]
        for e3 in pool:
            seen = {}
            for e in pool:
                if th.try_pairing([e, e3]) is None:
                    continue
                run.tick()
                k = run.key(ops.coarse_grain(e, e3))
                if k in seen:
                    other = seen[k]
                    if not th.equal(other, e):
                        run.fail("e1 v e3 = e2 v e3 implies e1 = e2",
                                 {"e1": other, "e2": e, "e3": e3},
                                 repr(ops.coarse_grain(other, e3)),
                                 repr(ops.coarse_grain(e, e3)))
                        return
                else:
                    seen[k] = e


def check_discard_tensor(run):
    th = run.theory
    unit = th.unit()
    lam = th.unitor_left(unit)
    for a in run.probes():
        for b in run.probes():
            run.tick()
            lhs = th.discard(th.tensor_obj(a, b))
            rhs = th.compose(lam, th.tensor(th.discard(a), th.discard(b)))
            if not run.check_eq(lhs, rhs,
                                "discard(A x B) = coherence . (discard A x discard B)",
                                {"A": th.object_str(a), "B": th.object_str(b)}):
                return


def check_c1_structure(run):
    th = run.theory
    unit = th.unit()
    run.tick()
    if not run.check_eq(th.discard(unit), th.identity(unit),
                        "discard on the trivial object is the identity", {}):
        return
    for a in run.probes():
        for b in run.probes():
            run.tick()
            ab = th.coproduct((a, b))
            lhs = th.discard(ab)
            rhs = th.cotuple((a, b), [th.discard(a), th.discard(b)])
            if not run.check_eq(lhs, rhs, "discard(A + B) = [discard A, discard B]",
                                {"A": th.object_str(a), "B": th.object_str(b)}):
                return
    zero = th.zero()
    for a in run.probes():
        hs = run.homs(zero, a)
        if hs is not None:
            run.tick()
            if len({run.key(f) for f in hs}) > 1:
                run.fail("the zero object is initial",
                         {"object": th.object_str(a)},
                         f"{len(hs)} morphisms", "1")
                return
        hs = run.homs(a, zero)
        if hs is not None:
            run.tick()
            if len({run.key(f) for f in hs}) > 1:
                run.fail("the zero object is terminal",
                         {"object": th.object_str(a)},
                         f"{len(hs)} morphisms", "1")
                return


def check_c2_joint_monic(run):
    th = run.theory
    for a in run.probes():
        if th.object_size(a) < 1:
            continue
        aa = th.coproduct((a, a))
        projs = [ops.projection(th, (a, a), i) for i in range(2)]
        for x in run.probes():
            hs = run.homs(x, aa)
            if hs is None:
                continue
            seen = {}
            for f in hs:
                run.tick()
                k = tuple(run.key(th.compose(p, f)) for p in projs)
                if k in seen and not th.equal(seen[k], f):
                    g = seen[k]
                    run.fail("projections out of A + A are jointly monic",
                             {"f": f, "g": g},
                             repr(th.compose(projs[0], f)),
                             repr(th.compose(projs[0], g)))
                    return
                seen[k] = f


def check_c3_total_extension(run):
    th = run.theory
    unit = th.unit()
    for a in run.probes():
        for b in run.probes():
            hs = run.homs(a, b)
            if hs is None:
                continue
            proj = ops.projection(th, (b, unit), 0)
            for f in hs:
                run.tick()
                try:
                    ext = ops.total_extension(f)
                except NoComplement:
                    run.fail("every event has a total extension", {"f": f},
                             repr(f), "no extension")
                    return
                except (NonUniqueComplement, NotAPartialTest) as exc:
                    run.fail("the total extension is canonical", {"f": f},
                             repr(f), str(exc))
                    return
                if not ops.is_total(ext):
                    run.fail("the extension is total", {"f": f}, repr(ext), "total")
                    return
                if not run.check_eq(th.compose(proj, ext), f,
                                    "the extension restricts to the event",
                                    {"f": f}):
                    return
            totals, lifted = run.totals_into_lift(a, b)
            if totals is None:
                continue
            seen = {}
            for t in totals:
                run.tick()
                k = run.key(th.compose(proj, t))
                if k in seen and not th.equal(seen[k], t):
                    run.fail("the total extension is unique",
                             {"event": th.compose(proj, t), "g1": seen[k], "g2": t},
                             repr(seen[k]), repr(t))
                    return
                seen[k] = t


def check_c4_distributivity(run):
    """Tensor distributes over merging and annihilates with zero."""
    th = run.theory
    objs = [o for o in run.probes() if th.object_size(o) >= 1]
    for a in objs:
        for b in objs:
            hs = run.homs(a, b)
            if hs is None:
                continue
            for f, g in _limited_pairs(run, hs):
                if th.try_pairing([f, g]) is None:
                    continue
                other = run.homs(a, b)
                h = other[run.rng.randrange(len(other))]
                run.tick()
                lhs = th.tensor(h, ops.coarse_grain(f, g))
                if th.try_pairing([th.tensor(h, f), th.tensor(h, g)]) is None:
                    run.fail("h x (f v g) defined but h x f, h x g do not merge",
                             {"f": f, "g": g, "h": h}, repr(lhs), "undefined")
                    return
                rhs = ops.coarse_grain(th.tensor(h, f), th.tensor(h, g))
                if not run.check_eq(lhs, rhs, "h x (f v g) = (h x f) v (h x g)",
                                    {"f": f, "g": g, "h": h}):
                    return
            z = th.zero_morphism(a, b)
            sample = run.homs(a, b)
            if sample:
                h = sample[run.rng.randrange(len(sample))]
                run.tick()
                if not run.check_eq(
                        th.tensor(h, z),
                        th.zero_morphism(th.tensor_obj(a, a), th.tensor_obj(b, b)),
                        "h x 0 = 0", {"h": h}):
                    return


def check_lemma34_joint_monic(run):
    """Joint monicity of the projections out of a ternary coproduct."""
    th = run.theory
    objs = [o for o in run.probes() if 1 <= th.object_size(o)]
    triples = [(a, b, c) for a in objs for b in objs for c in objs
               if th.object_size(a) + th.object_size(b) + th.object_size(c)
               <= max(3, run.cfg.bound)]
    for summands in triples:
        cop = th.coproduct(summands)
        projs = [ops.projection(th, summands, i) for i in range(3)]
        for x in run.probes():
            hs = run.homs(x, cop)
            if hs is None:
                continue
            seen = {}
            for f in hs:
                run.tick()
                k = tuple(run.key(th.compose(p, f)) for p in projs)
                if k in seen and not th.equal(seen[k], f):
                    run.fail("ternary projections are jointly monic",
                             {"f": f, "g": seen[k]}, repr(f), repr(seen[k]))
                    return
                seen[k] = f


def check_coproduct_universal(run):
    th = run.theory
    objs = [o for o in run.probes() if th.object_size(o) >= 1]
    for a in objs:
        for b in objs:
            ab = th.coproduct((a, b))
            k1 = th.coprojection((a, b), 0)
            k2 = th.coprojection((a, b), 1)
            for c in run.probes():
                fs = run.homs(a, c)
                gs = run.homs(b, c)
                if fs is None or gs is None:
                    continue
                for f, g in _limited_product(run, fs, gs):
                    run.tick()
                    h = th.cotuple((a, b), [f, g])
                    if not run.check_eq(th.compose(h, k1), f,
                                        "[f, g] . k1 = f", {"f": f, "g": g}):
                        return
                    if not run.check_eq(th.compose(h, k2), g,
                                        "[f, g] . k2 = g", {"f": f, "g": g}):
                        return
                hs = run.homs(ab, c)
                if hs is None:
                    continue
                seen = {}
                for h in hs:
                    run.tick()
                    k = (run.key(th.compose(h, k1)), run.key(th.compose(h, k2)))
                    if k in seen and not th.equal(seen[k], h):
                        run.fail("the cotupling is unique", {"h1": seen[k], "h2": h},
                                 repr(seen[k]), repr(h))
                        return
                    seen[k] = h


def check_eq2_projections(run):
    th = run.theory
    objs = [o for o in run.probes() if th.object_size(o) >= 1]
    for a in objs:
        for b in objs:
            summands = (a, b)
            for y in range(2):
                p = ops.projection(th, summands, y)
                for x in range(2):
                    run.tick()
                    got = th.compose(p, th.coprojection(summands, x))
                    want = (th.identity(summands[x]) if x == y
                            else th.zero_morphism(summands[x], summands[y]))
                    if not run.check_eq(got, want,
                                        "projection . injection = delta",
                                        {"x": x, "y": y,
                                         "A": th.object_str(a),
                                         "B": th.object_str(b)}):
                        return


def _tilde_projection(th, a, i):
    """The total-form projection (A + A) -> A + 1 sending the other summand
    to the second coprojection via discarding."""
    unit = th.unit()
    lifted = th.coproduct((a, unit))
    k1 = th.coprojection((a, unit), 0)
    k2fill = th.compose(th.coprojection((a, unit), 1), th.discard(a))
    legs = [k1, k2fill] if i == 0 else [k2fill, k1]
    return th.cotuple((a, a), legs)


def check_def31_c1(run):
    """Total form: terminal trivial object and joint monicity of the lifted
    projection pair out of (A + A) + 1."""
    th = run.theory
    unit = th.unit()
    for a in run.probes():
        totals = run.totals(a, unit)
        if totals is None:
            continue
        top = th.discard(a)
        for t in totals:
            run.tick()
            if not run.check_eq(t, top,
                                "the trivial object is terminal for total morphisms",
                                {"object": th.object_str(a)}):
                return
    for a in run.probes():
        if th.object_size(a) < 1:
            continue
        aa = th.coproduct((a, a))
        maps = []
        for i in range(2):
            tri = _tilde_projection(th, a, i)
            k2 = th.compose(th.coprojection((a, unit), 1), th.identity(unit))
            maps.append(th.cotuple((aa, unit), [tri, k2]))
        for x in run.probes():
            totals, _ = run.totals_into_lift(x, aa)
            if totals is None:
                continue
            seen = {}
            for f in totals:
                run.tick()
                k = tuple(run.key(th.compose(m, f)) for m in maps)
                if k in seen and not th.equal(seen[k], f):
                    run.fail("the lifted projections are jointly monic",
                             {"f": f, "g": seen[k]}, repr(f), repr(seen[k]))
                    return
                seen[k] = f


def check_def31_c2(run):
    """Total form: the naming square of each object is a pullback."""
    th = run.theory
    unit = th.unit()
    two = th.coproduct((unit, unit))
    for a in run.probes():
        lifted = th.coproduct((a, unit))
        bottom = th.cotuple((a, unit), [
            th.compose(th.coprojection((unit, unit), 0), th.discard(a)),
            th.coprojection((unit, unit), 1)])
        k1a = th.coprojection((a, unit), 0)
        k1u = th.coprojection((unit, unit), 0)
        for x in run.probes():
            vs = run.totals(x, a)
            if vs is None:
                continue
            mediated = {}
            for v in vs:
                run.tick()
                k = run.key(th.compose(k1a, v))
                if k in mediated and not th.equal(mediated[k], v):
                    run.fail("the mediating arrow is unique",
                             {"v1": mediated[k], "v2": v},
                             repr(mediated[k]), repr(v))
                    return
                mediated[k] = v
            cones, _ = run.totals_into_lift(x, a)
            if cones is None:
                continue
            top = th.compose(k1u, th.discard(x))
            for u in cones:
                if not th.equal(th.compose(bottom, u), top):
                    continue
                run.tick()
                if run.key(u) not in mediated:
                    run.fail("every cone factors through the square",
                             {"u": u}, repr(u), "no mediating arrow")
                    return


def check_lemma32(run):
    """Coprojections are monic and meet only at the zero object."""
    th = run.theory
    objs = [o for o in run.probes() if th.object_size(o) >= 1]
    for a in objs:
        for b in objs:
            k1 = th.coprojection((a, b), 0)
            k2 = th.coprojection((a, b), 1)
            for x in run.probes():
                fs = run.totals(x, a)
                gs = run.totals(x, b)
                if fs is None or gs is None:
                    continue
                seen = {}
                for f in fs:
                    run.tick()
                    k = run.key(th.compose(k1, f))
                    if k in seen and not th.equal(seen[k], f):
                        run.fail("the first coprojection is monic",
                                 {"f": f, "g": seen[k]}, repr(f), repr(seen[k]))
                        return
                    seen[k] = f
                if th.object_size(x) >= 1:
                    for g in gs:
                        run.tick()
                        if run.key(th.compose(k2, g)) in seen:
                            run.fail("the coprojection images only meet over zero",
                                     {"g": g}, repr(th.compose(k2, g)), "disjoint")
                            return


def check_positivity(run):
    th = run.theory
    unit = th.unit()
    for a in run.probes():
        for b in run.probes():
            hs = run.homs(a, b)
            if hs is None:
                continue
            z = th.zero_morphism(a, b)
            top = th.discard(b)
            zero_eff = th.zero_morphism(a, unit)
            for f in hs:
                run.tick()
                if th.equal(th.compose(top, f), zero_eff) and not th.equal(f, z):
                    run.fail("discard . f = 0 implies f = 0", {"f": f},
                             repr(th.compose(top, f)), repr(f))
                    return
            for f, g in _limited_pairs(run, hs):
                if th.try_pairing([f, g]) is None:
                    continue
                run.tick()
                if th.equal(ops.coarse_grain(f, g), z):
                    if not (th.equal(f, z) and th.equal(g, z)):
                        run.fail("f v g = 0 implies f = g = 0",
                                 {"f": f, "g": g},
                                 repr(ops.coarse_grain(f, g)), "0 with f, g != 0",
                                 replay=lambda f=f, g=g, z=z:
                                 th.equal(ops.coarse_grain(f, g), z)
                                 and not th.equal(f, z))
                        return


def check_combining(run):
    th = run.theory
    for a in run.probes():
        top = th.discard(a)
        for b in run.probes():
            for c in run.probes():
                fs = run.homs(a, b)
                gs = run.homs(a, c)
                if fs is None or gs is None:
                    continue
                for f, g in _limited_product(run, fs, gs):
                    ef = th.compose(th.discard(b), f)
                    eg = th.compose(th.discard(c), g)
                    if th.try_pairing([ef, eg]) is None:
                        continue
                    if not th.equal(ops.coarse_grain(ef, eg), top):
                        continue
                    run.tick()
                    if th.try_pairing([f, g]) is None:
                        run.fail("complementary normalizations admit a joint test",
                                 {"f": f, "g": g}, "discard", "no pairing",
                                 replay=lambda f=f, g=g: th.try_pairing([f, g]) is None)
                        return


def check_observations(run):
    """A family is a partial test exactly when its discard composites merge."""
    th = run.theory
    for a in run.probes():
        for b in run.probes():
            for c in run.probes():
                fs = run.homs(a, b)
                gs = run.homs(a, c)
                if fs is None or gs is None:
                    continue
                for f, g in _limited_product(run, fs, gs):
                    run.tick()
                    ef = th.compose(th.discard(b), f)
                    eg = th.compose(th.discard(c), g)
                    observable = th.try_pairing([ef, eg]) is not None
                    paired = th.try_pairing([f, g]) is not None
                    if observable != paired:
                        run.fail("pairing exists iff the observations merge",
                                 {"f": f, "g": g},
                                 f"observations merge: {observable}",
                                 f"pairing exists: {paired}")
                        return


def check_pcm_laws(run):
    th = run.theory
    unit = th.unit()
    scalars = run.homs(unit, unit)
    if scalars is None:
        run.reason = "scalar homset not available"
        return
    zero = th.zero_morphism(unit, unit)
    for s in scalars:
        run.tick()
        if th.try_pairing([s, zero]) is None:
            run.fail("s and 0 always merge", {"s": s}, repr(s), "no pairing")
            return
        if not run.check_eq(ops.coarse_grain(s, zero), s,
                            "s v 0 = s", {"s": s}):
            return
    for s, t in _limited_pairs(run, scalars):
        if th.try_pairing([s, t]) is None:
            if th.try_pairing([t, s]) is not None:
                run.fail("compatibility is symmetric", {"s": s, "t": t},
                         "undefined", "defined")
                return
            continue
        run.tick()
        if not run.check_eq(ops.coarse_grain(s, t), ops.coarse_grain(t, s),
                            "s v t = t v s", {"s": s, "t": t}):
            return
    if len(scalars) ** 3 <= run.cfg.cap:
        triples = [(s, t, u) for s in scalars for t in scalars for u in scalars]
    else:
        run.notes.add("pair-scan-capped")
        triples = [(scalars[run.rng.randrange(len(scalars))],
                    scalars[run.rng.randrange(len(scalars))],
                    scalars[run.rng.randrange(len(scalars))])
                   for _ in range(run.cfg.samples)]
    for s, t, u in triples:
        if th.try_pairing([s, t, u]) is None:
            continue
        run.tick()
        lhs = ops.coarse_grain(ops.coarse_grain(s, t), u)
        rhs = ops.coarse_grain(s, ops.coarse_grain(t, u))
        if not run.check_eq(lhs, rhs, "(s v t) v u = s v (t v u)",
                            {"s": s, "t": t, "u": u}):
            return


def check_iso_total(run):
    th = run.theory
    for a in run.probes():
        for b in run.probes():
            fs = run.homs(a, b)
            gs = run.homs(b, a)
            if fs is None or gs is None:
                continue
            if len(fs) * len(gs) > run.cfg.cap:
                run.skip(a, b, "iso search over cap")
                continue
            ida, idb = th.identity(a), th.identity(b)
            for f in fs:
                for g in gs:
                    if th.equal(th.compose(g, f), ida) and \
                            th.equal(th.compose(f, g), idb):
                        run.tick()
                        if not ops.is_total(f):
                            run.fail("every isomorphism is total", {"f": f, "g": g},
                                     repr(th.compose(th.discard(b), f)),
                                     repr(th.discard(a)))
                            return


def check_zero_strict(run):
    th = run.theory
    zero = th.zero()
    for a in run.probes():
        if th.object_size(a) == 0:
            continue
        hs = run.totals(a, zero)
        if hs is None:
            continue
        run.tick()
        if hs:
            run.fail("the zero object is strict", {"object": th.object_str(a)},
                     repr(hs[0]), "no total morphism into 0")
            return


def check_direct_sums(run):
    th = run.theory
    objs = [o for o in run.probes() if th.object_size(o) >= 1]
    for a in objs:
        for b in objs:
            run.tick()
            verdict = direct_sum_verify(th, (a, b))
            if not verdict["ok"]:
                run.fail("the canonical coproduct is a direct sum",
                         {"A": th.object_str(a), "B": th.object_str(b)},
                         ", ".join(verdict["failures"]), "all equations hold")
                return


def check_separation(run):
    th = run.theory
    unit = th.unit()
    for a in run.probes():
        for b in run.probes():
            hs = run.homs(a, b)
            states = run.homs(unit, a)
            effects = run.homs(b, unit)
            if hs is None or states is None or effects is None:
                continue
            if len(hs) * len(states) * len(effects) > run.cfg.cap:
                run.skip(a, b, "probe signature scan over cap")
                continue
            seen = {}
            for f in hs:
                run.tick()
                sig = tuple(probe_scalar_key(th, th.compose(e, th.compose(f, w)))
                            for w in states for e in effects)
                if sig in seen and not th.equal(seen[sig], f):
                    run.fail("probes separate parallel events",
                             {"f": f, "g": seen[sig]}, repr(f), repr(seen[sig]))
                    return
                seen[sig] = f


# ---------------------------------------------------------------------------
# Registry and classification

CHECKS = [
    ("cat-identity", "Def. 2.1 (category laws)", check_cat_identity, False),
    ("cat-assoc", "Def. 2.1 (category laws)", check_cat_assoc, False),
    ("assumption3-coarse-graining", "Assumption 3", check_coarse_graining, False),
    ("assumption4-zero", "Assumption 4", check_zero_laws, False),
    ("assumption5-trivial-tests", "Assumption 5", check_trivial_tests, False),
    ("assumption7-complements", "Assumption 7", check_complements, False),
    ("lemma2.2-causality", "Lemma 2.2", check_causality, False),
    ("lemma2.3-iii", "Lemma 2.3 iii", check_cancellativity, False),
    ("lemma2.3-iv", "Lemma 2.3 iv", check_discard_tensor, True),
    ("coproduct-universal", "Sec. 3.1 (coproducts)", check_coproduct_universal, False),
    ("eq2-projections", "Eq. (2)", check_eq2_projections, False),
    ("def3.3-c1", "Def. 3.3 condition 1", check_c1_structure, False),
    ("def3.3-c2", "Def. 3.3 condition 2", check_c2_joint_monic, False),
    ("def3.3-c3", "Def. 3.3 condition 3", check_c3_total_extension, False),
    ("def3.3-c4", "Def. 3.3 condition 4", check_c4_distributivity, True),
    ("def3.3-c5", "Def. 3.3 condition 5", check_discard_tensor, True),
    ("lemma3.4", "Lemma 3.4", check_lemma34_joint_monic, False),
    ("def3.1-c1", "Def. 3.1 condition 1", check_def31_c1, False),
    ("def3.1-c2", "Def. 3.1 condition 2", check_def31_c2, False),
    ("lemma3.2", "Lemma 3.2", check_lemma32, False),
    ("axiom-positivity", "Axiom 1 / Lemma 5.1 ii", check_positivity, False),
    ("axiom-combining", "Axiom 3 / Lemma 6.3", check_combining, False),
    ("axiom-observations", "Axiom 2 / Lemma 6.3", check_observations, False),
    ("pcm-laws", "Sec. 2.2 (scalars)", check_pcm_laws, False),
    ("lemmaB.3-i", "Lemma B.3 i", check_iso_total, False),
    ("lemmaB.3-ii", "Lemma B.3 ii", check_zero_strict, False),
    ("direct-sums", "Lemma 4.2", check_direct_sums, False),
    ("separation", "Sec. 5 (operational equivalence)", check_separation, False),
]

CHECK_IDS = [c[0] for c in CHECKS]


def run_check(theory, cfg, check_id):
    entry = next((c for c in CHECKS if c[0] == check_id), None)
    if entry is None:
        raise KeyError(f"unknown check id {check_id!r}")
    _, paper_ref, func, needs_monoidal = entry
    run = _Run(theory, cfg, check_id)
    if needs_monoidal and not theory.monoidal:
        run.reason = "not-monoidal"
        return run.result(paper_ref)
    try:
        func(run)
    except (NotAvailable, NotMonoidal, NotEnumerable) as exc:
        run.reason = f"{type(exc).__name__}: {exc}"
    except (Incompatible, NotAPartialTest) as exc:
        run.reason = f"structure missing: {exc}"
    return run.result(paper_ref)


def _flag(*results):
    """Conjunction over verdicts: False dominates, then inconclusive."""
    value = True
    for r in results:
        if r.status == "fails":
            return False
        if r.status == "inconclusive":
            value = "inconclusive"
    return value


def classify(theory, cfg=None, only=None):
    """Run every check (or the named subset) and derive classification flags."""
    cfg = cfg or ProbeConfig()
    ids = CHECK_IDS if only is None else list(only)
    results = [run_check(theory, cfg, cid) for cid in CHECK_IDS if cid in ids]
    by_id = {r.id: r for r in results}

    def get(cid):
        return by_id.get(cid) or CheckResult(cid, "", "inconclusive",
                                             reason="not run")

    partial_ids = ["def3.3-c1", "def3.3-c2", "def3.3-c3"]
    if theory.monoidal:
        partial_ids += ["def3.3-c4", "def3.3-c5"]
    partial = _flag(*(get(c) for c in partial_ids))
    total = _flag(get("def3.1-c1"), get("def3.1-c2"))
    if partial is False:
        positive = observations = effectus = "inconclusive"
    else:
        positive = _flag(get("axiom-positivity"))
        observations = _flag(get("axiom-observations"))
        combining = _flag(get("axiom-combining"))
        if False in (positive, partial, combining):
            effectus = False
        elif "inconclusive" in (positive, partial, combining):
            effectus = "inconclusive"
        else:
            effectus = True
    flags = {
        "partial-form-operational-category": partial,
        "total-form-operational-category": total,
        "positive": positive,
        "observations-determine-tests": observations,
        "effectus": effectus,
        "separated": _flag(get("separation")),
        "has-direct-sums-under-bound": _flag(get("direct-sums")),
    }
    name = getattr(theory, "name", type(theory).__name__)
    return CheckReport(name, cfg, results, flags)


def check_partial_form(theory, cfg=None):
    cfg = cfg or ProbeConfig()
    ids = ["def3.3-c1", "def3.3-c2", "def3.3-c3", "def3.3-c4", "def3.3-c5"]
    return [run_check(theory, cfg, cid) for cid in ids]


def check_total_form(theory, cfg=None):
    cfg = cfg or ProbeConfig()
    return [run_check(theory, cfg, cid)
            for cid in ["def3.1-c1", "def3.1-c2", "lemma3.2"]]


def check_positivity_of(theory, cfg=None):
    return run_check(theory, cfg or ProbeConfig(), "axiom-positivity")


def check_combining_of(theory, cfg=None):
    return run_check(theory, cfg or ProbeConfig(), "axiom-combining")


def check_derived_lemmas(theory, cfg=None):
    cfg = cfg or ProbeConfig()
    ids = ["lemma2.2-causality", "lemma2.3-iii", "lemma2.3-iv",
           "lemma3.4", "lemmaB.3-i", "lemmaB.3-ii"]
    return [run_check(theory, cfg, cid) for cid in ids]
