"""The abstract contract for an operational theory.

A :class:`Theory` is a category of events with finite coproducts, a zero
object and a family of discarding effects (one per object), together with
the structure every derived operation is built from: cotupling, a pairing
procedure deciding which event families merge into one, and optionally a
tensor.  Objects are plain hashable values whose shape is documented per
instance; morphisms are :class:`Morphism` records tagged with their theory.

All values are immutable after construction and every operation is a pure
function, so theories may be shared freely between workers.
"""

from __future__ import annotations

from .errors import CompositionError, NotEnumerable, NotMonoidal


class Morphism:
    """An event: an instance-tagged payload with explicit domain and codomain.

    Equality delegates to the owning theory (exact for the discrete and
    rational instances, tolerance-based for the operator instance), so
    morphisms of different theories never compare equal.
    """

    __slots__ = ("theory", "dom", "cod", "payload")

    def __init__(self, theory, dom, cod, payload):
        self.theory = theory
        self.dom = dom
        self.cod = cod
        self.payload = payload

    def __eq__(self, other):
        if not isinstance(other, Morphism) or self.theory is not other.theory:
            return NotImplemented
        return self.theory.equal(self, other)

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    __hash__ = None

    def __repr__(self):
        return (f"Morphism({self.theory.name}: {self.theory.object_str(self.dom)}"
                f" -> {self.theory.object_str(self.cod)}, {self.payload!r})")


class Theory:
    """Base class for operational theories (partial-form presentation)."""

    name = "theory"
    monoidal = False
    #: comparison tolerance, or None when equality is exact
    tol = None

    # -- objects ----------------------------------------------------------
    def unit(self):
        raise NotImplementedError

    def zero(self):
        raise NotImplementedError

    def coproduct(self, summands):
        """Object of the finite coproduct of ``summands`` (a tuple).

        Iterated coproducts are flattened: the canonical n-ary coproduct is
        built in one go rather than by nesting binary ones.
        """
        raise NotImplementedError

    def object_str(self, a):
        return repr(a)

    def probe_objects(self, bound):
        """Deterministic list of probe objects of size up to ``bound``."""
        raise NotImplementedError

    def object_size(self, a):
        raise NotImplementedError

    # -- morphisms --------------------------------------------------------
    def identity(self, a):
        raise NotImplementedError

    def compose(self, g, f):
        """The composite ``g`` after ``f``; raises on a signature mismatch."""
        if f.cod != g.dom:
            raise CompositionError(
                f"{self.name}: cannot compose {self.object_str(f.dom)}->{self.object_str(f.cod)} "
                f"then {self.object_str(g.dom)}->{self.object_str(g.cod)}")
        return self._compose(g, f)

    def _compose(self, g, f):
        raise NotImplementedError

    def zero_morphism(self, a, b):
        raise NotImplementedError

    def coprojection(self, summands, i):
        """The coprojection of summand ``i`` into the coproduct."""
        raise NotImplementedError

    def cotuple(self, summands, fs):
        """The unique morphism out of a coproduct restricting to each ``fs[i]``."""
        raise NotImplementedError

    def discard(self, a):
        raise NotImplementedError

    def equal(self, f, g):
        raise NotImplementedError

    def payload_key(self, f):
        """A hashable canonical key for exact payloads (dedup, dict lookup).

        Only exact theories need support this; tolerance-based ones raise.
        """
        raise NotEnumerable(f"{self.name}: payloads have no exact key")

    def morphism_key(self, f):
        return (f.dom, f.cod, self.payload_key(f))

    # -- tests and merging ------------------------------------------------
    def try_pairing(self, events):
        """Pairing morphism into the coproduct of codomains, or None.

        ``events`` is a nonempty sequence with common domain.  A non-None
        result witnesses that the family forms a partial test; None means
        the instance admits no joint test containing the family.
        """
        raise NotImplementedError

    def effect_complements(self, e):
        """All effects ``b`` with ``e`` merged with ``b`` equal to discard.

        The default enumerates the effect homset, which only works for
        enumerable theories; instances override with analytic answers.
        """
        from . import ops
        out = []
        for b in self.enumerate_hom(e.dom, self.unit()):
            h = self.try_pairing([e, b])
            if h is None:
                continue
            if self.equal(ops.coarse_grain(e, b), self.discard(e.dom)):
                out.append(b)
        return out

    # -- enumeration / sampling -------------------------------------------
    def enumerate_hom(self, a, b, cap=None):
        """Complete duplicate-free enumeration of hom(a, b), fixed order.

        Raises :class:`NotEnumerable` when impossible and
        :class:`BoundExceeded` when the count passes ``cap``.
        """
        raise NotEnumerable(f"{self.name}: hom enumeration not supported")

    def hom_count(self, a, b):
        """Size of hom(a, b) without materializing it, when cheap; else None."""
        return None

    def sample_hom(self, a, b, rng):
        """One pseudo-random morphism a -> b (used where enumeration fails)."""
        raise NotEnumerable(f"{self.name}: hom sampling not supported")

    # -- monoidal structure (optional) -------------------------------------
    def tensor_obj(self, a, b):
        raise NotMonoidal(f"{self.name} has no tensor")

    def tensor(self, f, g):
        raise NotMonoidal(f"{self.name} has no tensor")

    def unitor_right(self, a):
        """The canonical isomorphism from ``a`` tensor unit to ``a``."""
        raise NotMonoidal(f"{self.name} has no tensor")

    def unitor_left(self, a):
        raise NotMonoidal(f"{self.name} has no tensor")

    def unitor_right_inv(self, a):
        raise NotMonoidal(f"{self.name} has no tensor")

    def unitor_left_inv(self, a):
        raise NotMonoidal(f"{self.name} has no tensor")

    # -- validation --------------------------------------------------------
    def validate_event(self, payload, dom, cod):
        """Checked :class:`Morphism` or a diagnostic naming the violation."""
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


class TotalCategory:
    """A category with finite coproducts and a terminal object.

    This is the total-form presentation; it is the shape produced by
    restricting a :class:`Theory` to its total morphisms, and the shape
    consumed by the partial-morphism construction.
    """

    name = "total"

    def terminal(self):
        raise NotImplementedError

    def initial(self):
        raise NotImplementedError

    def bang(self, a):
        """The unique morphism from ``a`` to the terminal object."""
        raise NotImplementedError

    def coproduct(self, summands):
        raise NotImplementedError

    def coprojection(self, summands, i):
        raise NotImplementedError

    def cotuple(self, summands, fs):
        raise NotImplementedError

    def identity(self, a):
        raise NotImplementedError

    def compose(self, g, f):
        raise NotImplementedError

    def equal(self, f, g):
        raise NotImplementedError

    def enumerate_hom(self, a, b, cap=None):
        raise NotEnumerable(f"{self.name}: hom enumeration not supported")

    def probe_objects(self, bound):
        raise NotImplementedError
