"""The capability contract shared by all backends.

Every backend supplies objects (a carrier with a symmetry) and morphisms
(total structure-preserving maps).  The automaton and monoid algorithms are
written once against this contract:

* ``product``              binary product with projections and pairing
* ``image_factorization``  epi-mono factorization through the image
* ``quotient``             quotient by a congruence (an explicit partition)
* ``finiteness``           the finiteness report of an object

Concrete backends (finite sets, finite group actions, pool-instantiated
nominal sets) represent objects by explicit element tuples plus a keyed
family of symmetry actions; the symbolic nominal backend registers its own
implementations in :mod:`orbitaut.nominal`.

The truth object is fixed to the two-element object {0,1} with trivial
symmetry in every backend; its elements are the Python booleans.
"""

from dataclasses import dataclass, field
from functools import singledispatch
from typing import Any, Callable, Mapping

from .errors import BackendMismatchError, ValidationError


class BackendObject:
    """Base class for concrete backend objects.

    Subclasses provide ``backend``, ``carrier()`` (a deterministic element
    tuple) and ``symmetry_actions()`` (a mapping from action keys to element
    permutations; empty for the set backend).  Two objects are compatible
    when they share a backend and the same action keys.
    """

    backend = "abstract"

    def carrier(self):
        raise NotImplementedError

    def symmetry_actions(self):
        raise NotImplementedError

    def __contains__(self, x):
        return x in self.carrier()

    def __len__(self):
        return len(self.carrier())


def check_compatible(x: BackendObject, y: BackendObject):
    if x.backend != y.backend:
        raise BackendMismatchError(f"backend mismatch: {x.backend} vs {y.backend}")
    if set(x.symmetry_actions()) != set(y.symmetry_actions()):
        raise BackendMismatchError("objects carry different symmetries")


@dataclass(frozen=True)
class BackendMorphism:
    """A total map between concrete backend objects, given by its graph."""

    source: BackendObject
    target: BackendObject
    graph: Mapping[Any, Any]

    def __call__(self, x):
        return self.graph[x]

    def validate(self):
        """Check totality and equivariance; raise ValidationError with a
        concrete witness on the first failure."""
        check_compatible(self.source, self.target)
        src = self.source.carrier()
        tgt = set(self.target.carrier())
        for x in src:
            if x not in self.graph:
                raise ValidationError(f"morphism not total: no image for {x!r}")
            if self.graph[x] not in tgt:
                raise ValidationError(
                    f"morphism image {self.graph[x]!r} of {x!r} is not in the target"
                )
        src_acts = self.source.symmetry_actions()
        tgt_acts = self.target.symmetry_actions()
        for key, act in src_acts.items():
            tact = tgt_acts[key]
            for x in src:
                if self.graph[act[x]] != tact[self.graph[x]]:
                    raise ValidationError(
                        f"morphism not equivariant: under {key!r}, "
                        f"f({act[x]!r}) = {self.graph[act[x]]!r} "
                        f"but {key!r}.f({x!r}) = {tact[self.graph[x]]!r}"
                    )
        return self

    def is_injective(self):
        vals = list(self.graph[x] for x in self.source.carrier())
        return len(set(vals)) == len(vals)

    def is_surjective(self):
        vals = {self.graph[x] for x in self.source.carrier()}
        return vals == set(self.target.carrier())

    def compose(self, other: "BackendMorphism") -> "BackendMorphism":
        """self ; other (apply self first)."""
        if self.target is not other.source and self.target.carrier() != other.source.carrier():
            raise ValidationError("composition mismatch")
        return BackendMorphism(
            self.source,
            other.target,
            {x: other.graph[self.graph[x]] for x in self.source.carrier()},
        )


def identity_morphism(x: BackendObject) -> BackendMorphism:
    return BackendMorphism(x, x, {e: e for e in x.carrier()})


@dataclass(frozen=True)
class Congruence:
    """An explicit partition of an object's carrier into blocks."""

    obj: BackendObject
    blocks: tuple  # tuple of frozensets

    def validate(self):
        carrier = self.obj.carrier()
        seen = set()
        for b in self.blocks:
            if not b:
                raise ValidationError("congruence has an empty block")
            if seen & b:
                raise ValidationError(
                    f"congruence blocks overlap on {sorted(map(repr, seen & b))}"
                )
            seen |= b
        if seen != set(carrier):
            missing = set(carrier) - seen
            raise ValidationError(f"congruence misses elements {sorted(map(repr, missing))}")
        for key, act in self.obj.symmetry_actions().items():
            block_of = self.block_of
            for b in self.blocks:
                image = frozenset(act[x] for x in b)
                if image not in set(self.blocks):
                    raise ValidationError(
                        f"partition not symmetry-closed: block {sorted(map(repr, b))} "
                        f"maps under {key!r} to {sorted(map(repr, image))}, not a block"
                    )
        return self

    @property
    def block_of(self):
        out = {}
        for b in self.blocks:
            for x in b:
                out[x] = b
        return out


def partition_blocks(carrier, block_ids):
    """Group a carrier by parallel block ids, blocks ordered by first
    occurrence.  Returns a tuple of frozensets."""
    order = []
    members = {}
    for x, bid in zip(carrier, block_ids):
        if bid not in members:
            members[bid] = []
            order.append(bid)
        members[bid].append(x)
    return tuple(frozenset(members[bid]) for bid in order)


@dataclass(frozen=True)
class FinitenessReport:
    dk_finite: bool
    decomposition_finite: bool
    orbit_count: int


@dataclass(frozen=True)
class ProductResult:
    obj: BackendObject
    proj1: Any
    proj2: Any
    pair: Callable[[Any, Any], Any] = field(compare=False)


@singledispatch
def product(x: BackendObject, y: BackendObject) -> ProductResult:
    """Binary product of two objects of the same backend."""
    raise NotImplementedError(f"product not implemented for {type(x).__name__}")


# remake hooks: how each concrete object class wraps a derived carrier
_REMAKES = {}


def register_remake(cls, fn):
    _REMAKES[cls] = fn


@singledispatch
def image_factorization(f):
    """Factor a morphism as surjection ; injection through its image."""
    raise NotImplementedError(f"image_factorization not implemented for {type(f).__name__}")


@singledispatch
def quotient(x: BackendObject, c: Congruence):
    """Quotient an object by a congruence; returns (object, projection)."""
    raise NotImplementedError(f"quotient not implemented for {type(x).__name__}")


@singledispatch
def finiteness(x: BackendObject) -> FinitenessReport:
    raise NotImplementedError(f"finiteness not implemented for {type(x).__name__}")


def orbit_partition(carrier, actions):
    """Orbits of a carrier under a family of element permutations, ordered
    by first occurrence."""
    index = {x: i for i, x in enumerate(carrier)}
    parent = list(range(len(carrier)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for act in actions:
        for x in carrier:
            a, b = find(index[x]), find(index[act[x]])
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups = {}
    order = []
    for i, x in enumerate(carrier):
        r = find(i)
        if r not in groups:
            groups[r] = []
            order.append(r)
        groups[r].append(x)
    return tuple(tuple(groups[r]) for r in order)


# --- generic graph-backed implementations ---------------------------------
#
# The three concrete backends differ only in how a derived carrier gets its
# object wrapper, so each registers the helpers below with a rebuild hook
# ``remake(template, elements, actions) -> BackendObject``.

@image_factorization.register
def _(f: BackendMorphism):
    return graph_image_factorization(f, _REMAKES[type(f.source)])


def graph_product(x, y, remake):
    check_compatible(x, y)
    elements = tuple((a, b) for a in x.carrier() for b in y.carrier())
    xacts, yacts = x.symmetry_actions(), y.symmetry_actions()
    actions = {
        key: {(a, b): (xacts[key][a], yacts[key][b]) for (a, b) in elements}
        for key in xacts
    }
    obj = remake(x, elements, actions)
    proj1 = BackendMorphism(obj, x, {e: e[0] for e in elements})
    proj2 = BackendMorphism(obj, y, {e: e[1] for e in elements})
    return ProductResult(obj, proj1, proj2, lambda a, b: (a, b))


def graph_image_factorization(f, remake):
    f.validate()
    src = f.source.carrier()
    image = []
    seen = set()
    for x in src:
        v = f.graph[x]
        if v not in seen:
            seen.add(v)
            image.append(v)
    tacts = f.target.symmetry_actions()
    actions = {key: {v: tacts[key][v] for v in image} for key in tacts}
    mid = remake(f.target, tuple(image), actions)
    epi = BackendMorphism(f.source, mid, dict(f.graph))
    mono = BackendMorphism(mid, f.target, {v: v for v in image})
    return epi, mid, mono


def graph_quotient(x, c, remake):
    if c.obj is not x and c.obj.carrier() != x.carrier():
        raise ValidationError("congruence is over a different object")
    c.validate()
    block_of = c.block_of
    carrier = x.carrier()
    blocks = []
    seen = set()
    for e in carrier:
        b = block_of[e]
        if b not in seen:
            seen.add(b)
            blocks.append(b)
    xacts = x.symmetry_actions()
    actions = {
        key: {b: frozenset(xacts[key][m] for m in b) for b in blocks} for key in xacts
    }
    obj = remake(x, tuple(blocks), actions)
    proj = BackendMorphism(x, obj, {e: block_of[e] for e in carrier})
    return obj, proj
