"""Orbit-finite nominal sets over the equality symmetry.

Data model: a nominal object is a finite list of orbit descriptors, each a
support dimension plus a stabilizer subgroup of tuple positions; an element
is an orbit id with a tuple of pairwise-distinct atoms kept in canonical
form (lexicographically least modulo the stabilizer).  Equivariant maps are
per-orbit position selections; transition maps are pattern rules under the
distinct-names convention (within a rule, shared variables mean equal atoms
and distinct variables mean distinct atoms).

Computation engine: atom pools.  Objects and automata are instantiated over
a finite pool (all elements with atoms drawn from the pool, symmetry given
by adjacent transpositions), the finite algorithms run there, and results
are re-abstracted to orbit descriptors.  Every pool-mediated result is
recomputed with one extra pool atom and must come back isomorphic (the
stability gate); a mismatch is a hard error, never a silent answer.
"""

import itertools
from dataclasses import dataclass
from typing import Mapping

from . import automata as _automata
from . import contract
from .automata import Automaton, AutomatonMorphism, MinimizationResult, MorphismVerdict
from .errors import (
    CapExceededError,
    PoolMarginError,
    PoolStabilityError,
    ValidationError,
)

DIM_CAP = 6
POOL_CAP = 11
INSTANTIATION_CAP = 20000
DEFAULT_MARGIN = 1


# --- orbits and elements ----------------------------------------------------

def _close_position_group(gens, dim):
    ident = tuple(range(dim))
    group = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                comp = tuple(h[g[i]] for i in range(dim))
                if comp not in group:
                    group.add(comp)
                    nxt.append(comp)
        frontier = nxt
    return tuple(sorted(group))


@dataclass(frozen=True)
class OrbitDescriptor:
    """A single orbit: injective atom tuples of a fixed dimension modulo a
    stabilizer subgroup of positions."""

    name: str
    dim: int
    stab_gens: tuple = ()

    def validate(self):
        if not 0 <= self.dim <= DIM_CAP:
            raise CapExceededError(
                f"orbit {self.name!r} has dimension {self.dim}; the cap is {DIM_CAP}"
            )
        for h in self.stab_gens:
            if sorted(h) != list(range(self.dim)):
                raise ValidationError(
                    f"orbit {self.name!r}: {h!r} is not a permutation of positions"
                )
        return self

    @property
    def group(self):
        cached = getattr(self, "_group_cache", None)
        if cached is None:
            cached = _close_position_group(self.stab_gens, self.dim)
            object.__setattr__(self, "_group_cache", cached)
        return cached

    def normalized(self):
        """The same orbit with the stabilizer stored as its full closed
        group, so equal orbits compare equal."""
        return OrbitDescriptor(self.name, self.dim, self.group)


@dataclass(frozen=True)
class NomElement:
    orbit: str
    atoms: tuple

    def __repr__(self):
        return f"{self.orbit}({','.join(map(str, self.atoms))})"


def canonical_atoms(desc: OrbitDescriptor, atoms):
    return min(tuple(atoms[h[i]] for i in range(desc.dim)) for h in desc.group)


def make_element(desc: OrbitDescriptor, atoms) -> NomElement:
    atoms = tuple(atoms)
    if len(atoms) != desc.dim:
        raise ValidationError(
            f"orbit {desc.name!r} needs {desc.dim} atoms, got {atoms!r}"
        )
    if len(set(atoms)) != len(atoms):
        raise ValidationError(f"atoms must be pairwise distinct, got {atoms!r}")
    if any(not isinstance(a, int) or a < 1 for a in atoms):
        raise ValidationError(f"atoms are positive integers, got {atoms!r}")
    return NomElement(desc.name, canonical_atoms(desc, atoms))


def support(x: NomElement):
    """The least support: the atom set of the canonical tuple."""
    return frozenset(x.atoms)


@dataclass(frozen=True)
class NomObject(contract.BackendObject):
    orbits: tuple

    backend = "nominal"

    def validate(self):
        names = [o.name for o in self.orbits]
        if len(set(names)) != len(names):
            raise ValidationError("duplicate orbit names")
        for o in self.orbits:
            o.validate()
        return self

    def descriptor(self, name) -> OrbitDescriptor:
        for o in self.orbits:
            if o.name == name:
                return o
        raise ValidationError(f"unknown orbit {name!r}")

    def orbit_index(self, name):
        for i, o in enumerate(self.orbits):
            if o.name == name:
                return i
        raise ValidationError(f"unknown orbit {name!r}")

    def max_dim(self):
        return max((o.dim for o in self.orbits), default=0)

    def element(self, name, atoms=()):
        return make_element(self.descriptor(name), atoms)

    def rename(self, x: NomElement, perm: Mapping) -> NomElement:
        return make_element(
            self.descriptor(x.orbit), tuple(perm.get(a, a) for a in x.atoms)
        )

    def carrier(self):
        raise ValidationError(
            "a nominal object has no finite carrier; instantiate it over a pool"
        )

    def symmetry_actions(self):
        raise ValidationError(
            "a nominal object has no finite symmetry table; instantiate it over a pool"
        )


TRUTH_NOM = NomObject((OrbitDescriptor("false", 0), OrbitDescriptor("true", 0)))
TRUE_EL = NomElement("true", ())
FALSE_EL = NomElement("false", ())


def check_letter(alphabet: NomObject, s):
    if not isinstance(s, NomElement):
        raise ValidationError(f"letter {s!r} is not a nominal element")
    desc = alphabet.descriptor(s.orbit)
    if make_element(desc, s.atoms) != s:
        raise ValidationError(f"letter {s!r} is not in canonical form")


def is_dk_finite(x: NomObject) -> bool:
    """Finite-with-trivial-action test: every orbit has dimension 0."""
    return all(o.dim == 0 for o in x.orbits)


@contract.finiteness.register
def _(x: NomObject):
    return contract.FinitenessReport(is_dk_finite(x), True, len(x.orbits))


# --- equivariant maps -------------------------------------------------------

@dataclass(frozen=True)
class NomMorphism:
    """A total equivariant map given per source orbit by a target orbit and
    a selection of source support positions feeding each target position."""

    source: NomObject
    target: NomObject
    mapping: Mapping  # orbit name -> (target orbit name, selection tuple)

    def __call__(self, x: NomElement) -> NomElement:
        tgt, sel = self.mapping[x.orbit]
        return make_element(self.target.descriptor(tgt), tuple(x.atoms[i] for i in sel))

    def validate(self):
        for o in self.source.orbits:
            if o.name not in self.mapping:
                raise ValidationError(f"morphism undefined on orbit {o.name!r}")
            tgt, sel = self.mapping[o.name]
            td = self.target.descriptor(tgt)
            if len(sel) != td.dim:
                raise ValidationError(
                    f"selection for {o.name!r} has arity {len(sel)}, "
                    f"target dimension is {td.dim}"
                )
            if any(not 0 <= i < o.dim for i in sel):
                raise ValidationError(f"selection for {o.name!r} is out of range")
            if len(set(sel)) != len(sel):
                raise ValidationError(
                    f"selection for {o.name!r} repeats a position; "
                    "target atoms must stay distinct"
                )
            for h in o.group:
                twisted = tuple(h[i] for i in sel)
                if not any(
                    twisted == tuple(sel[hp[j]] for j in range(td.dim))
                    for hp in td.group
                ):
                    raise ValidationError(
                        f"selection for {o.name!r} is not invariant under the "
                        f"stabilizer element {h!r}"
                    )
        return self

    def is_injective_on_orbits(self):
        seen = {}
        for o in self.source.orbits:
            tgt, sel = self.mapping[o.name]
            if o.dim != self.target.descriptor(tgt).dim:
                return False
            if tgt in seen:
                return False
            seen[tgt] = o.name
        return True


def final_morphism(states: NomObject, final_orbits) -> NomMorphism:
    mapping = {
        o.name: (("true" if o.name in set(final_orbits) else "false"), ())
        for o in states.orbits
    }
    return NomMorphism(states, TRUTH_NOM, mapping)


def final_orbit_names(a) -> frozenset:
    return frozenset(
        o.name for o in a.states.orbits if a.final.mapping[o.name][0] == "true"
    )


@contract.image_factorization.register
def _(f: NomMorphism):
    """Image of an equivariant map: the union of target orbits that are hit.
    Exact and symbolic; a hit orbit is hit entirely, by equivariance."""
    f.validate()
    hit = []
    for o in f.source.orbits:
        tgt = f.mapping[o.name][0]
        if tgt not in hit:
            hit.append(tgt)
    mid = NomObject(tuple(d for d in f.target.orbits if d.name in set(hit)))
    epi = NomMorphism(f.source, mid, dict(f.mapping))
    mono = NomMorphism(
        mid, f.target, {d.name: (d.name, tuple(range(d.dim))) for d in mid.orbits}
    )
    return epi, mid, mono


# --- pattern rules (the distinct-names convention) ---------------------------

@dataclass(frozen=True)
class PairRule:
    left_orbit: str
    right_orbit: str
    pattern: tuple  # per right position: ("l", i) shared with the left, or ("new", r)
    target_orbit: str
    target_sel: tuple  # per target position: ("l", i) or ("r", j)


def _pattern_of(left_atoms, right_atoms):
    pattern = []
    fresh_rank = {}
    for a in right_atoms:
        if a in left_atoms:
            pattern.append(("l", left_atoms.index(a)))
        else:
            if a not in fresh_rank:
                fresh_rank[a] = len(fresh_rank)
            pattern.append(("new", fresh_rank[a]))
    return tuple(pattern)


def _derive_sel(left_atoms, right_atoms, target_atoms):
    sel = []
    for a in target_atoms:
        if a in left_atoms:
            sel.append(("l", left_atoms.index(a)))
        elif a in right_atoms:
            sel.append(("r", right_atoms.index(a)))
        else:
            return None
    return tuple(sel)


@dataclass(frozen=True)
class NomPairMap:
    """A total equivariant map left x right -> target given by pattern
    rules."""

    left: NomObject
    right: NomObject
    target: NomObject
    rules: tuple

    @property
    def _by_key(self):
        cached = getattr(self, "_by_key_cache", None)
        if cached is None:
            cached = {}
            for r in self.rules:
                key = (r.left_orbit, r.right_orbit, r.pattern)
                if key in cached and cached[key] != r:
                    raise ValidationError(
                        f"overlapping rules for ({r.left_orbit!r}, {r.right_orbit!r}) "
                        f"with pattern {r.pattern!r}"
                    )
                cached[key] = r
            object.__setattr__(self, "_by_key_cache", cached)
        return cached

    def __call__(self, pair):
        q, s = pair
        ld = self.left.descriptor(q.orbit)
        rd = self.right.descriptor(s.orbit)
        results = set()
        for hl in ld.group:
            tl = tuple(q.atoms[hl[i]] for i in range(ld.dim))
            for hr in rd.group:
                tr = tuple(s.atoms[hr[j]] for j in range(rd.dim))
                rule = self._by_key.get((q.orbit, s.orbit, _pattern_of(tl, tr)))
                if rule is None:
                    continue
                atoms = tuple(
                    tl[i] if kind == "l" else tr[i] for kind, i in rule.target_sel
                )
                results.add(
                    make_element(self.target.descriptor(rule.target_orbit), atoms)
                )
        if not results:
            raise ValidationError(
                f"no rule matches ({q!r}, {s!r}); the rule set is not total"
            )
        if len(results) > 1:
            raise ValidationError(
                f"rules are ambiguous on ({q!r}, {s!r}): "
                f"targets {sorted(map(repr, results))}"
            )
        return results.pop()

    def validate_structure(self):
        for r in self.rules:
            ld = self.left.descriptor(r.left_orbit)
            rd = self.right.descriptor(r.right_orbit)
            td = self.target.descriptor(r.target_orbit)
            if len(r.pattern) != rd.dim:
                raise ValidationError(f"rule pattern arity mismatch in {r!r}")
            rank = 0
            for kind, i in r.pattern:
                if kind == "l":
                    if not 0 <= i < ld.dim:
                        raise ValidationError(f"rule pattern out of range in {r!r}")
                elif kind == "new":
                    if i != rank:
                        raise ValidationError(
                            f"fresh markers must be numbered in order in {r!r}"
                        )
                    rank += 1
                else:
                    raise ValidationError(f"unknown pattern entry in {r!r}")
            if len(r.target_sel) != td.dim:
                raise ValidationError(f"rule target arity mismatch in {r!r}")
            for kind, i in r.target_sel:
                if kind == "l" and not 0 <= i < ld.dim:
                    raise ValidationError(f"rule target out of range in {r!r}")
                if kind == "r" and not 0 <= i < rd.dim:
                    raise ValidationError(f"rule target out of range in {r!r}")
                if kind not in ("l", "r"):
                    raise ValidationError(f"unknown target entry in {r!r}")
        return self

    def validate_on_pool(self, pool):
        """Totality and determinism over every pool instantiation."""
        self.validate_structure()
        left_inst = instantiate(self.left, pool)
        right_inst = instantiate(self.right, pool)
        for q in left_inst.elements:
            for s in right_inst.elements:
                self((q, s))
        return self


def infer_pair_rules(left: NomObject, right: NomObject, target: NomObject,
                     concrete_fn, pool) -> NomPairMap:
    """Reconstruct the pattern rules of an equivariant pairwise function
    from its values on all pool instantiations.  The pool must realize
    every pattern: one atom beyond the combined dimensions."""
    need = left.max_dim() + right.max_dim()
    if len(pool.atoms) < need + 1:
        raise PoolMarginError(
            f"rule inference needs a pool of at least {need + 1} atoms, "
            f"got {len(pool.atoms)}"
        )
    left_inst = instantiate(left, pool)
    right_inst = instantiate(right, pool)
    rules = {}
    for q in left_inst.elements:
        for s in right_inst.elements:
            t = concrete_fn(q, s)
            sel = _derive_sel(q.atoms, s.atoms, t.atoms)
            if sel is None:
                raise ValidationError(
                    f"support increases at ({q!r}, {s!r}) -> {t!r}; "
                    "not an equivariant pairwise map"
                )
            key = (q.orbit, s.orbit, _pattern_of(q.atoms, s.atoms))
            candidate = PairRule(key[0], key[1], key[2], t.orbit, sel)
            prev = rules.get(key)
            if prev is None:
                rules[key] = candidate
            elif prev != candidate:
                # same pattern reached twice with different derivations:
                # they must denote the same element on this instance
                atoms_prev = tuple(
                    q.atoms[i] if kind == "l" else s.atoms[i]
                    for kind, i in prev.target_sel
                )
                same = (
                    prev.target_orbit == t.orbit
                    and make_element(target.descriptor(t.orbit), atoms_prev) == t
                )
                if not same:
                    raise ValidationError(
                        f"inconsistent images for pattern {key!r}: "
                        f"{prev!r} vs {candidate!r}"
                    )
    return NomPairMap(left, right, target, tuple(rules[k] for k in sorted(rules)))


# --- atom pools and instantiation --------------------------------------------

@dataclass(frozen=True)
class AtomPool:
    atoms: tuple

    def validate(self):
        if len(self.atoms) > POOL_CAP:
            raise CapExceededError(
                f"pool of {len(self.atoms)} atoms exceeds the cap of {POOL_CAP}"
            )
        if sorted(set(self.atoms)) != list(self.atoms):
            raise ValidationError("pool atoms must be strictly increasing")
        return self

    def swaps(self):
        return tuple(
            (self.atoms[i], self.atoms[i + 1]) for i in range(len(self.atoms) - 1)
        )


def pool_of_size(n) -> AtomPool:
    return AtomPool(tuple(range(1, n + 1))).validate()


@dataclass(frozen=True)
class PoolObject(contract.BackendObject):
    """A finite window of a nominal object: all elements with atoms drawn
    from the pool, with symmetry generated by adjacent transpositions."""

    pool: AtomPool
    elements: tuple
    action: Mapping  # ("swap", a, b) -> element map

    backend = "pool"

    def carrier(self):
        return self.elements

    def symmetry_actions(self):
        return self.action


def _remake_pool(template, elements, actions):
    return PoolObject(template.pool, tuple(elements), actions)


contract.register_remake(PoolObject, _remake_pool)


@contract.product.register
def _(x: PoolObject, y: contract.BackendObject):
    return contract.graph_product(x, y, _remake_pool)


@contract.quotient.register
def _(x: PoolObject, c: contract.Congruence):
    return contract.graph_quotient(x, c, _remake_pool)


@contract.finiteness.register
def _(x: PoolObject):
    norb = len(contract.orbit_partition(x.elements, list(x.action.values())))
    return contract.FinitenessReport(True, True, norb)


def truth_pool(pool: AtomPool) -> PoolObject:
    els = (False, True)
    action = {("swap", a, b): {e: e for e in els} for a, b in pool.swaps()}
    return PoolObject(pool, els, action)


def instantiate(x: NomObject, pool: AtomPool) -> PoolObject:
    """All elements of x with atoms in the pool, under the transposition
    action.  Fails when the pool cannot realize every orbit or the carrier
    would exceed the instantiation cap."""
    pool.validate()
    x.validate()
    if x.max_dim() > len(pool.atoms):
        raise PoolMarginError(
            f"pool of {len(pool.atoms)} atoms is smaller than the largest "
            f"orbit dimension {x.max_dim()}"
        )
    orbit_order = [o.name for o in x.orbits]
    elements = []
    for o in x.orbits:
        seen = set()
        for tup in itertools.permutations(pool.atoms, o.dim):
            el = make_element(o, tup)
            if el not in seen:
                seen.add(el)
                elements.append(el)
        if len(elements) > INSTANTIATION_CAP:
            raise CapExceededError(
                f"instantiation exceeds the cap of {INSTANTIATION_CAP} elements"
            )
    elements = tuple(
        sorted(elements, key=lambda e: (orbit_order.index(e.orbit), e.atoms))
    )
    action = {}
    for a, b in pool.swaps():
        perm = {a: b, b: a}
        action[("swap", a, b)] = {e: x.rename(e, perm) for e in elements}
    return PoolObject(pool, elements, action)


def instantiate_automaton(a, pool: AtomPool) -> Automaton:
    """The finite automaton on pool states and pool letters."""
    states = instantiate(a.states, pool)
    alphabet = instantiate(a.alphabet, pool)
    prod = contract.product(states, alphabet)
    state_set = set(states.elements)
    delta_graph = {}
    for q in states.elements:
        for s in alphabet.elements:
            t = a.delta((q, s))
            if t not in state_set:
                raise ValidationError(
                    f"transition target {t!r} of ({q!r}, {s!r}) escapes the pool window"
                )
            delta_graph[(q, s)] = t
    delta = contract.BackendMorphism(prod.obj, states, delta_graph)
    finals = final_orbit_names(a)
    final = contract.BackendMorphism(
        states, truth_pool(pool), {q: q.orbit in finals for q in states.elements}
    )
    return Automaton(alphabet, states, a.init, final, delta, name=a.name)


# --- abstraction: pool results back to orbit descriptors ---------------------

@dataclass(frozen=True)
class Abstraction:
    obj: NomObject
    element_of: Mapping  # concrete value -> NomElement
    rep_of: Mapping  # orbit name -> concrete representative value


def _apply_atom_perm(value, perm, swap_fn):
    """Apply a finite atom permutation via its transposition decomposition."""
    out = value
    seen = set()
    for a in sorted(perm):
        if a in seen or perm[a] == a:
            continue
        cycle = [a]
        x = perm[a]
        while x != a:
            cycle.append(x)
            x = perm[x]
        seen.update(cycle)
        for y in cycle[1:]:
            out = swap_fn(out, cycle[0], y)
    return out


def least_support(value, candidate, pool, swap_fn):
    """Shrink an ordered candidate support to the least support by the
    fresh-swap test: an atom is in the support iff swapping it with a fresh
    atom moves the value.  Needs one pool atom outside the candidate."""
    if not candidate:
        return ()
    cand_set = set(candidate)
    outside = [a for a in pool.atoms if a not in cand_set]
    if not outside:
        raise PoolMarginError(
            "support candidate saturates the atom pool; the value may not be "
            "expressible at this pool size (enlarge the pool margin)"
        )
    b0 = outside[0]
    return tuple(a for a in candidate if swap_fn(value, a, b0) != value)


def abstract_elements(values, pool, swap_fn, candidate_fn, name_prefix="O") -> Abstraction:
    """Orbit decomposition of a finite pool-symmetric family: orbits under
    adjacent transpositions, a least-support tuple and position stabilizer
    per orbit, and the nominal element of every value.

    ``swap_fn(v, a, b)`` applies an atom transposition; ``candidate_fn(v)``
    returns an ordered atom tuple guaranteed to contain the least support."""
    index = set(values)
    assigned = {}
    descriptors = []
    element_of = {}
    rep_of = {}
    for v in values:
        if v in assigned:
            continue
        orbit_name = f"{name_prefix}{len(descriptors)}"
        supp = least_support(v, tuple(candidate_fn(v)), pool, swap_fn)
        dim = len(supp)
        stab = []
        for h in itertools.permutations(range(dim)):
            perm = {supp[i]: supp[h[i]] for i in range(dim)}
            if _apply_atom_perm(v, perm, swap_fn) == v:
                stab.append(h)
        desc = OrbitDescriptor(orbit_name, dim, tuple(sorted(stab))).validate()
        descriptors.append(desc)
        rep_of[orbit_name] = v
        assigned[v] = orbit_name
        element_of[v] = make_element(desc, supp)
        frontier = [(v, {a: a for a in pool.atoms})]
        while frontier:
            nxt = []
            for cur, perm in frontier:
                for a, b in pool.swaps():
                    moved = swap_fn(cur, a, b)
                    if moved not in index:
                        raise ValidationError(
                            f"family is not closed under pool transpositions at {cur!r}"
                        )
                    if moved not in assigned:
                        swap = {a: b, b: a}
                        nperm = {x: swap.get(perm[x], perm[x]) for x in perm}
                        assigned[moved] = orbit_name
                        element_of[moved] = make_element(
                            desc, tuple(nperm[x] for x in supp)
                        )
                        nxt.append((moved, nperm))
            frontier = nxt
    obj = NomObject(tuple(descriptors)).validate()
    return Abstraction(obj, element_of, rep_of)


def abstract(pool_obj: PoolObject, source: NomObject, name_prefix="O") -> Abstraction:
    """Re-abstract a pool window of nominal elements to orbit descriptors;
    abstract(instantiate(x), x) is isomorphic to x."""

    def swap_fn(v, a, b):
        return source.rename(v, {a: b, b: a})

    return abstract_elements(
        pool_obj.elements, pool_obj.pool, swap_fn, lambda v: v.atoms, name_prefix
    )


@contract.quotient.register
def _(x: NomObject, c: contract.Congruence):
    """Quotient of a nominal object by a congruence given over one of its
    pool instantiations; the blocks are abstracted back to orbits."""
    if not isinstance(c.obj, PoolObject):
        raise ValidationError(
            "a nominal congruence is presented over a pool instantiation"
        )
    c.validate()
    pool = c.obj.pool

    def swap_block(b, u, v):
        perm = {u: v, v: u}
        return frozenset(x.rename(e, perm) for e in b)

    def candidate(b):
        best = min(b, key=lambda e: (len(e.atoms), e.atoms, e.orbit))
        return best.atoms

    blocks = c.blocks
    abstraction = abstract_elements(blocks, pool, swap_block, candidate, "Q")
    mapping = {}
    block_of = c.block_of
    for o in x.orbits:
        first = min(
            (e for e in c.obj.elements if e.orbit == o.name),
            key=lambda e: e.atoms,
        )
        el = abstraction.element_of[block_of[first]]
        sel = _selection_from_atoms(first.atoms, el.atoms, o.name)
        mapping[o.name] = (el.orbit, sel)
    proj = NomMorphism(x, abstraction.obj, mapping).validate()
    return abstraction.obj, proj


def _selection_from_atoms(source_atoms, target_atoms, where):
    sel = []
    for a in target_atoms:
        if a not in source_atoms:
            raise ValidationError(
                f"support increases when projecting {where!r}; not equivariant"
            )
        sel.append(source_atoms.index(a))
    return tuple(sel)


@contract.product.register
def _(x: NomObject, y: contract.BackendObject):
    """Pool-backed product of nominal objects, with the stability gate."""
    if not isinstance(y, NomObject):
        raise ValidationError("product of a nominal object needs a nominal object")
    size = x.max_dim() + y.max_dim() + DEFAULT_MARGIN
    first = _pool_product(x, y, pool_of_size(size))
    second = _pool_product(x, y, pool_of_size(size + 1))
    sig = lambda res: tuple((o.dim, o.group) for o in res.obj.orbits)
    if sig(first) != sig(second):
        raise PoolStabilityError(
            "product orbits changed when the pool grew by one atom"
        )
    return first


def _pool_product(x, y, pool):
    xi = instantiate(x, pool)
    yi = instantiate(y, pool)
    pairs = tuple((a, b) for a in xi.elements for b in yi.elements)

    def swap_fn(p, u, v):
        perm = {u: v, v: u}
        return (x.rename(p[0], perm), y.rename(p[1], perm))

    def candidate(p):
        extra = tuple(t for t in p[1].atoms if t not in p[0].atoms)
        return p[0].atoms + extra

    abstraction = abstract_elements(pairs, pool, swap_fn, candidate, "P")
    proj1_map, proj2_map = {}, {}
    for name, rep in abstraction.rep_of.items():
        el = abstraction.element_of[rep]
        proj1_map[name] = (rep[0].orbit, _selection_from_atoms(el.atoms, rep[0].atoms, name))
        proj2_map[name] = (rep[1].orbit, _selection_from_atoms(el.atoms, rep[1].atoms, name))
    proj1 = NomMorphism(abstraction.obj, x, proj1_map).validate()
    proj2 = NomMorphism(abstraction.obj, y, proj2_map).validate()
    pairing = infer_pair_rules(
        x, y, abstraction.obj, lambda a, b: abstraction.element_of[(a, b)], pool
    )
    return contract.ProductResult(
        abstraction.obj, proj1, proj2, lambda a, b: pairing((a, b))
    )


# --- automata ----------------------------------------------------------------

def make_nominal_automaton(alphabet, states, init, final_orbits, rules, name="A"):
    delta = NomPairMap(states, alphabet, states, tuple(rules))
    final = final_morphism(states, final_orbits)
    return Automaton(alphabet, states, init, final, delta, name=name)


def validate_automaton(a):
    a.states.validate()
    a.alphabet.validate()
    if not isinstance(a.init, NomElement):
        raise ValidationError("initial state must be a nominal element")
    d = a.states.descriptor(a.init.orbit)
    if d.dim != 0:
        raise ValidationError(
            f"initial state lies in orbit {d.name!r} of dimension {d.dim}; "
            "it must be a fixed point (dimension 0)"
        )
    if not isinstance(a.final, NomMorphism) or a.final.target is not TRUTH_NOM:
        raise ValidationError("final predicate must map into the truth object")
    a.final.validate()
    if not isinstance(a.delta, NomPairMap):
        raise ValidationError("transition map must be a pattern-rule map")
    if a.delta.left is not a.states or a.delta.right is not a.alphabet:
        if a.delta.left != a.states or a.delta.right != a.alphabet:
            raise ValidationError("transition map is over different objects")
    size = a.states.max_dim() + a.alphabet.max_dim() + DEFAULT_MARGIN
    a.delta.validate_on_pool(pool_of_size(size))
    return a


def complement_nominal(a):
    finals = final_orbit_names(a)
    other = {o.name for o in a.states.orbits} - finals
    return Automaton(
        a.alphabet, a.states, a.init, final_morphism(a.states, other), a.delta,
        name=a.name,
    )


def letters_relative_to(base_atoms, desc: OrbitDescriptor):
    """All letters of one alphabet orbit up to renaming fresh atoms: tuples
    over the base atoms plus normalized fresh atoms."""
    fresh_start = max(base_atoms, default=0) + 1
    fresh = tuple(range(fresh_start, fresh_start + desc.dim))
    out = []
    seen = set()
    for tup in itertools.permutations(tuple(base_atoms) + fresh, desc.dim):
        norm = {}
        mapped = []
        for a in tup:
            if a in base_atoms:
                mapped.append(a)
            else:
                if a not in norm:
                    norm[a] = fresh[len(norm)]
                mapped.append(norm[a])
        el = make_element(desc, mapped)
        if el not in seen:
            seen.add(el)
            out.append(el)
    return sorted(out, key=lambda e: e.atoms)


def reachable_nominal(a):
    """Orbit-level closure of the initial state under representative
    letters; the reachable subobject is a union of orbits."""
    reached = {a.init.orbit}
    frontier = [a.init]
    while frontier:
        nxt = []
        for q in frontier:
            for sd in a.alphabet.orbits:
                for s in letters_relative_to(q.atoms, sd):
                    t = a.delta((q, s))
                    if t.orbit not in reached:
                        reached.add(t.orbit)
                        nxt.append(t)
        frontier = nxt
    kept = tuple(o for o in a.states.orbits if o.name in reached)
    sub_states = NomObject(kept)
    rules = tuple(r for r in a.delta.rules if r.left_orbit in reached)
    for r in rules:
        if r.target_orbit not in reached:
            raise ValidationError(
                "a transition from a reachable orbit leaves the reachable set"
            )
    sub = Automaton(
        a.alphabet,
        sub_states,
        a.init,
        final_morphism(sub_states, final_orbit_names(a) & reached),
        NomPairMap(sub_states, a.alphabet, sub_states, rules),
        name=a.name,
    )
    mono = AutomatonMorphism(
        sub,
        a,
        NomMorphism(
            sub_states, a.states, {o.name: (o.name, tuple(range(o.dim))) for o in kept}
        ),
    )
    return sub, mono


def check_morphism_nominal(m: AutomatonMorphism) -> MorphismVerdict:
    violations = []
    if m.source.alphabet != m.target.alphabet:
        return MorphismVerdict(("source and target do not share an alphabet",))
    if not isinstance(m.h, NomMorphism):
        return MorphismVerdict(("state map is not an equivariant orbit map",))
    try:
        m.h.validate()
    except ValidationError as exc:
        return MorphismVerdict((str(exc),))
    if m.h(m.source.init) != m.target.init:
        violations.append(
            f"initial state maps to {m.h(m.source.init)!r}, not {m.target.init!r}"
        )
    for o in m.source.states.orbits:
        rep = make_element(o, tuple(range(1, o.dim + 1)))
        if m.source.is_final(rep) != m.target.is_final(m.h(rep)):
            violations.append(
                f"orbit {o.name!r} is {'final' if m.source.is_final(rep) else 'non-final'} "
                f"but its image orbit is not"
            )
        for sd in m.source.alphabet.orbits:
            for s in letters_relative_to(rep.atoms, sd):
                lhs = m.h(m.source.delta((rep, s)))
                rhs = m.target.delta((m.h(rep), s))
                if lhs != rhs:
                    violations.append(
                        f"transition square fails at ({rep!r}, {s!r}): "
                        f"h(delta(q,s)) = {lhs!r} but delta(h(q),s) = {rhs!r}"
                    )
    return MorphismVerdict(tuple(violations))


# --- minimization -------------------------------------------------------------

def minimize_nominal(a, margin=DEFAULT_MARGIN) -> MinimizationResult:
    """Pool-driven minimization with the stability gate: the refinement runs
    at pool sizes B and B+1 and the abstracted results must be isomorphic."""
    validate_automaton(a)
    r_sym, mono = reachable_nominal(a)
    size = r_sym.states.max_dim() + a.alphabet.max_dim() + margin
    first = _pool_minimize(r_sym, pool_of_size(size))
    second = _pool_minimize(r_sym, pool_of_size(size + 1))
    if canonical_form_nominal(first) != canonical_form_nominal(second):
        raise PoolStabilityError(
            "minimization result changed when the pool grew by one atom: "
            f"{len(first.states.orbits)} orbits at pool {size} vs "
            f"{len(second.states.orbits)} at pool {size + 1}"
        )
    epi_h = _epi_to_quotient(r_sym, first, pool_of_size(size))
    epi = AutomatonMorphism(r_sym, first, epi_h)
    result = MinimizationResult(first, r_sym, mono, epi)
    for leg in (mono, epi):
        verdict = check_morphism_nominal(leg)
        if not verdict.valid:
            raise ValidationError(
                f"minimization produced an invalid span leg: {verdict.violations[0]}"
            )
    return result


def _pool_minimize(r_sym, pool) -> Automaton:
    inst = instantiate_automaton(r_sym, pool)
    r_inst, _ = _automata.reachable(inst)
    if len(r_inst.states.carrier()) != len(inst.states.carrier()):
        raise ValidationError(
            "pool window of a reachable automaton must be pool-reachable"
        )
    enc = _automata.encode(inst)
    block_ids = _automata.refine_partition(enc)
    blocks = contract.partition_blocks(enc.states, block_ids)
    block_of = {}
    for b in blocks:
        for q in b:
            block_of[q] = b

    def swap_block(b, u, v):
        perm = {u: v, v: u}
        return frozenset(r_sym.states.rename(e, perm) for e in b)

    def candidate(b):
        best = min(b, key=lambda e: (len(e.atoms), e.atoms, e.orbit))
        return best.atoms

    abstraction = abstract_elements(blocks, pool, swap_block, candidate, "Q")
    min_states = abstraction.obj

    finals = final_orbit_names(r_sym)
    final_orbits = set()
    for o in min_states.orbits:
        rep = abstraction.rep_of[o.name]
        flags = {e.orbit in finals for e in rep}
        if len(flags) != 1:
            raise ValidationError("a Nerode block mixes final and non-final states")
        if flags.pop():
            final_orbits.add(o.name)

    init_el = abstraction.element_of[block_of[r_sym.init]]
    if min_states.descriptor(init_el.orbit).dim != 0:
        raise ValidationError("the class of the initial state must be a fixed point")

    inv = {el: b for b, el in abstraction.element_of.items()}

    def concrete_delta(q_el, s_el):
        b = inv[q_el]
        member = min(b, key=lambda e: (len(e.atoms), e.atoms, e.orbit))
        return abstraction.element_of[block_of[inst.delta.graph[(member, s_el)]]]

    delta = infer_pair_rules(min_states, r_sym.alphabet, min_states, concrete_delta, pool)
    minimal = Automaton(
        r_sym.alphabet,
        min_states,
        init_el,
        final_morphism(min_states, final_orbits),
        delta,
        name=r_sym.name + ".min",
    )
    return validate_automaton(minimal)


def _epi_to_quotient(r_sym, minimal, pool) -> NomMorphism:
    """The block projection as an orbit map, recovered from pool data."""
    inst = instantiate_automaton(r_sym, pool)
    inst_min = instantiate_automaton(minimal, pool)
    # identify the class of each reachable orbit representative by running
    # both automata in lockstep over reaching words
    mapping = {}
    # breadth-first over pairs (state of r_sym, state of minimal)
    seen = {(r_sym.init, minimal.init)}
    frontier = [(r_sym.init, minimal.init)]
    letters = inst.alphabet.carrier()
    while frontier:
        nxt = []
        for q, qm in frontier:
            if q.orbit not in mapping:
                # an equivariant map on an orbit is determined by its value
                # at any one point, so one lockstep pair fixes the selection
                sel = _selection_from_atoms(q.atoms, qm.atoms, q.orbit)
                mapping[q.orbit] = (qm.orbit, sel)
            for s in letters:
                t = (inst.delta.graph[(q, s)], inst_min.delta.graph[(qm, s)])
                if t not in seen:
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
    missing = [o.name for o in r_sym.states.orbits if o.name not in mapping]
    if missing:
        raise ValidationError(f"projection is undefined on orbit {missing[0]!r}")
    return NomMorphism(r_sym.states, minimal.states, mapping).validate()


# --- canonical forms and equivalence ------------------------------------------

def canonical_form_nominal(a):
    """A relabel-invariant fingerprint: the witness-word canonical form of
    the pool window at the policy pool size.  Faithful at that size by the
    same pool-sufficiency policy that drives every nominal computation."""
    r, _ = reachable_nominal(a)
    size = r.states.max_dim() + a.alphabet.max_dim() + DEFAULT_MARGIN
    inst = instantiate_automaton(r, pool_of_size(size))
    return _automata.canonical_form(inst)


def distinguishing_word_nominal(a, b, margin=DEFAULT_MARGIN):
    """Pool-instantiated synchronous product search, gated on the verdict."""
    if a.alphabet != b.alphabet:
        raise ValidationError("automata do not share an alphabet")
    size = (
        a.states.max_dim() + b.states.max_dim() + a.alphabet.max_dim() + margin
    )
    w1 = _pool_witness(a, b, pool_of_size(size))
    w2 = _pool_witness(a, b, pool_of_size(size + 1))
    if (w1 is None) != (w2 is None):
        raise PoolStabilityError(
            "equivalence verdict changed when the pool grew by one atom"
        )
    return w1


def _pool_witness(a, b, pool):
    from . import _kernel

    ia = instantiate_automaton(a, pool)
    ib = instantiate_automaton(b, pool)
    letters = ia.alphabet.carrier()
    ea = _automata.encode(ia, letter_order=letters)
    eb = _automata.encode(ib, letter_order=letters)
    word = _kernel.product_witness(
        len(letters), ea.delta, ea.final, ea.init, len(ea.states),
        eb.delta, eb.final, eb.init, len(eb.states),
    )
    if word is None:
        return None
    return tuple(letters[s] for s in word)


# --- monoids -------------------------------------------------------------------

class OrbitFlagMap:
    """chi as a mapping on elements, constant on orbits."""

    def __init__(self, flags):
        self.flags = dict(flags)

    def __getitem__(self, el):
        return self.flags[el.orbit]

    def __eq__(self, other):
        return isinstance(other, OrbitFlagMap) and self.flags == other.flags


class LetterImageMap:
    """phi as a mapping on letters, backed by an orbit map."""

    def __init__(self, morphism: NomMorphism):
        self.morphism = morphism

    def __getitem__(self, s):
        return self.morphism(s)


def transition_monoid_nominal(a, cap, margin=DEFAULT_MARGIN):
    """Pool-driven transition monoid with the stability gate.  Raises a
    pool error when element supports saturate the pool: the monoid then has
    no orbit-finite representation at this pool policy."""
    from .monoid import LMonoid

    validate_automaton(a)
    size = a.states.max_dim() + a.alphabet.max_dim() + margin
    try:
        first = _pool_transition_monoid(a, pool_of_size(size), cap)
        second = _pool_transition_monoid(a, pool_of_size(size + 1), cap)
    except PoolMarginError as exc:
        raise PoolMarginError(
            f"{exc} [transition-monoid elements need more atoms than the "
            f"pool provides at every margin tried; the monoid admits no "
            f"orbit-finite representation at this pool policy]"
        ) from exc
    fp1 = canonical_form_nominal(monoid_to_automaton_nominal(first))
    fp2 = canonical_form_nominal(monoid_to_automaton_nominal(second))
    if fp1 != fp2:
        raise PoolStabilityError(
            "transition monoid changed when the pool grew by one atom: "
            f"{len(first.monoid.carrier.orbits)} orbits at pool {size} vs "
            f"{len(second.monoid.carrier.orbits)} at pool {size + 1}; "
            "the monoid is not stable at this pool policy"
        )
    return first


def _pool_transition_monoid(a, pool, cap):
    from . import _kernel
    from .monoid import FinPresMonoid, LMonoid

    inst = instantiate_automaton(a, pool)
    enc = _automata.encode(inst)
    n, k = len(enc.states), len(enc.letters)
    rows, via, truncated = _kernel.close_transitions(n, k, enc.delta, cap)
    if truncated:
        raise CapExceededError(
            f"transition-monoid closure exceeded the cap of {cap} elements"
        )
    words = [()] * len(rows)
    for i in range(1, len(rows)):
        parent, letter = via[i]
        words[i] = words[parent] + (enc.letters[letter],)
    word_of_row = dict(zip(rows, words))

    # state-index permutation per atom transposition, for conjugating rows
    sindex = {q: i for i, q in enumerate(enc.states)}
    swap_perms = {}
    for u, v in itertools.combinations(pool.atoms, 2):
        rename = {u: v, v: u}
        perm = [0] * n
        inv = [0] * n
        for i, q in enumerate(enc.states):
            perm[i] = sindex[a.states.rename(q, rename)]
        for i, j in enumerate(perm):
            inv[j] = i
        swap_perms[(u, v)] = (perm, inv)

    def swap_row(row, u, v):
        perm, inv = swap_perms[(u, v) if u < v else (v, u)]
        return tuple(perm[row[inv[i]]] for i in range(n))

    def candidate(row):
        atoms = []
        for letter in word_of_row[row]:
            for at in letter.atoms:
                if at not in atoms:
                    atoms.append(at)
        return tuple(atoms)

    abstraction = abstract_elements(tuple(rows), pool, swap_row, candidate, "M")
    carrier = abstraction.obj
    inv_el = {el: row for row, el in abstraction.element_of.items()}

    def concrete_mult(x_el, y_el):
        rx, ry = inv_el[x_el], inv_el[y_el]
        return abstraction.element_of[tuple(ry[i] for i in rx)]

    mult = infer_pair_rules(carrier, carrier, carrier, concrete_mult, pool)

    unit = abstraction.element_of[tuple(range(n))]
    if carrier.descriptor(unit.orbit).dim != 0:
        raise ValidationError("the identity endofunction must be a fixed point")

    phi_map = {}
    for sd in a.alphabet.orbits:
        rep = make_element(sd, tuple(range(1, sd.dim + 1)))
        col = tuple(
            sindex[inst.delta.graph[(q, rep)]] for q in enc.states
        )
        el = abstraction.element_of[col]
        phi_map[sd.name] = (el.orbit, _selection_from_atoms(rep.atoms, el.atoms, sd.name))
    phi_morphism = NomMorphism(a.alphabet, carrier, phi_map).validate()

    chi_flags = {}
    finals = final_orbit_names(a)
    for o in carrier.orbits:
        rep_row = inv_el[make_element(o, tuple(range(1, o.dim + 1)))]
        flag = enc.states[rep_row[enc.init]].orbit in finals
        for el, row in inv_el.items():
            if el.orbit == o.name:
                if (enc.states[row[enc.init]].orbit in finals) != flag:
                    raise ValidationError(
                        f"accepting predicate is not constant on orbit {o.name!r}"
                    )
        chi_flags[o.name] = flag

    witnesses = {el: word_of_row[row] for el, row in inv_el.items()}
    monoid = FinPresMonoid(
        carrier=carrier, unit=unit, pair_map=mult, witnesses=witnesses
    )
    return LMonoid(monoid, LetterImageMap(phi_morphism), OrbitFlagMap(chi_flags), reference=a)


def syntactic_monoid_nominal(a, cap, margin=DEFAULT_MARGIN):
    minimal = minimize_nominal(a, margin=margin).automaton
    return transition_monoid_nominal(minimal, cap=cap, margin=margin)


def monoid_to_automaton_nominal(lm):
    """Cayley automaton of a nominal recognizing monoid: states the carrier,
    transitions by right multiplication with letter images."""
    carrier = lm.monoid.carrier
    alphabet = lm.reference.alphabet
    size = carrier.max_dim() + alphabet.max_dim() + DEFAULT_MARGIN

    def concrete_delta(m_el, s_el):
        return lm.monoid.mult_el(m_el, lm.phi[s_el])

    delta = infer_pair_rules(
        carrier, alphabet, carrier, concrete_delta, pool_of_size(size)
    )
    finals = {o.name for o in carrier.orbits if lm.chi.flags[o.name]}
    aut = Automaton(
        alphabet,
        carrier,
        lm.monoid.unit,
        final_morphism(carrier, finals),
        delta,
        name=lm.reference.name + ".cayley",
    )
    return validate_automaton(aut)


def validate_monoid_on_pool(lm, pool=None):
    """Associativity, unit laws and recognition of chi/phi over a pool."""
    carrier = lm.monoid.carrier
    if pool is None:
        pool = pool_of_size(3 * carrier.max_dim() + DEFAULT_MARGIN)
    inst = instantiate(carrier, pool)
    els = inst.elements
    for x in els:
        if lm.monoid.mult_el(lm.monoid.unit, x) != x:
            raise ValidationError(f"unit law fails at {x!r}")
        if lm.monoid.mult_el(x, lm.monoid.unit) != x:
            raise ValidationError(f"unit law fails at {x!r}")
    for x in els:
        for y in els:
            xy = lm.monoid.mult_el(x, y)
            for z in els:
                if lm.monoid.mult_el(xy, z) != lm.monoid.mult_el(x, lm.monoid.mult_el(y, z)):
                    raise ValidationError(f"associativity fails at ({x!r},{y!r},{z!r})")
    return lm
