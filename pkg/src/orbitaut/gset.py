"""The finite group-action backend.

Groups are given by full multiplication tables (the file format also takes
permutation generators and closes the table at load).  Objects carry one
action map per group element so equivariance checks are direct lookups.

Automaton-level transport lives here too: restricting an H-automaton along
a homomorphism G -> H, and forgetting the action down to the set backend.
"""

from dataclasses import dataclass
from typing import Mapping

from . import contract
from .contract import FinitenessReport, graph_product, graph_quotient, orbit_partition
from .errors import ValidationError


@dataclass(frozen=True)
class FinGroup:
    elements: tuple
    identity: str
    table: Mapping  # (g, h) -> g*h

    def validate(self):
        els = set(self.elements)
        if len(els) != len(self.elements):
            raise ValidationError("duplicate group elements")
        if self.identity not in els:
            raise ValidationError(f"identity {self.identity!r} not a group element")
        for g in self.elements:
            for h in self.elements:
                if (g, h) not in self.table:
                    raise ValidationError(f"multiplication table misses {g!r}*{h!r}")
                if self.table[(g, h)] not in els:
                    raise ValidationError(f"{g!r}*{h!r} lands outside the group")
        for g in self.elements:
            if self.table[(self.identity, g)] != g or self.table[(g, self.identity)] != g:
                raise ValidationError(f"identity law fails at {g!r}")
        for g in self.elements:
            for h in self.elements:
                for k in self.elements:
                    if self.table[(self.table[(g, h)], k)] != self.table[(g, self.table[(h, k)])]:
                        raise ValidationError(f"associativity fails at ({g!r},{h!r},{k!r})")
        for g in self.elements:
            if not any(self.table[(g, h)] == self.identity for h in self.elements):
                raise ValidationError(f"{g!r} has no inverse")
        return self

    def mul(self, g, h):
        return self.table[(g, h)]

    def inverse(self, g):
        for h in self.elements:
            if self.table[(g, h)] == self.identity:
                return h
        raise ValidationError(f"{g!r} has no inverse")


def cyclic_group(n, names=None):
    """Z/nZ, elements named g0..g{n-1} unless names are supplied."""
    if names is None:
        names = tuple(f"g{i}" for i in range(n))
    table = {(names[i], names[j]): names[(i + j) % n] for i in range(n) for j in range(n)}
    return FinGroup(tuple(names), names[0], table).validate()


def group_from_generator_perms(named_perms, max_size=10000):
    """Close named permutations (dicts on a common ground set) into a group.

    Element names are the shortlex-least generator words, the identity is
    named ``e``.  Raises on name collisions; supply a full table instead.
    """
    ground = None
    for name, p in named_perms:
        if ground is None:
            ground = tuple(sorted(p))
        if sorted(p) != list(ground) or sorted(p.values()) != list(ground):
            raise ValidationError(f"generator {name!r} is not a permutation of the ground set")
    ident = tuple(sorted(ground)) if ground else ()
    key = lambda p: tuple(p[i] for i in ident)
    perms = {key({i: i for i in ident}): "e"}
    rows = [{i: i for i in ident}]
    frontier = [0]
    while frontier:
        nxt = []
        for fi in frontier:
            f = rows[fi]
            fname = perms[key(f)]
            for name, p in named_perms:
                comp = {i: p[f[i]] for i in ident}  # f then p
                k = key(comp)
                if k not in perms:
                    if len(rows) >= max_size:
                        raise ValidationError("generator closure exceeds the size cap")
                    word = name if fname == "e" else fname + name
                    if any(word == existing for existing in perms.values()):
                        raise ValidationError(
                            f"generator word {word!r} collides with an element name; "
                            "use an explicit table"
                        )
                    perms[k] = word
                    rows.append(comp)
                    nxt.append(len(rows) - 1)
        frontier = nxt
    names = [perms[key(r)] for r in rows]
    index = {key(r): names[i] for i, r in enumerate(rows)}
    table = {}
    for i, f in enumerate(rows):
        for j, g in enumerate(rows):
            comp = {x: g[f[x]] for x in ident}  # f then g
            table[(names[i], names[j])] = index[key(comp)]
    return FinGroup(tuple(names), "e", table).validate()


@dataclass(frozen=True)
class GroupHom:
    source: FinGroup
    target: FinGroup
    mapping: Mapping

    def validate(self):
        for g in self.source.elements:
            if g not in self.mapping:
                raise ValidationError(f"homomorphism undefined on {g!r}")
            if self.mapping[g] not in set(self.target.elements):
                raise ValidationError(f"image of {g!r} is not in the target group")
        if self.mapping[self.source.identity] != self.target.identity:
            raise ValidationError("homomorphism does not preserve the identity")
        for g in self.source.elements:
            for h in self.source.elements:
                lhs = self.mapping[self.source.mul(g, h)]
                rhs = self.target.mul(self.mapping[g], self.mapping[h])
                if lhs != rhs:
                    raise ValidationError(f"homomorphism law fails at ({g!r},{h!r})")
        return self

    def __call__(self, g):
        return self.mapping[g]


def identity_hom(group):
    return GroupHom(group, group, {g: g for g in group.elements})


@dataclass(frozen=True)
class GSetObject(contract.BackendObject):
    group: FinGroup
    elements: tuple
    action: Mapping  # g -> {x -> g.x}

    backend = "gset"

    def validate(self):
        els = set(self.elements)
        if len(els) != len(self.elements):
            raise ValidationError("duplicate elements in G-set")
        for g in self.group.elements:
            if g not in self.action:
                raise ValidationError(f"no action map for group element {g!r}")
            amap = self.action[g]
            if set(amap) != els or set(amap.values()) != els:
                raise ValidationError(f"action of {g!r} is not a permutation of the carrier")
        ident = self.action[self.group.identity]
        for x in self.elements:
            if ident[x] != x:
                raise ValidationError(f"identity moves {x!r}")
        for g in self.group.elements:
            for h in self.group.elements:
                gh = self.group.mul(g, h)
                for x in self.elements:
                    if self.action[gh][x] != self.action[g][self.action[h][x]]:
                        raise ValidationError(
                            f"action law fails: ({g!r}*{h!r}).{x!r} != {g!r}.({h!r}.{x!r})"
                        )
        return self

    def carrier(self):
        return self.elements

    def symmetry_actions(self):
        return self.action

    def apply(self, g, x):
        return self.action[g][x]


def trivial_gset(group, elements):
    action = {g: {x: x for x in elements} for g in group.elements}
    return GSetObject(group, tuple(elements), action)


def close_action(group, elements, partial_action):
    """Extend an action given on a generating subset of the group to all of
    it, by composing along the multiplication table."""
    known = dict(partial_action)
    known.setdefault(group.identity, {x: x for x in elements})
    changed = True
    while changed and len(known) < len(group.elements):
        changed = False
        for g in list(known):
            for h in list(known):
                gh = group.mul(g, h)
                if gh not in known:
                    known[gh] = {x: known[g][known[h][x]] for x in elements}
                    changed = True
    missing = [g for g in group.elements if g not in known]
    if missing:
        raise ValidationError(
            f"action generators do not generate the group; missing {missing[0]!r}"
        )
    return {g: known[g] for g in group.elements}


def _remake(template, elements, actions):
    return GSetObject(template.group, tuple(elements), actions)


contract.register_remake(GSetObject, _remake)


@contract.product.register
def _(x: GSetObject, y: contract.BackendObject):
    return graph_product(x, y, _remake)


@contract.quotient.register
def _(x: GSetObject, c: contract.Congruence):
    return graph_quotient(x, c, _remake)


def orbits(x: GSetObject):
    """The partition of the carrier into G-orbits, in first-occurrence order."""
    return orbit_partition(x.carrier(), list(x.action.values()))


def fixed_points(x: GSetObject):
    """Elements fixed by every group element."""
    return tuple(
        e for e in x.elements if all(x.action[g][e] == e for g in x.group.elements)
    )


@contract.finiteness.register
def _(x: GSetObject):
    return FinitenessReport(True, True, len(orbits(x)))


def truth_gset(group):
    return trivial_gset(group, (False, True))


# --- automaton-level transport (defined over the Automaton class) ---------

def restrict_automaton(f: GroupHom, a):
    """Transport an automaton over f's target group to one over its source:
    same carriers, G acting through f.  The recognized word set is unchanged."""
    from .automata import Automaton

    if a.backend != "gset":
        raise ValidationError("restriction applies to group-action automata")
    if a.states.group is not f.target and a.states.group.elements != f.target.elements:
        raise ValidationError("homomorphism target does not match the automaton's group")

    def restrict_obj(obj):
        action = {g: dict(obj.action[f(g)]) for g in f.source.elements}
        return GSetObject(f.source, obj.elements, action)

    states = restrict_obj(a.states)
    alphabet = restrict_obj(a.alphabet)
    prod = contract.product(states, alphabet)
    truth = truth_gset(f.source)
    delta = contract.BackendMorphism(prod.obj, states, dict(a.delta.graph))
    final = contract.BackendMorphism(states, truth, dict(a.final.graph))
    return Automaton(alphabet, states, a.init, final, delta, name=a.name).validate()


def forget(a):
    """Strip the group action down to the set backend; languages coincide
    word for word."""
    from .automata import Automaton
    from .finset import TRUTH, SetObject

    if a.backend != "gset":
        raise ValidationError("forget applies to group-action automata")
    states = SetObject(a.states.elements)
    alphabet = SetObject(a.alphabet.elements)
    prod = contract.product(states, alphabet)
    delta = contract.BackendMorphism(prod.obj, states, dict(a.delta.graph))
    final = contract.BackendMorphism(states, TRUTH, dict(a.final.graph))
    return Automaton(alphabet, states, a.init, final, delta, name=a.name).validate()
