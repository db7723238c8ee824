"""Shared builders: the two worked examples and seeded random corpora."""

import random
from pathlib import Path

import pytest

from orbitaut import automata, gset, nominal
from orbitaut.automata import make_automaton
from orbitaut.finset import SetObject
from orbitaut.gset import FinGroup, GSetObject, cyclic_group
from orbitaut.nominal import (
    NomElement,
    NomObject,
    OrbitDescriptor,
    PairRule,
    make_nominal_automaton,
)

FILES = Path(__file__).parent / "files"


# --- worked examples ---------------------------------------------------------

def build_z2():
    return cyclic_group(2, names=("e", "g"))


def build_involution_alphabet(z2):
    return GSetObject(
        z2, ("a", "abar"),
        {"e": {"a": "a", "abar": "abar"}, "g": {"a": "abar", "abar": "a"}},
    ).validate()


def build_first_neq_last(redundant=True):
    """The sets-with-involution example: words of length >= 2 whose first
    and last letters differ.  ``redundant=True`` gives the 9-state variant
    tracking (first, last, parity); the minimal automaton has 5 states."""
    z2 = build_z2()
    sigma = build_involution_alphabet(z2)
    bar = {"a": "abar", "abar": "a"}
    states = ["s0"] + [(f, l, p) for f in ("a", "abar") for l in ("a", "abar") for p in (0, 1)]
    action = {
        "e": {q: q for q in states},
        "g": {q: q if q == "s0" else (bar[q[0]], bar[q[1]], q[2]) for q in states},
    }
    Q = GSetObject(z2, tuple(states), action).validate()
    delta = {}
    for x in ("a", "abar"):
        delta[("s0", x)] = (x, x, 1)
    for f in ("a", "abar"):
        for l in ("a", "abar"):
            for p in (0, 1):
                for x in ("a", "abar"):
                    delta[((f, l, p), x)] = (f, x, 1 - p)
    finals = {q for q in states if q != "s0" and q[0] != q[1]}
    a = make_automaton(sigma, Q, "s0", finals, delta, name="first_neq_last").validate()
    if redundant:
        return a
    return automata.minimize(a).automaton


def first_neq_last_membership(word):
    return len(word) >= 2 and word[0] != word[-1]


def build_atoms_alphabet():
    return NomObject((OrbitDescriptor("A", 1),)).validate()


def build_first_letter_repeats():
    """The nominal example: words whose first letter appears again."""
    alpha = build_atoms_alphabet()
    states = NomObject(
        (OrbitDescriptor("OL", 0), OrbitDescriptor("Oa", 1), OrbitDescriptor("Otop", 0))
    ).validate()
    rules = (
        PairRule("OL", "A", (("new", 0),), "Oa", (("r", 0),)),
        PairRule("Oa", "A", (("l", 0),), "Otop", ()),
        PairRule("Oa", "A", (("new", 0),), "Oa", (("l", 0),)),
        PairRule("Otop", "A", (("new", 0),), "Otop", ()),
    )
    return make_nominal_automaton(
        alpha, states, NomElement("OL", ()), {"Otop"}, rules, name="ex_repeat"
    )


def build_first_letter_repeats_redundant():
    """The same language with an extra dimension-1 orbit duplicating the
    register orbit: reading the first letter goes to Ob, any later
    non-matching letter moves to Oa."""
    alpha = build_atoms_alphabet()
    states = NomObject((
        OrbitDescriptor("OL", 0),
        OrbitDescriptor("Oa", 1),
        OrbitDescriptor("Ob", 1),
        OrbitDescriptor("Otop", 0),
    )).validate()
    rules = (
        PairRule("OL", "A", (("new", 0),), "Ob", (("r", 0),)),
        PairRule("Oa", "A", (("l", 0),), "Otop", ()),
        PairRule("Oa", "A", (("new", 0),), "Oa", (("l", 0),)),
        PairRule("Ob", "A", (("l", 0),), "Otop", ()),
        PairRule("Ob", "A", (("new", 0),), "Oa", (("l", 0),)),
        PairRule("Otop", "A", (("new", 0),), "Otop", ()),
    )
    return make_nominal_automaton(
        alpha, states, NomElement("OL", ()), {"Otop"}, rules, name="ex_repeat_fat"
    )


def first_letter_repeats_membership(word):
    atoms = [s.atoms[0] for s in word]
    return len(atoms) >= 2 and atoms[0] in atoms[1:]


# --- random corpora ----------------------------------------------------------

def random_set_automaton(rng, max_states=12, letters=("a", "b")):
    n = rng.randint(1, max_states)
    states = tuple(f"q{i}" for i in range(n))
    sigma = SetObject(tuple(letters))
    Q = SetObject(states)
    delta = {
        (q, s): states[rng.randrange(n)] for q in states for s in letters
    }
    finals = {q for q in states if rng.random() < 0.4}
    init = states[0]
    return make_automaton(sigma, Q, init, finals, delta, name="rand").validate()


def random_gset_automaton(rng, group, max_free_orbits=3, letter_free=True):
    """Random equivariant automaton: states are free orbits plus fixed
    points, transitions chosen on orbit representatives and extended by
    equivariance."""
    k = len(group.elements)
    n_free = rng.randint(0, max_free_orbits)
    n_fixed = rng.randint(1, 2)
    states = []
    for i in range(n_free):
        states += [("f", i, g) for g in group.elements]
    for j in range(n_fixed):
        states.append(("c", j))
    action = {}
    for g in group.elements:
        amap = {}
        for q in states:
            if q[0] == "f":
                amap[q] = ("f", q[1], group.mul(g, q[2]))
            else:
                amap[q] = q
        action[g] = amap
    Q = GSetObject(group, tuple(states), action).validate()

    if letter_free:
        letters = tuple(("l", g) for g in group.elements)
        lact = {g: {("l", h): ("l", group.mul(g, h)) for h in group.elements}
                for g in group.elements}
    else:
        letters = (("l", 0), ("l", 1))
        lact = {g: {s: s for s in letters} for g in group.elements}
    sigma = GSetObject(group, letters, lact).validate()

    fixed_states = [q for q in states if q[0] == "c"]
    delta = {}
    for q in states:
        for s in letters:
            if (q, s) in delta:
                continue
            if q[0] == "f" or letter_free:
                # trivial pair stabilizer: free choice on the representative
                target = states[rng.randrange(len(states))]
            else:
                # fixed state, fixed letter: the target must be fixed too
                target = fixed_states[rng.randrange(len(fixed_states))]
            for g in group.elements:
                delta[(action[g][q], lact[g][s])] = action[g][target]
    finals = set()
    for q in states:
        if rng.random() < 0.35:
            finals |= {action[g][q] for g in group.elements}
    init = fixed_states[0]
    return make_automaton(sigma, Q, init, finals, delta, name="grand").validate()


def _letter_patterns(state_dim, letter_desc):
    """All transition-rule patterns for one (state orbit, letter orbit)
    pair, via representative letters around a canonical state tuple."""
    base = tuple(range(1, state_dim + 1))
    pats = []
    for s in nominal.letters_relative_to(base, letter_desc):
        pat = nominal._pattern_of(base, s.atoms)
        if pat not in pats:
            pats.append(pat)
    return pats


def random_nominal_automaton(rng, max_orbits=4, max_dim=2):
    alpha = build_atoms_alphabet()
    orbits = [OrbitDescriptor("S0", 0)]
    for i in range(1, rng.randint(1, max_orbits)):
        orbits.append(OrbitDescriptor(f"S{i}", rng.randint(0, max_dim)))
    states = NomObject(tuple(orbits)).validate()
    rules = []
    for o in orbits:
        for ld in alpha.orbits:
            for pat in _letter_patterns(o.dim, ld):
                target = orbits[rng.randrange(len(orbits))]
                slots = [("l", i) for i in range(o.dim)]
                slots += [("r", j) for j, (kind, _) in enumerate(pat) if kind == "new"]
                if len(slots) < target.dim:
                    target = orbits[0]  # dim 0 always fits
                sel = tuple(rng.sample(slots, target.dim))
                rules.append(PairRule(o.name, ld.name, pat, target.name, sel))
    finals = {o.name for o in orbits if rng.random() < 0.4}
    return make_nominal_automaton(
        alpha, states, NomElement("S0", ()), finals, tuple(rules), name="nrand"
    )


def inflate(a, rng, max_copies=2):
    """A language-preserving blowup: split every state (orbit-wise in the
    gset backend) into copies; minimize(a) stays at most as large as any
    reachable automaton for the same language."""
    if a.backend == "gset":
        orbit_of = {q: orb[0] for orb in gset.orbits(a.states) for q in orb}
        orbit_copies = {
            orb[0]: rng.randint(1, max_copies) for orb in gset.orbits(a.states)
        }
        copies = {q: orbit_copies[orbit_of[q]] for q in a.states.carrier()}
    else:
        copies = {q: rng.randint(1, max_copies) for q in a.states.carrier()}
    new_states = tuple((q, i) for q in a.states.carrier() for i in range(copies[q]))

    if a.backend == "gset":
        action = {}
        for g in a.states.group.elements:
            action[g] = {(q, i): (a.states.action[g][q], i) for (q, i) in new_states}
        Q = GSetObject(a.states.group, new_states, action).validate()
        lorb_of = {s: orb[0] for orb in gset.orbits(a.alphabet) for s in orb}
        pick = {}
        delta = {}
        for (q, i) in new_states:
            for s in a.alphabet.carrier():
                t = a.step(q, s)
                key = (i, orbit_of[q], lorb_of[s], orbit_of[t])
                if key not in pick:
                    pick[key] = rng.randrange(copies[t])
                delta[((q, i), s)] = (t, pick[key])
    else:
        Q = SetObject(new_states)
        delta = {}
        for (q, i) in new_states:
            for s in a.alphabet.carrier():
                t = a.step(q, s)
                delta[((q, i), s)] = (t, rng.randrange(copies[t]))
    finals = {(q, i) for (q, i) in new_states if a.is_final(q)}
    init = (a.init, 0)
    return make_automaton(a.alphabet, Q, init, finals, delta, name=a.name + ".fat").validate()


def nominal_inflate(a, rng):
    """Duplicate every state orbit; rules are rerouted to random copies.
    The copy projection is an automaton morphism, so the language is
    preserved while the orbit count doubles."""
    orbits = []
    for o in a.states.orbits:
        for i in (0, 1):
            orbits.append(OrbitDescriptor(f"{o.name}_{i}", o.dim, o.stab_gens))
    states = NomObject(tuple(orbits)).validate()
    rules = []
    for r in a.delta.rules:
        for i in (0, 1):
            rules.append(
                PairRule(
                    f"{r.left_orbit}_{i}",
                    r.right_orbit,
                    r.pattern,
                    f"{r.target_orbit}_{rng.randint(0, 1)}",
                    r.target_sel,
                )
            )
    finals = {f"{n}_{i}" for n in nominal.final_orbit_names(a) for i in (0, 1)}
    init = NomElement(f"{a.init.orbit}_0", ())
    return make_nominal_automaton(
        a.alphabet, states, init, finals, tuple(rules), name=a.name + ".fat"
    )


def words_up_to(letters, max_len):
    import itertools

    for n in range(max_len + 1):
        yield from itertools.product(letters, repeat=n)


@pytest.fixture(scope="session")
def ex45():
    return build_first_neq_last(redundant=True)


@pytest.fixture(scope="session")
def ex45_minimal(ex45):
    return automata.minimize(ex45).automaton


@pytest.fixture(scope="session")
def ex421():
    return build_first_letter_repeats()
