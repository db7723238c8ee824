"""Group actions: orbits, fixed points, restriction, forgetting."""

import random

import pytest

from orbitaut import automata, gset
from orbitaut.automata import accepts, equivalent, isomorphic, minimize
from orbitaut.errors import ValidationError
from orbitaut.gset import (
    FinGroup,
    GroupHom,
    GSetObject,
    cyclic_group,
    fixed_points,
    forget,
    group_from_generator_perms,
    identity_hom,
    orbits,
    restrict_automaton,
    trivial_gset,
)

from conftest import (
    build_first_neq_last,
    build_involution_alphabet,
    build_z2,
    random_gset_automaton,
    words_up_to,
)


def test_group_validation_catches_broken_table():
    bad = FinGroup(("e", "g"), "e", {
        ("e", "e"): "e", ("e", "g"): "g", ("g", "e"): "g", ("g", "g"): "g",
    })
    with pytest.raises(ValidationError):
        bad.validate()


def test_group_from_generator_perms_closes():
    z4 = group_from_generator_perms([("r", {1: 2, 2: 3, 3: 4, 4: 1})])
    assert len(z4.elements) == 4
    assert z4.identity == "e"
    assert z4.mul("r", "rrr") == "e"


def test_group_hom_validation():
    z4, z2 = cyclic_group(4), build_z2()
    parity = {"g0": "e", "g1": "g", "g2": "e", "g3": "g"}
    GroupHom(z4, z2, parity).validate()
    with pytest.raises(ValidationError):
        GroupHom(z4, z2, {"g0": "e", "g1": "e", "g2": "e", "g3": "g"}).validate()


def test_orbits_trivial_action():
    z2 = build_z2()
    x = trivial_gset(z2, ("p", "q", "r"))
    assert len(orbits(x)) == 3


def test_orbits_swap_is_one_orbit():
    x = build_involution_alphabet(build_z2())
    assert len(orbits(x)) == 1


def test_orbits_of_minimal_ex45_states(ex45_minimal):
    # orbit closure oracle on the 5 states: {eps}, {a, abar}, {a.abar, abar.a}
    parts = orbits(ex45_minimal.states)
    sizes = sorted(len(p) for p in parts)
    assert sizes == [1, 2, 2]


def test_fixed_points_trivial_action_is_everything():
    z2 = build_z2()
    x = trivial_gset(z2, ("p", "q"))
    assert fixed_points(x) == ("p", "q")


def test_fixed_points_free_action_is_empty():
    x = build_involution_alphabet(build_z2())
    assert fixed_points(x) == ()


def test_fixed_points_ex45_only_initial_class(ex45_minimal):
    assert fixed_points(ex45_minimal.states) == ((),)


def test_restrict_identity_keeps_automaton(ex45):
    r = restrict_automaton(identity_hom(ex45.states.group), ex45)
    assert r.states.elements == ex45.states.elements
    assert r.delta.graph == ex45.delta.graph
    assert equivalent_words(r, ex45, 4)


def equivalent_words(a, b, depth):
    return all(accepts(a, w) == accepts(b, w) for w in words_up_to(tuple(a.letters()), depth))


def test_restrict_along_trivial_inclusion_is_classical(ex45):
    one = FinGroup(("e",), "e", {("e", "e"): "e"}).validate()
    inc = GroupHom(one, ex45.states.group, {"e": "e"}).validate()
    r = restrict_automaton(inc, ex45)
    assert len(r.states.group.elements) == 1
    assert accepts(r, ("a", "abar")) is True


def test_restrict_z4_through_parity(ex45):
    z4 = cyclic_group(4)
    parity = GroupHom(
        z4, ex45.states.group, {"g0": "e", "g1": "g", "g2": "e", "g3": "g"}
    ).validate()
    r = restrict_automaton(parity, ex45)
    r.validate()  # action axioms hold after restriction
    assert equivalent_words(r, ex45, 5)


def test_forget_ex45_gives_minimal_classical_dfa(ex45, ex45_minimal):
    f = forget(ex45_minimal)
    assert f.backend == "set"
    assert len(f.states.carrier()) == 5
    # classical minimization oracle: the forgetful image is already minimal
    assert len(minimize(f).automaton.states.carrier()) == 5
    assert equivalent_words(f, ex45, 5)


def test_forget_after_identity_restrict_is_forget(ex45):
    r = restrict_automaton(identity_hom(ex45.states.group), ex45)
    assert forget(r).delta.graph == forget(ex45).delta.graph


def test_dk_regular_implies_classically_regular(ex45):
    # the forgetful image of a finite equivariant automaton is finite
    f = forget(ex45)
    assert len(f.states.carrier()) == len(ex45.states.carrier())


def test_equivariance_violation_reported():
    z2 = build_z2()
    sigma = build_involution_alphabet(z2)
    # swap action on states but a non-equivariant transition table
    states = ("p", "q")
    Q = GSetObject(z2, states, {
        "e": {"p": "p", "q": "q"}, "g": {"p": "q", "q": "p"},
    }).validate()
    delta = {
        ("p", "a"): "p", ("p", "abar"): "p",
        ("q", "a"): "p", ("q", "abar"): "q",
    }
    with pytest.raises(ValidationError, match="not a fixed point|not equivariant"):
        automata.make_automaton(sigma, Q, "p", {"q"}, delta).validate()


def test_minimize_commutes_with_forget_on_corpus():
    rng = random.Random(7)
    for group in (build_z2(), cyclic_group(4)):
        for _ in range(10):
            a = random_gset_automaton(rng, group)
            lhs = minimize(forget(a)).automaton
            rhs = forget(minimize(a).automaton)
            assert isomorphic(lhs, rhs)


def test_restrict_and_forget_preserve_acceptance_on_corpus():
    rng = random.Random(8)
    z4, z2 = cyclic_group(4), build_z2()
    parity = GroupHom(z4, z2, {"g0": "e", "g1": "g", "g2": "e", "g3": "g"}).validate()
    for _ in range(10):
        a = random_gset_automaton(rng, z2)
        assert equivalent_words(forget(a), a, 4)
        assert equivalent_words(restrict_automaton(parity, a), a, 4)
