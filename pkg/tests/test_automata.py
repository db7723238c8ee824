"""Generic automata: acceptance, reachability, Nerode quotient,
minimization, morphism checking, language equivalence."""

import random

import pytest

from orbitaut import automata, gset
from orbitaut.automata import (
    AutomatonMorphism,
    accepts,
    canonical_form,
    check_morphism,
    complement,
    distinguishing_word,
    equivalent,
    isomorphic,
    make_automaton,
    minimize,
    nerode_quotient,
    reachable,
    run,
)
from orbitaut.contract import BackendMorphism
from orbitaut.errors import ValidationError
from orbitaut.finset import SetObject

from conftest import (
    build_first_neq_last,
    first_neq_last_membership,
    inflate,
    random_set_automaton,
    words_up_to,
)


def ends_in_a():
    sigma = SetObject(("a", "b"))
    Q = SetObject(("q0", "q1"))
    delta = {
        ("q0", "a"): "q1", ("q0", "b"): "q0",
        ("q1", "a"): "q1", ("q1", "b"): "q0",
    }
    return make_automaton(sigma, Q, "q0", {"q1"}, delta, name="ends_in_a").validate()


def contains_aa(extra_states=0):
    sigma = SetObject(("a", "b"))
    names = ["q0", "q1", "q2"] + [f"junk{i}" for i in range(extra_states)]
    Q = SetObject(tuple(names))
    delta = {
        ("q0", "a"): "q1", ("q0", "b"): "q0",
        ("q1", "a"): "q2", ("q1", "b"): "q0",
        ("q2", "a"): "q2", ("q2", "b"): "q2",
    }
    for i in range(extra_states):
        delta[(f"junk{i}", "a")] = "q0"
        delta[(f"junk{i}", "b")] = f"junk{i}"
    return make_automaton(sigma, Q, "q0", {"q2"}, delta, name="contains_aa").validate()


def test_accepts_empty_word_is_final_of_init():
    a = ends_in_a()
    assert accepts(a, ()) is False
    b = complement(a)
    assert accepts(b, ()) is True


def test_run_empty_word_is_init():
    a = ends_in_a()
    assert run(a, ()) == a.init


def test_run_fold_decomposition():
    rng = random.Random(0)
    a = random_set_automaton(rng)
    letters = list(a.letters())
    for _ in range(50):
        u = tuple(rng.choice(letters) for _ in range(rng.randrange(4)))
        v = tuple(rng.choice(letters) for _ in range(rng.randrange(4)))
        q = run(a, u)
        folded = q
        for s in v:
            folded = a.step(folded, s)
        assert run(a, u + v) == folded


def test_accepts_ex45_word(ex45):
    assert accepts(ex45, ("a", "abar")) is True
    assert accepts(ex45, ("a", "a")) is False


def test_run_ex45_one_letter_state(ex45):
    m = minimize(ex45).automaton
    assert run(m, ("a",)) == ("a",)  # the state named by its reaching word


def test_accepts_rejects_unknown_letter():
    a = ends_in_a()
    with pytest.raises(ValidationError, match="alphabet"):
        accepts(a, ("c",))


def test_reachable_idempotent_on_reachable():
    a = ends_in_a()
    sub, mono = reachable(a)
    assert set(sub.states.carrier()) == set(a.states.carrier())
    verdict = check_morphism(mono)
    assert verdict.valid


def test_reachable_drops_unreachable_sink():
    a = contains_aa(extra_states=1)
    sub, mono = reachable(a)
    assert len(sub.states.carrier()) == len(a.states.carrier()) - 1
    # breadth-first closure oracle
    seen = {a.init}
    frontier = [a.init]
    while frontier:
        nxt = []
        for q in frontier:
            for s in a.letters():
                t = a.step(q, s)
                if t not in seen:
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
    assert set(sub.states.carrier()) == seen


def test_nerode_all_states_final_collapses():
    sigma = SetObject(("a",))
    Q = SetObject(("q0", "q1"))
    a = make_automaton(
        sigma, Q, "q0", {"q0", "q1"},
        {("q0", "a"): "q1", ("q1", "a"): "q0"},
    ).validate()
    m, epi = nerode_quotient(a)
    assert len(m.states.carrier()) == 1
    assert all(m.is_final(q) for q in m.states.carrier())


def test_nerode_ex45_five_states(ex45):
    m, epi = nerode_quotient(ex45)
    assert len(m.states.carrier()) == 5
    assert check_morphism(epi).valid
    # brute-force membership agreement up to length 5
    for w in words_up_to(("a", "abar"), 5):
        assert accepts(m, w) == first_neq_last_membership(w)


def test_minimize_idempotent(ex45):
    m1 = minimize(ex45).automaton
    m2 = minimize(m1).automaton
    assert isomorphic(m1, m2)


def test_minimize_ends_in_a_already_minimal():
    a = ends_in_a()
    m = minimize(a).automaton
    assert len(m.states.carrier()) == 2
    # residual oracle: distinct residuals over words of length <= 4
    residuals = {}
    for q in a.states.carrier():
        sig = tuple(
            a.is_final(_run_from(a, q, w)) for w in words_up_to(("a", "b"), 4)
        )
        residuals[sig] = q
    assert len(residuals) == 2


def _run_from(a, q, w):
    for s in w:
        q = a.step(q, s)
    return q


def test_minimize_span_legs(ex45):
    res = minimize(ex45)
    assert check_morphism(res.mono).valid
    assert check_morphism(res.epi).valid
    assert res.mono.h.is_injective()
    assert res.epi.h.is_surjective()


def test_minimize_ex45_involution_fixed_point(ex45):
    m = minimize(ex45).automaton
    assert gset.fixed_points(m.states) == ((),)  # only the class of the empty word
    assert len(gset.orbits(m.states)) == 3


def test_check_morphism_identity(ex45):
    ident = AutomatonMorphism(
        ex45, ex45,
        BackendMorphism(ex45.states, ex45.states, {q: q for q in ex45.states.carrier()}),
    )
    assert check_morphism(ident).valid


def test_check_morphism_reports_final_violation():
    a = ends_in_a()
    swap = AutomatonMorphism(
        a, a, BackendMorphism(a.states, a.states, {"q0": "q1", "q1": "q0"})
    )
    verdict = check_morphism(swap)
    assert not verdict.valid
    assert any("final" in v for v in verdict.violations)


def test_check_morphism_reports_delta_square():
    a = ends_in_a()
    collapse = AutomatonMorphism(
        a, a, BackendMorphism(a.states, a.states, {"q0": "q0", "q1": "q0"})
    )
    verdict = check_morphism(collapse)
    assert not verdict.valid
    assert any("square" in v or "final" in v for v in verdict.violations)


def test_equivalent_minimization_preserves_language(ex45):
    assert equivalent(ex45, minimize(ex45).automaton)


def test_equivalent_complement_differs(ex45):
    comp = complement(ex45)
    w = distinguishing_word(ex45, comp)
    assert w is not None
    assert accepts(ex45, w) != accepts(comp, w)
    assert w == ()  # the empty word already separates


def test_equivalent_two_contains_aa_variants():
    a = contains_aa()
    b = contains_aa(extra_states=2)
    assert equivalent(a, b)
    # oracle: agreement on all words shorter than |Q_a| + |Q_b|
    bound = len(a.states.carrier()) + len(b.states.carrier())
    for w in words_up_to(("a", "b"), bound - 1):
        assert accepts(a, w) == accepts(b, w)


def test_distinguishing_word_is_shortest():
    a = contains_aa()
    b = ends_in_a()
    w = distinguishing_word(a, b)
    assert w is not None
    n = len(w)
    for v in words_up_to(("a", "b"), n - 1):
        assert accepts(a, v) == accepts(b, v)


def test_language_preservation_on_random_corpus():
    rng = random.Random(42)
    for _ in range(60):
        a = random_set_automaton(rng)
        m = minimize(a).automaton
        assert distinguishing_word(a, m) is None


def test_minimality_against_inflations():
    rng = random.Random(43)
    for _ in range(30):
        a = random_set_automaton(rng, max_states=6)
        m = minimize(a).automaton
        b = inflate(a, rng)
        assert equivalent(a, b)
        rb, _ = reachable(b)
        assert len(m.states.carrier()) <= len(rb.states.carrier())


def test_canonical_form_detects_renaming():
    a = ends_in_a()
    sigma = a.alphabet
    Q = SetObject(("s", "t"))
    delta = {
        ("s", "a"): "t", ("s", "b"): "s",
        ("t", "a"): "t", ("t", "b"): "s",
    }
    b = make_automaton(sigma, Q, "s", {"t"}, delta, name="renamed").validate()
    assert isomorphic(a, b)
    c = complement(b)
    assert not isomorphic(a, c)
