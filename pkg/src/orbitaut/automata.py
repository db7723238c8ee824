"""Backend-generic deterministic complete automata.

An automaton is a states object, an alphabet object, an initial element
fixed by the symmetry, a final predicate into the truth object, and a total
transition morphism from states x alphabet to states.  Determinism and
completeness are exactly totality of the transition map.

The set and group-action backends run the algorithms below directly on
their carriers; the symbolic nominal backend routes minimization and
equivalence through atom-pool instantiation (see orbitaut.nominal) and is
dispatched to lazily here.
"""

from dataclasses import dataclass
from typing import Any

from . import _kernel, contract
from .errors import ValidationError


def truth_value(v):
    """Normalize a truth-object element to a Python bool."""
    if isinstance(v, bool):
        return v
    return getattr(v, "orbit", None) == "true"


@dataclass(frozen=True)
class Automaton:
    alphabet: Any
    states: Any
    init: Any
    final: Any  # morphism states -> truth
    delta: Any  # morphism states x alphabet -> states
    name: str = "A"

    @property
    def backend(self):
        return self.states.backend

    def letters(self):
        return self.alphabet.carrier()

    def step(self, q, s):
        return self.delta((q, s))

    def is_final(self, q):
        return truth_value(self.final(q))

    def validate(self):
        if self.backend == "nominal":
            from . import nominal

            return nominal.validate_automaton(self)
        if self.init not in self.states:
            raise ValidationError(f"initial state {self.init!r} is not a state")
        for key, act in self.states.symmetry_actions().items():
            if act[self.init] != self.init:
                raise ValidationError(
                    f"initial state is not a fixed point: moved by {key!r}"
                )
        self.final.validate()
        if set(self.final.target.carrier()) != {False, True}:
            raise ValidationError("final predicate does not land in the truth object")
        self.delta.validate()
        pairs = set(self.delta.graph)
        for q in self.states.carrier():
            for s in self.letters():
                if (q, s) not in pairs:
                    raise ValidationError(f"transition missing for ({q!r}, {s!r})")
        return self


@dataclass(frozen=True)
class AutomatonMorphism:
    source: Automaton
    target: Automaton
    h: Any  # morphism between the state objects


@dataclass(frozen=True)
class MorphismVerdict:
    violations: tuple

    @property
    def valid(self):
        return not self.violations


def make_automaton(alphabet, states, init, final_elements, delta_pairs, name="A"):
    """Assemble a set/gset automaton from element-level data.

    ``final_elements`` is the set of accepting states, ``delta_pairs`` maps
    (state, letter) to the successor state.
    """
    from .finset import TRUTH
    from .gset import truth_gset

    truth = truth_gset(states.group) if states.backend == "gset" else TRUTH
    prod = contract.product(states, alphabet)
    missing = [p for p in prod.obj.carrier() if p not in delta_pairs]
    if missing:
        raise ValidationError(f"transition missing for {missing[0]!r}")
    final = contract.BackendMorphism(
        states, truth, {q: q in set(final_elements) for q in states.carrier()}
    )
    delta = contract.BackendMorphism(prod.obj, states, dict(delta_pairs))
    return Automaton(alphabet, states, init, final, delta, name=name)


def check_word(a, w):
    letters = set(a.letters()) if a.backend != "nominal" else None
    for s in w:
        if letters is not None:
            if s not in letters:
                raise ValidationError(f"letter {s!r} is not in the alphabet")
        else:
            from . import nominal

            nominal.check_letter(a.alphabet, s)


def run(a, w):
    """Left fold of the transition map over the word, from the initial state."""
    check_word(a, w)
    q = a.init
    for s in w:
        q = a.step(q, s)
    return q


def accepts(a, w):
    return a.is_final(run(a, w))


# --- integer encoding for the kernels --------------------------------------

@dataclass(frozen=True)
class IntEncoding:
    states: tuple
    letters: tuple
    delta: tuple  # flat, q*k+s
    init: int
    final: tuple  # 0/1 per state
    gen_keys: tuple
    state_gens: tuple  # permutations as tuples, aligned with gen_keys
    letter_gens: tuple


def encode(a, letter_order=None):
    states = a.states.carrier()
    letters = tuple(letter_order) if letter_order is not None else tuple(a.letters())
    sindex = {q: i for i, q in enumerate(states)}
    lindex = {s: i for i, s in enumerate(letters)}
    k = len(letters)
    delta = [0] * (len(states) * k)
    for q in states:
        for s in letters:
            delta[sindex[q] * k + lindex[s]] = sindex[a.step(q, s)]
    sacts = a.states.symmetry_actions()
    lacts = a.alphabet.symmetry_actions()
    keys = tuple(sorted(sacts, key=repr))
    state_gens = tuple(tuple(sindex[sacts[key][q]] for q in states) for key in keys)
    letter_gens = tuple(tuple(lindex[lacts[key][s]] for s in letters) for key in keys)
    return IntEncoding(
        tuple(states),
        letters,
        tuple(delta),
        sindex[a.init],
        tuple(1 if a.is_final(q) else 0 for q in states),
        keys,
        state_gens,
        letter_gens,
    )


def _assert_symmetry_closed(block, enc, stage):
    """A refinement partition must be mapped block-to-block by every
    symmetry generator; a failure is a theorem violation and aborts."""
    for key, perm in zip(enc.gen_keys, enc.state_gens):
        image_of = {}
        for q in range(len(block)):
            b, ib = block[q], block[perm[q]]
            if image_of.setdefault(b, ib) != ib:
                raise ValidationError(
                    f"{stage}: partition is not closed under {key!r} "
                    f"(block {b} maps into two different blocks); "
                    "this indicates a broken equivariant automaton"
                )


def refine_partition(enc, check_symmetry=True):
    """Moore-style refinement to the coarsest congruence refining the final
    split and respected by every letter.  Returns the block id per state."""
    n, k = len(enc.states), len(enc.letters)
    ids = {}
    block = []
    for q in range(n):
        flag = enc.final[q]
        if flag not in ids:
            ids[flag] = len(ids)
        block.append(ids[flag])
    if check_symmetry:
        _assert_symmetry_closed(block, enc, "initial split")
    while True:
        new = _kernel.refine_round(n, k, enc.delta, block)
        if check_symmetry:
            _assert_symmetry_closed(new, enc, "refinement round")
        if new == block:
            return block
        block = new


# --- reachability -----------------------------------------------------------

def reachable(a):
    """The subautomaton on states reachable from the initial one, with the
    inclusion morphism.  In symmetric backends the reachable set is closed
    under the symmetry because the initial state is fixed and the transition
    map is equivariant."""
    if a.backend == "nominal":
        from . import nominal

        return nominal.reachable_nominal(a)
    letters = a.letters()
    seen = {a.init}
    frontier = [a.init]
    while frontier:
        nxt = []
        for q in frontier:
            for s in letters:
                r = a.step(q, s)
                if r not in seen:
                    seen.add(r)
                    nxt.append(r)
        frontier = nxt
    kept = tuple(q for q in a.states.carrier() if q in seen)
    sacts = a.states.symmetry_actions()
    for key, act in sacts.items():
        for q in kept:
            if act[q] not in seen:
                raise ValidationError(
                    f"reachable set is not closed under {key!r}; "
                    "the automaton is not equivariant"
                )
    sub_states = contract._REMAKES[type(a.states)](
        a.states, kept, {key: {q: sacts[key][q] for q in kept} for key in sacts}
    )
    prod = contract.product(sub_states, a.alphabet)
    delta = contract.BackendMorphism(
        prod.obj, sub_states, {p: a.delta.graph[p] for p in prod.obj.carrier()}
    )
    final = contract.BackendMorphism(
        sub_states, a.final.target, {q: a.final.graph[q] for q in kept}
    )
    sub = Automaton(a.alphabet, sub_states, a.init, final, delta, name=a.name)
    mono = AutomatonMorphism(
        sub, a, contract.BackendMorphism(sub_states, a.states, {q: q for q in kept})
    )
    return sub, mono


# --- Nerode quotient and minimization ---------------------------------------

def _shortlex_block_witnesses(r, block_of):
    """Shortlex-least word reaching each block of a reachable automaton.
    Words are tuples of letters in the declared alphabet order."""
    letters = r.letters()
    start = block_of[r.init]
    witness = {start: ()}
    frontier = [start]
    state_of = {start: r.init}
    while frontier:
        nxt = []
        for b in frontier:
            q = state_of[b]
            for s in letters:
                tb = block_of[r.step(q, s)]
                if tb not in witness:
                    witness[tb] = witness[b] + (s,)
                    state_of[tb] = r.step(q, s)
                    nxt.append(tb)
        frontier = nxt
    return witness


def _quotient_automaton(r, block_ids):
    """Build the quotient of a reachable automaton by a refinement partition.
    States are named by their shortlex-least reaching word."""
    enc_states = r.states.carrier()
    blocks = contract.partition_blocks(enc_states, block_ids)
    block_of = {}
    for b in blocks:
        for q in b:
            block_of[q] = b
    witness = _shortlex_block_witnesses(r, block_of)
    if len(witness) != len(blocks):
        raise ValidationError("quotient of a reachable automaton must be reachable")
    order = sorted(witness.values(), key=lambda w: (len(w), [repr(x) for x in w]))
    word_of = {b: w for b, w in witness.items()}
    block_of_word = {w: b for b, w in witness.items()}

    sacts = r.states.symmetry_actions()
    actions = {}
    for key in sacts:
        amap = {}
        for w in order:
            b = block_of_word[w]
            image = frozenset(sacts[key][q] for q in b)
            amap[w] = word_of[image]
        actions[key] = amap
    min_states = contract._REMAKES[type(r.states)](r.states, tuple(order), actions)

    final_elements = set()
    for w in order:
        b = block_of_word[w]
        flags = {r.is_final(q) for q in b}
        if len(flags) != 1:
            raise ValidationError("a Nerode block mixes final and non-final states")
        if flags.pop():
            final_elements.add(w)

    delta_pairs = {}
    for w in order:
        b = block_of_word[w]
        q = next(iter(b))
        for s in r.letters():
            delta_pairs[(w, s)] = word_of[block_of[r.step(q, s)]]

    minimal = make_automaton(
        r.alphabet,
        min_states,
        word_of[block_of[r.init]],
        final_elements,
        delta_pairs,
        name=r.name + ".min",
    )
    epi_map = {q: word_of[block_of[q]] for q in enc_states}
    epi = AutomatonMorphism(
        r, minimal, contract.BackendMorphism(r.states, min_states, epi_map)
    )
    return minimal, epi


def _nerode_from_reachable(r):
    enc = encode(r)
    block_ids = refine_partition(enc)
    by_state = {q: block_ids[i] for i, q in enumerate(enc.states)}
    return _quotient_automaton(r, [by_state[q] for q in r.states.carrier()])


def nerode_quotient(a):
    """Partition-refinement fixpoint on the reachable part; returns the
    quotient automaton and the block-projection morphism from reachable(a)."""
    if a.backend == "nominal":
        from . import nominal

        res = nominal.minimize_nominal(a)
        return res.automaton, res.epi
    r, _ = reachable(a)
    return _nerode_from_reachable(r)


@dataclass(frozen=True)
class MinimizationResult:
    automaton: Automaton
    reachable: Automaton
    mono: AutomatonMorphism  # reachable(a) -> a
    epi: AutomatonMorphism  # reachable(a) -> min


def minimize(a):
    """Minimal automaton plus the witnessing subquotient span.

    Both legs are verified morphisms: the mono embeds the reachable part in
    the input, the epi projects it onto the Nerode quotient.
    """
    if a.backend == "nominal":
        from . import nominal

        return nominal.minimize_nominal(a)
    r, mono = reachable(a)
    minimal, epi = _nerode_from_reachable(r)
    for leg, injective in ((mono, True), (epi, False)):
        verdict = check_morphism(leg)
        if not verdict.valid:
            raise ValidationError(
                f"minimization produced an invalid span leg: {verdict.violations[0]}"
            )
    if not epi.h.is_surjective():
        raise ValidationError("minimization epi leg is not surjective")
    if not mono.h.is_injective():
        raise ValidationError("minimization mono leg is not injective")
    return MinimizationResult(minimal, r, mono, epi)


def check_morphism(m: AutomatonMorphism) -> MorphismVerdict:
    """Report every violated morphism condition with a concrete witness."""
    if m.source.backend == "nominal":
        from . import nominal

        return nominal.check_morphism_nominal(m)
    violations = []
    if m.source.alphabet != m.target.alphabet:
        violations.append("source and target do not share an alphabet")
        return MorphismVerdict(tuple(violations))
    try:
        m.h.validate()
    except ValidationError as exc:
        violations.append(str(exc))
        return MorphismVerdict(tuple(violations))
    if m.h(m.source.init) != m.target.init:
        violations.append(
            f"initial state maps to {m.h(m.source.init)!r}, not {m.target.init!r}"
        )
    for q in m.source.states.carrier():
        if m.source.is_final(q) != m.target.is_final(m.h(q)):
            violations.append(
                f"state {q!r} is {'final' if m.source.is_final(q) else 'non-final'} "
                f"but its image {m.h(q)!r} is not"
            )
    for q in m.source.states.carrier():
        for s in m.source.letters():
            lhs = m.h(m.source.step(q, s))
            rhs = m.target.step(m.h(q), s)
            if lhs != rhs:
                violations.append(
                    f"transition square fails at ({q!r}, {s!r}): "
                    f"h(delta(q,s)) = {lhs!r} but delta(h(q),s) = {rhs!r}"
                )
    return MorphismVerdict(tuple(violations))


# --- language equivalence ----------------------------------------------------

def _check_same_alphabet(a, b):
    if a.backend != b.backend:
        raise ValidationError("automata live in different backends")
    if a.alphabet != b.alphabet:
        raise ValidationError("automata do not share an alphabet")


def distinguishing_word(a, b):
    """A shortest word accepted by exactly one of the two automata, or None
    when the recognized languages are equal.  Decided by synchronous-product
    search."""
    _check_same_alphabet(a, b)
    if a.backend == "nominal":
        from . import nominal

        return nominal.distinguishing_word_nominal(a, b)
    letters = a.letters()
    ea = encode(a, letter_order=letters)
    eb = encode(b, letter_order=letters)
    word = _kernel.product_witness(
        len(letters), ea.delta, ea.final, ea.init, len(ea.states),
        eb.delta, eb.final, eb.init, len(eb.states),
    )
    if word is None:
        return None
    return tuple(letters[s] for s in word)


def equivalent(a, b):
    """True iff the two automata recognize the same language."""
    return distinguishing_word(a, b) is None


def complement(a):
    """Flip the final predicate."""
    if a.backend == "nominal":
        from . import nominal

        return nominal.complement_nominal(a)
    final = contract.BackendMorphism(
        a.states, a.final.target, {q: not a.final.graph[q] for q in a.states.carrier()}
    )
    return Automaton(a.alphabet, a.states, a.init, final, a.delta, name=a.name)


def canonical_form(a):
    """A relabel-invariant fingerprint of a reachable automaton: states are
    renamed to their shortlex-least reaching words and the structure is read
    off in that order.  Two reachable automata over the same alphabet are
    isomorphic iff their canonical forms are equal."""
    if a.backend == "nominal":
        from . import nominal

        return nominal.canonical_form_nominal(a)
    r, _ = reachable(a)
    m, _ = _quotient_automaton(r, list(range(len(r.states.carrier()))))
    states = m.states.carrier()
    letters = m.letters()
    sindex = {q: i for i, q in enumerate(states)}
    delta = tuple(tuple(sindex[m.step(q, s)] for s in letters) for q in states)
    final = tuple(m.is_final(q) for q in states)
    sacts = m.states.symmetry_actions()
    action = tuple(
        (repr(key), tuple(sindex[sacts[key][q]] for q in states))
        for key in sorted(sacts, key=repr)
    )
    return (tuple(states), tuple(letters), sindex[m.init], final, delta, action)


def isomorphic(a, b):
    """Isomorphism of reachable automata by canonical relabeling."""
    return canonical_form(a) == canonical_form(b)
