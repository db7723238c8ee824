"""Internal monoids, transition monoids and syntactic monoids.

A transition monoid is the submonoid of state endofunctions generated by
the per-letter transition maps; it is computed by breadth-first closure
under composition, never by materializing the full function space.  Every
element carries its shortlex-least generating word, which makes element
order, emitted tables and isomorphism checks deterministic.

The syntactic monoid of a language presented by an automaton is the
transition monoid of its minimal automaton.
"""

from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

from . import _kernel, contract
from .automata import Automaton, encode, equivalent, make_automaton, minimize
from .errors import CapExceededError, ValidationError

DEFAULT_CLOSURE_CAP = 4096
DIVIDES_ELEMENT_CAP = 12
DIVIDES_ORBIT_CAP = 6


@dataclass(frozen=True, eq=False)
class FinPresMonoid:
    """A finite internal monoid.

    Closure-built monoids keep the endofunction each element denotes
    (``rows``); hand-built monoids keep an explicit table.  ``witnesses``
    maps each element to its shortlex-least generating word when known.
    """

    carrier: Any
    unit: Any
    table: Optional[Mapping] = None
    rows: Optional[Mapping] = field(default=None, repr=False)
    pair_map: Optional[Any] = None  # nominal: pattern-rule multiplication
    witnesses: Optional[Mapping] = None

    def __post_init__(self):
        if self.table is None and self.rows is None and self.pair_map is None:
            raise ValidationError(
                "monoid needs a table, endofunction rows or a pair map"
            )

    def mult_el(self, x, y):
        if self.table is not None:
            return self.table[(x, y)]
        if self.rows is not None:
            rx, ry = self.rows[x], self.rows[y]
            composed = tuple(ry[i] for i in rx)  # x then y
            return self._row_index[composed]
        return self.pair_map((x, y))

    @property
    def _row_index(self):
        idx = getattr(self, "_row_index_cache", None)
        if idx is None:
            idx = {row: el for el, row in self.rows.items()}
            object.__setattr__(self, "_row_index_cache", idx)
        return idx

    def mult_morphism(self):
        """The multiplication as a morphism carrier x carrier -> carrier."""
        els = self.carrier.carrier()
        if len(els) > 1024:
            raise CapExceededError("multiplication table materialization cap exceeded")
        prod = contract.product(self.carrier, self.carrier)
        graph = {(x, y): self.mult_el(x, y) for x in els for y in els}
        return contract.BackendMorphism(prod.obj, self.carrier, graph)

    def validate(self):
        """Unit and associativity laws over all pairs/triples, plus
        equivariance of the multiplication."""
        if self.pair_map is not None:
            from . import nominal

            raise ValidationError(
                "validate a nominal monoid over a pool with "
                "nominal.validate_monoid_on_pool"
            )
        els = self.carrier.carrier()
        if self.unit not in set(els):
            raise ValidationError("unit is not a carrier element")
        for key, act in self.carrier.symmetry_actions().items():
            if act[self.unit] != self.unit:
                raise ValidationError(f"unit is not fixed by {key!r}")
        for x in els:
            if self.mult_el(self.unit, x) != x or self.mult_el(x, self.unit) != x:
                raise ValidationError(f"unit law fails at {x!r}")
        for x in els:
            for y in els:
                if self.mult_el(x, y) not in set(els):
                    raise ValidationError(f"product {x!r}*{y!r} lands outside the carrier")
        for x in els:
            for y in els:
                xy = self.mult_el(x, y)
                for z in els:
                    if self.mult_el(xy, z) != self.mult_el(x, self.mult_el(y, z)):
                        raise ValidationError(
                            f"associativity fails at ({x!r},{y!r},{z!r})"
                        )
        for key, act in self.carrier.symmetry_actions().items():
            for x in els:
                for y in els:
                    if act[self.mult_el(x, y)] != self.mult_el(act[x], act[y]):
                        raise ValidationError(
                            f"multiplication not equivariant under {key!r} "
                            f"at ({x!r},{y!r})"
                        )
        return self


@dataclass(frozen=True, eq=False)
class LMonoid:
    """A monoid recognizing a language: letter images and an accepting
    predicate, with the presenting automaton kept as the reference."""

    monoid: FinPresMonoid
    phi: Mapping  # letter -> carrier element
    chi: Mapping  # carrier element -> bool
    reference: Automaton

    def phi_star(self, word):
        el = self.monoid.unit
        for s in word:
            el = self.monoid.mult_el(el, self.phi[s])
        return el

    def accepts(self, word):
        return self.chi[self.phi_star(word)]


def transition_monoid(a, cap=DEFAULT_CLOSURE_CAP):
    """The submonoid of endofunctions of the state object generated by the
    per-letter transition maps, elements tagged with shortlex witnesses."""
    if a.backend == "nominal":
        from . import nominal

        return nominal.transition_monoid_nominal(a, cap=cap)
    enc = encode(a)
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
    elements = tuple(words)
    row_of = {words[i]: rows[i] for i in range(len(rows))}
    index_of_row = {rows[i]: words[i] for i in range(len(rows))}

    sacts = a.states.symmetry_actions()
    lacts = a.alphabet.symmetry_actions()
    actions = {}
    for key in sacts:
        sperm = [0] * n
        for i, q in enumerate(enc.states):
            sperm[i] = enc.states.index(sacts[key][q])
        inv = [0] * n
        for i, j in enumerate(sperm):
            inv[j] = i
        amap = {}
        for w in elements:
            row = row_of[w]
            conj = tuple(sperm[row[inv[i]]] for i in range(n))
            if conj not in index_of_row:
                raise ValidationError(
                    f"transition monoid is not closed under {key!r}; "
                    "the automaton is not equivariant"
                )
            amap[w] = index_of_row[conj]
        actions[key] = amap
    carrier = contract._REMAKES[type(a.states)](a.states, elements, actions)

    monoid = FinPresMonoid(
        carrier=carrier,
        unit=(),
        rows=row_of,
        witnesses={w: w for w in elements},
    )
    phi = {}
    for s in enc.letters:
        col = tuple(enc.delta[q * k + enc.letters.index(s)] for q in range(n))
        phi[s] = index_of_row[col]
    chi = {w: bool(enc.final[row_of[w][enc.init]]) for w in elements}
    return LMonoid(monoid, phi, chi, reference=a)


def syntactic_monoid(a, cap=DEFAULT_CLOSURE_CAP):
    """Transition monoid of the minimal automaton; the minimal recognizing
    monoid under divisibility."""
    if a.backend == "nominal":
        from . import nominal

        return nominal.syntactic_monoid_nominal(a, cap=cap)
    return transition_monoid(minimize(a).automaton, cap=cap)


def monoid_to_automaton(lm: LMonoid):
    """The automaton with states the carrier, running by right
    multiplication with letter images.  Recognizes the same language."""
    if lm.reference.backend == "nominal":
        from . import nominal

        return nominal.monoid_to_automaton_nominal(lm)
    carrier = lm.monoid.carrier
    delta_pairs = {}
    for m in carrier.carrier():
        for s in lm.reference.letters():
            delta_pairs[(m, s)] = lm.monoid.mult_el(m, lm.phi[s])
    finals = {m for m in carrier.carrier() if lm.chi[m]}
    return make_automaton(
        lm.reference.alphabet,
        carrier,
        lm.monoid.unit,
        finals,
        delta_pairs,
        name=lm.reference.name + ".cayley",
    ).validate()


def recognizes(lm: LMonoid, a) -> bool:
    """True iff the accepting predicate composed with the extended letter
    map equals the automaton's language; decided exactly by language
    equivalence against the monoid's Cayley automaton."""
    return equivalent(monoid_to_automaton(lm), a)


def image_l_monoid(monoid: FinPresMonoid, phi: Mapping, chi: Mapping, reference) -> LMonoid:
    """Restrict a recognizing monoid to the submonoid generated by the
    letter images; the result recognizes the same language."""
    letters = tuple(reference.letters())
    seen = {monoid.unit: ()}
    order = [monoid.unit]
    frontier = [monoid.unit]
    while frontier:
        nxt = []
        for x in frontier:
            for s in letters:
                y = monoid.mult_el(x, phi[s])
                if y not in seen:
                    seen[y] = seen[x] + (s,)
                    order.append(y)
                    nxt.append(y)
        frontier = nxt
    kept = tuple(e for e in monoid.carrier.carrier() if e in seen)
    acts = monoid.carrier.symmetry_actions()
    for key, act in acts.items():
        for e in kept:
            if act[e] not in seen:
                raise ValidationError(
                    f"generated submonoid is not closed under {key!r}"
                )
    sub_carrier = contract._REMAKES[type(monoid.carrier)](
        monoid.carrier, kept, {k: {e: acts[k][e] for e in kept} for k in acts}
    )
    sub_table = {(x, y): monoid.mult_el(x, y) for x in kept for y in kept}
    sub = FinPresMonoid(
        carrier=sub_carrier,
        unit=monoid.unit,
        table=sub_table,
        witnesses={e: seen[e] for e in kept},
    )
    return LMonoid(sub, dict(phi), {e: chi[e] for e in kept}, reference=reference)


@dataclass(frozen=True)
class DivisionWitness:
    sub_elements: tuple  # a submonoid of the divider
    hom: Mapping  # surjective monoid morphism onto the divided monoid


def _submonoids(n: FinPresMonoid):
    """All symmetry-closed submonoids of a small monoid, by increasing size."""
    els = n.carrier.carrier()
    acts = n.carrier.symmetry_actions()
    subs = []
    for mask in range(1 << len(els)):
        subset = [els[i] for i in range(len(els)) if mask >> i & 1]
        sset = set(subset)
        if n.unit not in sset:
            continue
        if any(n.mult_el(x, y) not in sset for x in subset for y in subset):
            continue
        if any(act[x] not in sset for act in acts.values() for x in subset):
            continue
        subs.append(tuple(subset))
    subs.sort(key=len)
    return subs


def monoid_divides(m: FinPresMonoid, n: FinPresMonoid, cap=DIVIDES_ELEMENT_CAP):
    """Brute-force divisibility: search for a submonoid of ``n`` with a
    surjective (equivariant) monoid morphism onto ``m``.  Returns a witness
    or None.  Only for desk-scale monoids."""
    m_els = m.carrier.carrier()
    n_els = n.carrier.carrier()
    if len(m_els) > cap or len(n_els) > cap:
        raise CapExceededError(
            f"monoid_divides is capped at {cap} elements "
            f"(got {len(m_els)} and {len(n_els)})"
        )
    for c in (m, n):
        acts = c.carrier.symmetry_actions()
        if acts:
            norb = len(contract.orbit_partition(c.carrier.carrier(), list(acts.values())))
            if norb > DIVIDES_ORBIT_CAP:
                raise CapExceededError(
                    f"monoid_divides is capped at {DIVIDES_ORBIT_CAP} orbits"
                )
    macts = m.carrier.symmetry_actions()
    for sub in _submonoids(n):
        if len(sub) < len(m_els):
            continue
        nacts = n.carrier.symmetry_actions()
        hom = _find_surjection(sub, n, m, nacts, macts)
        if hom is not None:
            return DivisionWitness(sub, hom)
    return None


def _find_surjection(sub, n, m, nacts, macts):
    """Backtracking search for a surjective equivariant morphism sub -> m."""
    m_els = m.carrier.carrier()
    sub_index = {x: i for i, x in enumerate(sub)}
    hom = {}

    def consistent(x):
        for y in hom:
            for a, b in ((x, y), (y, x)):
                ab = n.mult_el(a, b)
                if ab in hom and hom[ab] != m.mult_el(hom[a], hom[b]):
                    return False
        for key in nacts:
            gx = nacts[key][x]
            if gx in hom and hom[gx] != macts[key][hom[x]]:
                return False
        return True

    def extend(i):
        if i == len(sub):
            if set(hom.values()) != set(m_els):
                return False
            return True
        x = sub[i]
        candidates = [m.unit] if x == n.unit else m_els
        for c in candidates:
            hom[x] = c
            if consistent(x) and extend(i + 1):
                return True
            del hom[x]
        return False

    if extend(0):
        return dict(hom)
    return None


def induced_generator_hom(src: LMonoid, dst: LMonoid):
    """The monoid morphism determined by shared generator words, mapping
    each element of ``src`` (via its witness) to the corresponding element
    of ``dst``.  Raises if the map is not a well-defined surjective
    morphism; for the projection from a reachable automaton's transition
    monoid onto the syntactic monoid this must never happen."""
    if src.monoid.witnesses is None:
        raise ValidationError("source monoid carries no witness words")
    hom = {}
    for el in src.monoid.carrier.carrier():
        hom[el] = dst.phi_star(src.monoid.witnesses[el])
    for el in src.monoid.carrier.carrier():
        for s in src.reference.letters():
            lhs = hom[src.monoid.mult_el(el, src.phi[s])]
            rhs = dst.monoid.mult_el(hom[el], dst.phi[s])
            if lhs != rhs:
                raise ValidationError(
                    f"generator-word map is not multiplicative at ({el!r}, {s!r})"
                )
    if set(hom.values()) != set(dst.monoid.carrier.carrier()):
        raise ValidationError("generator-word map is not surjective")
    if hom[src.monoid.unit] != dst.monoid.unit:
        raise ValidationError("generator-word map does not preserve the unit")
    return hom


def lmonoid_canonical_form(lm: LMonoid):
    """A fingerprint for alphabet-generated monoids: elements in witness
    order, the table, letter images and the accepting predicate as indices.
    Equal fingerprints mean isomorphic L-monoids."""
    if lm.monoid.witnesses is None:
        raise ValidationError("canonical form needs witness words")
    els = sorted(
        lm.monoid.carrier.carrier(),
        key=lambda e: (len(lm.monoid.witnesses[e]), [repr(x) for x in lm.monoid.witnesses[e]]),
    )
    index = {e: i for i, e in enumerate(els)}
    table = tuple(
        tuple(index[lm.monoid.mult_el(x, y)] for y in els) for x in els
    )
    acts = lm.monoid.carrier.symmetry_actions()
    action = tuple(
        (repr(key), tuple(index[acts[key][e]] for e in els))
        for key in sorted(acts, key=repr)
    )
    letters = tuple(lm.reference.letters())
    phi = tuple(index[lm.phi[s]] for s in letters)
    chi = tuple(lm.chi[e] for e in els)
    witnesses = tuple(lm.monoid.witnesses[e] for e in els)
    return (witnesses, table, index[lm.monoid.unit], phi, chi, action)


@dataclass(frozen=True)
class MonoidView:
    """A finite window of a recognizing monoid, uniform across backends:
    the carrier itself when finite, the policy-pool instantiation for
    nominal monoids.  Drives table and Cayley-graph rendering."""

    elements: tuple
    unit: Any
    letters: tuple
    labels: Mapping
    letter_labels: Mapping
    chi: Mapping
    phi: Mapping
    mult: Any

    def table_rows(self):
        for x in self.elements:
            yield x, [self.mult(x, y) for y in self.elements]


def render_word(word):
    from .fileformat import render_state

    if not word:
        return "eps"
    parts = [render_state(s) for s in word]
    if all(len(p) == 1 for p in parts):
        return "".join(parts)
    return ".".join(parts)


def pool_view(lm: LMonoid) -> MonoidView:
    from .fileformat import render_state

    carrier = lm.monoid.carrier
    if carrier.backend == "nominal":
        from . import nominal

        pool = nominal.pool_of_size(
            carrier.max_dim() + lm.reference.alphabet.max_dim() + 1
        )
        elements = nominal.instantiate(carrier, pool).elements
        letters = nominal.instantiate(lm.reference.alphabet, pool).elements
        labels = {}
        for el in elements:
            wit = (lm.monoid.witnesses or {}).get(el)
            labels[el] = render_word(wit) if wit is not None else repr(el)
        letter_labels = {s: repr(s) for s in letters}
        chi = {el: lm.chi[el] for el in elements}
        phi = {s: lm.phi[s] for s in letters}
    else:
        elements = carrier.carrier()
        letters = tuple(lm.reference.letters())
        labels = {
            el: render_word((lm.monoid.witnesses or {}).get(el, el)) for el in elements
        }
        letter_labels = {s: render_state(s) for s in letters}
        chi = {el: lm.chi[el] for el in elements}
        phi = {s: lm.phi[s] for s in letters}
    if len(set(labels.values())) != len(labels):
        labels = {el: f"{lab}#{i}" for i, (el, lab) in enumerate(labels.items())}
    return MonoidView(
        tuple(elements), lm.monoid.unit, tuple(letters), labels, letter_labels,
        chi, phi, lm.monoid.mult_el,
    )


def render_table(lm: LMonoid) -> str:
    """The multiplication table as an aligned text block, row * column."""
    view = pool_view(lm)
    labels = [view.labels[e] for e in view.elements]
    width = max((len(l) for l in labels), default=1)
    width = max(width, 1)
    head = " " * (width + 2) + "| " + "  ".join(l.ljust(width) for l in labels)
    sep = "-" * len(head)
    lines = [head, sep]
    for x, row in view.table_rows():
        cells = "  ".join(view.labels[v].ljust(width) for v in row)
        lines.append(view.labels[x].ljust(width + 2) + "| " + cells)
    return "\n".join(lines) + "\n"


def evaluation_at_init(lm: LMonoid):
    """The map sending each monoid element to the state it drives the
    initial state to.  For a reachable reference automaton this is
    surjective onto the states."""
    a = lm.reference
    enc = encode(a)
    out = {}
    for el in lm.monoid.carrier.carrier():
        row = lm.monoid.rows[el] if lm.monoid.rows is not None else None
        if row is None:
            raise ValidationError("evaluation needs endofunction rows")
        out[el] = enc.states[row[enc.init]]
    return out
