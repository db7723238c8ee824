"""The self-contained automaton description format.

One file carries everything: a backend declaration, an optional group block
(gset), object blocks (element lists with actions, or orbit descriptors),
and one automaton block.  ``#`` starts a comment.  Keywords are reserved
words and cannot name elements.

    backend: gset
    group:
      elements: e g
      identity: e
      table:
        e: e g
        g: g e
    object Sigma:
      elements: a abar
      action g: a->abar abar->a
    object Q:
      elements: q0 q1
      action g: q0->q1 q1->q0
    automaton M:
      alphabet: Sigma
      states: Q
      init: q0
      final: q0 q1
      delta:
        q0, a -> q1
        ...

Nominal objects use orbit lines ``orbit NAME: dim N [stab: (1 2), ...]``
and pattern transition rules ``Oa(x), A(y) -> Oa(x)`` under the
distinct-names convention: a shared variable means the same atom, distinct
variables mean distinct atoms.  Groups may be given by permutation
generators (``generators:`` with cycle notation) and actions may be given
on a generating subset of the group; both are closed at load.
"""

import re
from dataclasses import dataclass, field

from . import contract
from .automata import Automaton, make_automaton
from .errors import SpecParseError, ValidationError
from .finset import SetObject
from .gset import (
    FinGroup,
    GroupHom,
    GSetObject,
    close_action,
    group_from_generator_perms,
)
from .nominal import (
    NomElement,
    NomObject,
    OrbitDescriptor,
    PairRule,
    make_nominal_automaton,
)

_NAME = re.compile(r"^[A-Za-z0-9_.<>\[\]+\-]+$")
_RESERVED = {
    "backend", "group", "object", "automaton", "elements", "identity",
    "table", "generators", "action", "orbit", "alphabet", "states", "init",
    "final", "delta", "map", "dim", "stab",
}


@dataclass
class SpecFile:
    backend: str
    group: object  # FinGroup | None
    objects: dict
    automaton: Automaton
    automaton_name: str


def _strip(line):
    if "#" in line:
        line = line[: line.index("#")]
    return line.strip()


def parse_cycles(text, line_no, offset=0):
    """Cycle notation -> permutation dict.  Juxtaposed cycles multiply;
    entries are shifted by ``offset`` (file positions are 1-based)."""
    cycles = re.findall(r"\(([^()]*)\)", text)
    if not cycles and text.strip():
        raise SpecParseError(f"expected cycle notation, got {text!r}", line_no)
    perm = {}
    for cyc in reversed(cycles):  # rightmost cycle applies first
        entries = [e for e in re.split(r"[,\s]+", cyc.strip()) if e]
        try:
            nums = [int(e) - offset for e in entries]
        except ValueError:
            raise SpecParseError(f"cycle entries must be integers: ({cyc})", line_no)
        if len(set(nums)) != len(nums):
            raise SpecParseError(f"repeated entry in cycle ({cyc})", line_no)
        step = {}
        for i, v in enumerate(nums):
            step[v] = nums[(i + 1) % len(nums)]
        new = {}
        keys = set(perm) | set(step)
        for k in keys:
            new[k] = perm.get(step.get(k, k), step.get(k, k))
        perm = new
    return perm


def _parse_nominal_element(text, line_no):
    m = re.fullmatch(r"([A-Za-z0-9_.<>\[\]+\-]+)\s*(?:\(([^()]*)\))?", text.strip())
    if not m:
        raise SpecParseError(f"bad element {text!r}", line_no)
    name, args = m.group(1), m.group(2)
    if args is None or not args.strip():
        return name, ()
    return name, tuple(a.strip() for a in args.split(","))


class _Parser:
    def __init__(self, text):
        self.lines = text.splitlines()
        self.backend = None
        self.group = None
        self.objects = {}
        self.automaton_raw = None
        self.automaton_name = None

    def error(self, msg, line_no):
        raise SpecParseError(msg, line_no)

    def parse(self) -> SpecFile:
        mode = None  # (kind, payload)
        for idx, raw in enumerate(self.lines, start=1):
            line = _strip(raw)
            if not line:
                continue
            head = line.split(":", 1)[0].strip().split()[0] if ":" in line else ""
            if head == "backend":
                self.backend = line.split(":", 1)[1].strip()
                if self.backend not in ("set", "gset", "nominal"):
                    self.error(f"unknown backend {self.backend!r}", idx)
                mode = None
            elif head == "group" and not line.split(":", 1)[1].strip():
                self.group = {"elements": None, "identity": None,
                              "table": [], "generators": [], "line": idx}
                mode = ("group", None)
            elif head == "object":
                name = line.split(":", 1)[0].split(None, 1)[1].strip()
                self._check_name(name, idx)
                self.objects[name] = {"elements": None, "actions": [],
                                      "orbits": [], "line": idx}
                mode = ("object", name)
            elif head == "automaton":
                self.automaton_name = line.split(":", 1)[0].split(None, 1)[1].strip()
                self._check_name(self.automaton_name, idx)
                self.automaton_raw = {"alphabet": None, "states": None,
                                      "init": None, "final": None,
                                      "delta": [], "line": idx}
                mode = ("automaton", None)
            elif mode is None:
                self.error(f"unexpected line {line!r}", idx)
            elif mode[0] == "group":
                mode = self._group_line(line, idx, mode)
            elif mode[0] == "object":
                mode = self._object_line(line, idx, mode)
            elif mode[0] == "automaton":
                mode = self._automaton_line(line, idx, mode)
        return self._build()

    def _check_name(self, name, idx):
        if not _NAME.match(name):
            self.error(f"bad name {name!r}", idx)
        if name in _RESERVED:
            self.error(f"{name!r} is a reserved word", idx)

    # group block ----------------------------------------------------------
    def _group_line(self, line, idx, mode):
        key, _, rest = line.partition(":")
        key = key.strip()
        if key == "elements":
            self.group["elements"] = rest.split()
            return ("group", None)
        if key == "identity":
            self.group["identity"] = rest.strip()
            return ("group", None)
        if key == "table":
            return ("group", "table")
        if key == "generators":
            return ("group", "generators")
        if mode[1] == "table":
            self.group["table"].append((key, rest.split(), idx))
            return mode
        if mode[1] == "generators":
            self.group["generators"].append((key, rest, idx))
            return mode
        self.error(f"unexpected group line {line!r}", idx)

    # object block ----------------------------------------------------------
    def _object_line(self, line, idx, mode):
        name = mode[1]
        key, _, rest = line.partition(":")
        key = key.strip()
        if key == "elements":
            self.objects[name]["elements"] = rest.split()
            return mode
        if key.startswith("action"):
            parts = key.split()
            if len(parts) != 2:
                self.error("action lines read: action GROUPELEMENT: x->y ...", idx)
            pairs = {}
            for chunk in rest.split():
                if "->" not in chunk:
                    self.error(f"bad action pair {chunk!r}", idx)
                src, dst = chunk.split("->", 1)
                pairs[src.strip()] = dst.strip()
            self.objects[name]["actions"].append((parts[1], pairs, idx))
            return mode
        if key.startswith("orbit"):
            parts = key.split()
            if len(parts) != 2:
                self.error("orbit lines read: orbit NAME: dim N [stab: ...]", idx)
            oname = parts[1]
            self._check_name(oname, idx)
            m = re.fullmatch(r"\s*dim\s+(\d+)\s*(?:stab\s*:\s*(.*))?", rest.strip())
            if not m:
                self.error(f"bad orbit declaration {rest!r}", idx)
            dim = int(m.group(1))
            gens = []
            if m.group(2):
                for gtxt in m.group(2).split(","):
                    perm = parse_cycles(gtxt, idx, offset=1)
                    if any(not 0 <= k < dim for k in perm):
                        self.error(
                            f"stabilizer entry out of range for dim {dim}", idx
                        )
                    gens.append(tuple(perm.get(i, i) for i in range(dim)))
            self.objects[name]["orbits"].append((oname, dim, tuple(gens), idx))
            return mode
        self.error(f"unexpected object line {line!r}", idx)

    # automaton block --------------------------------------------------------
    def _automaton_line(self, line, idx, mode):
        if "->" in line and mode[1] == "delta":
            self.automaton_raw["delta"].append((line, idx))
            return mode
        key, _, rest = line.partition(":")
        key = key.strip()
        if key in ("alphabet", "states", "init"):
            self.automaton_raw[key] = rest.strip()
            return ("automaton", None)
        if key == "final":
            self.automaton_raw["final"] = rest.split()
            return ("automaton", None)
        if key == "delta":
            return ("automaton", "delta")
        self.error(f"unexpected automaton line {line!r}", idx)

    # assembly ----------------------------------------------------------------
    def _build(self) -> SpecFile:
        if self.backend is None:
            self.error("missing backend declaration", 1)
        if self.automaton_raw is None:
            self.error("missing automaton block", len(self.lines) or 1)
        group = self._build_group() if self.backend == "gset" else None
        if self.backend == "gset" and group is None:
            self.error("gset files need a group block", 1)
        objects = {}
        for name, raw in self.objects.items():
            objects[name] = self._build_object(name, raw, group)
        automaton = self._build_automaton(objects)
        return SpecFile(self.backend, group, objects, automaton, self.automaton_name)

    def _build_group(self):
        if self.group is None:
            return None
        raw = self.group
        try:
            if raw["generators"]:
                named = [
                    (name, _perm_to_dict(parse_cycles(text, line)))
                    for name, text, line in raw["generators"]
                ]
                return group_from_generator_perms(named)
            if raw["elements"] is None:
                self.error("group block needs elements or generators", raw["line"])
            elements = tuple(raw["elements"])
            identity = raw["identity"] or elements[0]
            table = {}
            for rowname, row, line in raw["table"]:
                if rowname not in elements:
                    self.error(f"table row for unknown element {rowname!r}", line)
                if len(row) != len(elements):
                    self.error(
                        f"table row for {rowname!r} needs {len(elements)} entries",
                        line,
                    )
                for col, value in zip(elements, row):
                    table[(rowname, col)] = value
            return FinGroup(elements, identity, table).validate()
        except ValidationError as exc:
            raise SpecParseError(str(exc), raw["line"])

    def _build_object(self, name, raw, group):
        if self.backend == "nominal":
            if raw["elements"] is not None or raw["actions"]:
                self.error(
                    f"object {name!r}: nominal objects are given by orbits", raw["line"]
                )
            if not raw["orbits"]:
                self.error(f"object {name!r} declares no orbits", raw["line"])
            descs = []
            for oname, dim, gens, line in raw["orbits"]:
                descs.append(OrbitDescriptor(oname, dim, gens).normalized())
            return NomObject(tuple(descs)).validate()
        if raw["orbits"]:
            self.error(
                f"object {name!r}: orbit declarations need the nominal backend",
                raw["line"],
            )
        if raw["elements"] is None:
            self.error(f"object {name!r} declares no elements", raw["line"])
        elements = tuple(raw["elements"])
        if self.backend == "set":
            if raw["actions"]:
                self.error(
                    f"object {name!r}: actions need the gset backend", raw["line"]
                )
            return SetObject(elements)
        partial = {}
        for g, pairs, line in raw["actions"]:
            if g not in set(group.elements):
                self.error(f"action for unknown group element {g!r}", line)
            amap = {x: x for x in elements}
            for src, dst in pairs.items():
                if src not in amap or dst not in set(elements):
                    self.error(f"action pair {src}->{dst} uses unknown elements", line)
                amap[src] = dst
            partial[g] = amap
        try:
            if not partial:
                # no action lines: the object carries the trivial action
                action = {g: {x: x for x in elements} for g in group.elements}
            else:
                action = close_action(group, elements, partial)
            return GSetObject(group, elements, action).validate()
        except ValidationError as exc:
            raise SpecParseError(f"object {name!r}: {exc}", raw["line"])

    def _build_automaton(self, objects):
        raw = self.automaton_raw
        for key in ("alphabet", "states", "init", "final"):
            if raw[key] is None:
                self.error(f"automaton block misses {key!r}", raw["line"])
        if raw["alphabet"] not in objects:
            self.error(f"unknown alphabet object {raw['alphabet']!r}", raw["line"])
        if raw["states"] not in objects:
            self.error(f"unknown states object {raw['states']!r}", raw["line"])
        alphabet = objects[raw["alphabet"]]
        states = objects[raw["states"]]
        if self.backend == "nominal":
            return self._build_nominal_automaton(alphabet, states, raw)
        init = raw["init"]
        if init not in set(states.carrier()):
            self.error(f"initial state {init!r} is not a state", raw["line"])
        finals = []
        for f in raw["final"]:
            if f not in set(states.carrier()):
                self.error(f"final state {f!r} is not a state", raw["line"])
            finals.append(f)
        delta_pairs = {}
        for line, idx in raw["delta"]:
            m = re.fullmatch(r"(.+?),(.+?)->(.+)", line)
            if not m:
                self.error(f"bad transition {line!r}", idx)
            q, s, t = (part.strip() for part in m.groups())
            if q not in set(states.carrier()):
                self.error(f"transition from unknown state {q!r}", idx)
            if s not in set(alphabet.carrier()):
                self.error(f"transition on unknown letter {s!r}", idx)
            if t not in set(states.carrier()):
                self.error(f"transition to unknown state {t!r}", idx)
            if (q, s) in delta_pairs:
                self.error(f"duplicate transition for ({q}, {s})", idx)
            delta_pairs[(q, s)] = t
        missing = [
            (q, s)
            for q in states.carrier()
            for s in alphabet.carrier()
            if (q, s) not in delta_pairs
        ]
        if missing:
            self.error(
                f"transition missing for ({missing[0][0]}, {missing[0][1]}); "
                "automata must be complete",
                raw["line"],
            )
        return make_automaton(
            alphabet, states, init, finals, delta_pairs, name=self.automaton_name
        )

    def _build_nominal_automaton(self, alphabet, states, raw):
        init_name, init_args = _parse_nominal_element(raw["init"], raw["line"])
        if init_args:
            self.error("the initial state must be a fixed point: no atoms", raw["line"])
        init = NomElement(init_name, ())
        state_names = {o.name for o in states.orbits}
        if init_name not in state_names:
            self.error(f"initial orbit {init_name!r} is not a state orbit", raw["line"])
        finals = []
        for f in raw["final"]:
            fname, fargs = _parse_nominal_element(f, raw["line"])
            if fargs:
                self.error("final specifications are orbit names", raw["line"])
            if fname not in state_names:
                self.error(f"final orbit {fname!r} is not a state orbit", raw["line"])
            finals.append(fname)
        rules = []
        for line, idx in raw["delta"]:
            m = re.fullmatch(r"(.+?),(.+?)->(.+)", line)
            if not m:
                self.error(f"bad transition rule {line!r}", idx)
            left, right, tgt = (p.strip() for p in m.groups())
            lo, lvars = _parse_nominal_element(left, idx)
            ro, rvars = _parse_nominal_element(right, idx)
            to, tvars = _parse_nominal_element(tgt, idx)
            if lo not in state_names:
                self.error(f"rule from unknown orbit {lo!r}", idx)
            if ro not in {o.name for o in alphabet.orbits}:
                self.error(f"rule on unknown alphabet orbit {ro!r}", idx)
            if to not in state_names:
                self.error(f"rule to unknown orbit {to!r}", idx)
            if len(set(lvars)) != len(lvars):
                self.error("state pattern variables must be distinct", idx)
            if len(lvars) != states.descriptor(lo).dim:
                self.error(f"orbit {lo!r} has dimension {states.descriptor(lo).dim}", idx)
            if len(rvars) != alphabet.descriptor(ro).dim:
                self.error(
                    f"orbit {ro!r} has dimension {alphabet.descriptor(ro).dim}", idx
                )
            pattern = []
            fresh = {}
            for v in rvars:
                if v in lvars:
                    pattern.append(("l", lvars.index(v)))
                else:
                    if v not in fresh:
                        fresh[v] = len(fresh)
                    pattern.append(("new", fresh[v]))
            if len(set(rvars)) != len(rvars):
                self.error("letter pattern variables must be distinct", idx)
            sel = []
            for v in tvars:
                if v in lvars:
                    sel.append(("l", lvars.index(v)))
                elif v in rvars:
                    sel.append(("r", rvars.index(v)))
                else:
                    self.error(f"target variable {v!r} is unbound", idx)
            rules.append(PairRule(lo, ro, tuple(pattern), to, tuple(sel)))
        return make_nominal_automaton(
            alphabet, states, init, finals, rules, name=self.automaton_name
        )


def _perm_to_dict(perm):
    keys = set(perm) | set(perm.values())
    return {k: perm.get(k, k) for k in keys}


def parse_specfile(text) -> SpecFile:
    return _Parser(text).parse()


def load_specfile(path) -> SpecFile:
    with open(path, encoding="utf-8") as fh:
        return parse_specfile(fh.read())


# --- homomorphism files -------------------------------------------------------

def parse_homfile(text, target: FinGroup) -> GroupHom:
    """A hom file declares the source group (same syntax as a group block)
    and a ``map:`` block of ``g -> h`` lines into the automaton's group."""
    lines = text.splitlines()
    group_lines = ["backend: gset", "group:"]
    map_pairs = []
    mode = None
    for idx, raw in enumerate(lines, start=1):
        line = _strip(raw)
        if not line:
            continue
        if line.startswith("group:"):
            mode = "group"
            continue
        if line.startswith("map:"):
            mode = "map"
            continue
        if mode == "group":
            group_lines.append("  " + line)
        elif mode == "map":
            if "->" not in line:
                raise SpecParseError(f"bad map line {line!r}", idx)
            src, dst = (p.strip() for p in line.split("->", 1))
            map_pairs.append((src, dst, idx))
        else:
            raise SpecParseError(f"unexpected line {line!r}", idx)
    # reuse the group machinery on the collected lines
    sub = _Parser("\n".join(group_lines))
    mode = None
    for idx, raw in enumerate(group_lines, start=1):
        line = _strip(raw)
        if not line:
            continue
        if line.startswith("backend:"):
            sub.backend = "gset"
            continue
        if line == "group:":
            sub.group = {"elements": None, "identity": None,
                         "table": [], "generators": [], "line": idx}
            mode = ("group", None)
            continue
        mode = sub._group_line(line, idx, mode)
    source = sub._build_group()
    mapping = {}
    for src, dst, idx in map_pairs:
        if src not in set(source.elements):
            raise SpecParseError(f"map from unknown element {src!r}", idx)
        if dst not in set(target.elements):
            raise SpecParseError(f"map to unknown element {dst!r}", idx)
        mapping[src] = dst
    missing = [g for g in source.elements if g not in mapping]
    if missing:
        raise SpecParseError(f"map misses source element {missing[0]!r}", 1)
    return GroupHom(source, target, mapping).validate()


def load_homfile(path, target: FinGroup) -> GroupHom:
    with open(path, encoding="utf-8") as fh:
        return parse_homfile(fh.read(), target)


# --- emission -----------------------------------------------------------------

def render_state(q):
    if isinstance(q, str):
        return q
    if isinstance(q, tuple):
        return "<" + ".".join(render_state(x) for x in q) + ">"
    return str(q)


def _cycle_notation(perm, offset=1):
    seen = set()
    out = []
    for i in sorted(perm):
        if i in seen or perm[i] == i:
            continue
        cyc = [i]
        j = perm[i]
        while j != i:
            cyc.append(j)
            j = perm[j]
        seen.update(cyc)
        out.append("(" + " ".join(str(x + offset) for x in cyc) + ")")
    return "".join(out)


_VARS = "xyzuvw"  # enough: orbit dimensions are capped at 6


def _rule_vars(n):
    return list(_VARS[:n])


def render_rule(rule: PairRule, states: NomObject, alphabet: NomObject):
    lvars = _rule_vars(states.descriptor(rule.left_orbit).dim)
    rvars = []
    fresh_names = {}
    for kind, i in rule.pattern:
        if kind == "l":
            rvars.append(lvars[i])
        else:
            if i not in fresh_names:
                fresh_names[i] = f"n{i + 1}"
            rvars.append(fresh_names[i])
    tvars = []
    for kind, i in rule.target_sel:
        tvars.append(lvars[i] if kind == "l" else rvars[i])
    left = f"{rule.left_orbit}({','.join(lvars)})"
    right = f"{rule.right_orbit}({','.join(rvars)})"
    tgt = f"{rule.target_orbit}({','.join(tvars)})"
    return f"{left}, {right} -> {tgt}"


def emit_specfile(spec_backend, automaton, automaton_name, group=None,
                  alphabet_name="Sigma", states_name="Q"):
    """Serialize an automaton back to the text format, deterministically."""
    out = [f"backend: {spec_backend}"]
    if spec_backend == "gset":
        out.append("group:")
        out.append("  elements: " + " ".join(group.elements))
        out.append(f"  identity: {group.identity}")
        out.append("  table:")
        for g in group.elements:
            row = " ".join(group.table[(g, h)] for h in group.elements)
            out.append(f"    {g}: {row}")
    if spec_backend == "nominal":
        for oname, obj in ((alphabet_name, automaton.alphabet), (states_name, automaton.states)):
            out.append(f"object {oname}:")
            for o in obj.orbits:
                stab = [h for h in o.group if h != tuple(range(o.dim))]
                suffix = ""
                if stab:
                    suffix = " stab: " + ", ".join(
                        _cycle_notation({i: h[i] for i in range(o.dim)}) for h in stab
                    )
                out.append(f"  orbit {o.name}: dim {o.dim}{suffix}")
        from .nominal import final_orbit_names

        out.append(f"automaton {automaton_name}:")
        out.append(f"  alphabet: {alphabet_name}")
        out.append(f"  states: {states_name}")
        out.append(f"  init: {automaton.init.orbit}()")
        finals = sorted(final_orbit_names(automaton))
        out.append("  final: " + " ".join(finals))
        out.append("  delta:")
        for rule in sorted(
            automaton.delta.rules,
            key=lambda r: (r.left_orbit, r.right_orbit, repr(r.pattern)),
        ):
            out.append("    " + render_rule(rule, automaton.states, automaton.alphabet))
        return "\n".join(out) + "\n"

    # set / gset
    state_names = {q: render_state(q) for q in automaton.states.carrier()}
    letter_names = {s: render_state(s) for s in automaton.alphabet.carrier()}
    if len(set(state_names.values())) != len(state_names):
        raise ValidationError("state names collide under rendering")
    out.append(f"object {alphabet_name}:")
    out.append("  elements: " + " ".join(letter_names[s] for s in automaton.alphabet.carrier()))
    if spec_backend == "gset":
        for g in group.elements:
            if g == group.identity:
                continue
            act = automaton.alphabet.action[g]
            pairs = " ".join(
                f"{letter_names[s]}->{letter_names[act[s]]}"
                for s in automaton.alphabet.carrier()
                if act[s] != s
            )
            out.append(f"  action {g}:" + (f" {pairs}" if pairs else ""))
    out.append(f"object {states_name}:")
    out.append("  elements: " + " ".join(state_names[q] for q in automaton.states.carrier()))
    if spec_backend == "gset":
        for g in group.elements:
            if g == group.identity:
                continue
            act = automaton.states.action[g]
            pairs = " ".join(
                f"{state_names[q]}->{state_names[act[q]]}"
                for q in automaton.states.carrier()
                if act[q] != q
            )
            out.append(f"  action {g}:" + (f" {pairs}" if pairs else ""))
    out.append(f"automaton {automaton_name}:")
    out.append(f"  alphabet: {alphabet_name}")
    out.append(f"  states: {states_name}")
    out.append(f"  init: {state_names[automaton.init]}")
    finals = [state_names[q] for q in automaton.states.carrier() if automaton.is_final(q)]
    out.append("  final: " + " ".join(finals))
    out.append("  delta:")
    for q in automaton.states.carrier():
        for s in automaton.alphabet.carrier():
            out.append(
                f"    {state_names[q]}, {letter_names[s]} -> "
                f"{state_names[automaton.step(q, s)]}"
            )
    return "\n".join(out) + "\n"


def parse_word(tokens, automaton):
    """Command-line word: letter names for set/gset, atom tuples for the
    nominal backend (``5`` or ``Orb(5,7)`` or ``5,7``)."""
    if automaton.backend != "nominal":
        letters = set(automaton.letters())
        word = []
        for tok in tokens:
            if tok not in letters:
                raise ValidationError(f"letter {tok!r} is not in the alphabet")
            word.append(tok)
        return tuple(word)
    word = []
    for tok in tokens:
        name, args = None, None
        m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*)\(([^()]*)\)", tok)
        if m:
            name = m.group(1)
            args = tuple(int(x) for x in m.group(2).split(",") if x.strip())
        else:
            try:
                args = tuple(int(x) for x in tok.split(","))
            except ValueError:
                raise ValidationError(f"bad nominal letter {tok!r}")
            fits = [o for o in automaton.alphabet.orbits if o.dim == len(args)]
            if not fits:
                raise ValidationError(
                    f"no alphabet orbit of dimension {len(args)} for letter {tok!r}"
                )
            if len(fits) > 1:
                raise ValidationError(
                    f"letter {tok!r} is ambiguous; name the orbit as Orb(...)"
                )
            name = fits[0].name
        word.append(automaton.alphabet.element(name, args))
    return tuple(word)
