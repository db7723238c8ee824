"""Deterministic DOT emission: automata with orbit clusters, Cayley graphs.

The initial state is drawn as a diamond, final states are double-circled,
and in symmetric backends states are clustered by orbit.  Output is byte
identical across runs: every iteration follows the declared carrier order.
"""

from .fileformat import render_state
from .gset import orbits as gset_orbits


def _q(s):
    return '"' + s.replace('"', r"\"") + '"'


def automaton_dot(a, name="A"):
    if a.backend == "nominal":
        return _nominal_dot(a, name)
    lines = [f"digraph {_q(name)} {{", "  rankdir=LR;", '  node [shape=circle];']
    names = {q: render_state(q) for q in a.states.carrier()}

    def node_line(q, indent="  "):
        shape = "diamond" if q == a.init else "circle"
        peripheries = ' peripheries=2' if a.is_final(q) else ""
        return f"{indent}{_q(names[q])} [shape={shape}{peripheries}];"

    if a.backend == "gset":
        for i, orbit in enumerate(gset_orbits(a.states)):
            lines.append(f"  subgraph cluster_{i} {{")
            lines.append(f'    label="orbit {i}";')
            for q in orbit:
                lines.append(node_line(q, "    "))
            lines.append("  }")
    else:
        for q in a.states.carrier():
            lines.append(node_line(q))
    # merge parallel edges into one label
    merged = {}
    for q in a.states.carrier():
        for s in a.alphabet.carrier():
            t = a.step(q, s)
            merged.setdefault((q, t), []).append(render_state(s))
    for q in a.states.carrier():
        for t in a.states.carrier():
            if (q, t) in merged:
                label = ",".join(merged[(q, t)])
                lines.append(f"  {_q(names[q])} -> {_q(names[t])} [label={_q(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _nominal_dot(a, name):
    from .fileformat import _rule_vars
    from .nominal import final_orbit_names

    finals = final_orbit_names(a)
    lines = [f"digraph {_q(name)} {{", "  rankdir=LR;", '  node [shape=circle];']
    for i, o in enumerate(a.states.orbits):
        lines.append(f"  subgraph cluster_{i} {{")
        lines.append(f'    label="orbit {o.name} (dim {o.dim})";')
        shape = "diamond" if o.name == a.init.orbit else "circle"
        peripheries = " peripheries=2" if o.name in finals else ""
        lines.append(f"    {_q(o.name)} [shape={shape}{peripheries}];")
        lines.append("  }")
    for rule in sorted(
        a.delta.rules, key=lambda r: (r.left_orbit, r.right_orbit, repr(r.pattern))
    ):
        lvars = _rule_vars(a.states.descriptor(rule.left_orbit).dim)
        rvars = []
        for kind, i in rule.pattern:
            rvars.append(lvars[i] if kind == "l" else f"n{i + 1}")
        label = f"{rule.right_orbit}({','.join(rvars)})"
        lines.append(
            f"  {_q(rule.left_orbit)} -> {_q(rule.target_orbit)} [label={_q(label)}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def cayley_dot(lm, name="M"):
    """Cayley graph on the letter generators.  For nominal monoids this
    draws the pool window at the policy pool size."""
    from .monoid import pool_view

    view = pool_view(lm)
    lines = [f"digraph {_q(name)} {{", "  rankdir=LR;", '  node [shape=circle];']
    for el, label in view.labels.items():
        peripheries = " peripheries=2" if view.chi[el] else ""
        shape = "diamond" if el == view.unit else "circle"
        lines.append(f"  {_q(label)} [shape={shape}{peripheries}];")
    for el in view.elements:
        for s in view.letters:
            t = view.mult(el, view.phi[s])
            lines.append(
                f"  {_q(view.labels[el])} -> {_q(view.labels[t])} "
                f"[label={_q(view.letter_labels[s])}];"
            )
    lines.append("}")
    return "\n".join(lines) + "\n"
