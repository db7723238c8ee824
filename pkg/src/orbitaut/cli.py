"""Command-line surface.

Subcommands: validate, minimize, syn, accepts, equiv, restrict, forget.
Exit codes are a stable contract: 0 success, 2 semantic invalidity,
3 parse error, 4 resource or pool-stability failure.
"""

import argparse
import sys

from . import automata, monoid, nominal
from .contract import finiteness
from .dot import automaton_dot, cayley_dot
from .errors import (
    EXIT_INVALID,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_RESOURCE,
    BackendMismatchError,
    CapExceededError,
    OrbitautError,
    PoolMarginError,
    PoolStabilityError,
    SpecParseError,
    ValidationError,
)
from .fileformat import emit_specfile, load_homfile, load_specfile, parse_word, render_state
from .gset import fixed_points, forget, orbits, restrict_automaton
from .monoid import render_table, render_word


def _write(path, text):
    if path == "-" or path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load(path):
    spec = load_specfile(path)
    spec.automaton.validate()
    return spec


def cmd_validate(args):
    _load(args.file)
    print("VALID")
    return EXIT_OK


def _counts(a):
    if a.backend == "nominal":
        return None, len(a.states.orbits)
    n = len(a.states.carrier())
    if a.backend == "gset":
        return n, len(orbits(a.states))
    return n, n


def _minimize(spec, args):
    a = spec.automaton
    if a.backend == "nominal":
        return nominal.minimize_nominal(a, margin=args.pool_margin)
    return automata.minimize(a)


def cmd_minimize(args):
    spec = _load(args.file)
    a = spec.automaton
    before_states, before_orbits = _counts(a)
    res = _minimize(spec, args)
    m = res.automaton
    after_states, after_orbits = _counts(m)

    report = [f"automaton: {spec.automaton_name}", f"backend: {spec.backend}"]
    if before_states is not None:
        report.append(f"states: {before_states} -> {after_states}")
    already = before_orbits == after_orbits and before_states == after_states
    suffix = " (already minimal)" if already else ""
    report.append(f"orbits: {before_orbits} -> {after_orbits}{suffix}")
    if spec.backend == "gset":
        report.append(f"fixed points: {len(fixed_points(m.states))}")
    fin = finiteness(m.states)
    yn = lambda b: "yes" if b else "no"
    report.append(f"dK-finite: {yn(fin.dk_finite)}")
    report.append(f"orbit-finite: {yn(fin.decomposition_finite)}")
    report.append(f"dK-regular: {yn(fin.dk_finite)}")
    report.append(f"decomposition-regular: {yn(fin.decomposition_finite)}")
    report_text = "\n".join(report) + "\n"

    out_text = emit_specfile(spec.backend, m, spec.automaton_name, group=spec.group)
    _write(args.out, out_text)
    if args.report:
        _write(args.report, report_text)
    if args.dot:
        _write(args.dot, automaton_dot(m, name=spec.automaton_name))
    return EXIT_OK


def cmd_syn(args):
    spec = _load(args.file)
    a = spec.automaton
    if a.backend == "nominal":
        lm = nominal.syntactic_monoid_nominal(a, cap=args.cap, margin=args.pool_margin)
        carrier = lm.monoid.carrier
        lines = [
            f"syntactic monoid of {spec.automaton_name}: {len(carrier.orbits)} orbits"
        ]
        for o in carrier.orbits:
            rep = nominal.make_element(o, tuple(range(1, o.dim + 1)))
            wit = (lm.monoid.witnesses or {}).get(rep)
            witness = render_word(wit) if wit is not None else "?"
            lines.append(f"  orbit {o.name}: dim {o.dim}, witness {witness}")
    else:
        lm = monoid.syntactic_monoid(a, cap=args.cap)
        els = lm.monoid.carrier.carrier()
        lines = [
            f"syntactic monoid of {spec.automaton_name}: {len(els)} elements"
        ]
        if spec.backend == "gset":
            lines.append(f"orbits: {len(orbits(lm.monoid.carrier))}")
        witnesses = " ".join(render_word(w) for w in els)
        lines.append(f"elements (shortlex witnesses): {witnesses}")
    _write(args.out, "\n".join(lines) + "\n")
    if args.table:
        _write(args.table, render_table(lm))
    if args.dot:
        _write(args.dot, cayley_dot(lm, name=spec.automaton_name))
    return EXIT_OK


def cmd_accepts(args):
    spec = _load(args.file)
    word = parse_word(args.letters, spec.automaton)
    print("true" if automata.accepts(spec.automaton, word) else "false")
    return EXIT_OK


def cmd_equiv(args):
    spec_a = _load(args.file_a)
    spec_b = _load(args.file_b)
    witness = automata.distinguishing_word(spec_a.automaton, spec_b.automaton)
    if witness is None:
        print("true")
    else:
        rendered = " ".join(
            repr(s) if spec_a.backend == "nominal" else render_state(s)
            for s in witness
        )
        print(f"false (distinguishing word: {rendered or 'eps'})")
    return EXIT_OK


def _acceptance_preserved(a, b, depth=3):
    """Exhaustively compare acceptance on all short words (same letters)."""
    import itertools

    letters = list(a.letters())
    count = 0
    for n in range(depth + 1):
        for w in itertools.product(letters, repeat=n):
            if automata.accepts(a, w) != automata.accepts(b, w):
                raise ValidationError(f"acceptance differs on {w!r}")
            count += 1
    return count


def cmd_restrict(args):
    spec = _load(args.file)
    if spec.backend != "gset":
        raise ValidationError("restrict applies to gset automata")
    hom = load_homfile(args.hom, spec.group)
    restricted = restrict_automaton(hom, spec.automaton)
    count = _acceptance_preserved(spec.automaton, restricted)
    text = emit_specfile("gset", restricted, spec.automaton_name, group=hom.source)
    text += f"# acceptance preserved on all {count} words of length <= 3\n"
    _write(args.out, text)
    return EXIT_OK


def cmd_forget(args):
    spec = _load(args.file)
    if spec.backend != "gset":
        raise ValidationError("forget applies to gset automata")
    forgotten = forget(spec.automaton)
    count = _acceptance_preserved(spec.automaton, forgotten)
    text = emit_specfile("set", forgotten, spec.automaton_name)
    text += f"# acceptance preserved on all {count} words of length <= 3\n"
    _write(args.out, text)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(
        prog="orbitaut",
        description="minimal automata, Nerode quotients and syntactic monoids "
        "over finite sets, finite group actions and orbit-finite nominal sets",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, out=True):
        if out:
            sp.add_argument("--out", default="-", help="output file (default stdout)")
        sp.add_argument("--pool-margin", type=int, default=1,
                        help="extra fresh atoms for nominal pools (default 1)")
        sp.add_argument("--cap", type=int, default=monoid.DEFAULT_CLOSURE_CAP,
                        help="monoid closure cap")

    sp = sub.add_parser("validate", help="check all structural invariants")
    sp.add_argument("file")
    common(sp, out=False)
    sp.set_defaults(fn=cmd_validate)

    sp = sub.add_parser("minimize", help="emit the minimal automaton")
    sp.add_argument("file")
    sp.add_argument("--dot", help="write a DOT diagram of the minimal automaton")
    sp.add_argument("--report", help="write the minimization report")
    common(sp)
    sp.set_defaults(fn=cmd_minimize)

    sp = sub.add_parser("syn", help="emit the syntactic monoid")
    sp.add_argument("file")
    sp.add_argument("--table", help="write the multiplication table")
    sp.add_argument("--dot", help="write the Cayley graph")
    common(sp)
    sp.set_defaults(fn=cmd_syn)

    sp = sub.add_parser("accepts", help="run a word")
    sp.add_argument("file")
    sp.add_argument("letters", nargs="*", help="word letters (nominal: atoms)")
    common(sp, out=False)
    sp.set_defaults(fn=cmd_accepts)

    sp = sub.add_parser("equiv", help="decide language equivalence")
    sp.add_argument("file_a")
    sp.add_argument("file_b")
    common(sp, out=False)
    sp.set_defaults(fn=cmd_equiv)

    sp = sub.add_parser("restrict", help="restrict along a group homomorphism")
    sp.add_argument("file")
    sp.add_argument("--hom", required=True, help="homomorphism file")
    common(sp)
    sp.set_defaults(fn=cmd_restrict)

    sp = sub.add_parser("forget", help="forget the group action")
    sp.add_argument("file")
    common(sp)
    sp.set_defaults(fn=cmd_forget)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except SpecParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (CapExceededError, PoolMarginError, PoolStabilityError) as exc:
        print(f"resource/stability failure: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ValidationError, BackendMismatchError) as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OrbitautError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
