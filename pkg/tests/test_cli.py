"""Command-line surface: exit codes, outputs, byte-level determinism.

Commands run as subprocesses with different hash seeds, so any reliance on
set iteration order would show up as nondeterministic bytes.
"""

import subprocess
import sys
from pathlib import Path

import pytest

from conftest import FILES


def run_cli(args, seed="0"):
    return subprocess.run(
        [sys.executable, "-m", "orbitaut.cli", *args],
        capture_output=True,
        text=True,
        env={"PYTHONHASHSEED": seed, "PATH": "/usr/bin:/bin"},
        cwd=str(Path(__file__).parent.parent),
    )


def test_validate_golden_files():
    for name in ("ex45.aut", "ex421.aut", "ends_in_a.aut"):
        r = run_cli(["validate", str(FILES / name)])
        assert r.returncode == 0
        assert r.stdout.strip() == "VALID"


def test_validate_reports_moving_init(tmp_path):
    bad = tmp_path / "bad.aut"
    bad.write_text(
        "backend: gset\ngroup:\n  elements: e g\n  identity: e\n  table:\n"
        "    e: e g\n    g: g e\n"
        "object S:\n  elements: a\nobject Q:\n  elements: p q\n"
        "  action g: p->q q->p\n"
        "automaton M:\n  alphabet: S\n  states: Q\n  init: p\n  final:\n"
        "  delta:\n    p, a -> p\n    q, a -> q\n"
    )
    r = run_cli(["validate", str(bad)])
    assert r.returncode == 2
    assert "fixed point" in r.stderr and "'g'" in r.stderr


def test_parse_error_exit_3(tmp_path):
    bad = tmp_path / "bad.aut"
    bad.write_text("backend: set\nobject Q:\n  wobble: q0\n")
    r = run_cli(["validate", str(bad)])
    assert r.returncode == 3
    assert "line 3" in r.stderr


def test_nominal_overlapping_patterns_exit_2(tmp_path):
    bad = tmp_path / "overlap.aut"
    bad.write_text(
        "backend: nominal\nobject A:\n  orbit A: dim 1\n"
        "object Q:\n  orbit S: dim 0\n  orbit R: dim 1\n"
        "automaton M:\n  alphabet: A\n  states: Q\n  init: S()\n  final: S\n"
        "  delta:\n    S(), A(x) -> S()\n    S(), A(y) -> R(y)\n"
        "    R(x), A(x) -> S()\n    R(x), A(y) -> R(x)\n"
    )
    r = run_cli(["validate", str(bad)])
    assert r.returncode == 2
    assert "overlapping" in r.stderr


def test_minimize_ex45_report(tmp_path):
    rep = tmp_path / "report.txt"
    out = tmp_path / "min.aut"
    r = run_cli([
        "minimize", str(FILES / "ex45.aut"),
        "--report", str(rep), "--out", str(out),
    ])
    assert r.returncode == 0
    text = rep.read_text()
    assert "states: 9 -> 5" in text
    assert "orbits: 5 -> 3" in text
    assert "fixed points: 1" in text
    # the output re-parses, re-validates and re-minimizes to itself
    r2 = run_cli(["validate", str(out)])
    assert r2.returncode == 0
    out2 = tmp_path / "min2.aut"
    r3 = run_cli(["minimize", str(out), "--out", str(out2)])
    assert r3.returncode == 0
    assert out.read_text() == out2.read_text()


def test_minimize_ex421_report(tmp_path):
    rep = tmp_path / "report.txt"
    out = tmp_path / "min.aut"
    r = run_cli([
        "minimize", str(FILES / "ex421.aut"),
        "--report", str(rep), "--out", str(out),
    ])
    assert r.returncode == 0
    text = rep.read_text()
    assert "orbits: 3 -> 3 (already minimal)" in text
    assert "dK-finite: no" in text
    assert "orbit-finite: yes" in text
    out2 = tmp_path / "min2.aut"
    run_cli(["minimize", str(out), "--out", str(out2)])
    assert out.read_text() == out2.read_text()


def test_minimize_all_accepting_single_state(tmp_path):
    f = tmp_path / "all.aut"
    f.write_text(
        "backend: set\nobject S:\n  elements: a b\nobject Q:\n"
        "  elements: q0 q1\n"
        "automaton M:\n  alphabet: S\n  states: Q\n  init: q0\n  final: q0 q1\n"
        "  delta:\n    q0, a -> q1\n    q0, b -> q0\n    q1, a -> q0\n"
        "    q1, b -> q1\n"
    )
    out = tmp_path / "min.aut"
    run_cli(["minimize", str(f), "--out", str(out)])
    assert "elements: <>" in out.read_text()


def test_syn_ex45_table(tmp_path):
    table = tmp_path / "table.txt"
    r = run_cli(["syn", str(FILES / "ex45.aut"), "--table", str(table)])
    assert r.returncode == 0
    assert "5 elements" in r.stdout
    assert "orbits: 3" in r.stdout
    text = table.read_text()
    # spot-check the worked example's products under witness labels
    assert "eps" in text
    lines = [l for l in text.splitlines() if l.strip()]
    assert len(lines) == 2 + 5  # header, separator, five rows


def test_syn_ex421_exit_4():
    r = run_cli(["syn", str(FILES / "ex421.aut")])
    assert r.returncode == 4
    assert "pool" in r.stderr


def test_accepts_ex45():
    r = run_cli(["accepts", str(FILES / "ex45.aut"), "a", "abar"])
    assert r.returncode == 0 and r.stdout.strip() == "true"
    r = run_cli(["accepts", str(FILES / "ex45.aut"), "a", "a"])
    assert r.stdout.strip() == "false"


def test_accepts_nominal_words():
    r = run_cli(["accepts", str(FILES / "ex421.aut"), "5", "7", "5"])
    assert r.stdout.strip() == "true"
    r = run_cli(["accepts", str(FILES / "ex421.aut"), "5", "7", "8"])
    assert r.stdout.strip() == "false"


def test_accepts_unknown_letter_exit_2():
    r = run_cli(["accepts", str(FILES / "ends_in_a.aut"), "c"])
    assert r.returncode == 2


def test_equiv_minimized(tmp_path):
    out = tmp_path / "min.aut"
    run_cli(["minimize", str(FILES / "ex45.aut"), "--out", str(out)])
    r = run_cli(["equiv", str(FILES / "ex45.aut"), str(out)])
    assert r.returncode == 0
    assert r.stdout.strip() == "true"


def test_equiv_complement_reports_witness(tmp_path):
    text = (FILES / "ex45.aut").read_text()
    flipped = text.replace(
        "final: ab0 ab1 ba0 ba1", "final: s0 aa0 aa1 bb0 bb1"
    )
    comp = tmp_path / "comp.aut"
    comp.write_text(flipped)
    r = run_cli(["equiv", str(FILES / "ex45.aut"), str(comp)])
    assert r.returncode == 0
    assert r.stdout.startswith("false")
    assert "distinguishing word" in r.stdout


def test_forget_and_restrict(tmp_path):
    fout = tmp_path / "forgot.aut"
    r = run_cli(["forget", str(FILES / "ex45.aut"), "--out", str(fout)])
    assert r.returncode == 0
    text = fout.read_text()
    assert text.startswith("backend: set")
    assert "acceptance preserved" in text
    assert run_cli(["validate", str(fout)]).returncode == 0

    rout = tmp_path / "restricted.aut"
    r = run_cli([
        "restrict", str(FILES / "ex45.aut"),
        "--hom", str(FILES / "z4_to_z2.hom"), "--out", str(rout),
    ])
    assert r.returncode == 0
    assert run_cli(["validate", str(rout)]).returncode == 0
    assert "elements: e r r2 r3" in rout.read_text()


def test_restrict_identity_emits_same_automaton_section(tmp_path):
    rout = tmp_path / "restricted.aut"
    run_cli([
        "restrict", str(FILES / "ex45.aut"),
        "--hom", str(FILES / "id_z2.hom"), "--out", str(rout),
    ])
    mout = tmp_path / "plain.aut"
    # the identity restriction leaves the automaton section untouched
    text = rout.read_text()
    section = text[text.index("automaton"):]
    from orbitaut.fileformat import emit_specfile, load_specfile

    spec = load_specfile(FILES / "ex45.aut")
    plain = emit_specfile("gset", spec.automaton, spec.automaton_name, group=spec.group)
    assert section.rstrip().startswith(plain[plain.index("automaton"):].rstrip()[:40])
    assert plain[plain.index("automaton"):].rstrip() in text


def test_dot_outputs_are_deterministic(tmp_path):
    outputs = []
    for seed in ("1", "2"):
        d = tmp_path / f"d{seed}.dot"
        t = tmp_path / f"t{seed}.txt"
        o = tmp_path / f"o{seed}.aut"
        rep = tmp_path / f"r{seed}.txt"
        run_cli([
            "minimize", str(FILES / "ex45.aut"), "--dot", str(d),
            "--report", str(rep), "--out", str(o),
        ], seed=seed)
        run_cli(["syn", str(FILES / "ex45.aut"), "--table", str(t)], seed=seed)
        outputs.append((d.read_text(), t.read_text(), o.read_text(), rep.read_text()))
    assert outputs[0] == outputs[1]
    dot = outputs[0][0]
    assert "shape=diamond" in dot  # the initial state
    assert "peripheries=2" in dot  # final states double-circled
    assert "cluster_" in dot  # orbits as clusters


def test_nominal_dot_clusters_orbits(tmp_path):
    d = tmp_path / "n.dot"
    run_cli(["minimize", str(FILES / "ex421.aut"), "--dot", str(d), "--out", str(tmp_path / "m.aut")])
    text = d.read_text()
    assert text.count("cluster_") == 3
    assert "shape=diamond" in text
