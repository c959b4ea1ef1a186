"""Command-line interface: exit codes, report shapes, JSON round trips."""

import json
from fractions import Fraction

import pytest

from cohprob import cli

F = Fraction

KBS = "kbs"


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def conflict_kb(tmp_path):
    path = tmp_path / "conflict.kb"
    path.write_text('prop a b\ndefault "a => b"\ndefault "a => ~b"\n')
    return str(path)


def test_check_human(capsys):
    code, out, err = run(capsys, "check", f"{KBS}/tweety.kb")
    assert code == 0 and err == ""
    assert out.startswith("COHERENT")
    assert "layers: 1" in out
    assert "resolves at layer 0" in out


def test_check_incoherent_exit_code(capsys, tmp_path):
    path = tmp_path / "bad.kb"
    path.write_text('prop a b\nassess "b | a" = 1\nassess "~b | a" = 1\n')
    code, out, _ = run(capsys, "check", str(path))
    assert code == 1
    assert out.startswith("INCOHERENT")
    assert "failing layer: 0" in out
    code, out, _ = run(capsys, "check", str(path), "--format", "json")
    assert code == 1
    data = json.loads(out)
    assert data["verdict"] == "incoherent" and data["failing_layer"] == 0


def test_check_json_round_trip(capsys):
    """The reported class must satisfy every assessed ratio exactly."""
    for argv in (
        ("check", f"{KBS}/tweety.kb"),
        ("check", f"{KBS}/alpha_tail.kb", "--alpha", "1/3"),
        ("check", f"{KBS}/contraposition.kb"),
    ):
        code, out, _ = run(capsys, *argv, "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert data["format"] == "cohprob/1" and data["command"] == "check"
        layers = [[F(m) for m in layer["masses"]] for layer in data["layers"]]
        for masses in layers:
            assert sum(masses) == 1
        for entry in data["entries"]:
            value = F(entry["value"])
            resolved = None
            for index, masses in enumerate(layers):
                h_mass = sum(masses[i] for i in entry["h_atoms"])
                if h_mass > 0:
                    resolved = index
                    eh_mass = sum(masses[i] for i in entry["eh_atoms"])
                    assert eh_mass == value * h_mass
                    break
            assert resolved == entry["layer"]


def test_check_json_deterministic(capsys):
    first = run(capsys, "check", f"{KBS}/alpha_tail.kb", "--alpha", "1/4", "--format", "json")
    second = run(capsys, "check", f"{KBS}/alpha_tail.kb", "--alpha", "1/4", "--format", "json")
    assert first == second


def test_extend_explicit_event(capsys):
    code, out, _ = run(capsys, "extend", f"{KBS}/tweety.kb", "fly | tweety")
    assert code == 0
    assert out == "[0/1, 1/1]\n"


def test_extend_file_queries(capsys):
    code, out, _ = run(capsys, "extend", f"{KBS}/tweety.kb")
    assert code == 0
    assert "fly | tweety: [0/1, 1/1]" in out
    assert "~fly | tweety: [0/1, 1/1]" in out


def test_extend_without_queries_is_an_error(capsys, tmp_path):
    path = tmp_path / "plain.kb"
    path.write_text('prop a\nassess "a | true" = 1/2\n')
    code, out, err = run(capsys, "extend", str(path))
    assert code == 2 and out == ""
    assert "no query" in err


def test_extend_json(capsys):
    code, out, _ = run(capsys, "extend", f"{KBS}/alpha_tail.kb", "--alpha", "1/3", "--format", "json")
    assert code == 0
    data = json.loads(out)
    (result,) = data["intervals"]
    assert result["event"] == "~h1 & h2 | true"
    assert result["lo"] == "2/3" and result["hi"] == "2/3"
    assert result["degenerate"] is True


def test_entails_exit_codes(capsys):
    code, out, _ = run(capsys, "entails", f"{KBS}/tweety.kb", "penguin => bird")
    assert code == 0 and out.startswith("YES; interval [1/1, 1/1]")
    code, out, _ = run(capsys, "entails", f"{KBS}/tweety.kb", "tweety => fly")
    assert code == 1 and out.startswith("NO; interval [0/1, 1/1]")


def test_entails_inconsistent_base(capsys, conflict_kb):
    code, out, err = run(capsys, "entails", conflict_kb, "a => b")
    assert code == 2 and out == ""
    assert "inconsistent" in err


def test_defaults_verdicts(capsys, conflict_kb):
    code, out, _ = run(capsys, "defaults", f"{KBS}/tweety.kb")
    assert code == 0 and "consistent: yes" in out
    code, out, _ = run(capsys, "defaults", conflict_kb)
    assert code == 1
    assert "coherence fails at layer 0" in out
    assert "violating rules: 1, 2" in out


def test_defaults_subset_check_needs_pure_defaults(capsys):
    code, out, _ = run(capsys, "defaults", f"{KBS}/alpha_tail.kb", "--alpha", "1/3")
    assert code == 0
    assert "not applicable" in out


def test_rules_single_instance(capsys):
    code, out, _ = run(capsys, "rules", f"{KBS}/tweety.kb", "--schema", "Cut")
    assert code == 0
    assert "entailed: yes" in out and "verdict: as expected" in out
    code, out, _ = run(
        capsys, "rules", f"{KBS}/tweety.kb", "--schema", "Monotonicity",
        "--map", "A=penguin,B=bird,C=fly",
    )
    assert code == 0
    assert "entailed: no" in out and "interval: [0/1, 0/1]" in out


def test_rules_random_sweep_is_seeded(capsys):
    argv = ("rules", f"{KBS}/tweety.kb", "--schema", "And", "--random", "6", "--seed", "11")
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second
    code, out, _ = first
    assert code == 0 and "instances: 6" in out


def test_rules_unknown_schema(capsys):
    code, out, err = run(capsys, "rules", f"{KBS}/tweety.kb", "--schema", "Modus")
    assert code == 2 and "unknown schema" in err


def test_atoms_listing(capsys):
    code, out, _ = run(capsys, "atoms", f"{KBS}/single_certainty.kb")
    assert code == 0
    assert "atoms: 4" in out
    assert "[11] e & h" in out


def test_input_errors_exit_2(capsys, tmp_path):
    code, out, err = run(capsys, "check", f"{KBS}/alpha_tail.kb")
    assert code == 2 and "alpha" in err
    code, out, err = run(capsys, "check", str(tmp_path / "missing.kb"))
    assert code == 2 and "error:" in err
    path = tmp_path / "wide.kb"
    path.write_text("prop p0 p1 p2 p3 p4\n")
    code, out, err = run(capsys, "check", str(path), "--max-props", "4")
    assert code == 2 and "more than 4 propositions" in err
