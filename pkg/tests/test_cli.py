import json

import pytest

from regsafe.cli import run_cli
from regsafe.words import parse_word
from regsafe.ara import parse_automaton
from regsafe.ipcant import parse_machine
from regsafe.ltl import parse_formula_file
from regsafe.pipeline import encode_tm_run, parse_tm, tm_alphabet
from regsafe.words import print_word


def _out(capsys):
    captured = capsys.readouterr()
    return captured.out, captured.err


def test_parse_echoes_canonical_formula(data_path, capsys):
    assert run_cli(["parse", "--formula", data_path("example.ltl")]) == 0
    out, _ = _out(capsys)
    assert out == "G (b | c | down X G (a | b | X G (a | c | nup)))\n"


def test_parse_json_record(data_path, capsys):
    assert run_cli(["parse", "--format", "json",
                    "--formula", data_path("example.ltl")]) == 0
    out, _ = _out(capsys)
    lines = out.splitlines()
    assert len(lines) == 1
    record = json.loads(lines[0])
    assert record["command"] == "parse"
    assert record["alphabet"] == ["a", "b", "c"]
    assert lines[0] == json.dumps(record, sort_keys=True)


def test_ltl2ara_output_parses(data_path, capsys):
    assert run_cli(["ltl2ara", "--formula", data_path("example.ltl")]) == 0
    out, _ = _out(capsys)
    aut = parse_automaton(out)
    assert len(aut.states) == 3


def test_ara2cm_output_parses(data_path, capsys):
    assert run_cli(["ara2cm", "--automaton", data_path("top.ara")]) == 0
    out, _ = _out(capsys)
    machine = parse_machine(out)
    assert len(machine.states) == 18
    assert machine.initial == "read_1"


def test_run_verdicts(data_path, capsys):
    fig = data_path("fig1.ara")
    assert run_cli(["run", "--automaton", fig, "--word", "a@D c@D b@E"]) == 0
    assert _out(capsys)[0] == "YES\n"
    assert run_cli(["run", "--automaton", fig, "--word", "a@D c@D b@D"]) == 1
    assert _out(capsys)[0] == "NO\n"


def test_sat_verdicts(data_path, capsys):
    tiny = data_path("tiny.cm")
    assert run_cli(["sat", "--machine", tiny, "--cap", "50"]) == 0
    assert _out(capsys)[0] == "NONEMPTY\n"
    assert run_cli(["sat", "--machine", tiny, "--vcap", "8"]) == 2
    assert _out(capsys)[0] == "UNKNOWN\n"
    assert run_cli(["sat", "--automaton", data_path("fig1.ara")]) == 0
    assert _out(capsys)[0] == "NONEMPTY\n"
    assert run_cli(["sat"]) == 64


def test_include_verdicts(data_path, capsys):
    fig, top = data_path("fig1.ara"), data_path("top.ara")
    assert run_cli(["include", "--lhs", fig, "--rhs", fig]) == 0
    assert _out(capsys)[0] == "INCLUDED\n"
    assert run_cli(["include", "--lhs", top, "--rhs", fig]) == 1
    assert _out(capsys)[0] == "NOT_INCLUDED\n"


def test_include_json_record(data_path, capsys):
    fig = data_path("fig1.ara")
    assert run_cli(["include", "--format", "json",
                    "--lhs", fig, "--rhs", fig]) == 0
    record = json.loads(_out(capsys)[0])
    assert record["verdict"] == "INCLUDED"
    assert record["explored"] == 923
    assert record["converged"] is True
    assert "checkpoints" in record


def test_refine(tmp_path, capsys):
    lhs = tmp_path / "strong.ltl"
    rhs = tmp_path / "weak.ltl"
    lhs.write_text("alphabet: a b\n(G a) & (down X (a R b))\n")
    rhs.write_text("alphabet: a b\nG a\n")
    assert run_cli(["refine", "--lhs", str(lhs), "--rhs", str(rhs)]) == 0
    assert _out(capsys)[0] == "INCLUDED\n"
    assert run_cli(["refine", "--lhs", str(rhs), "--rhs", str(lhs)]) == 1
    assert _out(capsys)[0] == "NOT_INCLUDED\n"


def test_bound_file_machine(data_path, capsys):
    assert run_cli(["bound", "--machine", data_path("tiny.cm")]) == 0
    assert _out(capsys)[0] == "alpha: 1 2\nU: 1 3\nm=12\n"


def test_bound_automaton(data_path, capsys):
    assert run_cli(["bound", "--automaton", data_path("top.ara")]) == 0
    out, _ = _out(capsys)
    assert out.startswith("alpha: 18 ")
    assert "m=" in out


def test_tmgen_round_trip(data_path, capsys):
    assert run_cli(["tmgen", "--tm", data_path("bouncer.tm")]) == 0
    out, _ = _out(capsys)
    ab, f = parse_formula_file(out)
    assert ab.letters[0] == "r0"
    assert run_cli(["tmgen", "--tm", data_path("bouncer.tm"),
                    "--steps", "2"]) == 0
    out, _ = _out(capsys)
    word_lines = [l for l in out.splitlines() if l.startswith("word: ")]
    assert len(word_lines) == 1
    machine = parse_tm(open(data_path("bouncer.tm")).read())
    expected = print_word(encode_tm_run(machine, 2))
    assert word_lines[0] == "word: " + expected
    parse_word(word_lines[0][len("word: "):], tm_alphabet(machine))


def test_oracle_agrees(capsys):
    assert run_cli(["oracle", "--trials", "25", "--seed", "1"]) == 0
    assert _out(capsys)[0] == "AGREE trials=25 seed=1\n"


def test_oracle_json(capsys):
    assert run_cli(["oracle", "--trials", "5", "--format", "json"]) == 0
    record = json.loads(_out(capsys)[0])
    assert record == {"command": "oracle", "verdict": "AGREE",
                      "trials": 5, "seed": 0}


def test_usage_errors(data_path, tmp_path, capsys):
    assert run_cli(["nonsense"]) == 64
    assert run_cli(["run", "--automaton", data_path("fig1.ara")]) == 64
    assert run_cli(["sat", "--machine", data_path("tiny.cm"),
                    "--cap", "0"]) == 64
    assert run_cli(["parse", "--formula", str(tmp_path / "absent.ltl")]) == 64
    _out(capsys)


def test_parse_errors_exit_65(tmp_path, data_path, capsys):
    bad = tmp_path / "bad.ltl"
    bad.write_text("alphabet: a\n(((\n")
    assert run_cli(["parse", "--formula", str(bad)]) == 65
    badword = ["run", "--automaton", data_path("fig1.ara"), "--word", "@@"]
    assert run_cli(badword) == 65
    _out(capsys)


def test_help_exits_zero(capsys):
    assert run_cli(["--help"]) == 0
    assert run_cli([]) == 64  # a subcommand is required
    _out(capsys)


def test_deterministic_output(data_path, capsys):
    assert run_cli(["ltl2ara", "--formula", data_path("example.ltl")]) == 0
    first, _ = _out(capsys)
    assert run_cli(["ltl2ara", "--formula", data_path("example.ltl")]) == 0
    second, _ = _out(capsys)
    assert first == second
