import json
import random
import shutil

import pytest

from consensus_faces.cli import load_system_file, main
from consensus_faces.decide import CycleWitness, verify_cycle_witness, verify_steering
from consensus_faces.faces import FaceId
from consensus_faces.random_systems import random_system, random_undirected_stochastic

from conftest import DATA, FIXTURES, system


def write_system(path, mats, names=None):
    data = {"n": mats[0].n, "matrices": [A.to_strings() for A in mats]}
    if names:
        data["names"] = names
    path.write_text(json.dumps(data))
    return str(path)


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_permutation_averaging(tmp_path, capsys):
    report = tmp_path / "r.json"
    code, out, _ = run(["analyze", FIXTURES / "permutation_averaging.json", "--report", report, "--witness"], capsys)
    assert code == 0
    r = json.loads(report.read_text())
    assert r["fast_path"] is True
    assert r["problem1"]["answer"] is False
    assert r["problem1"]["witness"] == {"kind": "cycle", "face": "+-", "word": [0]}
    assert r["problem2"]["answer"] is True
    assert r["problem2"]["witness"]["per_face_words"] == {"+-": [1]}
    assert r["system"]["dobrushin_seminorms"] == ["1", "0"]
    assert "repeat word [0]" in out


def test_report_witnesses_replay(tmp_path, capsys):
    path = FIXTURES / "permutation_averaging.json"
    report = tmp_path / "r.json"
    run(["analyze", path, "--report", report, "--force-general"], capsys)
    r = json.loads(report.read_text())
    sf = load_system_file(path)
    s = system(*sf.matrices)
    w = r["problem1"]["witness"]
    assert verify_cycle_witness(s, CycleWitness(FaceId.parse(w["face"]), tuple(w["word"])))
    steer = r["problem2"]["witness"]
    for face, word in steer["per_face_words"].items():
        assert verify_steering(s, FaceId.parse(face), word)
        assert verify_steering(s, FaceId.parse(face), steer["universal_word"])


def test_analyze_l1_square_golden(tmp_path, capsys):
    dot = tmp_path / "g.dot"
    report = tmp_path / "r.json"
    code, _, _ = run(["analyze", FIXTURES / "l1_square.json", "--dot", dot, "--report", report], capsys)
    assert code == 0
    assert dot.read_text() == (DATA / "l1_square.dot").read_text()
    r = json.loads(report.read_text())
    assert r["graph"]["nodes"] == 5
    assert r["problem1"]["answer"] is False and r["problem2"]["answer"] is True


def test_analyze_rejects_assumption(capsys):
    code, _, err = run(["analyze", FIXTURES / "bad_assumption.json"], capsys)
    assert code == 2
    assert "Assumption 1" in err and "seminorm is 2" in err


@pytest.mark.parametrize(
    "content, needle",
    [
        ("{not json", "not valid JSON"),
        ('{"n": 2}', "expected an object"),
        ('{"n": 2, "matrices": [[["1", "0"]]]}', "not 2x2"),
        ('{"n": 2, "matrices": [[["0.5", "0.5"], ["1", "0"]]]}', "not a rational"),
        ('{"n": 2, "matrices": [[["1/2", "1/4"], ["1", "0"]]]}', "rows must sum to 1"),
    ],
)
def test_analyze_input_errors(tmp_path, capsys, content, needle):
    path = tmp_path / "bad.json"
    path.write_text(content)
    code, _, err = run(["analyze", path], capsys)
    assert code == 2
    assert needle in err


def test_analyze_missing_file(tmp_path, capsys):
    code, _, err = run(["analyze", tmp_path / "nope.json"], capsys)
    assert code == 2 and "cannot read" in err


def test_analyze_capacity(tmp_path, capsys):
    rng = random.Random(3)
    path = write_system(tmp_path / "s.json", list(random_system(rng, 5, 1).matrices))
    code, _, err = run(["analyze", path, "--max-n", "4"], capsys)
    assert code == 2 and "guard" in err


def test_analyze_fast_path_large_n(tmp_path, capsys):
    rng = random.Random(5)
    mats = [random_undirected_stochastic(rng, 14) for _ in range(2)]
    report = tmp_path / "r.json"
    code, _, _ = run(["analyze", write_system(tmp_path / "s.json", mats), "--report", report], capsys)
    assert code == 0
    r = json.loads(report.read_text())
    assert r["fast_path"] is True and r["graph"] is None and r["problem2"] is None
    assert "problem2_note" in r


def test_analyze_is_deterministic(tmp_path, capsys):
    src = FIXTURES / "permutation_averaging.json"
    outputs = []
    for k in range(2):
        rep, dot = tmp_path / f"r{k}.json", tmp_path / f"g{k}.dot"
        run(["analyze", src, "--report", rep, "--dot", dot], capsys)
        r = json.loads(rep.read_text())
        del r["run"]
        outputs.append((r, dot.read_bytes()))
    assert outputs[0] == outputs[1]


def test_fast_path_transparency(tmp_path, capsys):
    rng = random.Random(11)
    for trial in range(15):
        n = rng.randint(2, 4)
        path = write_system(tmp_path / f"s{trial}.json", [random_undirected_stochastic(rng, n) for _ in range(2)])
        answers = []
        for flags in ([], ["--force-general"]):
            rep = tmp_path / "r.json"
            assert run(["analyze", path, "--report", rep, *flags], capsys)[0] == 0
            r = json.loads(rep.read_text())
            answers.append((r["problem1"]["answer"], r["problem2"]["answer"]))
        assert answers[0] == answers[1]


def test_oracle_compare(tmp_path, capsys):
    rng = random.Random(2)
    path = write_system(tmp_path / "s.json", list(random_system(rng, 3, 2).matrices))
    report = tmp_path / "r.json"
    code, out, _ = run(["oracle", path, "--compare", "--report", report], capsys)
    assert code == 0 and "agreement" in out
    assert json.loads(report.read_text())["compare"]["agreement"] is True


def test_oracle_permutation(tmp_path, capsys):
    report = tmp_path / "r.json"
    code, out, _ = run(["oracle", FIXTURES / "permutation.json", "--report", report], capsys)
    assert code == 0
    r = json.loads(report.read_text())
    assert r["problem1"]["answer"] is False and r["problem1"]["witness"]["word"] == [0]
    assert "word [0]" in out


def test_oracle_guard(tmp_path, capsys):
    rng = random.Random(4)
    path = write_system(tmp_path / "s.json", list(random_system(rng, 7, 1).matrices))
    code, _, err = run(["oracle", path], capsys)
    assert code == 2 and "too large" in err


def test_oracle_disagreement_exit_code(tmp_path, capsys, monkeypatch):
    from consensus_faces import cli
    from consensus_faces.decide import Problem, Verdict

    monkeypatch.setattr(cli, "decide_problem1", lambda g: Verdict(Problem.ASYMPTOTIC_STABILITY, True))
    code, out, _ = run(["oracle", FIXTURES / "permutation.json", "--compare"], capsys)
    assert code == 3 and "DISAGREEMENT" in out


def test_simulate_cli(tmp_path, capsys):
    code, out, _ = run(
        ["simulate", FIXTURES / "averaging.json", "--x0", "1,-1", "--word", "0", "--csv", tmp_path / "t.csv"], capsys
    )
    assert code == 0 and out.strip() == "final seminorm: 0"
    assert (tmp_path / "t.csv").read_text().splitlines()[0] == "t,x0,x1,seminorm"
    code, out, _ = run(
        ["simulate", FIXTURES / "permutation.json", "--x0", "1,-1", "--word", "0", "--periods", "5",
         "--csv", tmp_path / "t.csv"], capsys
    )
    assert code == 0 and out.strip() == "final seminorm: 1"


def test_simulate_consensus_stdout(capsys):
    code, out, _ = run(["simulate", FIXTURES / "permutation_averaging.json", "--x0", "2/3,2/3",
                        "--word", "0,1", "--periods", "2"], capsys)
    assert code == 0
    assert [line.rsplit(",", 1)[1] for line in out.splitlines()[1:]] == ["0"] * 5


@pytest.mark.parametrize("argv", [["--x0", "1,2,3", "--word", "0"], ["--x0", "1,0", "--word", "a"],
                                  ["--x0", "1;0", "--word", "0"], ["--x0", "1,0", "--word", "4"]])
def test_simulate_errors(capsys, argv):
    code, _, _ = run(["simulate", FIXTURES / "averaging.json", *argv], capsys)
    assert code == 2


def test_census(capsys):
    code, out, _ = run(["census", "2", "3"], capsys)
    assert code == 0
    assert out.splitlines() == ["n=2 total_faces=3 proper_pairs=1", "n=3 total_faces=13 proper_pairs=6"]
    code, out, _ = run(["census", "4", "--json"], capsys)
    assert json.loads(out) == [{"n": 4, "total_faces": 51, "proper_pairs": 25}]


def test_console_script_available():
    assert shutil.which("consensus-faces") is not None
