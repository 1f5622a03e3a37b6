import json

import pytest

from dsforge import cli


def run(capsys, argv):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, out


def write_json(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


RIGID_D4 = {
    "classes": [
        {"eigenvalues": ["z8", "z8^3"], "dims": [2, 1]},
        {"eigenvalues": ["z8", "z8^3"], "dims": [2, 1]},
        {"eigenvalues": ["z8", "z8^7"], "dims": [2, 1]},
    ]
}

NON_SOLVABLE_D4 = {
    "classes": [
        {"eigenvalues": ["z8", "z8^3"], "dims": [2, 1]},
        {"eigenvalues": ["z8", "z8^3"], "dims": [2, 1]},
        {"eigenvalues": ["z8", "z8^6"], "dims": [2, 1]},
    ]
}


def test_decide_closure_yes(tmp_path, capsys):
    path = write_json(tmp_path, "p.json", RIGID_D4)
    code, out = run(capsys, ["decide-closure", "--input", path])
    assert code == 0
    report = json.loads(out)
    assert report["answer"] == "yes"
    assert report["decomposition"]


def test_decide_closure_no(tmp_path, capsys):
    path = write_json(tmp_path, "p.json", NON_SOLVABLE_D4)
    code, out = run(capsys, ["decide-closure", "--input", path])
    assert code == 1
    assert json.loads(out)["answer"] == "no"


def test_decide_rigid_exit_codes(tmp_path, capsys):
    path = write_json(tmp_path, "p.json", RIGID_D4)
    code, out = run(capsys, ["decide-rigid", "--input", path])
    assert code == 0
    # (3;1,1,1) is not a root, so not rigid
    non_root = {
        "classes": [
            {"eigenvalues": ["z4", "z4^2"], "dims": [3, 1]},
            {"eigenvalues": ["z4", "z4^2"], "dims": [3, 1]},
            {"eigenvalues": ["z4", "z4^2"], "dims": [3, 1]},
        ]
    }
    path2 = write_json(tmp_path, "q.json", non_root)
    code2, out2 = run(capsys, ["decide-rigid", "--input", path2])
    assert code2 == 1
    assert json.loads(out2)["answer"] == "no"


def test_solve_rigid_roundtrip_through_check_solution(tmp_path, capsys):
    path = write_json(tmp_path, "p.json", RIGID_D4)
    cert = tmp_path / "solution.json"
    code, out = run(
        capsys, ["solve-rigid", "--input", path, "--emit-certificate", str(cert)]
    )
    assert code == 0
    solution = json.loads(cert.read_text())
    assert solution["answer"] == "yes"
    combined = dict(RIGID_D4)
    combined["matrices"] = solution["matrices"]
    check_path = write_json(tmp_path, "check.json", combined)
    for mode in ("exact", "closure"):
        code2, out2 = run(
            capsys, ["check-solution", "--input", check_path, "--mode", mode]
        )
        assert code2 == 0, out2
        assert json.loads(out2)["answer"] == "yes"


def test_check_solution_rejects_wrong_matrices(tmp_path, capsys):
    combined = dict(RIGID_D4)
    eye = [["1", "0"], ["0", "1"]]
    combined["matrices"] = [eye, eye, eye]
    path = write_json(tmp_path, "check.json", combined)
    code, out = run(capsys, ["check-solution", "--input", path])
    assert code == 1
    assert json.loads(out)["answer"] == "no"


def test_decide_additive(tmp_path, capsys):
    nilpotent = {
        "mode": "additive",
        "classes": [{"eigenvalues": ["0", "0"], "dims": [2, 1]}],
    }
    path = write_json(tmp_path, "a.json", nilpotent)
    code, out = run(capsys, ["decide-additive", "--input", path])
    assert code == 0
    bad = {
        "mode": "additive",
        "classes": [{"eigenvalues": ["1", "2"], "dims": [2, 1]}],
    }
    path2 = write_json(tmp_path, "b.json", bad)
    code2, _ = run(capsys, ["decide-additive", "--input", path2])
    assert code2 == 1


def test_mode_mismatch_is_input_error(tmp_path, capsys):
    path = write_json(
        tmp_path,
        "a.json",
        {"mode": "additive", "classes": [{"eigenvalues": ["0"], "dims": [1]}]},
    )
    code, out = run(capsys, ["decide-closure", "--input", path])
    assert code == 2
    assert "error" in json.loads(out)


def test_classify_root(tmp_path, capsys):
    data = {
        "weights": [2, 2, 2],
        "vector": {"a0": 2, "arms": [[1], [1], [1]]},
    }
    path = write_json(tmp_path, "r.json", data)
    code, out = run(capsys, ["classify-root", "--input", path])
    assert code == 0
    report = json.loads(out)
    assert report["classification"] == "RealRoot"
    assert report["q"] == 1 and report["p"] == 0
    data["vector"] = {"a0": 2, "arms": [[1], [1], [2]]}
    path2 = write_json(tmp_path, "r2.json", data)
    code2, out2 = run(capsys, ["classify-root", "--input", path2])
    assert code2 == 1
    assert json.loads(out2)["classification"] == "NotRoot"


def test_generic_xi_command(tmp_path, capsys):
    data = {
        "weights": [2, 2, 2],
        "vector": {"a0": 2, "arms": [[1], [1], [1]]},
    }
    path = write_json(tmp_path, "g.json", data)
    code, out = run(capsys, ["generic-xi", "--input", path, "--box", "2,1,1,1"])
    assert code == 0
    report = json.loads(out)
    assert len(report["rows"]) == 3
    assert report["proof"]["N"] > 1


def test_malformed_json_exit_2(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    code, out = run(capsys, ["decide-closure", "--input", str(path)])
    assert code == 2
    assert "line" in json.loads(out)["error"]


def test_bad_scalar_exit_2(tmp_path, capsys):
    data = {"classes": [{"eigenvalues": ["z8^"], "dims": [1]}]}
    path = write_json(tmp_path, "bad.json", data)
    code, out = run(capsys, ["decide-closure", "--input", path])
    assert code == 2
    assert "position" in json.loads(out)["error"]


def test_missing_file_exit_2(tmp_path, capsys):
    code, out = run(capsys, ["decide-closure", "--input", str(tmp_path / "nope.json")])
    assert code == 2


def test_output_is_deterministic_and_float_free(tmp_path, capsys):
    path = write_json(tmp_path, "p.json", RIGID_D4)
    _, first = run(capsys, ["solve-rigid", "--input", path])
    _, second = run(capsys, ["solve-rigid", "--input", path])
    assert first == second
    for token in json.loads(first)["matrices"][0][0]:
        assert "." not in token and "e-" not in token
