from __future__ import annotations

import json

import pytest

from vsalgebroid.cli import EXIT_FAIL, EXIT_INPUT, EXIT_PASS, JobError, JobSpec, main, run_job
from vsalgebroid.examples import fixture_path


def run(command, name, **kw):
    return run_job(JobSpec(command, str(fixture_path(name)), **kw))


def test_build_vb_free_boson_degree_5():
    res = run("build-vb", "free_boson", max_degree=5)
    assert res.exit_code == EXIT_PASS
    assert res.tables["graded dimensions"] == [1, 1, 2, 3, 5, 7]


def test_check_semiconformal_passes_on_x3():
    assert run("check-semiconformal", "euler_x3_dx").exit_code == EXIT_PASS


def test_corrupted_pairing_names_the_pairing_axiom():
    res = run("check-algebroid", "euler_x2_broken_pairing")
    assert res.exit_code == EXIT_FAIL
    failed = [r["label"] for c in res.to_dict()["checks"] for r in c["results"] if not r["passed"]]
    assert "pairing with exact: <v, da> = pi(v)a" in failed


@pytest.mark.parametrize("name", ["ef_x3_broken_d", "euler_x2_bad_L1", "euler_x2_broken_pairing"])
def test_corrupted_fixtures_exit_2(name):
    assert run("check-semiconformal", name).exit_code == EXIT_FAIL


def test_invalid_input_exit_1():
    res = run("check-algebroid", "ddx_x2")
    assert res.exit_code == EXIT_INPUT
    assert res.error["type"] == "InvariantViolation"


def test_wrong_binding_exit_1():
    assert run("example-tg", "euler_x2_tconf").exit_code == EXIT_INPUT


def test_invariant_form_dim_command():
    res = run("invariant-form-dim", "euler_x2_d1")
    assert res.tables["invariant form dimension"] == 0


def test_check_tconf_and_virasoro():
    assert run("check-tconf", "free_boson_tconf").exit_code == EXIT_PASS
    assert run("check-virasoro", "euler_x2_d1", max_degree=3).exit_code == EXIT_PASS
    assert run("check-virasoro", "euler_x2_bad_L1", max_degree=3).exit_code == EXIT_FAIL


def test_example_tg_reports_tables():
    res = run("example-tg", "ef_x3_d", max_degree=3)
    assert res.exit_code == EXIT_PASS
    assert res.tables["dimensions"] == {"A": 3, "g": 2, "Gamma": 8, "Omega": 2}
    assert res.tables["graded dimensions"] == [3, 8, 23, 53]


def test_json_report_is_deterministic_apart_from_timing(capsys):
    outs = []
    for _ in range(2):
        code = main(["check-algebroid", "--input", str(fixture_path("ef_x3")), "--report", "json",
                     "--mode-window", "-3:3"])
        d = json.loads(capsys.readouterr().out)
        assert code == 0 and d["schemaVersion"] == 1 and d["options"]["modeWindow"] == [-3, 3]
        d.pop("timing")
        outs.append(json.dumps(d))
    assert outs[0] == outs[1]


def test_missing_file_exit_1(tmp_path):
    assert run_job(JobSpec("check-tconf", str(tmp_path / "none.json"))).exit_code == EXIT_INPUT


def test_job_spec_validation():
    with pytest.raises(JobError):
        JobSpec("build-vb", "x.json", max_degree=0)
    with pytest.raises(JobError):
        JobSpec("build-vb", "x.json", mode_window=(0, 3))
    assert main(["build-vb", "--input", "x.json", "--mode-window", "1:3"]) == EXIT_INPUT
