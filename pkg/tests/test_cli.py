import contextlib
import io
import json
import os

import pytest

from mvcube import cli


def run_cli(*argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli.run(list(argv))
    return code, buf.getvalue()


def run_json(*argv):
    code, out = run_cli(*argv)
    return code, json.loads(out)


def test_integrate_lebesgue():
    code, doc = run_json("integrate", "--n", "1",
                         "--term", "!( !x1 + !x1 )", "--state", "lebesgue")
    assert code == 0
    assert doc == {"value": "1/4"}


def test_integrate_mix_auto_cylinder():
    code, doc = run_json("integrate", "--n", "2",
                         "--term", "!( !x1 + !x1 )", "--state", "mix:4")
    assert code == 0
    assert doc == {"value": "17/64"}


def test_farey_output():
    code, doc = run_json("farey", "--n", "1", "--d", "4")
    assert code == 0
    assert doc["count"] == 2
    assert doc["points"] == [["1/4"], ["3/4"]]


def test_gen_and_validate_map(tmp_path):
    path = str(tmp_path / "r1.json")
    code, doc = run_json("gen-map", "--kind", "R", "--k", "1", "--out", path)
    assert code == 0 and os.path.exists(path)
    code, doc = run_json("validate-map", "--map", path)
    assert code == 0
    assert doc["passed"] is True


def test_validate_sprime_fails(tmp_path):
    path = str(tmp_path / "sp1.json")
    run_json("gen-map", "--kind", "Sprime", "--k", "1", "--out", path)
    code, doc = run_json("validate-map", "--map", path)
    assert code == 1
    assert not doc["passed"]
    assert any(kind == "integer-entries" for kind, _ in doc["failures"])


def test_invariance_subcommand():
    code, doc = run_json("invariance", "--n", "2", "--seed", "3",
                         "--terms", "3", "--word-len", "3")
    assert code == 0
    assert doc["all_equal"] is True
    assert all(a == b for a, b in doc["values"])


def test_coherence_exit_code_reflects_result():
    code, doc = run_json("coherence", "--d", "4", "--term", "!( !x1 + !x1 )")
    assert code == 1
    assert doc == {"value_n": "1/4", "value_n_plus_1": "17/64",
                   "coherent": False}
    code, doc = run_json("coherence", "--d", "4", "--term", "!( !x1 + !x1 )",
                         "--lebesgue")
    assert code == 0 and doc["coherent"] is True


def test_conjugacy_subcommand():
    code, doc = run_json("conjugacy", "--kind", "R", "--k", "0",
                         "--samples", "100")
    assert code == 0 and doc["all_equal"] is True
    code, doc = run_json("conjugacy", "--kind", "S", "--k", "1",
                         "--samples", "100")
    assert code == 0 and doc["all_equal"] is True


def test_birkhoff_subcommand():
    code, doc = run_json("birkhoff", "--k", "1", "--alpha", "golden",
                         "--iters", "20000", "--bins", "16")
    assert code == 0
    assert doc["sup_deviation"] < 0.01


def test_orbit_subcommand():
    code, doc = run_json("orbit", "--t0", "9/10", "--iters", "4")
    assert code == 0
    assert doc["orbit"] == ["9/10", "8/9", "7/8", "6/7", "5/6"]


def test_boxcheck_subcommand():
    code, doc = run_json("boxcheck", "--state", "lebesgue", "--depth", "1")
    assert code == 0 and doc["constant"] is True
    code, doc = run_json("boxcheck", "--state", "mix:4", "--depth", "2")
    assert code == 1 and doc["constant"] is False


def test_usage_errors_exit_two():
    assert run_cli("no-such-command")[0] == 2
    assert run_cli("integrate")[0] == 2
    assert run_cli("integrate", "--n", "1", "--term", "((x1)",
                   "--state", "lebesgue")[0] == 2
    assert run_cli("integrate", "--n", "1", "--term", "x1",
                   "--state", "bogus")[0] == 2


def test_byte_identical_reruns():
    args = ("invariance", "--n", "2", "--seed", "5", "--terms", "2",
            "--word-len", "2")
    assert run_cli(*args) == run_cli(*args)


def test_json_indent_flag():
    code, out = run_cli("--json-indent", "2", "farey", "--n", "1", "--d", "2")
    assert code == 0
    assert out.startswith("{\n")


def test_report_writes_figures_and_csv(tmp_path):
    out_dir = str(tmp_path / "report")
    code, doc = run_json("report", "--out-dir", out_dir)
    assert code == 0
    names = sorted(os.path.basename(p) for p in doc["written"])
    assert names == ["birkhoff.csv", "birkhoff.png", "orbit.csv",
                     "orbit.png", "twist_params.csv", "twist_params.png"]
    for p in doc["written"]:
        assert os.path.getsize(p) > 0
    with open(os.path.join(out_dir, "orbit.csv")) as fh:
        header = fh.readline().strip()
    assert header == "step,value"
