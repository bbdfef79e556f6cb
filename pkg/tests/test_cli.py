import csv
import io
import json
import os
import subprocess
import sys

import numpy as np
import pytest

from nclab import registry
from nclab.cli import main
from nclab.experiments import THREADS_ENV
from nclab.fock import TwoModeFockState, coherent_state
from nclab.gaussian import two_mode_squeezed_vacuum, vacuum
from nclab.registry import Criterion
from nclab.verdict import CriterionVerdict


def write_json(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def fock_vacuum(tmp_path):
    return write_json(tmp_path / "fvac.json", TwoModeFockState.product(
        coherent_state(0.0, 6), coherent_state(0.0, 6)).to_json_dict())


@pytest.fixture
def fock_coherent(tmp_path):
    st = TwoModeFockState.product(coherent_state(1.0, 20), coherent_state(0.7j, 20))
    return write_json(tmp_path / "fcoh.json", st.to_json_dict())


@pytest.fixture
def gauss_vacuum(tmp_path):
    return write_json(tmp_path / "gvac.json", vacuum().to_json_dict())


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# check ---------------------------------------------------------------------

def test_check_tmsv_simon(tmp_path, capsys):
    path = write_json(tmp_path / "tmsv.json", two_mode_squeezed_vacuum(0.3).to_json_dict())
    code, out, _ = run_cli(capsys, "check", path, "simon")
    assert code == 0
    assert json.loads(out)["violated"] is True


def test_check_gaussian_vacuum_never_violated(gauss_vacuum, capsys):
    for name in registry.names("gaussian"):
        code, out, _ = run_cli(capsys, "check", gauss_vacuum, name)
        assert code == 0 and json.loads(out)["violated"] is False, name


def test_check_fock_vacuum(fock_vacuum, capsys):
    # n-Phi criteria need a defined phase; the vacuum has none and is rejected as input
    for name in registry.names("fock"):
        code, out, err = run_cli(capsys, "check", fock_vacuum, name)
        if code == 0:
            assert json.loads(out)["violated"] is False, name
        else:
            assert code == 2 and ("undefined" in err or "needs" in err), name


def test_check_theta_flag(tmp_path, capsys):
    path = write_json(tmp_path / "tmsv.json", two_mode_squeezed_vacuum(0.3).to_json_dict())
    _, out, _ = run_cli(capsys, "check", path, "mancini", "--theta", str(-np.pi / 4))
    v = json.loads(out)
    assert v["violated"] and v["parameters"]["theta"] == pytest.approx(-np.pi / 4)
    _, out, _ = run_cli(capsys, "check", path, "mancini", "--theta", str(np.pi / 4))
    assert json.loads(out)["violated"] is False


@pytest.mark.parametrize("content", ["{not json", "[1, 2]", '{"matrix": [[1, 0], [0, 1]]}',
                                     json.dumps({"matrix": (0.1 * np.eye(4)).tolist()})])
def test_check_bad_state_file(tmp_path, capsys, content):
    p = tmp_path / "bad.json"
    p.write_text(content)
    code, _, err = run_cli(capsys, "check", str(p), "simon")
    assert code == 2 and err


def test_check_missing_file(tmp_path, capsys):
    assert run_cli(capsys, "check", str(tmp_path / "nope.json"), "simon")[0] == 2


def test_check_unknown_criterion(gauss_vacuum, capsys):
    code, _, err = run_cli(capsys, "check", gauss_vacuum, "no_such_test")
    assert code == 2
    assert all(name in err for name in registry.names())


def test_check_domain_mismatch(gauss_vacuum, fock_coherent, capsys):
    assert run_cli(capsys, "check", gauss_vacuum, "hz_sum")[0] == 2
    assert run_cli(capsys, "check", fock_coherent, "simon")[0] == 2


# experiments ---------------------------------------------------------------

def read_csv(text):
    return list(csv.reader(io.StringIO(text)))


def test_fig2_default(capsys):
    code, out, err = run_cli(capsys, "fig2")
    rows = read_csv(out)
    assert code == 0 and rows[0] == ["phi1", "extra_term"]
    assert abs(float(rows[1][1])) <= 1e-9
    assert "max_extra_term" in json.loads(err)


def test_fig2_grid_and_files(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run_cli(capsys, "fig2", "--grid", "17", "--out", str(a))[0] == 0
    assert run_cli(capsys, "fig2", "--grid", "17", "--out", str(b))[0] == 0
    assert len(read_csv(a.read_text())) == 18
    assert a.read_bytes() == b.read_bytes()


def test_csv_float_precision(capsys):
    _, out, _ = run_cli(capsys, "fig2", "--grid", "5")
    x = float(read_csv(out)[2][0])
    assert x == np.pi / 8


def test_json_format(capsys):
    code, out, err = run_cli(capsys, "fig4", "--grid", "5", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and err == ""
    assert doc["columns"] == ["theta_bs", "mu"] and len(doc["rows"]) == 5
    mu = np.array([r[1] for r in doc["rows"]])
    assert np.all(mu[1:4] < 0) and np.all(mu[[0, 4]] >= -1e-3)
    assert np.abs(mu - mu[::-1]).max() <= 1e-3


def test_fig3_profile(capsys):
    code, out, _ = run_cli(capsys, "fig3", "--grid", "9")
    rows = np.array(read_csv(out)[1:], dtype=float)
    assert code == 0 and rows[0, 1] <= 1e-6
    assert rows[np.argmax(rows[:, 1]), 0] == pytest.approx(np.pi / 4)


def test_config_file(tmp_path, capsys):
    cfg = write_json(tmp_path / "cfg.json", {"experiment": "fig2", "grid": 9, "format": "json"})
    code, out, _ = run_cli(capsys, "fig2", "--config", cfg)
    assert code == 0 and len(json.loads(out)["rows"]) == 9
    code, out, _ = run_cli(capsys, "fig2", "--config", cfg, "--grid", "4")
    assert len(json.loads(out)["rows"]) == 4


@pytest.mark.parametrize("cfg", [{"experiment": "fig3"}, {"grid": "x"}, [1], {"unknown_key": 1}])
def test_config_rejected(tmp_path, capsys, cfg):
    path = write_json(tmp_path / "cfg.json", cfg)
    assert run_cli(capsys, "fig2", "--config", path)[0] == 2


@pytest.mark.parametrize("argv", [
    ("fig2", "--seed", "-1"),
    ("fig2", "--grid", "1"),
    ("fig2", "--format", "xml"),
    ("fig3", "--dim", "500"),
    ("fig3", "--dim", "20"),
    ("observe", "--samples", "0"),
    ("fig3", "--alpha", "notanumber"),
    ("bogus",),
])
def test_input_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        sys.exit(main(list(argv)))
    assert exc.value.code == 2


def test_truncation_exit_3(capsys):
    assert run_cli(capsys, "fig3", "--dim", "40", "--alpha", "5.5", "--grid", "3")[0] == 3
    assert run_cli(capsys, "fig4", "--dim", "40", "--alpha", "5.5j", "--grid", "3")[0] == 3


def test_observe_small(capsys):
    code, out, err = run_cli(capsys, "observe", "--samples", "6", "--seed", "3")
    rows = read_csv(out)
    summary = json.loads(err)
    assert code == 0 and len(rows) == 7
    assert summary["max_identity_residual"] <= 1e-3 and summary["max_residual_tau_tmsv"] <= 1e-12


def test_soundness_small(capsys):
    code, out, _ = run_cli(capsys, "soundness", "--samples", "20", "--seed", "7", "--format", "json")
    doc = json.loads(out)
    names = [r[0] for r in doc["rows"]]
    assert code == 0
    assert sorted(names) == sorted(registry.names()) and len(names) == len(set(names))


def test_soundness_seed_changes_samples(capsys):
    outs = [json.loads(run_cli(capsys, "soundness", "--samples", "10", "--seed", s, "--format", "json")[1])
            for s in ("1", "2")]
    assert [r[6] for r in outs[0]["rows"]] != [r[6] for r in outs[1]["rows"]]


def test_soundness_failure_exit_5(monkeypatch, capsys):
    bad = Criterion("always_flags", "gaussian", "entanglement",
                    lambda s, theta=None: CriterionVerdict.from_sides(0.0, 1.0, "always_flags"))
    monkeypatch.setattr(registry, "_ENTRIES", registry._ENTRIES + [bad])
    monkeypatch.setitem(registry.REGISTRY, bad.name, bad)
    code, _, err = run_cli(capsys, "soundness", "--samples", "3")
    assert code == 5 and "always_flags" in err


# process-level -------------------------------------------------------------

def _run_process(args, threads):
    env = dict(os.environ, **{THREADS_ENV: str(threads)})
    return subprocess.run([sys.executable, "-m", "nclab.cli", *args], capture_output=True, env=env)


def test_byte_identical_across_thread_counts():
    args = ["observe", "--samples", "8", "--seed", "11"]
    a, b = _run_process(args, 1), _run_process(args, 4)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout and a.stdout


def test_bad_thread_env():
    assert _run_process(["fig2", "--grid", "3"], "many").returncode == 2
