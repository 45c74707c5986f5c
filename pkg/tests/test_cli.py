# tests/test_cli.py

import json
import math

import pytest

from src.optics.analysis import SWEEP_COLUMNS
from src.pipeline.cli import RunConfig, main, parse_run_config, run
from src.optics.fock import DomainError


def _json(argv):
    code, text = run(argv)
    assert code == 0, text
    return json.loads(text)


def test_solve_reports_magic_reflectivities():
    payload = _json(["solve"])
    assert payload == {
        "r_v": pytest.approx(0.757359312881, abs=1e-11),
        "r_h": pytest.approx(0.226540919661, abs=1e-11),
    }


def test_cs_magic_success_probability():
    payload = _json(["cs", "--a", "0.5", "--b", "0.5", "--c", "0.5", "--d", "0.5", "--magic"])
    assert payload["success_probability"] == pytest.approx(0.0513207, abs=1e-7)
    assert payload["output"]["d"]["re"] == pytest.approx(-0.5 * (3 - math.sqrt(2)) / 7, abs=1e-11)


def test_ns_critical_case_reports_zero_amplitude():
    payload = _json(["ns", "--n", "1", "--r-h", "0.5"])
    assert payload["amplitude"] == {"re": 0.0, "im": 0.0}
    assert payload["sign_regime"] == "critical"
    assert payload["state"]["terms"] == []


def test_ns_uses_config_default_reflectivities():
    payload = _json(["ns", "--m", "1", "--n", "0"])
    assert payload["r_v"] == 0.5 and payload["r_h"] == 0.5
    assert payload["amplitude"]["re"] == pytest.approx(math.sqrt(0.5) * math.sqrt(0.5))


def test_output_is_deterministic():
    argv = ["cs", "--a", "0.1", "--b", "0.7", "--c", "0.3", "--d", "0.2", "--r-v", "0.6", "--r-h", "0.3"]
    assert run(argv) == run(argv)


def test_floats_are_rounded_to_twelve_significant_digits():
    _, text = run(["solve"])
    assert '"r_v": 0.757359312881' in text


def test_angles_round_trip_and_magic():
    magic = _json(["angles", "--magic"])
    assert magic["alpha_deg"] == pytest.approx(29.5, abs=0.05)
    assert magic["beta_deg"] == pytest.approx(61.6, abs=0.05)

    back = _json(["angles", "--alpha-deg", str(magic["alpha_deg"]), "--beta-deg", str(magic["beta_deg"])])
    assert back["r_v"] == pytest.approx(magic["r_v"], abs=1e-10)


def test_composite_bs_aligned_and_dephased():
    aligned = _json(["composite-bs", "--magic"])
    dephased = _json(["composite-bs", "--magic", "--phi-rad", str(math.pi)])
    assert aligned["deviation_from_pol_beam_splitter"] < 1e-9
    assert dephased["deviation_from_pol_beam_splitter"] > 0.1
    assert aligned["modes"] == ["1:V", "1:H", "2:V", "2:H"]


def test_sweep_csv_and_json(tmp_path):
    code, text = run(["sweep", "--grid-steps", "3", "--format", "csv"])
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == ",".join(SWEEP_COLUMNS)
    assert len(lines) == 1 + 9

    payload = _json(["sweep", "--grid-steps", "3", "--magic"])
    assert len(payload["rows"]) == 10
    assert payload["rows"][-1]["fidelity"] == pytest.approx(1.0, abs=1e-9)

    out = tmp_path / "sweep.csv"
    code, text = run(["sweep", "--grid-steps", "2", "--format", "csv", "--out", str(out)])
    assert code == 0 and text == ""
    assert out.read_text(encoding="utf-8").startswith("r_v,r_h,")


def test_validation_errors_exit_2(capsys):
    assert run(["ns", "--r-h", "1.5"])[0] == 2
    assert run(["cs", "--magic", "--r-v", "0.5"])[0] == 2
    assert run(["cs", "--format", "csv"])[0] == 2
    assert run(["sweep", "--grid-steps", "1"])[0] == 2
    assert run(["ns", "--n", "-1"])[0] == 2
    assert run(["cs", "--a", "nan", "--magic"])[0] == 2
    assert run(["cs", "--d", "inf"])[0] == 2
    assert "error:" in capsys.readouterr().err


def test_unknown_command_prints_usage_and_exits_2(capsys):
    code, text = run(["teleport"])
    assert code == 2 and text == ""
    assert "usage:" in capsys.readouterr().err


def test_missing_config_exits_2():
    assert run(["solve", "--config", "does_not_exist.yaml"])[0] == 2


def test_run_config_validate_rejects_unknown_command():
    with pytest.raises(DomainError):
        RunConfig(command="bogus").validate()


def test_parse_run_config_reads_amplitudes():
    cfg = parse_run_config(["cs", "--a", "1", "--d", "0"])
    assert cfg.amplitudes == (1.0, 0.5, 0.5, 0.0)


def test_main_writes_stdout_and_exits(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["solve"])
    assert exc.value.code == 0
    assert json.loads(capsys.readouterr().out)["r_h"] == pytest.approx(0.2265409, abs=1e-6)


def test_verify_quick_config_passes(tmp_path):
    out = tmp_path / "summary.json"
    code, text = run(["verify", "--config", "verify_quick.yaml", "--out", str(out)])
    assert code == 0
    assert text == ""
    summary = json.loads(out.read_text(encoding="utf-8"))
    assert summary["overall_passed"] is True
    assert out.with_suffix(".md").exists()


def test_verify_stdout_is_deterministic():
    first = run(["verify", "--config", "verify_quick.yaml"])
    second = run(["verify", "--config", "verify_quick.yaml"])
    assert first[0] == 0
    assert first == second
    assert "elapsed" not in first[1]


def test_sweep_csv_has_no_negative_zeros():
    _, text = run(["sweep", "--grid-steps", "3", "--format", "csv"])
    for line in text.splitlines()[1:]:
        assert "-0," not in line + ","
