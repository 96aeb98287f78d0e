"""CLI behaviour: exit codes, formats, corpus runner, config handling."""

import io
import json
from pathlib import Path

import pytest

from lacuna.cli_reports import (
    EXIT_ERROR,
    EXIT_OK,
    EXIT_UNDECIDED,
    _parse_pattern_arg,
    main,
)

CORPUS_DIR = Path(__file__).resolve().parents[1] / "corpus"


def test_classify_text(capsys):
    code = main(["classify", "(z - 1/2)(8 - z^3)", "--pattern", "4:2"])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert "extreme: yes (via rank)" in out
    assert "exposed: yes (via simple_circle_zeros)" in out
    assert "rank 2, kernel dimension 1" in out


def test_classify_text_factors_out_scalar(capsys):
    main(["classify", "(z - 1/2)(8 - z^3)", "--pattern", "4:2"])
    out = capsys.readouterr().out
    # the exact constraint matrix 2*[[4,5,0],[0,0,3]] prints factored
    assert "2 x" in out
    assert "[4  5  0]" in out
    assert "[0  0  3]" in out


def test_classify_json(capsys):
    code = main(
        ["classify", "(z - 1/2)(2 - z)(1 + z^4)", "--pattern", "6:3", "--format", "json"]
    )
    assert code == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["schema"] == "lacuna/1"
    assert doc["verdicts"] == {"extreme": False, "exposed": False}
    assert doc["fast_paths"]["exposed"] == "not_extreme"
    assert doc["matrix"]["rows"] == [["0", "0", "0"], ["0", "0", "0"]]
    assert doc["matrix"]["rank"] == 0 and doc["matrix"]["kernel_dim"] == 3
    assert abs(doc["norm"]["value"] - 10 / 3.141592653589793) < 1e-9
    kinds = sorted(w["kind"] for w in doc["witnesses"])
    assert kinds == ["non_exposed", "non_extreme"]


def test_classify_json_byte_stable(capsys):
    argv = ["classify", "(z - 1/2)(2 - z)(1 + z^4)", "--pattern", "6:3",
            "--format", "json"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    second = capsys.readouterr().out
    assert first == second


def test_classify_out_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code = main(
        ["classify", "1 + z/2", "--pattern", "1", "--format", "json",
         "--out", str(target)]
    )
    assert code == EXIT_OK
    assert capsys.readouterr().out == ""
    doc = json.loads(target.read_text())
    assert doc["verdicts"] == {"extreme": True, "exposed": True}


def test_classify_at_file_and_stdin(tmp_path, capsys, monkeypatch):
    src = tmp_path / "poly.txt"
    src.write_text("1 + z/2\n")
    assert main(["classify", f"@{src}", "--pattern", "1"]) == EXIT_OK
    capsys.readouterr()
    monkeypatch.setattr("sys.stdin", io.StringIO("1 + z/2"))
    assert main(["classify", "-", "--pattern", "1"]) == EXIT_OK


def test_classify_infer_pattern(capsys):
    code = main(
        ["classify", "(z - 1/2)(2 - z)(1 + z^4)", "--infer-pattern", "--format", "json"]
    )
    assert code == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["pattern"] == {"N": 6, "forbidden": [3]}


def test_classify_no_witnesses(capsys):
    code = main(
        ["classify", "(z - 1/2)(2 - z)(1 + z^4)", "--pattern", "6:3",
         "--no-witnesses", "--format", "json"]
    )
    assert code == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["witnesses"] == []


def test_classify_missing_pattern_errors(capsys):
    code = main(["classify", "1 + z/2"])
    err = capsys.readouterr().err
    assert code == EXIT_ERROR
    assert "error:" in err


def test_classify_spectrum_violation_errors(capsys):
    code = main(["classify", "1 + z^3", "--pattern", "6:3"])
    err = capsys.readouterr().err
    assert code == EXIT_ERROR
    assert "forbidden exponent" in err


def test_classify_unreadable_file_errors(capsys):
    code = main(["classify", "@/nonexistent/poly.txt", "--pattern", "1"])
    assert code == EXIT_ERROR
    assert "error:" in capsys.readouterr().err


def test_classify_undecided_exit(capsys, monkeypatch):
    import lacuna.classifier as mod
    from lacuna import RankIndeterminate

    def raising(*args, **kwargs):
        raise RankIndeterminate("no safe gap", singular_values=(1.0, 1e-9))

    monkeypatch.setattr(mod, "rank_and_kernel", raising)
    code = main(["classify", "(z - 1/2)(8 - z^3)", "--pattern", "4:2"])
    out = capsys.readouterr().out
    assert code == EXIT_UNDECIDED
    assert "UNDECIDED" in out
    assert "no safe gap" in out


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "lacuna.cfg"
    cfg.write_text(
        "# defaults for this project\n"
        "mode = float\n"
        "witnesses = off\n"
        "pattern = 6:3\n"
        "format = json\n"
    )
    code = main(["classify", "(z - 1/2)(2 - z)(1 + z^4)", "--config", str(cfg)])
    assert code == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["mode"] == "float"
    assert doc["witnesses"] == []
    assert doc["pattern"] == {"N": 6, "forbidden": [3]}


def test_cli_flags_override_config(tmp_path, capsys):
    cfg = tmp_path / "lacuna.cfg"
    cfg.write_text("mode = float\nformat = json\n")
    code = main(
        ["classify", "1 + z/2", "--pattern", "1", "--config", str(cfg),
         "--mode", "exact", "--format", "text"]
    )
    out = capsys.readouterr().out
    assert code == EXIT_OK
    assert "mode: exact" in out


def test_bad_config_line_errors(tmp_path, capsys):
    cfg = tmp_path / "lacuna.cfg"
    cfg.write_text("this is not a key value pair\n")
    code = main(["classify", "1 + z/2", "--pattern", "1", "--config", str(cfg)])
    assert code == EXIT_ERROR


def test_pattern_arg_parsing():
    pat = _parse_pattern_arg("6:3")
    assert (pat.N, pat.forbidden) == (6, (3,))
    pat = _parse_pattern_arg("4")
    assert (pat.N, pat.forbidden) == (4, ())
    pat = _parse_pattern_arg("9:2,5,7")
    assert pat.forbidden == (2, 5, 7)
    with pytest.raises(ValueError):
        _parse_pattern_arg("x")


def test_norm_subcommand(capsys):
    code = main(["norm", "1 + z"])
    assert code == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert abs(doc["norm"] - 4 / 3.141592653589793) < 1e-10
    assert doc["error_bound"] < 1e-9


def test_plusdim_subcommand(tmp_path, capsys):
    basis = tmp_path / "v2.json"
    basis.write_text(json.dumps({
        "d": 2,
        "basis": [["1", "0", "-1", "0", "0"], ["0", "1", "0", "0", "0"]],
    }))
    code = main(["plusdim", f"@{basis}"])
    assert code == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["dim_plus"] == 1
    assert len(doc["vectors"]) == 1


def test_plusdim_zero_dimension(tmp_path, capsys):
    basis = tmp_path / "v1.json"
    basis.write_text(json.dumps({"d": 1, "basis": [["0", "1", "0"]]}))
    code = main(["plusdim", f"@{basis}"])
    assert code == EXIT_OK
    assert json.loads(capsys.readouterr().out)["dim_plus"] == 0


def test_plusdim_stalled_exit(tmp_path, capsys, monkeypatch):
    import lacuna.cli_reports as mod
    from lacuna import SolverStalled

    def raising(*args, **kwargs):
        raise SolverStalled("projections oscillate")

    monkeypatch.setattr(mod, "plus_dimension", raising)
    basis = tmp_path / "v1.json"
    basis.write_text(json.dumps({"d": 1, "basis": [["0", "1", "0"]]}))
    code = main(["plusdim", f"@{basis}"])
    assert code == EXIT_UNDECIDED
    assert "undecided" in capsys.readouterr().err


def test_plusdim_bad_row_length_errors(tmp_path, capsys):
    basis = tmp_path / "bad.json"
    basis.write_text(json.dumps({"d": 2, "basis": [["1", "0"]]}))
    assert main(["plusdim", f"@{basis}"]) == EXIT_ERROR


def test_corpus_shipped(capsys):
    code = main(["corpus", str(CORPUS_DIR)])
    out = capsys.readouterr().out
    assert code == EXIT_OK
    lines = [ln for ln in out.splitlines() if ln]
    assert all(ln.startswith("PASS") for ln in lines[:-1])
    total = len(list(CORPUS_DIR.glob("*.json")))
    assert lines[-1] == f"{total}/{total} passed"


def test_corpus_parallel_matches(capsys):
    main(["corpus", str(CORPUS_DIR)])
    serial = capsys.readouterr().out
    code = main(["corpus", str(CORPUS_DIR), "--jobs", "4"])
    parallel = capsys.readouterr().out
    assert code == EXIT_OK
    assert parallel == serial  # job order is preserved by the pool map


def test_corpus_env_threads(capsys, monkeypatch):
    monkeypatch.setenv("LACUNA_THREADS", "2")
    assert main(["corpus", str(CORPUS_DIR)]) == EXIT_OK
    assert "passed" in capsys.readouterr().out


def test_corpus_detects_wrong_expectation(tmp_path, capsys):
    job = {
        "name": "deliberately-wrong",
        "input": "1 + z/2",
        "pattern": {"N": 1, "forbidden": []},
        "expect": {"extreme": False},
    }
    (tmp_path / "wrong.json").write_text(json.dumps(job))
    ok_job = {
        "input": "1 + z/2",
        "pattern": {"N": 1, "forbidden": []},
        "expect": {"extreme": True, "exposed": True},
    }
    (tmp_path / "right.json").write_text(json.dumps(ok_job))
    code = main(["corpus", str(tmp_path)])
    out = capsys.readouterr().out
    assert code == EXIT_ERROR
    assert "FAIL deliberately-wrong: extreme: expected False, got True" in out
    assert "PASS right" in out
    assert "1/2 passed" in out


def test_corpus_empty_dir_warns(tmp_path, capsys):
    code = main(["corpus", str(tmp_path)])
    captured = capsys.readouterr()
    assert code == EXIT_OK
    assert "warning" in captured.err


def test_corpus_malformed_json_errors(tmp_path, capsys):
    (tmp_path / "broken.json").write_text("{not json")
    code = main(["corpus", str(tmp_path)])
    assert code == EXIT_ERROR
    assert "error:" in capsys.readouterr().err


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "lacuna" in capsys.readouterr().out
