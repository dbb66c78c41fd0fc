import csv
import io
import json
import subprocess
import sys

import pytest

from wittlang import __version__, cli
from wittlang.covers import FiltrationRow


def run_json(capsys, *argv):
    code = cli.main([*argv, "--format", "json"])
    return code, json.loads(capsys.readouterr().out)


def test_enumerate_l13(capsys):
    code, report = run_json(capsys, "enumerate", "--p", "2", "--n", "1", "--d", "3")
    assert code == 0
    assert report["size"] == 8 and len(report["elements"]) == 8
    assert report["passed"] and report["group_laws"]["passed"]
    assert report["seed"] == 0 and report["version"] == __version__
    assert report["config"]["n"] == 1 and report["config"]["d"] == 3


def test_enumerate_l31_no_list(capsys):
    code, report = run_json(capsys, "enumerate", "--p", "2", "--n", "3", "--d", "1", "--no-list")
    assert code == 0 and report["size"] == 512 and "elements" not in report


def test_enumerate_det_hom(capsys):
    code, report = run_json(capsys, "enumerate", "--p", "2", "--n", "2", "--d", "2", "--check-det-hom", "--no-list")
    assert code == 0
    assert report["det_hom"] == {"pairs": 65536, "failures": 0}


def test_enumerate_punctured(capsys):
    code, report = run_json(capsys, "enumerate", "--p", "2", "--d", "2", "--punctured", "--nu-max", "2")
    assert code == 0
    assert report["punctured"]["size"] == 20 and report["punctured"]["identities"] == 1


def test_enumerate_extension_field_with_modulus(capsys):
    code, report = run_json(capsys, "enumerate", "--p", "3", "--r", "2", "--modulus", "2,2,1", "--no-list")
    assert code == 0 and report["size"] == 9
    assert report["field"]["modulus"] == [2, 2, 1]


def test_bad_modulus_exits_2(capsys):
    assert cli.main(["enumerate", "--p", "2", "--r", "2", "--modulus", "1,0,1"]) == 2
    assert "error" in capsys.readouterr().err


def test_cap_exceeded_exits_2(capsys, monkeypatch):
    monkeypatch.setenv("WITTLANG_CAP", "100")
    assert cli.main(["enumerate", "--p", "2", "--n", "2", "--d", "2"]) == 2
    assert "error" in capsys.readouterr().err


def test_lang_kernel(capsys):
    code, report = run_json(capsys, "lang", "--p", "2", "--r", "2", "--base-q", "2", "--n", "1", "--d", "1")
    assert code == 0
    assert report["kernel_size"] == 2 and report["fiber_count"] == 2
    assert report["kernel_is_rational_subgroup"]


def test_lang_base_equals_field(capsys):
    code, report = run_json(capsys, "lang", "--p", "2", "--r", "2", "--base-q", "4")
    assert code == 0 and report["kernel_size"] == 4 and report["fiber_count"] == 1


def test_lang_alpha(capsys):
    code, report = run_json(
        capsys, "lang", "--p", "2", "--work-degree", "4", "--d", "2", "--alpha", "--gamma", "lang-self"
    )
    assert code == 0
    assert report["alpha"]["surjective"] and report["alpha"]["hom_failures"] == 0


def test_lang_unknown_gamma(capsys):
    assert cli.main(["lang", "--p", "2", "--r", "2", "--alpha", "--gamma", "other"]) == 2


def test_s3_default(capsys):
    code, report = run_json(capsys, "s3", "--no-list")
    assert code == 0
    assert report["image_size"] == 6 and report["quasi_p"] is True
    assert report["subgroup_orders"] == [1, 2, 3, 6]
    assert report["order"] == ["12", "23", "13"]


def test_s3_permuted_order(capsys):
    code, report = run_json(capsys, "s3", "--order", "13,23,12")
    assert code == 0 and report["image_size"] == 6 and report["order"] == ["13", "23", "12"]


def test_s3_sl2(capsys):
    code, report = run_json(capsys, "s3", "--target", "sl2")
    assert code == 0 and report["image_size"] == 6


def test_covers_json(capsys):
    code, report = run_json(capsys, "covers", "--p", "2", "--dmax", "4")
    assert code == 0
    assert [(r["as_count"], r["witt_count"]) for r in report["rows"]] == [(1, 1), (1, 1), (3, 3), (3, 3)]


def test_covers_csv(capsys):
    assert cli.main(["covers", "--p", "3", "--dmax", "2", "--format", "csv"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert [(r["D"], r["as_count"], r["witt_count"], r["equal"]) for r in rows] == [
        ("1", "1", "1", "True"),
        ("2", "4", "4", "True"),
    ]


def test_covers_tame(capsys):
    code, report = run_json(capsys, "covers", "--tame", "--q", "4")
    assert code == 0 and report["tame_orders"] == [1, 3]


def test_covers_mismatch_exits_1(capsys, monkeypatch):
    monkeypatch.setattr(cli, "match_filtrations", lambda p, d: [FiltrationRow(1, 1, 2)])
    assert cli.main(["covers", "--p", "2", "--dmax", "1"]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_hopf_exhaustive(capsys):
    code, report = run_json(capsys, "hopf", "--p", "2", "--n", "2", "--d", "2")
    assert code == 0
    assert report["pairing"]["pairs"] == 65536 and report["pairing"]["exhaustive"]
    assert report["pairing"]["generators"] == 8


def test_hopf_primitive(capsys):
    code, report = run_json(capsys, "hopf", "--p", "2", "--n", "1", "--d", "1")
    assert code == 0 and report["primitive_generators"] == [[1, 1, 1]]


def test_hopf_sampled(capsys):
    code, report = run_json(capsys, "hopf", "--p", "3", "--n", "1", "--d", "3", "--sample", "10000", "--seed", "4")
    assert code == 0
    assert report["pairing"]["pairs"] == 10000 and not report["pairing"]["exhaustive"]
    assert report["seed"] == 4


def test_text_output_and_out_file(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert cli.main(["covers", "--p", "2", "--dmax", "3", "--format", "json", "--out", str(out)]) == 0
    assert capsys.readouterr().out.startswith("wittlang covers: PASS")
    assert json.loads(out.read_text())["passed"] is True


def test_deterministic(capsys):
    argv = ["enumerate", "--p", "3", "--n", "2", "--d", "1", "--sample", "500", "--seed", "9", "--format", "json"]
    cli.main(argv)
    first = json.loads(capsys.readouterr().out)
    cli.main(argv)
    second = json.loads(capsys.readouterr().out)
    first.pop("seconds"), second.pop("seconds")
    assert first == second


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "wittlang.cli", "covers", "--tame", "--q", "9"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert "[1, 2, 4, 8]" in proc.stdout


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["--version"])
    assert exc.value.code == 0
    assert __version__ in capsys.readouterr().out
