import json
import subprocess
import sys

import pytest

from augcat.cli import execute, render, run


def _run(*argv):
    code, rep, as_json = execute([str(a) for a in argv])
    return code, rep, render(rep, as_json)


def test_augs_lists_the_single_unknot_augmentation(data_dir):
    code, rep, _ = _run("augs", data_dir / "systems" / "unknot.json")
    assert code == 0
    assert rep.tables["count"] == 1 == rep.tables["brute_force_count"]


def test_augs_over_an_extension_field(data_dir):
    code, rep, _ = _run("augs", data_dir / "systems" / "trefoil.json", "--field", "2:111")
    assert code == 0
    assert rep.tables["count"] == 17
    code, rep, _ = _run("augs", data_dir / "systems" / "trefoil.json", "--field", "2:101")
    assert code == 2


def test_compare_trefoil_json_passes(data_dir):
    code, rep, text = _run("compare", data_dir / "systems" / "trefoil.json", "--json")
    assert code == 0
    doc = json.loads(text)
    assert doc["status"] == "pass"
    assert list(doc) == ["command", "status", "findings", "tables"]


def test_loc_hom_on_truncated_system_reports_insufficient_copies(data_dir):
    code, rep, text = _run("loc-hom", data_dir / "systems" / "truncated.json", "--source", 0, "--target", 0)
    assert code == 1
    assert "insufficient copies" in text


def test_loc_hom_and_w_check(data_dir):
    code, rep, _ = _run("loc-hom", data_dir / "systems" / "trefoil.json", "--source", 1, "--target", 1)
    assert code == 0
    assert rep.tables["witness"] == 2
    code, rep, _ = _run("w-check", data_dir / "systems" / "trefoil-3.json")
    assert code == 0
    assert set(rep.tables["w"]["e0"]) == {"1-2", "2-3"}


def test_twist_and_h0(data_dir):
    code, rep, _ = _run("twist", data_dir / "systems" / "trefoil.json", "--aug", 2, "--subset", "1,2")
    assert code == 0 and rep.tables["subset"] == [1, 2]
    code, rep, _ = _run("twist", data_dir / "systems" / "trefoil.json", "--aug", 9)
    assert code == 2
    code, rep, _ = _run("h0", data_dir / "systems" / "unknot.json")
    assert code == 0 and rep.tables["h0_dims"] == {"e0,e0": 1}


def test_ainf_on_a_small_system(data_dir):
    code, rep, _ = _run("ainf", data_dir / "systems" / "trefoil-2.json", "--kmax", 3, "--seed", 7)
    assert code == 0
    assert rep.tables["relations"]["instances"] == 35
    assert rep.tables["oracle"]["random_tuples"] > 0


def test_functor_check(data_dir):
    d = data_dir
    code, rep, _ = _run("functor-check", d / "systems" / "unknot.json", d / "systems" / "unknot-stabilised.json",
                        "--family", d / "families" / "unknot-stabilisation.json")
    assert code == 0
    code, rep, _ = _run("functor-check", d / "systems" / "trefoil.json", d / "systems" / "trefoil.json",
                        "--family", d / "broken" / "family_square.json")
    assert code == 1


@pytest.mark.parametrize("stem,code", [
    ("d_squared", 1), ("degree", 1), ("link_grading", 1), ("restriction", 1), ("bijection", 1),
    ("syntax_error", 2), ("duplicate_key", 2), ("duplicate_name", 2), ("reducible_modulus", 2),
    ("undeclared_chord", 2), ("unknown_key", 2), ("version_mismatch", 2), ("partial_minima", 0),
])
def test_check_exit_codes_on_broken_fixtures(data_dir, stem, code):
    got, rep, _ = _run("check", data_dir / "broken" / f"{stem}.json")
    assert got == code, rep.to_dict()


def test_compare_with_a_broken_unit_fails(data_dir):
    code, rep, _ = _run("compare", data_dir / "broken" / "partial_minima.json")
    assert code == 1


def test_usage_errors(data_dir, tmp_path):
    assert _run("bogus")[0] == 2
    assert _run()[0] == 2
    assert _run("loc-hom", data_dir / "systems" / "unknot.json")[0] == 2
    assert _run("check", tmp_path / "missing.json")[0] == 2
    assert _run("compare", data_dir / "systems" / "unknot-perturbed.json")[0] == 2


def test_global_flags_before_or_after_the_command(data_dir):
    f = data_dir / "systems" / "unknot-2.json"
    a = _run("--json", "check", f)[2]
    b = _run("check", f, "--json")[2]
    assert a == b
    json.loads(a)


def test_json_output_is_byte_stable(data_dir):
    argv = ["ainf", data_dir / "systems" / "trefoil-2.json", "--seed", 3, "--json"]
    assert _run(*argv)[2] == _run(*argv)[2]


def test_run_writes_to_stdout(data_dir, capsys):
    assert run(["check", str(data_dir / "systems" / "unknot-1.json")]) == 0
    assert capsys.readouterr().out.startswith("check: PASS")


def test_module_entry_point(data_dir):
    proc = subprocess.run([sys.executable, "-m", "augcat", "augs", str(data_dir / "systems" / "unknot.json"), "--json"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["tables"]["count"] == 1
