import json
import subprocess
import sys

import pytest

from fermionic_tqft.cli import main
from fermionic_tqft.library import solid_torus
from fermionic_tqft.triangulation import dump, to_dict


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_builtin(capsys):
    code, out, _ = run(capsys, "validate", "solid-torus")
    assert code == 0 and "complex property: ok" in out


def test_validate_json_file(capsys, tmp_path):
    path = tmp_path / "st.json"
    dump(solid_torus(), path)
    code, out, _ = run(capsys, "validate", str(path), "--json")
    data = json.loads(out)
    assert code == 0 and data["#D"] == 4 and data["complex"] is True


def test_validate_bad_input(capsys, tmp_path):
    code, _, err = run(capsys, "validate", "no-such-thing")
    assert code == 2 and "neither" in err
    doc = to_dict(solid_torus())
    doc["vertices"][1]["zeta"] = doc["vertices"][0]["zeta"]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "validate", str(path))
    assert code == 2 and "coincident" in err


def test_invariant_single_and_all(capsys):
    code, out, _ = run(capsys, "invariant", "tet", "--d", "0", "--json")
    assert code == 0 and json.loads(out) == {"D": [0], "value": "2"}
    code, out, _ = run(capsys, "invariant", "tet", "--all")
    assert code == 0 and len(out.strip().splitlines()) == 6
    code, _, err = run(capsys, "invariant", "tet", "--d", "0", "1")
    assert code == 2 and "expected 1" in err


def test_invariant_closed_sphere_is_one(capsys):
    code, out, _ = run(capsys, "invariant", "s3-big")
    assert code == 0 and out.strip() == "I = 1"
    code, out, _ = run(capsys, "invariant", "s3-big", "--raw")
    assert out.strip() == "I = -1"


def test_meridian_check(capsys):
    code, out, _ = run(capsys, "invariant", "solid-torus", "--check-meridian", "5", "6", "--json")
    data = json.loads(out)
    assert code == 0 and data["meridian"] == {"edges": [5, 6], "vanishes": True, "bounds": True}
    code, out, _ = run(capsys, "invariant", "solid-torus", "--check-meridian", "1", "2", "--json")
    assert json.loads(out)["meridian"]["vanishes"] is False
    code, _, _ = run(capsys, "invariant", "solid-torus", "--check-meridian", "1", "5")
    assert code == 2


def test_genfun_verify(capsys):
    code, out, _ = run(capsys, "genfun", "solid-torus", "--verify")
    assert code == 0 and "coefficients vs torsion: ok" in out and "integral vs subsets: ok" in out


def test_pentagon(capsys):
    code, out, _ = run(capsys, "pentagon", "--random", "5", "--seed", "3")
    assert code == 0 and "5/5 pass" in out
    code, _, err = run(capsys, "pentagon", "--zeta", "1", "1", "2", "3", "4")
    assert code == 2 and "distinct" in err


def test_pentagon_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("TQFT_SEED", "nope")
    code, _, err = run(capsys, "pentagon", "--random", "1")
    assert code == 2 and "TQFT_SEED" in err


def test_fuzz(capsys):
    code, out, _ = run(capsys, "fuzz", "s3", "--moves", "4", "--seed", "2", "--json")
    data = json.loads(out)
    assert code == 0 and data["ok"] and len(data["signs"]) == len(data["moves"])


def test_glue_and_consum(capsys):
    code, out, _ = run(capsys, "glue", "tet", "tet", "--transport-zeta", "--verify")
    assert code == 0 and "agree up to sign" in out
    code, out, _ = run(capsys, "glue", "solid-torus", "solid-torus", "--match", "1:1,2:3,3:2,4:4",
                       "--transport-zeta", "--verify")
    assert code == 0 and "agree up to sign" in out
    code, _, err = run(capsys, "glue", "tet", "tet", "--match", "1-2")
    assert code == 2
    code, out, _ = run(capsys, "consum", "tet", "tet", "--verify")
    assert code == 0 and "agree up to sign" in out


def test_statesum(capsys):
    code, out, _ = run(capsys, "statesum", "solid-torus")
    assert code == 0 and "expected 2 I: ok" in out
    code, out, _ = run(capsys, "statesum", "s3")
    assert code == 0 and "expected 0: ok" in out


def test_example_listing(capsys):
    code, out, _ = run(capsys, "example")
    assert code == 0 and "solid-torus" in out
    code, out, _ = run(capsys, "example", "s3")
    assert json.loads(out)["name"] == "s3"


def test_console_script_entry_point():
    res = subprocess.run([sys.executable, "-m", "fermionic_tqft", "invariant", "tet", "--d", "0"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "I_[0] = 2"


def test_missing_subcommand_exits():
    with pytest.raises(SystemExit):
        main([])
