import json
import subprocess
import sys

import pytest

from schurkit.cli import run
from schurkit.sring import SRing, rank_two
from schurkit.groups import make_group
from schurkit.witness import construct, make_plan


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    r2 = tmp_path / "r2.json"
    r2.write_text(rank_two(make_group([8])).to_json())
    c = construct(make_plan((3, 5), (8,)))
    a = tmp_path / "c120.json"
    a.write_text(c.A.to_json())
    phi = tmp_path / "phi.json"
    phi.write_text(json.dumps(list(c.phi_map)))
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"group": [4], "classes": [[[0]], [[1]], [[2], [3]]]}))
    junk = tmp_path / "junk.json"
    junk.write_text("{not json")
    return {"r2": str(r2), "a": str(a), "phi": str(phi), "bad": str(bad), "junk": str(junk), "dir": tmp_path}


def test_classify_15x8(capsys):
    code, out, _ = call(capsys, "classify", "15x8")
    v = json.loads(out)
    assert code == 0 and v["status"] == "NotWeaklySeparable" and v["witness_route"] == "Prop31"


def test_witness_4x5(capsys):
    code, out, err = call(capsys, "witness", "4x5")
    assert code == 1 and out == "" and "NotApplicable" in err


def test_sring_check_rank_two(capsys, files):
    code, out, _ = call(capsys, "sring", "check", files["r2"])
    rep = json.loads(out)
    assert code == 0 and rep["rank"] == 2 and rep["eq1"] and rep["row_sums"]


def test_build_then_check_roundtrip(capsys, files):
    out_file = files["dir"] / "built.json"
    builds = [
        ["--cyclotomic", "9x9", "--power", "2"],
        ["--cyclotomic", "3x4", "--auto", "[3,0];[0,2]"],
        ["--group-ring", "2x2"],
        ["--from", files["r2"], "--wreath", "8x3"],
        ["--from", files["a"], "--fusion", files["phi"]],
    ]
    for extra in builds:
        code, _, err = call(capsys, "sring", "build", *extra, "-o", str(out_file))
        assert code == 0, err
        code, out, _ = call(capsys, "sring", "check", str(out_file))
        assert code == 0 and json.loads(out)["eq1"]
    assert SRing.from_json(out_file.read_text()).rank == 18


def test_iso_and_schurity(capsys, files):
    code, out, _ = call(capsys, "iso", "alg", files["r2"])
    assert code == 0 and json.loads(out)["count"] == 1
    code, out, _ = call(capsys, "iso", "induced", files["a"], files["phi"])
    assert code == 0 and json.loads(out)["status"] == "Found"
    code, out, _ = call(capsys, "schurity", files["a"])
    rep = json.loads(out)
    assert code == 0 and rep["schurian"] and rep["stabilizer_order"] == 648
    code, out, _ = call(capsys, "iso", "report", files["r2"])
    assert code == 0 and json.loads(out)["verdict"] == "separable within scope"


def test_group_info(capsys):
    code, out, _ = call(capsys, "group", "info", "{3,5,8}")
    info = json.loads(out)
    assert code == 0 and info["order"] == 120 and info["cyclic"]
    assert [s["order"] for s in info["sylow"]] == [8, 3, 5]


def test_witness_inconclusive_warns(capsys):
    code, out, err = call(capsys, "witness", "15x8", "--no-direct")
    assert code == 0 and "inconclusive" in err
    assert json.loads(out)["conclusion"] is None


@pytest.mark.parametrize(
    "argv, code",
    [
        (["classify", "8x3x5"], 0),
        (["witness", "9x9", "--no-direct"], 0),
        (["witness", "4x5"], 1),
        (["classify", "15*8"], 1),
        (["classify", "1x0"], 1),
        (["sring", "check", "{bad}"], 1),
        (["sring", "check", "{junk}"], 1),
        (["sring", "check", "/nonexistent/file.json"], 1),
        (["iso", "induced", "{r2}", "[0,0]"], 1),
        (["sring", "build", "--cyclotomic", "4", "--power", "2"], 1),
        (["iso", "induced", "{a}", "{phi}"], 0),
        (["--budget", "1", "iso", "induced", "{a}", "{phi}"], 2),
        (["--budget", "2", "schurity", "{a}"], 2),
        ([], 3),
        (["frobnicate"], 3),
        (["classify"], 3),
        (["classify", "8", "--bogus"], 3),
        (["sring", "build"], 3),
        (["sring", "build", "--rank-two", "4", "--group-ring", "4"], 3),
        (["--budget", "many", "classify", "8"], 3),
    ],
)
def test_exit_code_matrix(capsys, files, argv, code):
    argv = [a.format(**files) for a in argv]
    got, out, err = call(capsys, *argv)
    assert got == code, (argv, err)
    if code:
        assert err.strip()


def test_env_budget(monkeypatch, capsys, files):
    monkeypatch.setenv("SCHURKIT_BUDGET", "1")
    code, _, _ = call(capsys, "iso", "induced", files["a"], files["phi"])
    assert code == 2


def test_console_script_is_deterministic():
    outs = [
        subprocess.run([sys.executable, "-m", "schurkit", "witness", "9x9"], capture_output=True, check=True).stdout
        for _ in range(2)
    ]
    assert outs[0] == outs[1] and json.loads(outs[0])["schema"] == 1
