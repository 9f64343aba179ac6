import os
import subprocess
import sys

import pytest

from ordsys.cli import run

from conftest import DATA, ROOT


def data(name):
    return os.path.join(DATA, name)


def test_vc_family():
    code, out = run(["vc", "--family", data("initseg6.fam")])
    assert code == 0
    assert out.splitlines()[:3] == ["VC: 1", "MEMBERS: 7", "WITNESS: {0}"]
    assert "TRACE {} <- {}" in out and "TRACE {0} <- {0}" in out


def test_vc_tsv():
    code, out = run(["vc", "--family", data("pairs8.fam"), "--format", "tsv"])
    assert code == 0 and out.splitlines()[0] == "VC\t2"


def test_vc_of_system():
    code, out = run(["vc", "--system", data("omega1_fragment.sys")])
    assert code == 0 and out.startswith("VC: 2")


def test_closure_example():
    code, out = run(["closure", "--system", "trivial", "--n", "2", "--lambda", "w^2", "--set", "{3,5}",
                     "--budget", "1000"])
    assert (code, out) == (0, "CLOSED: {0,1,2,3,5}\n")


def test_closure_infinite():
    code, out = run(["closure", "--system", "trivial", "--n", "2", "--lambda", "w*2", "--set", "{w,w+1}"])
    assert code == 0 and out.splitlines()[0] == "INFINITE: s={w+1} b=w"


def test_closure_budget():
    code, out = run(["closure", "--system", "trivial", "--n", "2", "--set", "{300,400}", "--budget", "10"])
    assert code == 0 and out.startswith("BUDGET_EXCEEDED:")


def test_validate():
    assert run(["validate", "--system", data("trivial2.sys")]) == (0, "VALID: yes\nCHECKED: exhaustive\n")
    code, out = run(["validate", "--system", "BlockShuffle:7", "--n", "3", "--set", "{2,w+1,w*3}"])
    assert code == 0 and "VALID: yes" in out


def test_segments_and_corrupt_fixture():
    code, out = run(["segments", "--system", data("corrupt2.sys")])
    assert code == 0
    assert "SEGMENT s={3} b=0 set={0,2,3} closed=no" in out
    assert out.endswith("SEGMENTS: 10\nCLOSED_SEGMENTS: 8\n")
    code, out = run(["verify", "--suite", "segments", "--system", data("corrupt2.sys")])
    assert code == 1
    assert "WITNESS segments/segments-closed" in out and "RESULT: FAIL" in out


def test_omega1_views():
    assert run(["omega1", "--alpha", "w+2", "--length", "5"]) == (0, "ORDER: alpha=w+2 prefix=(w+1,w,0,1,2)\n")
    code, out = run(["omega1", "--delta", "w", "--upto", "2"])
    assert code == 0 and out.splitlines() == ["chain delta=w n=1 S={0} f=(0)", "chain delta=w n=2 S={0,1} f=(1)"]


def test_generic_requests():
    code, out = run(["generic", "--set", "{5,w,w*2}"])
    assert code == 0
    assert out.splitlines()[:2] == ["CLOSED: {0,1,2,3,4,5,w,w*2}", "CERTIFIED: yes"]
    code, out = run(["generic", "--cond", data("const_example.cond"), "--set", "{w*3}"])
    assert code == 0 and "CERTIFIED: yes" in out


def test_verify_single_suite_passes():
    code, out = run(["verify", "--suite", "vc", "--seed", "7", "--samples", "40"])
    assert code == 0 and out.rstrip().endswith("RESULT: PASS")
    assert all(line.startswith(("PASS", "SEED", "RESULT", "NOTE")) for line in out.splitlines())


def test_verify_is_deterministic():
    args = ["verify", "--suite", "core", "--seed", "3", "--samples", "40"]
    assert run(args) == run(args)


def test_convert(tmp_path):
    dst = tmp_path / "out.fam"
    src = tmp_path / "in.fam"
    src.write_text("family v1 ground={1,0}\n{1}\n{1}\n")
    code, out = run(["convert", "--in", str(src), "--out", str(dst), "--kind", "family"])
    assert code == 0 and dst.read_text() == "family v1 ground={0,1}\n{1}\n"


def test_convert_parse_error_reports_position(tmp_path):
    src = tmp_path / "bad.sys"
    src.write_text("ordsys v1 n=2 universe=finite:{0,1} flavor=explicit\norder s={} : 0,1\norder s={0} :\norder s={1} : 0,1\n")
    code, out = run(["convert", "--in", str(src), "--out", str(tmp_path / "x"), "--kind", "system"])
    assert code == 2 and out.startswith("error: line 4")
    assert len(out.splitlines()) == 1


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["vc", "--family", "missing.fam"],
    ["vc", "--wat"],
    ["closure", "--system", "trivial", "--set", "{x}"],
    ["closure", "--system", "trivial"],
])
def test_usage_errors_exit_two(argv):
    code, out = run(argv)
    assert code == 2 and out.startswith("error:") and len(out.splitlines()) == 1


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ordsys", "vc", "--family", data("powerset4.fam")],
                          capture_output=True, text=True, cwd=ROOT)
    assert proc.returncode == 0 and proc.stdout.startswith("VC: 4")
    proc = subprocess.run([sys.executable, "-m", "ordsys", "nope"], capture_output=True, text=True, cwd=ROOT)
    assert proc.returncode == 2 and proc.stderr.startswith("error:") and proc.stdout == ""
