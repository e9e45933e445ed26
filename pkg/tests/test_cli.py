import json
import subprocess
import sys
from fractions import Fraction

from renorml1.cli import main


def run_cli(*argv, capsys=None):
    rc = main(list(argv))
    return rc


def invoke(tmp_path, *argv):
    """Run the CLI in-process, capturing the report file it writes."""
    out = tmp_path / "report.out"
    rc = main([*argv, "--out", str(out)])
    text = out.read_text() if out.exists() else ""
    return rc, text


def write_json(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


CONST_78 = {"level": 0, "values": ["7/8"]}
NBHD = {
    "center": CONST_78,
    "functionals": [{"level": 0, "values": ["1/1"]}],
    "delta": "1/10",
}


class TestNorm:
    def test_report(self, tmp_path):
        path = write_json(tmp_path, "f.json", {"level": 0, "values": ["1/1"]})
        rc, text = invoke(tmp_path, "norm", "--input", path)
        assert rc == 0
        obj = json.loads(text)
        assert obj["tnorm_sq"] == "8/7"
        assert obj["equiv_ok"] is True

    def test_float_digits(self, tmp_path):
        path = write_json(tmp_path, "f.json", {"level": 0, "values": ["1/1"]})
        rc, text = invoke(tmp_path, "norm", "--input", path, "--float-digits", "4")
        assert json.loads(text)["tnorm_float"] == "1.0690"


class TestSplit:
    def test_report(self, tmp_path):
        path = write_json(tmp_path, "f.json", {"level": 1, "values": ["1/1", "-1/1"]})
        rc, text = invoke(tmp_path, "split", "--input", path, "--level", "1")
        assert rc == 0
        obj = json.loads(text)
        assert obj["b"] == ["1/2", "0/1"]
        assert obj["c"] == ["0/1", "1/2"]
        assert obj["f1"]["values"] == ["4/1", "0/1", "0/1", "0/1", "0/1", "-4/1", "0/1", "0/1"]


class TestWitness:
    def test_success(self, tmp_path):
        path = write_json(tmp_path, "nbhd.json", NBHD)
        rc, text = invoke(tmp_path, "witness", "--input", path, "--eps", "1/5")
        assert rc == 0
        obj = json.loads(text)
        assert obj["gamma"] == "1/64"
        assert obj["K"] == 7
        assert obj["checks"]["gap"]["ok"] is True
        assert set(obj["checks"]) == {
            "id5", "id6", "id7", "linf4x", "pairing_l", "ball", "gap",
        }

    def test_gap_failure_exits_1(self, tmp_path):
        bad = dict(NBHD, center={"level": 0, "values": ["0/1"]})
        path = write_json(tmp_path, "nbhd.json", bad)
        rc, text = invoke(tmp_path, "witness", "--input", path, "--eps", "1/5")
        assert rc == 1

    def test_malformed_json_exits_2(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text('{"center": [,}')
        rc, _ = invoke(tmp_path, "witness", "--input", str(p), "--eps", "1/5")
        assert rc == 2

    def test_malformed_json_location_reported(self, tmp_path, capsys):
        p = tmp_path / "bad.json"
        p.write_text('{"center": [,}')
        rc = main(["witness", "--input", str(p), "--eps", "1/5"])
        err = capsys.readouterr().err
        assert rc == 2 and "line 1" in err

    def test_bad_rational_exits_2(self, tmp_path):
        bad = dict(NBHD, delta="1/0")
        path = write_json(tmp_path, "nbhd.json", bad)
        rc, _ = invoke(tmp_path, "witness", "--input", path, "--eps", "1/5")
        assert rc == 2

    def test_missing_input_exits_2(self, tmp_path):
        rc, _ = invoke(tmp_path, "witness", "--input", str(tmp_path / "no.json"), "--eps", "1/5")
        assert rc == 2


class TestProbe:
    def test_strict(self, tmp_path):
        path = write_json(
            tmp_path,
            "pair.json",
            {"f": {"level": 1, "values": ["1/1", "-1/1"]},
             "g": {"level": 1, "values": ["2/1", "-2/1"]}},
        )
        rc, text = invoke(tmp_path, "probe", "strict", "--input", path)
        assert rc == 0
        obj = json.loads(text)
        assert obj["tag"] == "Degenerate" and obj["ratio"] == "1/2"

    def test_midpoint(self, tmp_path):
        path = write_json(
            tmp_path,
            "pair.json",
            {"f": {"level": 1, "values": ["1/1", "0/1"]},
             "g": {"level": 1, "values": ["0/1", "1/1"]}},
        )
        rc, text = invoke(tmp_path, "probe", "midpoint", "--input", path)
        assert json.loads(text)["defect"] == "1/28"

    def test_chain(self, tmp_path):
        path = write_json(
            tmp_path,
            "chain.json",
            {"f": {"level": 0, "values": ["1/1"]},
             "g": {"level": 2, "values": ["4/1", "0/1", "0/1", "0/1"]},
             "A": [[2, 1]]},
        )
        rc, text = invoke(tmp_path, "probe", "chain", "--input", path)
        obj = json.loads(text)
        assert obj["lhs"] == "7/4" and obj["rhs"] == "3/2" and obj["ok"]

    def test_slice_csv(self, tmp_path):
        # near-unit constant center: largest r with den <= 1e4, r^2 * 8/7 <= 1
        nbhd = dict(
            NBHD, center={"level": 0, "values": ["9110/9739"]}, delta="1/1"
        )
        path = write_json(tmp_path, "nbhd.json", nbhd)
        rc, text = invoke(
            tmp_path, "probe", "slice", "--input", path, "--eps", "1/5,1/10"
        )
        assert rc == 0
        lines = text.strip().split("\n")
        assert lines[0] == "eps,gap_sq,gap_float"
        assert len(lines) == 3

    def test_slice_partial_failure_exits_1(self, tmp_path):
        # tnorm_sq = 7/8 is too deep inside the ball for eps = 1/10
        nbhd = dict(NBHD, delta="1/1")
        path = write_json(tmp_path, "nbhd.json", nbhd)
        rc, text = invoke(
            tmp_path, "probe", "slice", "--input", path, "--eps", "1/10"
        )
        assert rc == 1
        assert text.strip().split("\n")[1] == "1/10,,"

    def test_extreme(self, tmp_path):
        path = write_json(tmp_path, "nbhd.json", NBHD)
        rc, text = invoke(tmp_path, "probe", "extreme", "--input", path, "--eps", "1/5")
        assert rc == 0
        obj = json.loads(text)
        assert Fraction(obj["l1_of_u"]) > Fraction(4, 5)


class TestEll1:
    def test_greedy(self, tmp_path):
        path = write_json(tmp_path, "fam.json", {"deltas": ["1/2", "1/4"], "m": 2})
        rc, text = invoke(tmp_path, "ell1", "greedy", "--input", path)
        obj = json.loads(text)
        assert obj["supports"] is None
        assert [m["level"] for m in obj["members"]] == [0, 6]

    def test_spikes_and_dual(self, tmp_path):
        path = write_json(tmp_path, "fam.json", {"deltas": ["1/2", "1/3"], "m": 2})
        rc, text = invoke(tmp_path, "ell1", "dual", "--input", path, "--level", "2")
        obj = json.loads(text)
        assert obj["dual"]["xstar"]["values"] == ["1/1", "1/1", "0/1", "0/1"]
        assert obj["dual"]["ystar"]["values"] == ["-1/1", "1/1", "0/1", "0/1"]
        assert obj["nonsmooth"]["rows"][0]["gap"] == "7/6"

    def test_capacity_error_exits_2(self, tmp_path):
        path = write_json(tmp_path, "fam.json", {"deltas": ["1/2"] * 5, "m": 5})
        rc, _ = invoke(tmp_path, "ell1", "spikes", "--input", path, "--level", "1")
        assert rc == 2


class TestUred:
    def test_run(self, tmp_path):
        rc, text = invoke(tmp_path, "ured", "--delta", "1/2", "--eps", "1/2,1/4")
        assert rc == 0
        obj = json.loads(text)
        assert obj["xs"][2] == {"2": "7/8", "3": "15/16"}
        assert obj["verify"]["ok"] is True
        assert obj["segment"]["ok"] is True

    def test_bad_delta_exits_2(self, tmp_path):
        rc, _ = invoke(tmp_path, "ured", "--delta", "2/1", "--eps", "1/2")
        assert rc == 2


class TestSelftest:
    def test_passes(self, tmp_path):
        rc, text = invoke(tmp_path, "selftest", "--seed", "11", "--trials", "6")
        assert rc == 0
        assert "selftest: pass" in text


class TestDeterminism:
    def run_subprocess(self, args):
        proc = subprocess.run(
            [sys.executable, "-m", "renorml1", *args],
            capture_output=True,
        )
        return proc.returncode, proc.stdout

    def test_byte_identical_reports(self, tmp_path):
        path = write_json(tmp_path, "nbhd.json", NBHD)
        for args in (
            ["witness", "--input", path, "--eps", "1/5"],
            ["selftest", "--seed", "42", "--trials", "5"],
        ):
            rc1, out1 = self.run_subprocess(args)
            rc2, out2 = self.run_subprocess(args)
            assert rc1 == rc2 == 0
            assert out1 == out2
