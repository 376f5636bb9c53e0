import io
import os
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

import cli
from convert import same_vertex_set
from file_utils import parse_vpoly, parse_zpoly

ROOT = Path(__file__).parent
FIXTURES = ROOT / "fixtures"
EX1 = str(FIXTURES / "ex1.zpoly")
EX4 = str(FIXTURES / "ex4.zpoly")
EX4_EXPR = str(FIXTURES / "ex4.expr")
HEXAGON = str(FIXTURES / "hexagon.vpoly")


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_every_subcommand_is_registered():
    parser = cli.build_parser()
    commands = next(a for a in parser._actions if a.dest == "command").choices
    assert set(commands) == {
        "validate", "convert", "op", "vertices", "regularize", "bound", "sample", "eval", "info", "complexity",
    }


class TestValidate:
    def test_valid_file(self, capsys):
        assert run(capsys, "validate", EX1) == (0, "OK\n", "")

    def test_invalid_file(self, tmp_path, capsys):
        bad = tmp_path / "bad.zpoly"
        bad.write_text("zpoly\ndim 1\nfactors 1\ncenter 0\ngen 1 : 1 1\n")
        code, out, err = run(capsys, "validate", str(bad))
        assert code == 1
        assert out == ""
        assert err.startswith("zonoset: error:")
        assert "repeated" in err

    def test_parse_error_reports_location(self, tmp_path, capsys):
        bad = tmp_path / "bad.zpoly"
        bad.write_text("zpoly\ndim two\n")
        code, _, err = run(capsys, "validate", str(bad))
        assert code == 1
        assert "line 2, column 5" in err

    def test_missing_file(self, tmp_path, capsys):
        code, _, err = run(capsys, "validate", str(tmp_path / "nothing.zpoly"))
        assert code == 1
        assert "Cannot read" in err

    def test_undecodable_file(self, tmp_path, capsys):
        bad = tmp_path / "bad.zpoly"
        bad.write_bytes(b"\xff\xfezpoly\n")
        code, out, err = run(capsys, "validate", str(bad))
        assert code == 1
        assert out == ""
        assert err.startswith("zonoset: error:")
        assert err.count("\n") == 1


def test_convert_round_trip_through_files(tmp_path, capsys):
    zfile = tmp_path / "hexagon.zpoly"
    vfile = tmp_path / "hexagon.vpoly"
    assert run(capsys, "convert", "--to", "z", HEXAGON, "-o", str(zfile))[0] == 0
    assert parse_zpoly(zfile.read_text()).num_factors == 5
    assert run(capsys, "convert", "--to", "v", str(zfile), "-o", str(vfile))[0] == 0
    back = parse_vpoly(vfile.read_text())
    assert same_vertex_set(back.vertices, parse_vpoly(Path(HEXAGON).read_text()).vertices)


def test_convert_through_stdin(monkeypatch, capsys):
    _, ztext, _ = run(capsys, "convert", "--to", "z", HEXAGON)
    monkeypatch.setattr("sys.stdin", io.StringIO(ztext))
    code, vtext, _ = run(capsys, "convert", "--to", "v", "-")
    assert code == 0
    assert same_vertex_set(parse_vpoly(vtext).vertices, parse_vpoly(Path(HEXAGON).read_text()).vertices)


def test_convert_with_greedy_order(capsys):
    code, out, _ = run(capsys, "convert", "--to", "z", "--order", "greedy", HEXAGON)
    assert code == 0
    assert parse_zpoly(out).num_factors == 5


class TestOperations:
    def test_map(self, capsys):
        code, out, _ = run(capsys, "op", "map", "-m", str(FIXTURES / "project_x1.matrix"), EX1)
        assert code == 0
        assert out.splitlines()[-1] == "# p=2 h=3 mu=4 Nz=8"
        assert parse_zpoly(out).center.tolist() == [-0.5]

    def test_sum(self, capsys):
        code, out, _ = run(capsys, "op", "sum", EX1, EX1)
        assert code == 0
        assert out.splitlines()[-1] == "# p=4 h=6 mu=8 Nz=22"

    def test_hull(self, capsys):
        code, out, _ = run(capsys, "op", "hull", EX1, EX1)
        assert code == 0
        assert out.splitlines()[-1].startswith("# p=5 h=13 mu=23")

    def test_dimension_mismatch(self, tmp_path, capsys):
        point = tmp_path / "point.zpoly"
        point.write_text("zpoly\ndim 3\nfactors 0\ncenter 1 2 3\n")
        code, _, err = run(capsys, "op", "sum", EX1, str(point))
        assert code == 1
        assert err.startswith("zonoset: error:")


def test_vertices(capsys):
    code, out, _ = run(capsys, "vertices", EX1)
    assert code == 0
    np.testing.assert_allclose(parse_vpoly(out).vertices, [[-2, -2], [0, -2], [2, 1], [-2, 3]], atol=1e-12)


def test_regularize(capsys):
    code, out, _ = run(capsys, "regularize", EX1)
    assert code == 0
    assert out.splitlines()[-1] == "# p=2 h=3 mu=4 Nz=12"


def test_info(capsys):
    code, out, _ = run(capsys, "info", EX1)
    assert code == 0
    assert out.splitlines() == [
        "p=2 h=3 mu=4 Nz=12",
        "regular bounds h<=3 mu<=4",
        "x1 [-2, 2]",
        "x2 [-2, 3]",
    ]


class TestEval:
    def test_corner(self, capsys):
        assert run(capsys, "eval", EX1, "--alpha", "1", "1") == (0, "0 -2\n", "")

    def test_lifted(self, capsys):
        assert run(capsys, "eval", EX1, "--lifted", "--alpha", "1", "1") == (0, "0 -2\n", "")

    def test_outside_the_hypercube(self, capsys):
        code, _, err = run(capsys, "eval", EX1, "--alpha", "2", "0")
        assert code == 1
        assert "[-1, 1]" in err
        assert run(capsys, "eval", EX1, "--allow-outside", "--alpha", "2", "0") == (0, "2.5 -1\n", "")

    def test_wrong_count(self, capsys):
        assert run(capsys, "eval", EX1, "--alpha", "1")[0] == 1


class TestBound:
    def test_interval_baseline(self, capsys):
        assert run(capsys, "bound", "-f", EX4_EXPR, "-s", EX4, "--method", "ia-box") == (0, "[-25.25, 4]\n", "")

    def test_default_method_is_tighter(self, capsys):
        code, out, _ = run(capsys, "bound", "-f", EX4_EXPR, "-s", EX4)
        assert code == 0
        lo, hi = (float(v) for v in out.strip()[1:-1].split(","))
        assert -19.74 <= lo <= -14.8872
        assert 1.4094 <= hi <= 2.31

    def test_sample_is_inside_the_bound(self, capsys):
        _, out, _ = run(capsys, "sample", "-f", EX4_EXPR, "-s", EX4, "-n", "2000", "--seed", "3")
        lo, hi = (float(v) for v in out.strip()[1:-1].split(","))
        _, out, _ = run(capsys, "bound", "-f", EX4_EXPR, "-s", EX4, "--splits", "2")
        blo, bhi = (float(v) for v in out.strip()[1:-1].split(","))
        assert blo <= lo <= hi <= bhi

    def test_invalid_configuration_is_a_usage_error(self, capsys):
        code, _, err = run(capsys, "bound", "-f", EX4_EXPR, "-s", EX4, "--order", "0")
        assert code == 2
        assert "at least 1" in err

    def test_variable_beyond_the_dimension(self, tmp_path, capsys):
        expr = tmp_path / "f.expr"
        expr.write_text("(+ x1 x3)")
        code, _, err = run(capsys, "bound", "-f", str(expr), "-s", EX4)
        assert code == 1
        assert "x3" in err

    def test_overflow_is_a_one_line_error(self, tmp_path, capsys):
        far = tmp_path / "far.zpoly"
        far.write_text("zpoly\ndim 1\nfactors 1\ncenter 800\ngen 1 : 1\n")
        expr = tmp_path / "f.expr"
        expr.write_text("(exp x1)")
        for method in ("ia-box", "pz"):
            code, out, err = run(capsys, "bound", "-f", str(expr), "-s", str(far), "--method", method)
            assert code == 1
            assert out == ""
            assert err.startswith("zonoset: error:")
            assert err.count("\n") == 1

    def test_single_factor_fanout(self, capsys):
        code, out, _ = run(capsys, "bound", "-f", EX4_EXPR, "-s", EX4, "--fanout", "1", "--splits", "2")
        assert code == 0
        lo, hi = (float(v) for v in out.strip()[1:-1].split(","))
        assert lo <= -14.8872 and hi >= 1.4094


class TestComplexity:
    def test_csv_row(self, capsys):
        code, out, _ = run(capsys, "complexity", "--case", "zono-point", "-n", "20", "-m", "20", "--csv")
        assert code == 0
        assert out.splitlines() == [
            "case,n,m,m1,m2,n_v,n_h,n_z,bound_kind",
            "zono-point,20,20,,,20971540,8799,901,upper/upper/exact",
        ]

    def test_winner_column(self, capsys):
        _, out, _ = run(capsys, "complexity", "--case", "zono-point", "-n", "20", "-m", "20", "--csv", "--winner")
        header, row = out.splitlines()
        assert header.endswith(",smallest")
        assert row.endswith(",Z")

    def test_text_sweep(self, capsys):
        code, out, _ = run(capsys, "complexity", "--case", "zono-zono", "-n", "3", "--sweep", "1:2")
        assert code == 0
        lines = out.splitlines()
        assert len(lines) == 4
        assert lines[0].startswith("n=3 m1=1 m2=1 ")
        assert lines[0].endswith("(lower/lower/exact)")

    def test_missing_parameters(self, capsys):
        code, _, err = run(capsys, "complexity", "--case", "zono-point", "-n", "3")
        assert code == 1
        assert "-m" in err

    def test_bad_sweep_is_a_usage_error(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            cli.main(["complexity", "--case", "zono-point", "-n", "3", "--sweep", "4:2"])
        assert excinfo.value.code == 2


def test_usage_errors_exit_with_two(capsys):
    with pytest.raises(SystemExit) as excinfo:
        cli.main(["bound", "-s", EX4])
    assert excinfo.value.code == 2
    with pytest.raises(SystemExit) as excinfo:
        cli.main(["frobnicate"])
    assert excinfo.value.code == 2


@pytest.mark.parametrize("argv", [["vertices", EX1], ["info", EX4], ["op", "hull", EX1, EX4]])
def test_output_does_not_depend_on_thread_count(argv):
    outputs = []
    for threads in ("1", "0", "3"):
        env = dict(os.environ, ZONOSET_THREADS=threads)
        result = subprocess.run(
            [sys.executable, str(ROOT / "cli.py"), *argv], env=env, capture_output=True, text=True, check=True
        )
        outputs.append(result.stdout)
    assert outputs[0] == outputs[1] == outputs[2]
