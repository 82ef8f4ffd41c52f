"""CLI round trips, exit codes, determinism."""

import json
from fractions import Fraction

import pytest

from heischar.cli import main
from heischar.poly import Poly, rho2
from heischar.scalars import QI
from heischar.serialize import (dump_json, principal_to_json, symbol_from_json,
                                symbol_to_json)
from heischar.homog import HomogRat
from heischar.weyl import FormalSymbol


def write_symbol(path, sym):
    dump_json(symbol_to_json(sym), path)
    return str(path)


@pytest.fixture
def rho_minus_two(tmp_path):
    sym = FormalSymbol.from_component(HomogRat(Poly.constant(2, 1), rho2(2)),
                                      cutoff=6)
    return write_symbol(tmp_path / "rinv.json", sym)


@pytest.fixture
def harmonic(tmp_path):
    return write_symbol(tmp_path / "h.json", FormalSymbol.from_poly(rho2(2)))


@pytest.fixture
def geometry(tmp_path):
    data = {"d": 3, "n": 1,
            "beta": [{"axis": 0, "freq": [0, 1, 0], "amp": ["1/2", "0"]}],
            "riemann": []}
    p = tmp_path / "geom.json"
    dump_json(data, p)
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


class TestBasicCommands:
    def test_res_exact(self, rho_minus_two, capsys):
        code, out = run(capsys, "res", rho_minus_two)
        assert code == 0
        rep = json.loads(out)
        assert rep["value"]["exact"] == ["-1/2", "0"]

    def test_trh_harmonic(self, harmonic, capsys):
        code, out = run(capsys, "trh", harmonic)
        assert code == 0
        rep = json.loads(out)
        assert rep["value"]["exact"] == ["1/12", "0"]
        assert rep["config"]["cutoff"] == 12

    def test_star_and_invert_round_trip(self, harmonic, tmp_path, capsys):
        one_plus = FormalSymbol.from_poly(rho2(2)) + FormalSymbol.unit(1)
        p = write_symbol(tmp_path / "el.json", one_plus)
        code, out = run(capsys, "invert", p, "--cutoff", "8")
        assert code == 0
        inv = symbol_from_json(json.loads(out)["result"])
        from heischar.weyl import star
        assert star(inv, one_plus) == FormalSymbol.unit(1)

    def test_schema_error_exit_two(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"n": 1, "components": [{"degree": "x"}]}')
        code = main(["res", str(bad)])
        assert code == 2

    def test_unknown_suite_exit_two(self, capsys):
        assert main(["verify", "nope"]) == 2

    def test_chern_report(self, tmp_path, capsys):
        from heischar.serialize import matrix_symbol_to_json
        from heischar.weyl import MatrixSymbol
        m = MatrixSymbol([[FormalSymbol.from_poly(rho2(2))
                           + FormalSymbol.unit(1)]])
        p = tmp_path / "mat.json"
        dump_json(matrix_symbol_to_json(m), p)
        code, out = run(capsys, "chern", str(p), "--cutoff", "8")
        assert code == 0
        rep = json.loads(out)
        assert "0" in rep["u_powers"]

    def test_pair_trivial_symbol(self, geometry, tmp_path, capsys):
        from heischar.extension import PrincipalSymbol, symbol_algebra
        plus = symbol_algebra(3, 8, op=False)
        minus = symbol_algebra(3, 8, op=True)
        sym = PrincipalSymbol([[plus.unit()]], [[minus.unit()]], d=3, cutoff=8)
        p = tmp_path / "sym.json"
        dump_json(principal_to_json(sym), p)
        code, out = run(capsys, "pair", "--symbol", str(p),
                        "--geometry", geometry, "--cutoff", "8")
        assert code == 0
        rep = json.loads(out)
        assert abs(rep["value_re"]) < 1e-12 and abs(rep["value_im"]) < 1e-12

    def test_deterministic_reports(self, harmonic, tmp_path, capsys):
        code1, out1 = run(capsys, "trh", harmonic)
        code2, out2 = run(capsys, "trh", harmonic)
        assert out1 == out2

    def test_report_written_to_file(self, harmonic, tmp_path, capsys):
        out_path = tmp_path / "report.json"
        code, _ = run(capsys, "trh", harmonic, "--out", str(out_path))
        assert code == 0
        rep = json.loads(out_path.read_text())
        assert rep["version"].startswith("heischar-")
        assert "truncation_flags" in rep

    def test_config_file_and_flag_override(self, harmonic, tmp_path, capsys):
        cfgp = tmp_path / "cfg.json"
        dump_json({"cutoff": 10, "seed": 3}, cfgp)
        code, out = run(capsys, "trh", harmonic, "--config", str(cfgp),
                        "--cutoff", "8")
        rep = json.loads(out)
        assert rep["config"]["cutoff"] == 8
        assert rep["config"]["seed"] == 3
