"""Acceptance gate: every stated criterion at its stated tolerance.

Each criterion prints one PASS/FAIL line.  Criterion 2 embeds a documented
constant correction: the regularized trace of the harmonic symbol is the
odd-integer zeta value (1 - 2) zeta(-1) = 1/12, triple-witnessed here by
the closed continuation, the defining Dirichlet series, and the numerical
finite-part pipeline (see the decisions ledger for the derivation).
"""

import math
from fractions import Fraction

import pytest

from heischar.scalars import QI
from heischar.verify import (SUITES, exploratory_integer_report, run_suite,
                             suite_reduction)


def _report(tag, rep):
    status = "PASS" if rep["passed"] else "FAIL"
    print(f"[{status}] {tag} ({rep['elapsed_s']}s)")
    for r in rep["checks"]:
        mark = "pass" if r["passed"] else "FAIL"
        resid = f" residual={r['residual']:.3e}" if r["residual"] else ""
        tol = f" tol={r['tol']:.0e}" if r["tol"] else ""
        print(f"    [{mark}] {r['name']}{resid}{tol}")
    assert rep["passed"], f"{tag} has failing checks"


def test_criterion_1_moyal_suite(capsys):
    with capsys.disabled():
        _report("criterion 1: Moyal suite (exact, >=100 randomized instances)",
                run_suite("moyal"))


def test_criterion_2_trace_suite(capsys):
    with capsys.disabled():
        rep = run_suite("traces")
        # split out criterion 3's record for its own line
        c3 = [r for r in rep["checks"] if "finite-part pipeline" in r["name"]]
        c2 = {**rep, "checks": [r for r in rep["checks"] if r not in c3]}
        _report("criterion 2: trace suite (Res, Trh, defect, invariance)", c2)
        rep3 = {**rep, "checks": c3, "passed": all(r["passed"] for r in c3)}
        _report("criterion 3: oracle cross-check (numeric vs exact on "
                ">=10 polynomial symbols, 1e-6)", rep3)


def test_criterion_4_cyclic_suite(capsys):
    with capsys.disabled():
        _report("criterion 4: cyclic suite (b/B identities, Chern, "
                "transgression)", run_suite("cyclic"))


def test_criterion_5_chainmap_suite(capsys):
    with capsys.disabled():
        _report("criterion 5: chain-map suite (three relations, two routes, "
                "boundary squared)", run_suite("chainmap"))


def test_criterion_6_chi_suite(capsys):
    with capsys.disabled():
        _report("criterion 6: character suite (closedness, triviality, "
                "homotopy, additivity, stabilization)", run_suite("chi"))


def test_criterion_7_reduction_consistency(capsys):
    with capsys.disabled():
        records = suite_reduction()
        rep = {"passed": all(r["passed"] for r in records), "elapsed_s": "-",
               "checks": records}
        _report("criterion 7: reduction consistency (path independence at "
                "pairing level)", rep)


def test_exploratory_integer_nearness(capsys):
    """Non-gating: reports how close a double-winding pairing sits to an
    integer; recorded for information only."""
    with capsys.disabled():
        rep = exploratory_integer_report()
        print(f"[info] exploratory pairing value: {rep['value_re']:+.6f}"
              f"{rep['value_im']:+.6f}i, nearest integer "
              f"{rep['nearest_integer']} at distance {rep['distance']:.3e}")
