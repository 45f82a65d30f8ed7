"""Acceptance gate: the eleven release criteria, one test per criterion.

Each test records a PASS/FAIL line that conftest prints after the run.
Tolerances are part of the contract and are asserted exactly as stated in
each criterion's docstring.
"""

import functools
import math
import time

import numpy as np
import pytest

from pottsinvest import (
    CouplingProfile,
    ModelParams,
    Q3_CASE1_POSITIVE_J_LIMIT,
    Q3_CASE3_POSITIVE_J_LIMIT,
    StencilConfig,
    classify_limits,
    expected_investment_bruteforce,
    investment_q2,
    investment_q3_case1,
    investment_q3_case2,
    investment_q3_case3,
    log_partition_function,
    make_profile,
    partition_function_bruteforce,
    per_capita_investment,
    ProfileSpec,
    richardson_difference,
    sweep_curve,
)
from pottsinvest.cli import main as cli_main

RESULTS = []


def criterion(label):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                RESULTS.append((label, False))
                raise
            RESULTS.append((label, True))

        return run

    return wrap


def params_for(q, beta, couplings, field=0.0):
    return ModelParams(q=q, beta=beta, couplings=CouplingProfile(tuple(couplings)), field=field)


@criterion("criterion 01: spectral log Z equals enumeration to 1e-10 in under 10 s")
def test_criterion_01_partition_oracle_equivalence():
    """q in {2,3,4}, N in {2..8}, 50 random (beta, D, J) draws each."""
    start = time.perf_counter()
    rng = np.random.default_rng(20260815)
    worst = 0.0
    for q in (2, 3, 4):
        for n in range(2, 9):
            for _ in range(50):
                beta = float(rng.uniform(0.0, 5.0))
                field = float(rng.uniform(-1.0, 1.0))
                j = tuple(float(v) for v in rng.uniform(-2.0, 2.0, q))
                p = params_for(q, beta, j, field=field)
                got = log_partition_function(p, n)
                want = math.log(partition_function_bruteforce(p, n))
                worst = max(worst, abs(got - want) / max(1.0, abs(want)))
    elapsed = time.perf_counter() - start
    assert worst <= 1e-10, f"worst relative disagreement {worst:.3e}"
    assert elapsed < 10.0, f"took {elapsed:.1f} s"


@criterion("criterion 02: infinite-temperature investment is exactly (q-1)/2")
def test_criterion_02_infinite_temperature_value():
    """Exact beta = 0 branch for q up to 20; enumeration within 1e-12."""
    rng = np.random.default_rng(2)
    for q in range(2, 21):
        j = tuple(float(v) for v in rng.uniform(-2.0, 2.0, q))
        assert per_capita_investment(params_for(q, 0.0, j)) == (q - 1) / 2
    for q, n in [(2, 8), (3, 5), (4, 4), (5, 3), (8, 2)]:
        j = tuple(float(v) for v in rng.uniform(-2.0, 2.0, q))
        got = expected_investment_bruteforce(params_for(q, 0.0, j), n)
        assert abs(got - (q - 1) / 2) <= 1e-12


@criterion("criterion 03: large-beta curves freeze onto the cheapest level")
def test_criterion_03_low_temperature_limit():
    """50 unique-minimum coupling draws, q <= 10: l(100) within 1e-3 of the
    level holding the strictly smallest coupling, all solves finite.

    Draws stay in the regime the endpoint law covers: the minimum must be
    negative (agreement at some level actually rewarded) and isolated, so
    the draw filter requires min <= -0.2 and a runner-up gap >= 0.15.
    """
    rng = np.random.default_rng(20260815)
    accepted = 0
    worst = 0.0
    while accepted < 50:
        q = int(rng.integers(2, 11))
        j = rng.uniform(-2.0, 2.0, q)
        ordered = np.sort(j)
        if ordered[0] > -0.2 or ordered[1] - ordered[0] < 0.15:
            continue
        accepted += 1
        p = params_for(q, 100.0, tuple(float(v) for v in j))
        info = classify_limits(p)
        assert info.unique_min
        val = per_capita_investment(p)
        assert math.isfinite(val)
        worst = max(worst, abs(val - info.beta_infinity))
    assert worst <= 1e-3, f"worst endpoint miss {worst:.3e}"


@criterion("criterion 04: two-level curve matches its closed form and endpoint table")
def test_criterion_04_two_level_closed_form():
    """10 random coupling pairs, 100 grid points in [0.01, 10], 1e-6
    absolute; the three large-beta endpoints reproduced at beta = 80."""
    rng = np.random.default_rng(20260815)
    betas = np.linspace(0.01, 10.0, 100)
    worst = 0.0
    for _ in range(10):
        j0, j1 = (float(v) for v in rng.uniform(-2.0, 2.0, 2))
        for b in betas:
            got = per_capita_investment(params_for(2, float(b), (j0, j1)))
            worst = max(worst, abs(got - investment_q2(float(b), j0, j1)))
    assert worst <= 1e-6, f"worst curve disagreement {worst:.3e}"
    # Endpoints: high level rewarded -> 1, low level rewarded -> 0,
    # both penalised -> 1/2.
    for j0, j1, target in [(1.0, -1.0, 1.0), (-1.0, 1.0, 0.0), (2.0, 1.0, 0.5)]:
        assert abs(investment_q2(80.0, j0, j1) - target) <= 1e-3
        assert abs(per_capita_investment(params_for(2, 80.0, (j0, j1))) - target) <= 1e-3


@criterion("criterion 05: three-level top-coupling curve hits both endpoints")
def test_criterion_05_three_level_top_coupling():
    assert abs(investment_q3_case1(0.0, 1.0) - 1.0) <= 1e-9
    assert abs(per_capita_investment(params_for(3, 0.0, (0.0, 0.0, 1.0))) - 1.0) <= 1e-9
    assert investment_q3_case1(20.0, -1.0) >= 1.999
    assert per_capita_investment(params_for(3, 20.0, (0.0, 0.0, -1.0))) >= 1.999
    assert abs(investment_q3_case1(80.0, 1.0) - Q3_CASE1_POSITIVE_J_LIMIT) <= 1e-4
    assert (
        abs(per_capita_investment(params_for(3, 80.0, (0.0, 0.0, 1.0))) - Q3_CASE1_POSITIVE_J_LIMIT)
        <= 1e-4
    )


@criterion("criterion 06: three-level middle-coupling curve is constant at 1")
def test_criterion_06_three_level_middle_coupling():
    """Numeric curve within 1e-7 of 1 across the full default grid."""
    betas = np.linspace(0.0, 10.0, 200)
    for j in (-3.0, 2.0):
        curve = sweep_curve(params_for(3, 0.0, (0.0, j, 0.0)), betas)
        worst = max(abs(l - 1.0) for _, l in curve.points)
        assert worst <= 1e-7, f"J1={j}: worst deviation {worst:.3e}"
        assert all(investment_q3_case2(float(b), j) == 1.0 for b in betas[::40])


@criterion("criterion 07: three-level bottom-coupling curve hits both endpoints")
def test_criterion_07_three_level_bottom_coupling():
    assert abs(investment_q3_case3(0.0, 1.0) - 1.0) <= 1e-9
    assert abs(per_capita_investment(params_for(3, 0.0, (1.0, 0.0, 0.0))) - 1.0) <= 1e-9
    assert abs(investment_q3_case3(80.0, 1.0) - Q3_CASE3_POSITIVE_J_LIMIT) <= 1e-4
    assert (
        abs(per_capita_investment(params_for(3, 80.0, (1.0, 0.0, 0.0))) - Q3_CASE3_POSITIVE_J_LIMIT)
        <= 1e-4
    )


@criterion("criterion 08: extrapolated stencil has fourth-order error and wins at coarse steps")
def test_criterion_08_stencil_order():
    f = lambda x: math.sin(x) + math.exp(2.0 * x)
    for xi in (0.1, 0.05, 0.025):
        ratio = abs(richardson_difference(f, xi) - 3.0) / abs(
            richardson_difference(f, xi / 2) - 3.0
        )
        assert 12.0 <= ratio <= 20.0, f"xi={xi}: ratio {ratio:.2f}"
    cases = [
        (2, (1.0, -1.0), lambda b: investment_q2(b, 1.0, -1.0)),
        (2, (0.5, 0.5), lambda b: investment_q2(b, 0.5, 0.5)),
        (3, (0.0, 0.0, 1.0), lambda b: investment_q3_case1(b, 1.0)),
        (3, (0.0, 0.0, -1.0), lambda b: investment_q3_case1(b, -1.0)),
        (3, (0.0, 2.0, 0.0), lambda b: investment_q3_case2(b, 2.0)),
        (3, (1.0, 0.0, 0.0), lambda b: investment_q3_case3(b, 1.0)),
    ]
    for beta in (0.5, 1.5):
        for q, j, closed in cases:
            p = params_for(q, beta, j)
            err2 = abs(per_capita_investment(p, StencilConfig(xi=1e-2, order="two_point")) - closed(beta))
            err4 = abs(per_capita_investment(p, StencilConfig(xi=1e-2, order="four_point")) - closed(beta))
            assert err4 <= err2 + 1e-12


@criterion("criterion 09: aggressive sweeps saturate high, conservative sweeps empty out")
def test_criterion_09_profile_sweeps():
    """q in {10, 15, 20} on a 51-point grid to beta = 10.  Monotone approach
    is asserted within 1e-7 per step: beyond beta ~ 2.5 the aggressive curve
    is flat at q-1 to within the stencil truncation, which grows ~ beta^4
    (measured counter-moves up to 6.5e-9 at q = 20)."""
    betas = np.linspace(0.0, 10.0, 51)
    for q in (10, 15, 20):
        top = float(q - 1)
        curve = sweep_curve(
            ModelParams(q=q, beta=0.0, couplings=make_profile(ProfileSpec("aggressive", q))),
            betas,
        )
        tail = [l for b, l in curve.points if b >= 2.0]
        final = curve.points[-1][1]
        assert final > 0.95 * top
        assert abs(final - top) <= 1e-6
        assert all(b - a >= -1e-7 for a, b in zip(tail, tail[1:]))

        curve = sweep_curve(
            ModelParams(q=q, beta=0.0, couplings=make_profile(ProfileSpec("conservative", q))),
            betas,
        )
        tail = [l for b, l in curve.points if b >= 2.0]
        final = curve.points[-1][1]
        assert final < 0.05 * top
        assert abs(final) <= 1e-6
        assert all(b - a <= 1e-7 for a, b in zip(tail, tail[1:]))


@criterion("criterion 10: twelve-seed ensemble is deterministic with a spread of endpoints")
def test_criterion_10_ensemble(tmp_path):
    """Byte-identical reruns, exact mean 7 at beta = 0, and distinct
    endpoint values for every pair of seeds whose coupling minima differ."""
    seeds = ",".join(str(s) for s in range(1, 13))
    args = [
        "--q", "15", "--profile", "random", "--seeds", seeds,
        "--beta-max", "6.0", "--beta-count", "25",
    ]
    first = tmp_path / "a.csv"
    second = tmp_path / "b.csv"
    assert cli_main(args + ["--out", str(first)]) == 0
    assert cli_main(args + ["--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()

    rows = [l.split(",") for l in first.read_text().splitlines()[1:] if not l.startswith("#")]
    mean_zero = [float(l) for b, l, s in rows if s == "mean" and float(b) == 0.0]
    assert abs(mean_zero[0] - 7.0) <= 1e-9

    finals = {s: float(l) for b, l, s in rows if s != "mean" and float(b) == 6.0}
    minima = {
        s: min(make_profile(ProfileSpec("random", 15, seed=int(s))).values)
        for s in finals
    }
    for a in finals:
        for b in finals:
            if a < b and minima[a] != minima[b]:
                assert abs(finals[a] - finals[b]) > 1e-11, f"seeds {a},{b} collide"


@criterion("criterion 11: documented command-line examples run end to end")
def test_criterion_11_cli_examples(tmp_path, capsys):
    # Equal couplings: every row of the curve sits at one half.
    flat = tmp_path / "flat.csv"
    assert cli_main(["--q", "2", "--couplings", "1,1",
                     "--beta-count", "10", "--out", str(flat)]) == 0
    lines = flat.read_text().splitlines()
    assert lines[0] == "beta,l"
    values = [float(r.split(",")[1]) for r in lines[1:]]
    assert len(values) == 10
    assert all(abs(v - 0.5) <= 1e-9 for v in values)

    # Rewarded top level: the grid-to-20 curve ends within 1e-3 of 2.
    saturating = tmp_path / "top.csv"
    assert cli_main(["--q", "3", "--couplings", "0,0,-1", "--beta-max", "20",
                     "--beta-count", "41", "--out", str(saturating)]) == 0
    last = saturating.read_text().splitlines()[-1].split(",")
    assert float(last[0]) == 20.0
    assert abs(float(last[1]) - 2.0) <= 1e-3

    # Twelve listed seeds: twelve per-seed series plus the mean series.
    ensemble = tmp_path / "ens.csv"
    assert cli_main(["--q", "15", "--profile", "random",
                     "--seeds", ",".join(str(s) for s in range(1, 13)),
                     "--beta-max", "2.0", "--beta-count", "3",
                     "--out", str(ensemble)]) == 0
    lines = ensemble.read_text().splitlines()
    assert lines[0] == "beta,l,seed"
    assert {r.split(",")[2] for r in lines[1:]} == {str(s) for s in range(1, 13)} | {"mean"}

    # Documented exit codes: configuration error, then numerical failure.
    assert cli_main(["--couplings", "1,2"]) == 2
    assert cli_main(["--q", "2", "--couplings=-1e308,0",
                     "--beta-min", "0.5", "--beta-max", "2.0",
                     "--beta-count", "2"]) == 3
    capsys.readouterr()
