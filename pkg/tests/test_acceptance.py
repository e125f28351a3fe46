"""Exit criteria. Each test records one PASS/FAIL line, repeated in the
terminal summary under "acceptance criteria"."""

import subprocess
import sys

import numpy as np
import pytest

from ctqw.analysis import (
    first_revival_search,
    limiting_distribution,
    limiting_distribution_by_average,
    revival_times,
)
from ctqw.dynamics import (
    TimeGrid,
    bloch_propagator,
    classical_propagator,
    infinite_probability,
    pi_closed_form_n3,
    pi_closed_form_n4,
    quantum_propagator,
    transition_probability,
)
from ctqw.lattice import LatticeSpec
from ctqw.spectral import lattice_decomposition
from ctqw.specialfn import bessel_j, normalization_residual, recurrence_residual

from oracles import bessel_series


def probs(n, t, k, boundary="periodic", gamma=1.0):
    d = lattice_decomposition(LatticeSpec(n, boundary))
    return transition_probability(quantum_propagator(d, gamma, t, k))


def test_01_method_equivalence(criterion):
    n = 21
    t = np.round(np.arange(0, 1001) * 0.1, 10)
    worst = 0.0
    for k in range(n):
        spectral = probs(n, t, k)
        bloch = transition_probability(bloch_propagator(n, 1.0, t, k))
        worst = max(worst, float(np.abs(spectral - bloch).max()))
    criterion("1 spectral vs Bloch, N=21, t in [0,100]", worst < 1e-10, f"max diff {worst:.2e} (< 1e-10)")


def test_02_closed_forms(criterion):
    t = np.linspace(0.0, 20.0, 2001)
    worst = 0.0
    for n, form in ((3, pi_closed_form_n3), (4, pi_closed_form_n4)):
        for k in range(n):
            p = probs(n, t, k)
            for j in range(n):
                worst = max(worst, float(np.abs(p[:, j] - form(t, j, k)).max()))
    criterion("2 closed forms N=3, N=4 over t in [0,20]", worst < 1e-12, f"max diff {worst:.2e} (< 1e-12)")


def test_03_limiting_distributions(criterion):
    expected = {3: [5 / 9, 2 / 9, 2 / 9], 4: [3 / 8, 1 / 8, 3 / 8, 1 / 8]}
    exact_err = avg_err = 0.0
    for n, values in expected.items():
        exact = limiting_distribution(lattice_decomposition(LatticeSpec(n)), 0).values
        exact_err = max(exact_err, float(np.abs(exact - values).max()))
        sampled = limiting_distribution_by_average(LatticeSpec(n), 0, T=1e4, n_samples=100_000).values
        avg_err = max(avg_err, float(np.abs(sampled - values).max()))
    ok = exact_err < 1e-10 and avg_err < 5e-3
    criterion(
        "3 limiting distributions N=3, N=4",
        ok,
        f"closed-form err {exact_err:.2e} (< 1e-10), time-average err {avg_err:.2e} (< 5e-3)",
    )


def test_04_limiting_distribution_shape(criterion):
    even = limiting_distribution(lattice_decomposition(LatticeSpec(20)), 0).maxima()
    odd = limiting_distribution(lattice_decomposition(LatticeSpec(21)), 0).maxima()
    labels_even = [m + 1 for m in even]
    labels_odd = [m + 1 for m in odd]
    ok = labels_even == [1, 11] and labels_odd == [1]
    criterion("4 limiting-distribution maxima", ok, f"N=20 maxima at {labels_even}, N=21 at {labels_odd}")


def test_05_infinite_lattice_limit(criterion):
    t = np.arange(0, 10001) * 0.01
    big = probs(501, t, 0)[:, 0]
    err_big = float(np.abs(big - bessel_j(0, 2 * t) ** 2).max())

    t21 = np.arange(0, 1501) * 0.01
    small = probs(21, t21, 0)[:, 0]
    diff = np.abs(small - bessel_j(0, 2 * t21) ** 2)
    early = float(diff[t21 <= 8.0].max())
    late = float(diff[(t21 >= 10.5) & (t21 <= 15.0)].max())
    ok = err_big < 1e-8 and early < 1e-4 and late > 1e-2
    criterion(
        "5 infinite-lattice limit",
        ok,
        f"N=501 max err {err_big:.2e} (< 1e-8); N=21 max err for t<=8 {early:.2e} (< 1e-4); "
        f"N=21 max dev on [10.5,15] {late:.2e} (> 1e-2)",
    )


def test_06_crossing_interference(criterion):
    t = np.arange(0, 2001) * 0.01
    p = probs(21, t, 0)[:, 10]
    diff = np.abs(p - bessel_j(10, 2 * t) ** 2)
    departures = t[diff > 1e-2]
    ok = departures.size > 0 and departures.min() > 4.0
    first = departures.min() if departures.size else float("nan")
    criterion("6 crossing 1 -> 11, N=21", ok, f"first departure > 1e-2 at t = {first:.2f} (> 4)")


@pytest.mark.parametrize("n, lo, hi", [(20, 67.0, 73.0), (21, 72.0, 78.0)])
def test_07_revival_detection(criterion, n, lo, hi):
    report = first_revival_search(LatticeSpec(n), TimeGrid(50.0, 100.0, 1001))
    t_rev = report.detected_first_revival
    ok = lo <= t_rev <= hi and t_rev > n * n / (2 * np.pi)
    criterion(
        f"7 first revival N={n}",
        ok,
        f"t = {t_rev:.3f} in [{lo:g}, {hi:g}], tau0 = {report.tau0:.3f}, peak {report.detected_peak_probability:.3f}",
    )


def test_08_revival_formula(criterion):
    half_ok = all(revival_times(n)[n // 2 - 1] == np.pi / 2 for n in range(4, 201, 2))
    mono_ok = all(np.all(np.diff(revival_times(n)[: n // 2]) < 0) for n in (20, 21))
    ratios = [revival_times(n)[0] / (n * n / (2 * np.pi)) for n in range(20, 501)]
    worst = max(abs(r - 1) for r in ratios)
    ok = half_ok and mono_ok and worst < 0.03
    criterion(
        "8 revival formula",
        ok,
        f"tau_(N/2) == pi/2: {half_ok}; strictly decreasing on (0,N/2]: {mono_ok}; "
        f"max |tau_1/tau0 - 1| for N in [20,500] = {worst:.4f} (< 0.03)",
    )


def test_09_conservation(criterion):
    t = np.linspace(0.0, 100.0, 200)
    worst_q = worst_c = 0.0
    for n in (3, 4, 20, 21, 64):
        for boundary in ("periodic", "reflecting"):
            d = lattice_decomposition(LatticeSpec(n, boundary))
            for gamma in (0.5, 1.0, 2.0):
                for k in {0, n // 2}:
                    q = transition_probability(quantum_propagator(d, gamma, t, k)).sum(axis=1)
                    c = classical_propagator(d, gamma, t, k).sum(axis=1)
                    worst_q = max(worst_q, float(np.abs(q - 1).max()))
                    worst_c = max(worst_c, float(np.abs(c - 1).max()))
                    if boundary == "periodic":
                        b = transition_probability(bloch_propagator(n, gamma, t, k)).sum(axis=1)
                        worst_q = max(worst_q, float(np.abs(b - 1).max()))
    ok = worst_q < 1e-10 and worst_c < 1e-10
    criterion("9 conservation", ok, f"quantum {worst_q:.2e}, classical {worst_c:.2e} (< 1e-10)")


def test_10_special_functions(criterion):
    xs = np.linspace(0.0, 50.0, 51)
    worst = 0.0
    for n in range(0, 41):
        got = bessel_j(n, xs)
        ref = np.array([bessel_series(n, x) for x in xs])
        worst = max(worst, float(np.abs(got - ref).max()))
    rec = recurrence_residual(np.linspace(0.1, 50.0, 1000))
    norm = normalization_residual(np.linspace(0.0, 50.0, 1001))
    ok = worst < 1e-10 and rec < 1e-9 and norm < 1e-9
    criterion(
        "10 Bessel J_n",
        ok,
        f"vs series oracle {worst:.2e} (< 1e-10), recurrence {rec:.2e}, normalization {norm:.2e} (< 1e-9)",
    )


def test_11_cli_determinism(criterion, tmp_path):
    outputs = []
    for name in ("a.csv", "b.csv"):
        out = tmp_path / name
        cmd = [sys.executable, "-m", "ctqw", "carpet", "--nodes", "21", "--t-max", "10",
               "--samples", "400", "--method", "bloch", "--out", str(out)]
        subprocess.run(cmd, check=True)
        outputs.append(out.read_bytes())
    for name in ("c.csv", "d.csv"):
        out = tmp_path / name
        cmd = [sys.executable, "-m", "ctqw", "return-prob", "--nodes", "20", "--out", str(out)]
        subprocess.run(cmd, check=True)
        outputs.append(out.read_bytes())
    ok = outputs[0] == outputs[1] and outputs[2] == outputs[3] and len(outputs[0]) > 0
    criterion("11 CLI determinism", ok, "repeated carpet and return-prob invocations byte-identical" if ok else "outputs differ")
