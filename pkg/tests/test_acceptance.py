"""Acceptance criteria 1-9, each at its stated tolerance.

Every test records one PASS/FAIL line; ``conftest.py`` repeats them in the
terminal summary.  Run alone with ``pytest tests/test_acceptance.py -v`` or
as a script with ``python tests/test_acceptance.py``.
"""

import dataclasses
import itertools
import subprocess
import sys
import time

import numpy as np
import pytest

from oracles import fock_coherence
from satcoherence.channel import LossyChannelPair, apply_channel, apply_channel_matrix, build_symplectic
from satcoherence.experiments import GEO_HEIGHT_M, curves, preset_figure, run_sweep
from satcoherence.gaussian_core import (
    CovarianceMatrix2Mode,
    gaussian_coherence,
    symplectic_eigenvalues,
    two_mode_squeezed_cm,
)
from satcoherence.spacetime import EARTH, delta_exact, delta_perturbative, zero_shift_height
from satcoherence.wavepacket import GaussianWavepacket, overlap_closed_form, overlap_quadrature

RESULTS: dict[int, str] = {}

# Fock cutoff per squeezing; s=2 needs ~500 for a 1e-16 tail (tanh^2 2 = 0.93)
FOCK_CUTOFF = {0.5: 40, 1.0: 40, 2.0: 500}
TMSS_S1_BITS = 4.673819  # independent oracle; the stated 4.673776 is off by 4.3e-5


def _record(n: int, ok: bool, detail: str):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[n] = line
    print(line)
    assert ok, line


def test_criterion_1_zero_shift_altitude():
    t0 = time.perf_counter()
    r_a = EARTH.surface_radius
    h_star = zero_shift_height(EARTH)
    in_band = 0.49 * r_a <= h_star <= 0.50 * r_a
    rows = run_sweep(preset_figure(2))
    step = GEO_HEIGHT_M / 719
    offsets = []
    for curve in curves(rows, "sigma").values():
        peak = max(curve, key=lambda r: r.coherence_bits)
        offsets.append(abs(peak.h_m - h_star))
    elapsed = time.perf_counter() - t0
    ok = in_band and max(offsets) <= step and elapsed < 5
    _record(1, ok, f"h*={h_star:.1f} m ({h_star / r_a:.5f} r_A), peak offset {max(offsets) / 1e3:.1f} km, {elapsed:.2f} s")


def test_criterion_2_geo_shift():
    geo = abs(delta_exact(EARTH, 3.6e7).delta)
    hs = np.linspace(0.0, 1e8, 1000)
    gap = max(abs(delta_exact(EARTH, h).delta - delta_perturbative(EARTH, h).delta) for h in hs)
    ok = 2.0e-10 <= geo <= 3.0e-10 and gap < 1e-17
    _record(2, ok, f"|delta(GEO)|={geo:.4e}, max exact-perturbative gap {gap:.1e}")


def test_criterion_3_geo_coherence_change():
    t0 = time.perf_counter()
    spec = dataclasses.replace(preset_figure(4), omega2_list=(1.0,))
    rows = run_sweep(spec)
    worst = max(abs(r.mu) for r in rows)
    elapsed = time.perf_counter() - t0
    _record(3, worst < 0.01 and elapsed < 5, f"max |mu| = {worst:.5f} over {len(rows)} heights, {elapsed:.2f} s")


def test_criterion_4_overlap_oracle():
    t0 = time.perf_counter()
    failures = []
    worst = 0.0
    for ratio, delta in itertools.product(np.linspace(5, 100, 10), np.linspace(-0.5, 0.5, 20)):
        wp = GaussianWavepacket.with_ratio(ratio)
        gap = abs(overlap_closed_form(wp, delta) - overlap_quadrature(wp, delta))
        worst = max(worst, gap)
        if gap >= 1e-9:
            failures.append(float(ratio))
    elapsed = time.perf_counter() - t0
    detail = f"max gap {worst:.2e}, {len(failures)}/200 points above 1e-9"
    if failures:
        detail += f" (all at R={sorted(set(failures))}: negative-frequency tail, see ledger)"
    _record(4, not failures and elapsed < 30, detail + f", {elapsed:.2f} s")


def test_criterion_5_coherence_oracle():
    gaps = {}
    for s, cutoff in FOCK_CUTOFF.items():
        gaps[s] = abs(gaussian_coherence(two_mode_squeezed_cm(s)) - fock_coherence(s, cutoff=cutoff)[0])
    s1 = gaussian_coherence(two_mode_squeezed_cm(1.0))
    ok = max(gaps.values()) < 1e-6 and abs(s1 - TMSS_S1_BITS) < 1e-6
    _record(5, ok, f"C(s=1)={s1:.6f} bits, max Fock gap {max(gaps.values()):.1e}")


def test_criterion_6_channel_duality():
    grid = itertools.product(np.linspace(0, 3, 10), np.linspace(0, 1, 10), np.linspace(0, 1, 10))
    worst = orth = 0.0
    for s, t1, t2 in grid:
        ch = LossyChannelPair(t1, t2)
        a, b = apply_channel(s, ch), apply_channel_matrix(s, ch)
        worst = max(worst, np.abs(np.array([a.a - b.a, a.b - b.b, a.c1 - b.c1, a.c2 - b.c2])).max())
        sym = build_symplectic(ch)
        orth = max(orth, np.abs(sym @ sym.T - np.eye(8)).max())
    _record(6, worst < 1e-12 and orth < 1e-12, f"max entry gap {worst:.1e}, max |S S^T - I| {orth:.1e}")


def test_criterion_7_physicality():
    nu_min = 2.0
    for n in (1, 2, 3):
        for row in run_sweep(preset_figure(n)):
            cm = apply_channel(row.s, LossyChannelPair(1.0, row.theta2))
            nu_min = min(nu_min, symplectic_eigenvalues(cm)[0])
    vac = gaussian_coherence(CovarianceMatrix2Mode(1.0, 1.0, 0.0, 0.0))
    thermal = max(
        abs(gaussian_coherence(CovarianceMatrix2Mode(t, 1.0, 0.0, 0.0))) for t in np.linspace(1.0, 50.0, 200)
    )
    ok = nu_min >= 1 - 1e-12 and vac == 0.0 and thermal < 1e-10
    _record(7, ok, f"min nu_- {nu_min:.15f}, C(vac)={vac}, max C(thermal x vac)={thermal:.1e}")


def test_criterion_8_figure_shapes():
    checks = {}
    fig1 = {k: np.array([r.coherence_bits for r in v]) for k, v in curves(run_sweep(preset_figure(1)), "omega2").items()}
    checks["fig1 monotone"] = all((np.diff(c) > 0).all() for c in fig1.values())
    checks["fig1 order"] = bool((fig1[0.8] >= fig1[1.0]).all() and (fig1[1.0] >= fig1[1.2]).all())
    fig2 = {k: np.array([r.coherence_bits for r in v]) for k, v in curves(run_sweep(preset_figure(2)), "sigma").items()}
    checks["fig2 order"] = bool((fig2[1.2] >= fig2[1.0]).all() and (fig2[1.0] >= fig2[0.8]).all())
    fig3 = {k: np.array([r.coherence_bits for r in v]) for k, v in curves(run_sweep(preset_figure(3)), "omega2").items()}
    checks["fig3 order"] = bool((fig3[0.8] >= fig3[1.0]).all() and (fig3[1.0] >= fig3[1.2]).all())
    h_star = zero_shift_height(EARTH)
    fig4_ok = True
    for rows in curves(run_sweep(preset_figure(4)), "omega2").values():
        hs = np.array([r.h_m for r in rows])
        mu = np.array([r.mu for r in rows])
        fig4_ok &= bool((mu[(hs > 0) & (hs < h_star)] > 0).all() and (np.diff(mu[hs > h_star]) < 0).all())
    checks["fig4 mu"] = fig4_ok
    bad = [k for k, v in checks.items() if not v]
    _record(8, not bad, "all shape checks hold" if not bad else f"failed: {bad}")


def test_criterion_9_determinism():
    cmd = [sys.executable, "-m", "satcoherence", "--preset", "fig3"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    parallel = subprocess.run(cmd + ["--workers", "4"], capture_output=True, check=True).stdout
    spec = preset_figure(2)
    same_rows = run_sweep(spec, workers=1) == run_sweep(spec, workers=4)
    ok = first == second == parallel and same_rows and len(first) > 0
    _record(9, ok, f"fig3 CSV {len(first)} bytes identical across 2 serial runs and 1 parallel run; fig2 rows equal: {same_rows}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
