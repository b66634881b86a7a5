"""Shared fixtures: seeded RNG and random stable parameter samplers."""

from __future__ import annotations

import math

import numpy as np
import pytest

from steerkit import SystemParams


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "acceptance(label): top-level acceptance check, reported with one PASS/FAIL line",
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker and report.when == "call":
        label = marker.kwargs.get("label", item.name)
        status = "PASS" if report.passed else "FAIL"
        reporter = item.config.pluginmanager.get_plugin("terminalreporter")
        line = f"[acceptance] {label}: {status}"
        if reporter is not None:
            reporter.write_line(line)
        else:  # pragma: no cover - terminal plugin disabled
            print(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20250817)


def _sample_case1(rng, size, max_occupation=2.0, equal_occupations=True):
    """Strictly stable cavity--mirror sets with kappa == gamma_m == 1.

    The coupling is drawn at a bounded fraction of the stability limit
    ``g_m**2 < gamma * (gamma + C_a)`` so the Lyapunov solve stays well
    conditioned.
    """
    sets = []
    for _ in range(size):
        c_a = rng.uniform(0.0, 10.0)
        fraction = rng.uniform(0.01, 0.95)
        g_m = math.sqrt(fraction * (1.0 + c_a))
        gamma_a = rng.uniform(0.5, 50.0)
        n = rng.uniform(0.0, max_occupation)
        n0 = n if equal_occupations else rng.uniform(0.0, max_occupation)
        sets.append(
            SystemParams(
                kappa=1.0,
                gamma_m=1.0,
                gamma_a=gamma_a,
                g_m=g_m,
                g_a=math.sqrt(c_a * gamma_a),
                n=n,
                n0=n0,
            )
        )
    return sets


def _sample_case2(rng, size, max_occupation=2.0, equal_occupations=True):
    """Strictly stable mirror--atom sets with gamma_m == gamma_a == 1.

    Keeps ``gamma_G = gamma - (G - G_a)`` bounded away from zero.
    """
    sets = []
    for _ in range(size):
        big_g = rng.uniform(0.0, 3.0)
        big_ga = rng.uniform(max(0.0, big_g - 0.9), big_g + 3.0)
        n = rng.uniform(0.0, max_occupation)
        n0 = n if equal_occupations else rng.uniform(0.0, max_occupation)
        sets.append(
            SystemParams(
                kappa=1.0,
                gamma_m=1.0,
                gamma_a=1.0,
                g_m=math.sqrt(big_g),
                g_a=math.sqrt(big_ga),
                n=n,
                n0=n0,
            )
        )
    return sets


@pytest.fixture
def case1_sampler():
    return _sample_case1


@pytest.fixture
def case2_sampler():
    return _sample_case2
