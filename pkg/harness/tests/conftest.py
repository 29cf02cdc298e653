import subprocess
import sys

import pytest


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "criterion(name): acceptance criterion with a printed verdict"
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call":
        return
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    reporter = item.config.pluginmanager.get_plugin("terminalreporter")
    if reporter is None:
        return
    verdict = "PASS" if report.passed else "FAIL"
    reporter.write_line(f"[{verdict}] {marker.args[0]}")


def emit(out_path, family, distance, m, rounds="auto", p_cnot=0.0, p_swap=0.0, p_idle=0.0):
    """Produce a circuit file through the upstream scheduler's CLI. The
    file is the only thing that crosses the package boundary."""
    subprocess.run(
        [
            sys.executable, "-m", "qecsched.cli", "emit",
            "--family", family,
            "--distance", str(distance),
            "--m", str(m),
            "--rounds", str(rounds),
            "--p-cnot", str(p_cnot),
            "--p-swap", str(p_swap),
            "--p-idle", str(p_idle),
            "-o", str(out_path),
        ],
        check=True,
        capture_output=True,
    )
    return out_path


STANDARD = {"p_cnot": 1e-3, "p_swap": 1e-3, "p_idle": 1e-5}


@pytest.fixture(scope="session")
def small_files(tmp_path_factory):
    root = tmp_path_factory.mktemp("small")
    return {
        "noiseless": emit(root / "noiseless.stim", "surface", 3, 2, rounds=1),
        "standard": emit(root / "surface_d3_m12.stim", "surface", 3, 12, **STANDARD),
        "idledom": emit(
            root / "surface_d3_m1.stim", "surface", 3, 1,
            p_cnot=1e-3, p_swap=1e-3, p_idle=1e-3,
        ),
    }


@pytest.fixture(scope="session")
def idle_d7_files(tmp_path_factory):
    root = tmp_path_factory.mktemp("idle_d7")
    return {
        m: emit(root / f"idle_d7_m{m}.stim", "surface", 7, m, p_idle=1e-3)
        for m in (1, 27)
    }


@pytest.fixture(scope="session")
def cnot_d7_files(tmp_path_factory):
    root = tmp_path_factory.mktemp("cnot_d7")
    return {
        m: emit(root / f"cnot_d7_m{m}.stim", "surface", 7, m, p_cnot=1e-3)
        for m in (1, 7, 14, 27)
    }


@pytest.fixture(scope="session")
def budget_d5_file(tmp_path_factory):
    root = tmp_path_factory.mktemp("budget")
    return emit(root / "surface_d5_m20.stim", "surface", 5, 20, **STANDARD)
