import os

import pytest
from hypothesis import HealthCheck, settings

import ldlc._kernels as kernels

settings.register_profile("ldlc", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ldlc"))

KERNEL_NAMES = ("rref_inplace", "min_weight_coset", "poly_mul", "rank_batch")


@pytest.fixture(params=sorted(kernels.backends()))
def backend(request, monkeypatch):
    """Run the test once per importable kernel backend."""
    mod = kernels.backends()[request.param]
    for name in KERNEL_NAMES:
        monkeypatch.setattr(kernels, name, getattr(mod, name))
    return request.param


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(20261015)


# --------------------------------------------------------------------------
# acceptance report: one PASS/FAIL line per criterion

_criteria: dict = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    cid, title = mark.args
    entry = _criteria.setdefault(cid, {"title": title, "failed": [], "ran": 0})
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        entry["ran"] += 1
        if rep.outcome != "passed":
            entry["failed"].append(item.name)


def _key(cid):
    digits = "".join(c for c in cid if c.isdigit())
    return int(digits or 0), cid


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_criteria, key=_key):
        e = _criteria[cid]
        status = "PASS" if e["ran"] and not e["failed"] else "FAIL"
        tail = f"  [failing: {', '.join(e['failed'])}]" if e["failed"] else ""
        terminalreporter.write_line(f"{status} {cid}: {e['title']}{tail}")
