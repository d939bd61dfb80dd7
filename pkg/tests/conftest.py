import pytest

from extforge.f2linalg import backend_name, warmup


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # compile the numba kernels once so timed tests measure computation only
    warmup()
    yield


def pytest_report_header(config):
    return "extforge GF(2) backend: %s" % backend_name()


def pytest_runtest_logreport(report):
    if report.when != "call" or "acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    status = "PASS" if report.passed else ("FAIL" if report.failed else "SKIP")
    print("\n[%s] %s" % (status, name))
