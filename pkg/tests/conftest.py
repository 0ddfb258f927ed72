import json
import sys
import pathlib

import pytest

from oddred import kernels

GOLDEN = pathlib.Path(__file__).parent / "golden"

_BACKENDS = ["python"] + (["cython"] if kernels.compiled_backend is not None else [])


@pytest.fixture(params=_BACKENDS)
def backend(request):
    return kernels.python_backend if request.param == "python" else kernels.compiled_backend


@pytest.fixture(scope="session")
def derived():
    return json.loads((GOLDEN / "derived.json").read_text())


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for line in results.values():
            terminalreporter.write_line(line)
