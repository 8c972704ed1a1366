import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qbplab.data import Dataset  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def make_dataset(rng, n=120, r=4, shift=0.0, n_cases=None):
    """Gaussian features with an optional mean shift for the cases."""
    n_cases = n // 2 if n_cases is None else n_cases
    y = np.r_[np.ones(n_cases, dtype=int), np.zeros(n - n_cases, dtype=int)]
    x = rng.standard_normal((n, r)) + shift * y[:, None]
    return Dataset(x, y, tuple(f"m{k}" for k in range(r)))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "REPORT", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines.values()):
            terminalreporter.write_line(line)
