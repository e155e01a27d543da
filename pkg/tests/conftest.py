import csv
import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ORACLE_CSV = Path(__file__).parent / "oracles" / "oracle_constants.csv"


def load_oracle() -> dict:
    with ORACLE_CSV.open() as fh:
        return {row["quantity"]: (float(row["value"]), float(row["tolerance"])) for row in csv.DictReader(fh)}


@pytest.fixture(scope="session")
def oracle():
    return load_oracle()


def random_gaussian(n: int, seed: int, thermal_max: float = 0.0):
    """Random Gaussian state: symplectic image of a (possibly thermal) diagonal state."""
    from cvur.states import GaussianState
    from cvur.symplectic import random_symplectic

    rng = np.random.default_rng(seed)
    nu = 0.5 + rng.uniform(0, thermal_max, n)
    S = random_symplectic(n, seed=seed)
    cov = S @ np.diag(np.concatenate([nu, nu])) @ S.T
    return GaussianState(rng.normal(size=2 * n), cov)


LN_PI_E = math.log(math.pi * math.e)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("tests.test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
