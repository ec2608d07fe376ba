"""Shared fixtures.

Full-budget oracle runs are expensive (a few seconds each), and the
acceptance tests need the same runs the algorithm tests sample from, so a
session-scoped cache hands out (RunResult, approximation error) pairs keyed
by algorithm, problem, guidance flag, seed, and noise level.
"""

import numpy as np
import pytest

from iemo.algorithms import RunConfig, run
from iemo.dm import DMOracle
from iemo.problems import golden_point, make_problem
from iemo.stats import approx_error


@pytest.fixture(scope="session")
def oracle_runs():
    cache = {}

    def get(algorithm, problem, interactive=True, seed=0, kappa=None):
        key = (algorithm, problem, interactive, seed, kappa)
        if key not in cache:
            spec = make_problem(problem, m=3)
            oracle = DMOracle(w_star=np.ones(3), kappa=kappa, seed=900 + seed)
            cfg = RunConfig(algorithm=algorithm, problem=spec, N=100,
                            interactive=interactive, seed=seed)
            res = run(cfg, oracle)
            err = approx_error(res.final_population,
                               golden_point(spec, oracle.w_star))
            cache[key] = (res, float(err))
        return cache[key]

    return get
