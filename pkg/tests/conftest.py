import numpy as np
import pytest

from gbs_dks import erdos_renyi, get_weight_table, planted_instance

# Instance pins shared between unit and acceptance tests.  The sampler
# fidelity graph (n=12) was chosen for a weight table small enough that the
# stated sample budgets resolve it cleanly; the planted seed is one where
# min-degree peeling misses the planted part, as the optimizer comparison
# requires.
FIDELITY_GRAPH_SEED = 208
PLANTED_SEED = 6


@pytest.fixture(scope="session")
def er12():
    return erdos_renyi(12, 0.5, FIDELITY_GRAPH_SEED)


@pytest.fixture(scope="session")
def planted():
    g, subset = planted_instance(PLANTED_SEED)
    return g, subset


@pytest.fixture(scope="session")
def planted_table(planted):
    g, _ = planted
    return get_weight_table(g, 10)


@pytest.fixture()
def rng():
    return np.random.default_rng(0)
