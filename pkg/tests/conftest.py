import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from finram import category_from_pool, chain, clique, empty_graph, path_graph


@pytest.fixture(scope="session")
def chains_cat():
    return category_from_pool({f"c{i}": chain(i) for i in range(1, 7)})


@pytest.fixture(scope="session")
def graphs_cat():
    return category_from_pool({
        "e1": empty_graph(1),
        "e2": empty_graph(2),
        "k2": clique(2),
        "p3": path_graph(3),
        "k3": clique(3),
    })
