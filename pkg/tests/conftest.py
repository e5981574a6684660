import pytest

from portfolio_contagion.balance import build_uniform_system
from portfolio_contagion.network import BipartiteNetwork

# Four banks, three assets, six links: bank degrees 1, 2, 2, 1, asset degrees 2, 2, 2.
FIG1_LINKS = [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (3, 2)]


@pytest.fixture
def fig1_net():
    return BipartiteNetwork.from_links(4, 3, FIG1_LINKS)


@pytest.fixture
def two_bank_system():
    """Two degree-1 banks sharing one asset, leverage 20."""
    net = BipartiteNetwork.from_links(2, 1, [(0, 0), (1, 0)])
    return build_uniform_system(net, leverage=20.0)
