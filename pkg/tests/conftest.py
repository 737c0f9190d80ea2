import pytest

from tropmod.graphs import complete_graph, parse_graph


@pytest.fixture
def gamma_tilde():
    return parse_graph("n=5;edges=2-3,2-4,2-5,3-4")


@pytest.fixture
def k22():
    return parse_graph("n=5;edges=2-3,2-4,3-5,4-5")


@pytest.fixture
def k4():
    return complete_graph(5)


@pytest.fixture
def k3():
    return complete_graph(4)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
