import pytest

from nilcsp import Engine, desugar, parse, parse_expression

VMS_SRC = "VMS = coin -> choc -> coin -> choc -> STOP\n"
STOP_SRC = "S = mu X . nil -> X\n"
VMONE_SRC = "VMONE = coin -> (choc -> SKIP | toffee -> SKIP)\n"


@pytest.fixture
def engine():
    return Engine()


def expr(text, defs=None):
    """Parse and desugar a standalone expression (test helper)."""
    return desugar(parse_expression(text, defs))


@pytest.fixture
def vms():
    """Desugared definitions for the two-chocolate vending machine."""
    return parse(VMS_SRC).definitions.desugared()


@pytest.fixture
def vmone():
    return parse(VMONE_SRC).definitions.desugared()
