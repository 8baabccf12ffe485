import struct

import pytest

from densescan import ChainLayer, Kernel, build_chain

ACCEPTANCE_LINES: list = []


def record_criterion(number: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"criterion {number:>2} [{'PASS' if ok else 'FAIL'}] {title}"
    if detail:
        line += f" -- {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def bits(x):
    """Nested structure with floats replaced by their IEEE-754 byte patterns."""
    if isinstance(x, float):
        return struct.pack("<d", x)
    if isinstance(x, (tuple, list)):
        return tuple(bits(v) for v in x)
    return x


def sum2():
    return Kernel(2, lambda w: w[0] + w[1], "sum2")


def max2():
    return Kernel(2, max, "max2")


@pytest.fixture
def sum_max_chain():
    """The running example: sum of two neighbours, then max-pooling by 2 (B = 3)."""
    return build_chain([ChainLayer(sum2(), max2())], 0)


@pytest.fixture
def two_layer_chain():
    """c = (2, 1), k = (2, 2), so B = 5 and k_L* = 4; kernels record their inputs."""
    pair = Kernel(2, lambda w: (w[0], w[1]), "pair")
    one = Kernel(1, lambda w: ("id", w[0]), "id")
    return build_chain([ChainLayer(pair, Kernel(2, lambda w: ("g1",) + w, "g1")), ChainLayer(one, Kernel(2, lambda w: ("g2",) + w, "g2"))], "z")
