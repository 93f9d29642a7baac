import numpy as np


def overlap_modulus(a, b):
    """|<a|b>| for two RepStates over the same basis."""
    return abs(np.vdot(a.amplitudes, b.amplitudes))


ACCEPTANCE_LINES = []


def record_criterion(name, passed, detail):
    line = f"{'PASS' if passed else 'FAIL'} {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
