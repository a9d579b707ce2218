import random
from pathlib import Path

import pytest

from windmills.complex import build_standard_complex, parse_complex
from windmills.corpus import PermRep, affine_rep, random_involution, random_perm, solve_last_letter
from windmills.corpus import _compose, _invert
from windmills.words import parse_presentation

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load_pres(name):
    return parse_presentation((FIXTURES / f"{name}.pres").read_text())


def load_standard(name):
    return build_standard_complex(load_pres(name))


def load_cx(name):
    text = (FIXTURES / f"{name}.cx").read_text()
    return parse_complex(text), text


def std(text):
    p = parse_presentation(text)
    return p, build_standard_complex(p)


def group_reps(name, seed=1):
    """Permutation representations used to filter trivial-word searches."""
    if name == "F2":
        return [affine_rep(p, [(1, 1), (pow(2, -1, p), 0)]) for p in (7, 11, 13, 17, 19)]
    rng = random.Random(seed)
    reps = []
    for n in (6, 8, 10, 12, 14):
        a, t = random_perm(n, rng), random_perm(n, rng)
        if name == "F4":
            b = solve_last_letter(_compose(_compose(t, a), t), random_involution(n, rng))
        elif name == "F1":
            b = _compose(_compose(t, a), _invert(t))
        else:
            raise KeyError(name)
        reps.append(PermRep((a, b, t)))
    return reps


@pytest.fixture
def F2():
    return load_standard("F2")


@pytest.fixture
def F4():
    return load_standard("F4")


@pytest.fixture
def F1():
    return load_standard("F1")


ACCEPTANCE_LINES: list[str] = []


def record_criterion(number, ok, seconds, limit, detail=""):
    """Collect one pass/fail line; printed in the terminal summary."""
    status = "PASS" if ok else "FAIL"
    line = f"criterion {number:>2}: {status}  {seconds:7.2f}s (limit {limit}s)"
    ACCEPTANCE_LINES.append(line + (f"  {detail}" if detail else ""))
    print(ACCEPTANCE_LINES[-1])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
