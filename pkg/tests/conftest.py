from __future__ import annotations

import os
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from crnacr import Network, PowerLawKinetics, Signomial

FIXTURES = Path(__file__).parent / "fixtures"

# reproducible property runs by default; HYPOTHESIS_PROFILE=explore searches afresh
settings.register_profile("repo", derandomize=True, print_blob=True)
settings.register_profile("explore", max_examples=1000, print_blob=True)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repo"))


def running_example() -> Network:
    return Network.from_dicts([
        ("R1", {"X1": 1, "X2": 1, "X3": 1}, {"X3": 1}),
        ("R2", {"X1": 3, "X2": 1}, {"X1": 2}),
        ("R3", {"X1": 3, "X2": 1}, {"X1": 4, "X2": 2}),
        ("R4", {"X1": 3}, {"X1": 4, "X2": 1}),
    ], species=["X1", "X2", "X3"])


RUNNING_F = [[0, 0, 2], [1, 1, 0], [1, 1, 0], [1, 0, 0]]


def counterexample() -> Network:
    return Network.from_dicts([
        ("R1", {"B": 1}, {"A": 1}),
        ("R2", {"A": 2, "B": 1}, {"A": 3}),
        ("R3", {"A": 3, "B": 1}, {"A": 2, "B": 2}),
        ("R4", {"A": 4, "B": 1}, {"A": 3, "B": 2}),
    ], species=["A", "B"])


def counterexample_kinetics(p, r, q: float = 1.0) -> PowerLawKinetics:
    return PowerLawKinetics([[pi, q] for pi in p], r)


def stable_acr_network() -> Network:
    return Network.from_dicts([
        ("R1", {"B": 1}, {"A": 1}),
        ("R2", {"A": 2, "B": 1}, {"A": 1, "B": 2}),
    ], species=["A", "B"])


def one_alt_c() -> Network:
    return Network.from_dicts([
        ("R1", {"B": 1, "C": 2, "E": 2}, {"A": 1, "B": 2, "C": 3, "E": 1}),
        ("R2", {"A": 2, "B": 2, "C": 1, "D": 2, "E": 1}, {"A": 1, "B": 1, "D": 2, "E": 2}),
        ("R3", {"A": 1, "C": 3, "D": 1, "E": 2}, {"A": 2, "B": 1, "C": 4, "D": 1, "E": 1}),
        ("R4", {"A": 3, "B": 3, "C": 1, "E": 1}, {"A": 2, "B": 2, "E": 2}),
    ], species=["A", "B", "C", "D", "E"])


def two_alt() -> Network:
    return Network.from_dicts([
        ("R1", {"X": 2, "Y": 2}, {"Y": 1}),
        ("R2", {"X": 3, "Y": 1}, {"X": 5, "Y": 2}),
        ("R3", {"X": 4, "Y": 2, "Z": 1}, {"Z": 1}),
        ("R4", {"X": 4, "Y": 2, "Z": 2}, {"X": 2, "Y": 1, "Z": 2}),
    ], species=["X", "Y", "Z"])


def reversible() -> Network:
    return Network.from_dicts([("R1", {"A": 1}, {"B": 1}), ("R2", {"B": 1}, {"A": 1})], species=["A", "B"])


@st.composite
def networks(draw, max_species: int = 4, max_reactions: int = 6, max_coeff: int = 3):
    """Random well-formed networks with small integer stoichiometry."""
    m = draw(st.integers(1, max_species))
    names = [f"S{i}" for i in range(m)]
    cx = st.lists(st.integers(0, max_coeff), min_size=m, max_size=m)
    r = draw(st.integers(1, max_reactions))
    reactions = []
    for q in range(r):
        a = draw(cx)
        b = draw(cx.filter(lambda v, a=a: v != a))
        reactions.append((f"R{q}", {names[i]: c for i, c in enumerate(a) if c},
                          {names[i]: c for i, c in enumerate(b) if c}))
    used = {s for _, lhs, rhs in reactions for s in list(lhs) + list(rhs)}
    return Network.from_dicts(reactions, species=[s for s in names if s in used])


@st.composite
def networks_with_kinetics(draw, **kwargs):
    net = draw(networks(**kwargs))
    order = st.floats(-3, 3, allow_nan=False).map(lambda x: round(x, 3))
    F = np.array([[draw(order) for _ in range(net.m)] for _ in range(net.r)])
    k = np.array([draw(st.floats(0.1, 10)) for _ in range(net.r)])
    return net, PowerLawKinetics(F, k)


def scan_sign_changes(s: Signomial, lo: float = -60.0, hi: float = 60.0, points: int = 1_000_000) -> int:
    """Sign changes of s(e^u) on a uniform u grid, evaluated without overflow."""
    u = np.linspace(lo, hi, points)
    c = np.array(s.coefficients)
    p = np.array(s.exponents)
    E = np.outer(u, p)
    vals = (c[None, :] * np.exp(E - E.max(axis=1, keepdims=True))).sum(axis=1)
    sg = np.sign(vals)
    sg = sg[sg != 0]
    return int(np.count_nonzero(sg[1:] != sg[:-1]))


# (number, title, passed) triples appended by test_acceptance.py
ACCEPTANCE_RESULTS: list[tuple[int, str, bool]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {title}")


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES
