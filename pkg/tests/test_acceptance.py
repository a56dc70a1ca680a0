"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line."""

import math
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
import sympy
from hypothesis import given, settings

from crnacr import (
    AcrCensus,
    AcrStatus,
    Arrow,
    KineticsClass,
    PowerLawKinetics,
    Signomial,
    acr_analysis,
    acr_candidate_species,
    acr_upper_bound,
    arrow_diagram,
    classify,
    complex_matrix,
    descartes_positive_root_count,
    embed_one_species,
    equilibria_variation,
    evaluate_cfrf,
    evaluate_sfrf,
    format_network,
    homogeneous_pl_quotient,
    incidence_matrix,
    is_admissible_diagram,
    mak_kinetics,
    multistationarity_probe,
    parse,
    pff_equivalent,
    positive_roots,
    reduce_to_signomial,
    stable_acr_criterion,
    stoich_basis,
    stoichiometric_matrix,
    structural_report,
    subnetwork_variation,
)
from crnacr.crnfile import Directives
from crnacr.signomial import sign_changes

from conftest import (
    ACCEPTANCE_RESULTS,
    FIXTURES,
    RUNNING_F,
    counterexample,
    counterexample_kinetics,
    networks_with_kinetics,
    one_alt_c,
    reversible,
    running_example,
    scan_sign_changes,
    stable_acr_network,
    two_alt,
)

R, L, BOTH = Arrow.RIGHT, Arrow.LEFT, Arrow.BOTH
SQRT5 = math.sqrt(5)


@contextmanager
def criterion(number: int, title: str):
    passed = False
    try:
        yield
        passed = True
    finally:
        ACCEPTANCE_RESULTS.append((number, title, passed))
        print(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {title}")


def test_criterion_1_running_example_structure():
    with criterion(1, "Running Example structural suite and PL-RDK classification"):
        net = running_example()
        rep = structural_report(net)
        assert (rep.m, rep.n, rep.n_r, rep.r, rep.l, rep.delta, rep.s) == (3, 7, 3, 4, 3, 3, 1)
        assert rep.weakly_reversible is False
        assert rep.t_minimal is False
        K = PowerLawKinetics(RUNNING_F, [1, 1, 1, 1])
        assert classify(net, K) is KineticsClass.PL_RDK


def test_criterion_2_arrow_diagrams():
    with criterion(2, "arrow diagrams (<->) and (->, ->, <-, <-), both admissible"):
        # removing A from {B -> A, 2A + B -> A + 2B} leaves the embedding in B
        d1 = arrow_diagram(embed_one_species(stable_acr_network(), "B"))
        assert d1.symbols == (BOTH,)
        d2 = arrow_diagram(embed_one_species(counterexample(), "A"))
        assert d2.symbols == (R, R, L, L)
        assert is_admissible_diagram(d1) and is_admissible_diagram(d2)


def test_criterion_3_counterexample():
    with criterion(3, "counterexample signomial 4 - 2A - 3A^2 + A^3, roots {1, 1+sqrt5}, NOT_ACR"):
        net = counterexample()
        K = counterexample_kinetics([0, 3, 1, 2], [4, 1, 2, 3])
        s, _ = reduce_to_signomial(net, K, "A")
        assert s.terms == ((4.0, 0.0), (-2.0, 1.0), (-3.0, 2.0), (1.0, 3.0))
        roots = positive_roots(s)
        assert len(roots) == 2
        assert abs(roots[0] - 1) <= 1e-9 and abs(roots[1] - (1 + SQRT5)) <= 1e-9
        assert acr_analysis(net, K, "A").status is AcrStatus.NOT_ACR


def _increasing_exponents(rng, integer: bool) -> np.ndarray:
    while True:
        p = np.sort(rng.integers(-3, 8, size=4)).astype(float) if integer else np.sort(rng.uniform(-4, 6, size=4))
        if np.min(np.diff(p)) >= 0.25:
            return p


def test_criterion_4_one_sign_change_gives_acr():
    with criterion(4, "200 instances with p1<p2<p3<p4: one root, ACR, scan oracle agrees"):
        rng = np.random.default_rng(2024)
        net = counterexample()
        disagreements = 0
        for i in range(200):
            p = _increasing_exponents(rng, integer=i % 2 == 0)
            r = rng.uniform(0.1, 10, size=4)
            K = counterexample_kinetics(p, r, q=float(rng.uniform(0.5, 2)))
            s, _ = reduce_to_signomial(net, K, "A")
            assert sign_changes(s.coefficients) == 1
            assert descartes_positive_root_count(s) == (1, True)
            roots = positive_roots(s)
            assert len(roots) == 1
            assert acr_analysis(net, K, "A").status is AcrStatus.ACR
            disagreements += scan_sign_changes(s, points=200_000) != len(roots)
        assert disagreements == 0


def test_criterion_5_quotient_invariance():
    with criterion(5, "criterion witness A; 50 homogeneous quotients keep verdicts and roots"):
        net = stable_acr_network()
        base_K = mak_kinetics(net)
        verdicts = {v.species: v.status for v in stable_acr_criterion(net, base_K)}
        assert verdicts["A"] is AcrStatus.ACR
        rng = np.random.default_rng(5)
        for _ in range(50):
            K = mak_kinetics(net, rng.uniform(0.1, 10, size=net.r))
            Q = homogeneous_pl_quotient(net, K, rng.uniform(-2, 2, size=net.m))
            assert pff_equivalent(K, Q)
            assert ([(v.species, v.status) for v in stable_acr_criterion(net, Q)]
                    == [(v.species, v.status) for v in stable_acr_criterion(net, K)])
            a, b = acr_analysis(net, K, "A"), acr_analysis(net, Q, "A")
            assert a.status is b.status is AcrStatus.ACR
            ra, rb = a.evidence["roots"], b.evidence["roots"]
            assert len(ra) == len(rb) == 1
            assert all(abs(x - y) <= 1e-9 for x, y in zip(ra, rb))


def test_criterion_6_necessary_conditions_and_probe():
    with criterion(6, "candidates {D} and {Z}, upper bound 1; probe finds 2 and 1 equilibria"):
        assert acr_candidate_species(one_alt_c()) == ["D"]
        assert acr_candidate_species(two_alt()) == ["Z"]
        assert acr_upper_bound(one_alt_c()) == acr_upper_bound(two_alt()) == 1
        net = counterexample()
        K = counterexample_kinetics([0, 3, 1, 2], [4, 1, 2, 3])
        six = multistationarity_probe(net, K, [3, 3])
        assert six.count == 2
        # on A + B = 6 the equilibria sit at A = 1 and A = 1 + sqrt5
        for (a, b), (ea, eb) in zip(sorted(six.equilibria), [(1.0, 5.0), (1 + SQRT5, 5 - SQRT5)]):
            assert abs(a - ea) <= 1e-9 and abs(b - eb) <= 1e-9
        two = multistationarity_probe(net, K, [1, 1])
        assert two.count == 1
        (a, b), = two.equilibria
        assert abs(a - 1) <= 1e-9 and abs(b - 1) <= 1e-9


def test_criterion_7_variation_arithmetic():
    with criterion(7, "variation (20,8)=0.60, (13,8)=5/13 embedded 0.60, exhaustive identity and gap to m=30"):
        assert equilibria_variation(AcrCensus.of(20, [f"X{i}" for i in range(8)])) == Fraction(3, 5)
        sv = subnetwork_variation(AcrCensus.of(13, [f"X{i}" for i in range(8)]), 20)
        assert sv.v_non_embedded == Fraction(5, 13) and sv.v_embedded == Fraction(3, 5)
        one = subnetwork_variation(AcrCensus.of(1, ["X"]), 20)
        assert one.v_non_embedded == 0 and one.v_embedded == Fraction(19, 20)
        violations = 0
        for m in range(1, 31):
            for m_sub in range(1, m + 1):
                for k in range(m_sub + 1):
                    s = subnetwork_variation(AcrCensus.of(m_sub, [f"X{i}" for i in range(k)]), m)
                    violations += not (s.identity_holds and s.gap_bound_holds)
        assert violations == 0


def test_criterion_8_complex_balance():
    with criterion(8, "deficiency-zero A<->B equilibrium has g = 0; Running Example has f = 0, g != 0"):
        net = reversible()
        rep = structural_report(net)
        assert rep.delta == 0 and rep.weakly_reversible
        rng = np.random.default_rng(8)
        for _ in range(20):
            k = rng.uniform(0.1, 10, size=2)
            total = rng.uniform(0.1, 10)
            # k1 A = k2 B on A + B = total
            a = k[1] * total / (k[0] + k[1])
            x = np.array([a, total - a])
            K = mak_kinetics(net, k)
            assert np.max(np.abs(evaluate_cfrf(net, K, x))) <= 1e-12
        run = running_example()
        K = PowerLawKinetics(RUNNING_F, [1, 1, 1, 1])
        ones = np.ones(3)
        assert structural_report(run).delta == 3
        assert np.max(np.abs(evaluate_sfrf(run, K, ones))) == 0
        assert np.max(np.abs(evaluate_cfrf(run, K, ones))) > 0


# -- criterion 9: property suites ---------------------------------------------------------

@settings(max_examples=200, deadline=None)
@given(networks_with_kinetics())
def _structure_properties(nk):
    net, K = nk
    Ia = incidence_matrix(net)
    for col in Ia.T:
        assert sorted(col[col != 0].tolist()) == [-1, 1]
    Y = complex_matrix(net)
    assert (np.array(Y, dtype=object).dot(Ia) == stoichiometric_matrix(net)).all()
    assert structural_report(net).delta >= 0
    basis = stoich_basis(net)
    x = np.linspace(0.5, 2.0, net.m)
    f = evaluate_sfrf(net, K, x)
    if basis:
        B = np.array(basis, dtype=float)
        coeff, *_ = np.linalg.lstsq(B.T, f, rcond=None)
        assert np.allclose(B.T @ coeff, f, atol=1e-9 * max(1.0, np.max(np.abs(f))))
    else:
        assert np.allclose(f, 0)


@settings(max_examples=200, deadline=None)
@given(networks_with_kinetics())
def _round_trip_property(nk):
    net, K = nk
    pf = parse(format_network(net, K, Directives()))
    text = format_network(pf.network, pf.kinetics, pf.directives)
    again = parse(text)
    assert format_network(again.network, again.kinetics, again.directives) == text


def _descartes_vs_polynomial_roots(count: int = 1000):
    rng = np.random.default_rng(9)
    x = sympy.Symbol("x")
    for _ in range(count):
        degree = int(rng.integers(1, 7))
        coeffs = [int(c) for c in rng.integers(-6, 7, size=degree + 1)]
        coeffs[0] = coeffs[0] or 1
        coeffs[-1] = coeffs[-1] or -1
        s = Signomial.from_terms([(c, i) for i, c in enumerate(coeffs) if c])
        exact = [r for r in sympy.real_roots(sympy.Poly(list(reversed(coeffs)), x)) if r > 0]
        changes, is_exact = descartes_positive_root_count(s)
        assert changes >= len(exact) and (changes - len(exact)) % 2 == 0
        if is_exact:
            assert changes == len(exact)


def test_criterion_9_property_suites():
    with criterion(9, "incidence, N = Y I_a, delta >= 0, f in S, Descartes vs exact roots, round trip"):
        _structure_properties()
        _descartes_vs_polynomial_roots()
        _round_trip_property()
        for path in sorted(FIXTURES.glob("*.crn")):
            pf = parse(path.read_text())
            text = format_network(pf.network, pf.kinetics, pf.directives)
            again = parse(text)
            assert format_network(again.network, again.kinetics, again.directives) == text
