"""ACR analysis for rank-one kinetic systems."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from .errors import InapplicableError, NumericFailure
from .kinetics import (
    KineticsClass,
    PowerLawKinetics,
    classify,
    is_homogeneous_quotient_of_mak,
    mak_kinetics,
)
from .network import Network, is_co_conservative, rank_one_direction
from .signomial import Signomial, descartes_positive_root_count, positive_roots


class Arrow(enum.Enum):
    RIGHT = "->"
    LEFT = "<-"
    BOTH = "<->"


class AcrStatus(enum.Enum):
    ACR = "ACR"
    NOT_ACR = "NOT_ACR"
    CRITERION_SATISFIED = "CRITERION_SATISFIED"
    CRITERION_FAILED = "CRITERION_FAILED"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class OneSpeciesEmbedding:
    species: str
    levels: tuple[Fraction, ...]
    arcs: tuple[tuple[Fraction, Fraction], ...]

    def is_empty(self) -> bool:
        return not self.arcs


@dataclass(frozen=True)
class ArrowDiagram:
    symbols: tuple[Arrow, ...]

    def __len__(self) -> int:
        return len(self.symbols)

    def __str__(self) -> str:
        return "(" + ", ".join(a.value for a in self.symbols) + ")"


@dataclass(frozen=True)
class AcrVerdict:
    species: str
    status: AcrStatus
    evidence: dict[str, Any] = field(default_factory=dict)


def embed_one_species(net: Network, species) -> OneSpeciesEmbedding:
    """Project every reaction onto ``species`` alone, dropping arcs a -> a."""
    j = net.species_index(species)
    arcs = set()
    for rx in net.reactions:
        a, b = rx.reactant[j], rx.product[j]
        if a != b:
            arcs.add((a, b))
    arcs_sorted = tuple(sorted(arcs))
    levels = tuple(sorted({a for a, _ in arcs_sorted}))
    return OneSpeciesEmbedding(net.species[j].name, levels, arcs_sorted)


def arrow_diagram(e: OneSpeciesEmbedding) -> ArrowDiagram:
    if e.is_empty():
        raise ValueError(f"embedding in {e.species} has no nontrivial reactions")
    symbols = []
    for level in e.levels:
        targets = [b for a, b in e.arcs if a == level]
        if all(b > level for b in targets):
            symbols.append(Arrow.RIGHT)
        elif all(b < level for b in targets):
            symbols.append(Arrow.LEFT)
        else:
            symbols.append(Arrow.BOTH)
    return ArrowDiagram(tuple(symbols))


def is_admissible_diagram(d: ArrowDiagram) -> bool:
    """Whether ``d`` reads RIGHT* BOTH? LEFT*, needing both RIGHT and LEFT if BOTH is absent."""
    syms = list(d.symbols)
    a = 0
    while a < len(syms) and syms[a] is Arrow.RIGHT:
        a += 1
    b = 1 if a < len(syms) and syms[a] is Arrow.BOTH else 0
    rest = syms[a + b:]
    if any(s is not Arrow.LEFT for s in rest):
        return False
    c = len(rest)
    return b == 1 or (a >= 1 and c >= 1)


def reactants_differ_only_in(net: Network, species) -> bool:
    j = net.species_index(species)
    reactants = [net.complexes[i] for i in net.reactant_complexes]
    base = reactants[0].vector(net.m)
    for cx in reactants[1:]:
        v = cx.vector(net.m)
        if any(v[i] != base[i] for i in range(net.m) if i != j):
            return False
    return True


def _kinetics_or_mak(net: Network, K: PowerLawKinetics | None) -> PowerLawKinetics:
    if K is None:
        return mak_kinetics(net)
    K.check_network(net)
    return K


def stable_acr_criterion(net: Network, K: PowerLawKinetics | None = None) -> list[AcrVerdict]:
    """Evaluate the rank-one arrow-diagram criterion for every species.

    Under mass action (``K`` omitted or MAK), and for homogeneous PL quotients
    of mass action, a satisfied criterion certifies stable ACR and is reported
    as ``ACR``.  For any other power-law kinetics the criterion is not
    sufficient, so only ``CRITERION_SATISFIED`` is reported.
    """
    rank_one_direction(net)
    K = _kinetics_or_mak(net, K)
    certifying = classify(net, K) is KineticsClass.MAK or is_homogeneous_quotient_of_mak(net, K)
    verdicts = []
    for sp in net.species:
        emb = embed_one_species(net, sp.index)
        evidence: dict[str, Any] = {"kinetics_certifies": certifying}
        if emb.is_empty():
            evidence["diagram"] = None
            verdicts.append(AcrVerdict(sp.name, AcrStatus.CRITERION_FAILED, evidence))
            continue
        diagram = arrow_diagram(emb)
        admissible = is_admissible_diagram(diagram)
        differ = reactants_differ_only_in(net, sp.index)
        evidence.update(diagram=str(diagram), admissible=admissible, reactants_differ_only_here=differ)
        if not (admissible and differ):
            status = AcrStatus.CRITERION_FAILED
        elif certifying:
            status = AcrStatus.ACR
        else:
            status = AcrStatus.CRITERION_SATISFIED
        verdicts.append(AcrVerdict(sp.name, status, evidence))
    return verdicts


def reduce_to_signomial(net: Network, K: PowerLawKinetics, species) -> tuple[Signomial, list[Fraction]]:
    """Reduce the steady-state equations of a rank-one system to one signomial.

    Every reaction vector equals ``c_i v`` for the basis vector ``v`` of S.
    When the kinetic order rows agree outside ``species`` (call that column
    X), ``f(x) = v * x^w * sum_i c_i k_i x_X^F[i, X]`` with a common monomial
    ``x^w``, so the positive steady states are exactly the positive roots of
    the returned signomial in ``x_X``.

    ``v`` is oriented so that ``v_X > 0`` whenever ``X`` is in its support;
    the signomial then has the sign of ``dx_X/dt``.
    """
    v = rank_one_direction(net)
    K.check_network(net)
    j = net.species_index(species)
    if v[j] < 0:
        v = [-x for x in v]
    others = np.delete(K.F, j, axis=1)
    if not np.all(others == others[0]):
        raise InapplicableError(
            f"kinetic order rows differ outside {net.species[j].name}; reactions are not pairwise SF-pairs")
    pivot = next(i for i, x in enumerate(v) if x != 0)
    terms = []
    for q in range(net.r):
        c = net.reaction_vector(q)[pivot] / v[pivot]
        terms.append((float(c) * K.k[q], K.F[q, j]))
    return Signomial.from_terms(terms), v


def acr_analysis(net: Network, K: PowerLawKinetics | None, species, tol: float = 1e-9) -> AcrVerdict:
    K = _kinetics_or_mak(net, K)
    s, v = reduce_to_signomial(net, K, species)
    name = net.species[net.species_index(species)].name
    evidence: dict[str, Any] = {"direction": {sp.name: str(x) for sp, x in zip(net.species, v)},
                               "signomial": [list(t) for t in s.terms]}
    if not s.terms:
        # every positive point is an equilibrium
        evidence["roots"] = None
        return AcrVerdict(name, AcrStatus.NOT_ACR, evidence)
    changes, exact = descartes_positive_root_count(s)
    roots = positive_roots(s, tol)
    evidence.update(sign_changes=changes, descartes_exact=exact, roots=roots)
    if exact and len(roots) != changes:
        raise NumericFailure(f"root isolation found {len(roots)} roots where the rule of signs forces {changes}")
    if len(roots) == 1:
        status = AcrStatus.ACR
    elif len(roots) >= 2:
        status = AcrStatus.NOT_ACR
    else:
        status = AcrStatus.INCONCLUSIVE
        evidence["reason"] = "no positive equilibria"
    return AcrVerdict(name, status, evidence)


def acr_candidate_species(net: Network) -> list[str]:
    """Species that may be ACR in a multistationary rank-one system: zeros of the basis vector of S."""
    v = rank_one_direction(net)
    if is_co_conservative(net):
        return []
    return [sp.name for sp, x in zip(net.species, v) if x == 0]


def acr_upper_bound(net: Network) -> int:
    """``m - |supp v|``, an upper bound on ACR species when the system is multistationary."""
    v = rank_one_direction(net)
    return net.m - sum(1 for x in v if x != 0)


@dataclass(frozen=True)
class ProbeResult:
    """Equilibria found on the line ``x0 + t v``; a lower bound on their true number."""

    equilibria: tuple[tuple[float, ...], ...]
    parameters: tuple[float, ...]
    interval: tuple[float, float]
    direction: tuple[float, ...]

    @property
    def count(self) -> int:
        return len(self.equilibria)


def _class_interval(x0: np.ndarray, v: np.ndarray) -> tuple[float, float]:
    lo, hi = -math.inf, math.inf
    for xi, vi in zip(x0, v):
        if vi > 0:
            lo = max(lo, -xi / vi)
        elif vi < 0:
            hi = min(hi, xi / -vi)
    return lo, hi


def _probe_grid(lo: float, hi: float, points: int) -> np.ndarray:
    g = np.geomspace(1e-15, 1.0, points)
    parts = [np.array([0.0])]
    for end, sign in ((hi, 1.0), (lo, -1.0)):
        if math.isinf(end):
            parts.append(sign * np.geomspace(1e-12, 1e12, points))
        else:
            parts.append(end * (1.0 - g))
            parts.append(end * np.linspace(0.0, 1.0, points, endpoint=False))
    t = np.unique(np.concatenate(parts))
    return t[(t > lo) & (t < hi)]


def multistationarity_probe(net: Network, K: PowerLawKinetics | None, x0, *, points: int = 4000) -> ProbeResult:
    """Search the stoichiometric class of ``x0`` for positive equilibria.

    Along ``x(t) = x0 + t v`` the formation rate is ``f = v h(t)`` with
    ``h(t) = sum_i c_i K_i(x(t))``.  ``h`` is sign-scanned on a grid that is
    geometrically dense near the ends of the positive interval, and each sign
    change is bisected to float precision.  Roots where ``h`` touches zero
    without changing sign can be missed, so the count is a lower bound.
    """
    K = _kinetics_or_mak(net, K)
    v_exact = rank_one_direction(net)
    v = np.array([float(x) for x in v_exact])
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    if x0.shape[0] != net.m:
        raise ValueError(f"expected {net.m} coordinates, got {x0.shape[0]}")
    if not np.all(x0 > 0):
        raise ValueError("x0 must be strictly positive")
    pivot = next(i for i, x in enumerate(v_exact) if x != 0)
    c = np.array([float(net.reaction_vector(q)[pivot] / v_exact[pivot]) for q in range(net.r)])

    def h(t: float) -> float:
        return float(c @ K.rates(x0 + t * v))

    lo, hi = _class_interval(x0, v)
    grid = _probe_grid(lo, hi, points)
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        vals = np.array([h(t) for t in grid])
    if not np.all(np.isfinite(vals)):
        keep = np.isfinite(vals)
        grid, vals = grid[keep], vals[keep]
    if grid.size == 0:
        raise NumericFailure("formation rate is not finite anywhere on the class")
    signs = np.sign(vals)
    roots = [float(t) for t, s in zip(grid, signs) if s == 0]
    for k in range(len(grid) - 1):
        if signs[k] * signs[k + 1] < 0:
            a, b, sa = grid[k], grid[k + 1], signs[k]
            for _ in range(2000):
                mid = 0.5 * (a + b)
                if mid <= a or mid >= b:
                    break
                sm = np.sign(h(mid))
                if sm == 0:
                    a = b = mid
                    break
                a, b = (mid, b) if sm == sa else (a, mid)
            roots.append(0.5 * (a + b))
    roots.sort()
    eq = tuple(tuple(float(z) for z in x0 + t * v) for t in roots)
    return ProbeResult(eq, tuple(float(t) + 0.0 for t in roots), (float(lo), float(hi)), tuple(float(z) for z in v))
