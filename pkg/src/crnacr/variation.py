"""Equilibria variation and its bounds, including subnetwork accounting."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from . import linalg
from .errors import InapplicableError
from .kinetics import KineticsClass, PowerLawKinetics, classify
from .network import Network, stoich_basis, structural_report


class Provenance(enum.Enum):
    CRITERION = "criterion"
    ROOT_ANALYSIS = "root_analysis"
    USER = "user"
    LIFTED = "lifted"


@dataclass(frozen=True)
class AcrCensus:
    """ACR species of a system with ``m`` species, each tagged with how it was established.

    ``lower_bound`` marks a census that may be missing ACR species (for
    example one lifted from an independent decomposition).
    """

    m: int
    provenance: Mapping[str, Provenance] = field(default_factory=dict)
    lower_bound: bool = False

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("species count must be nonnegative")
        if len(self.provenance) > self.m:
            raise ValueError(f"{len(self.provenance)} ACR species exceed m = {self.m}")

    @classmethod
    def of(cls, m: int, species: Iterable[str], source: Provenance = Provenance.USER) -> AcrCensus:
        return cls(m, {s: source for s in species})

    @property
    def acr_species(self) -> frozenset[str]:
        return frozenset(self.provenance)

    @property
    def m_acr(self) -> int:
        return len(self.provenance)


def equilibria_variation(census: AcrCensus) -> Fraction:
    """``(m - m_ACR) / m``: the share of species that are not ACR."""
    if census.m == 0:
        raise ValueError("equilibria variation is undefined for m = 0")
    return Fraction(census.m - census.m_acr, census.m)


@dataclass(frozen=True)
class Bound:
    kind: str
    value: Fraction
    source: str


@dataclass(frozen=True)
class VariationReport:
    m: int
    v_plus: Fraction | None
    bounds: tuple[Bound, ...]

    def violations(self) -> list[Bound]:
        """Lower bounds exceeding the computed variation; nonempty means inconsistent inputs."""
        if self.v_plus is None:
            return []
        return [b for b in self.bounds if b.value > self.v_plus]


def variation_bounds(net: Network, census: AcrCensus | None = None, *, multistationary: bool = False,
                     samples: Sequence[Sequence[float]] | None = None,
                     phi: Callable[[np.ndarray], np.ndarray] = np.log, tol: float = 1e-8,
                     kinetics: PowerLawKinetics | None = None) -> VariationReport:
    """Collect every lower bound on ``v_+`` whose hypotheses are met."""
    m = net.m
    bounds = []
    basis = stoich_basis(net)
    if multistationary:
        bounds.append(Bound("multistat_1_over_m", Fraction(1, m), "multistationary system"))
        if len(basis) == 1:
            support = sum(1 for x in basis[0] if x != 0)
            bounds.append(Bound("rank_one_support", Fraction(support, m),
                                f"multistationary rank-one system, |supp v| = {support}"))
    if samples is not None:
        dim = difference_space_dimension(samples, phi, tol)
        bounds.append(Bound("difference_space", Fraction(dim, m),
                            f"dimension {dim} of the difference space of {len(samples)} transformed equilibria"))
    if kinetics is not None:
        try:
            plp = kinetic_rank_plp_bound(net, kinetics)
        except InapplicableError:
            pass
        else:
            bounds.append(Bound("kinetic_rank_plp", plp.bound,
                                f"weakly reversible deficiency-zero PL-RDK system, kinetic rank {plp.s_tilde}"))
    if census is not None and census.m != m:
        raise ValueError(f"census counts {census.m} species, network has {m}")
    v_plus = None if census is None or census.lower_bound else equilibria_variation(census)
    return VariationReport(m, v_plus, tuple(bounds))


def difference_space_dimension(samples: Sequence[Sequence[float]],
                               phi: Callable[[np.ndarray], np.ndarray] = np.log, tol: float = 1e-8) -> int:
    """Numeric dimension of the span of ``phi(x) - phi(x')`` over the samples.

    Differences are taken from the first sample; singular values above
    ``tol`` times the largest count towards the rank.
    """
    X = np.asarray(samples, dtype=float)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("need at least one sample vector")
    if phi is np.log and not np.all(X > 0):
        raise ValueError("log transform needs strictly positive samples")
    T = np.asarray(phi(X), dtype=float)
    D = T[1:] - T[0]
    if D.size == 0:
        return 0
    sv = np.linalg.svd(D, compute_uv=False)
    if sv[0] == 0:
        return 0
    return int(np.sum(sv > tol * sv[0]))


@dataclass(frozen=True)
class PlpStructure:
    """Kinetic-order subspace of a weakly reversible deficiency-zero PL-RDK system.

    For such systems the flux subspace of the log-parametrisation equals the
    span of kinetic complex differences, so ``kinetic_basis`` also spans it.
    """

    m: int
    kinetic_complexes: tuple[tuple[float, ...], ...]
    kinetic_basis: tuple[tuple[float, ...], ...]
    s_tilde: int
    bound: Fraction
    acr_species: tuple[str, ...]


def kinetic_rank_plp_bound(net: Network, K: PowerLawKinetics, *, tol: float = 1e-10) -> PlpStructure:
    K.check_network(net)
    rep = structural_report(net)
    problems = []
    if not rep.cycle_terminal:
        problems.append("not cycle-terminal (some complex is never a reactant)")
    if classify(net, K) is KineticsClass.PL_NDK:
        problems.append("kinetics is PL-NDK")
    if not rep.weakly_reversible:
        problems.append("not weakly reversible")
    if rep.delta != 0:
        problems.append(f"deficiency {rep.delta} != 0")
    if problems:
        raise InapplicableError("kinetic rank bound needs: " + "; ".join(problems))
    tilde: dict[int, np.ndarray] = {}
    for i, rx in enumerate(net.reactions):
        tilde.setdefault(net.complex_index(rx.reactant), K.F[i])
    diffs = np.array([tilde[b] - tilde[a] for a, b in net.edges()])
    _, sv, vt = np.linalg.svd(diffs)
    s_tilde = int(np.sum(sv > tol * max(1.0, sv[0]))) if sv.size else 0
    basis = vt[:s_tilde]
    perp = vt[s_tilde:]
    acr = tuple(sp.name for sp in net.species if np.all(np.abs(perp[:, sp.index]) <= tol))
    return PlpStructure(
        m=net.m,
        kinetic_complexes=tuple(tuple(float(x) for x in tilde[c]) for c in sorted(tilde)),
        kinetic_basis=tuple(tuple(float(x) for x in row) for row in basis),
        s_tilde=s_tilde,
        bound=1 - Fraction(s_tilde, net.m),
        acr_species=acr,
    )


@dataclass(frozen=True)
class Decomposition:
    blocks: tuple[tuple[int, ...], ...]

    def validate(self, r: int) -> None:
        seen = [i for b in self.blocks for i in b]
        if any(not b for b in self.blocks):
            raise ValueError("decomposition has an empty block")
        if sorted(seen) != list(range(r)):
            raise ValueError(f"blocks do not partition the {r} reactions")

    def occurring_species(self, net: Network, block: int) -> tuple[str, ...]:
        """Species of the non-embedded subnetwork for ``block``, in network order."""
        used = set()
        for q in self.blocks[block]:
            rx = net.reactions[q]
            used |= rx.reactant.support | rx.product.support
        return tuple(sp.name for sp in net.species if sp.index in used)


def _block_rank(net: Network, block: Iterable[int]) -> int:
    return linalg.rank([net.reaction_vector(q) for q in block])


def is_independent(net: Network, d: Decomposition) -> bool:
    """Whether the block stoichiometric subspaces form a direct sum equal to S."""
    d.validate(net.r)
    return sum(_block_rank(net, b) for b in d.blocks) == _block_rank(net, range(net.r))


@dataclass(frozen=True)
class SubnetworkVariation:
    m: int
    m_sub: int
    m_sub_acr: int
    v_non_embedded: Fraction
    v_embedded: Fraction
    identity_holds: bool
    gap_bound_holds: bool

    @property
    def gap(self) -> Fraction:
        return self.v_embedded - self.v_non_embedded


def subnetwork_variation(census_sub: AcrCensus, m: int) -> SubnetworkVariation:
    """Variation of a subnetwork over its own species and embedded in all ``m`` species."""
    m_sub, k = census_sub.m, census_sub.m_acr
    if m_sub > m:
        raise ValueError(f"subnetwork has {m_sub} species, more than the network's {m}")
    if m_sub == 0:
        raise ValueError("subnetwork has no species")
    v_ne = Fraction(m_sub - k, m_sub)
    v_e = Fraction(m - k, m)
    identity = (m - k) == (m_sub - k) + (m - m_sub)
    gap = v_e - v_ne
    return SubnetworkVariation(m, m_sub, k, v_ne, v_e, identity, 0 <= gap <= Fraction(m - m_sub, m))


def acr_lift(net: Network, d: Decomposition, block_acr: Sequence[Iterable[str]]) -> AcrCensus:
    """ACR species of the blocks of an independent decomposition are ACR in the whole network.

    The returned census is a lower bound: the network may have further ACR species.
    """
    if len(block_acr) != len(d.blocks):
        raise ValueError(f"{len(block_acr)} ACR sets for {len(d.blocks)} blocks")
    if not is_independent(net, d):
        raise InapplicableError("decomposition is not independent; ACR does not lift")
    union: dict[str, Provenance] = {}
    for species in block_acr:
        for s in species:
            net.species_index(s)
            union[s] = Provenance.LIFTED
    ordered = {sp.name: union[sp.name] for sp in net.species if sp.name in union}
    return AcrCensus(net.m, ordered, lower_bound=True)
