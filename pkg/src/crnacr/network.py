"""Chemical reaction networks and their structural invariants."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import networkx as nx
import numpy as np

from . import linalg
from .errors import InapplicableError


@dataclass(frozen=True)
class Species:
    name: str
    index: int


@dataclass(frozen=True)
class Complex:
    """Sparse nonnegative combination of species, keyed by species index.

    Zero entries are never stored, so the zero complex has no coefficients and
    equality is coefficient-wise.
    """

    coefficients: tuple[tuple[int, Fraction], ...] = ()

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, object]) -> Complex:
        items = []
        for idx, value in mapping.items():
            c = linalg.to_fraction(value)
            if c < 0:
                raise ValueError(f"negative stoichiometric coefficient {c} for species {idx}")
            if c != 0:
                items.append((int(idx), c))
        return cls(tuple(sorted(items)))

    def __getitem__(self, index: int) -> Fraction:
        for i, c in self.coefficients:
            if i == index:
                return c
        return Fraction(0)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(i for i, _ in self.coefficients)

    def vector(self, m: int) -> list[Fraction]:
        v = [Fraction(0)] * m
        for i, c in self.coefficients:
            v[i] = c
        return v

    def is_zero(self) -> bool:
        return not self.coefficients


@dataclass(frozen=True)
class Reaction:
    label: str
    reactant: Complex
    product: Complex
    rate: float | None = None

    def __post_init__(self):
        if self.reactant == self.product:
            raise ValueError(f"reaction {self.label!r} has identical reactant and product")
        if self.rate is not None and not (self.rate > 0 and np.isfinite(self.rate)):
            raise ValueError(f"reaction {self.label!r} has nonpositive rate constant {self.rate}")


class Network:
    """A reaction network over a fixed, ordered list of species.

    Complexes are deduplicated and numbered by first appearance (reactant
    before product, reactions in input order).  Instances are treated as
    immutable; derived matrices are computed once and cached.
    """

    def __init__(self, species: Sequence[str], reactions: Sequence[Reaction]):
        if not reactions:
            raise ValueError("a network needs at least one reaction")
        if len(set(species)) != len(species):
            raise ValueError(f"duplicate species names in {list(species)}")
        labels = [rx.label for rx in reactions]
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate reaction labels")
        self.species: tuple[Species, ...] = tuple(Species(name, i) for i, name in enumerate(species))
        self.reactions: tuple[Reaction, ...] = tuple(reactions)
        self._species_index = {sp.name: sp.index for sp in self.species}

        complexes: list[Complex] = []
        seen: dict[Complex, int] = {}
        for rx in self.reactions:
            for cx in (rx.reactant, rx.product):
                if any(i >= len(self.species) or i < 0 for i in cx.support):
                    raise ValueError(f"reaction {rx.label!r} refers to an unknown species index")
                if cx not in seen:
                    seen[cx] = len(complexes)
                    complexes.append(cx)
        self.complexes: tuple[Complex, ...] = tuple(complexes)
        self._complex_index = seen

        used = set().union(*(cx.support for cx in self.complexes))
        missing = [sp.name for sp in self.species if sp.index not in used]
        if missing:
            raise ValueError(f"species {missing} occur in no complex")

    @classmethod
    def from_dicts(cls, reactions: Iterable[tuple[str, Mapping[str, object], Mapping[str, object]]],
                   species: Sequence[str] | None = None, rates: Sequence[float | None] | None = None) -> Network:
        """Build a network from ``(label, {species: coeff}, {species: coeff})`` triples.

        Species not listed explicitly are ordered by first appearance.
        """
        reactions = list(reactions)
        order = list(species) if species is not None else []
        for _, lhs, rhs in reactions:
            for name in list(lhs) + list(rhs):
                if name not in order:
                    if species is not None:
                        raise ValueError(f"unknown species {name!r}")
                    order.append(name)
        index = {name: i for i, name in enumerate(order)}
        built = []
        for j, (label, lhs, rhs) in enumerate(reactions):
            built.append(Reaction(
                label,
                Complex.from_mapping({index[s]: c for s, c in lhs.items()}),
                Complex.from_mapping({index[s]: c for s, c in rhs.items()}),
                None if rates is None or rates[j] is None else float(rates[j]),
            ))
        return cls(order, built)

    # counts ---------------------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.species)

    @property
    def n(self) -> int:
        return len(self.complexes)

    @property
    def r(self) -> int:
        return len(self.reactions)

    @property
    def species_names(self) -> tuple[str, ...]:
        return tuple(sp.name for sp in self.species)

    @property
    def reaction_labels(self) -> tuple[str, ...]:
        return tuple(rx.label for rx in self.reactions)

    @cached_property
    def reactant_complexes(self) -> tuple[int, ...]:
        """Indices of complexes that are the reactant of some reaction, ascending."""
        return tuple(sorted({self._complex_index[rx.reactant] for rx in self.reactions}))

    @property
    def n_r(self) -> int:
        return len(self.reactant_complexes)

    def species_index(self, species: str | int | Species) -> int:
        if isinstance(species, Species):
            return species.index
        if isinstance(species, (int, np.integer)):
            if not 0 <= species < self.m:
                raise IndexError(f"species index {species} out of range")
            return int(species)
        try:
            return self._species_index[species]
        except KeyError:
            raise KeyError(f"unknown species {species!r}") from None

    def complex_index(self, cx: Complex) -> int:
        return self._complex_index[cx]

    def edges(self) -> list[tuple[int, int]]:
        """Reaction arcs as (reactant complex index, product complex index)."""
        return [(self._complex_index[rx.reactant], self._complex_index[rx.product]) for rx in self.reactions]

    def reaction_vector(self, i: int) -> list[Fraction]:
        rx = self.reactions[i]
        return [b - a for a, b in zip(rx.reactant.vector(self.m), rx.product.vector(self.m))]

    def format_complex(self, cx: Complex) -> str:
        if cx.is_zero():
            return "0"
        parts = []
        for i, c in cx.coefficients:
            name = self.species[i].name
            parts.append(name if c == 1 else f"{c} {name}" if c.denominator != 1 else f"{c}{name}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        body = ", ".join(f"{rx.label}: {self.format_complex(rx.reactant)} -> {self.format_complex(rx.product)}"
                         for rx in self.reactions)
        return f"Network({body})"


# matrices --------------------------------------------------------------------

def complex_matrix(net: Network) -> np.ndarray:
    """The m x n matrix Y whose columns are the complexes (exact, object dtype)."""
    Y = np.empty((net.m, net.n), dtype=object)
    for j, cx in enumerate(net.complexes):
        Y[:, j] = cx.vector(net.m)
    return Y


def incidence_matrix(net: Network) -> np.ndarray:
    """The n x r incidence matrix I_a: column of y -> y' is e_{y'} - e_y."""
    Ia = np.zeros((net.n, net.r), dtype=int)
    for q, (a, b) in enumerate(net.edges()):
        Ia[a, q] -= 1
        Ia[b, q] += 1
    return Ia


def stoichiometric_matrix(net: Network) -> np.ndarray:
    """The m x r matrix N whose columns are the reaction vectors (exact)."""
    N = np.empty((net.m, net.r), dtype=object)
    for q in range(net.r):
        N[:, q] = net.reaction_vector(q)
    return N


def stoich_basis(net: Network) -> list[list[Fraction]]:
    """Basis of the stoichiometric subspace S from the RREF of the reaction vectors."""
    return linalg.row_space_basis([net.reaction_vector(q) for q in range(net.r)])


def stoich_rank(net: Network) -> int:
    return len(stoich_basis(net))


def rank_one_direction(net: Network) -> list[Fraction]:
    """The single basis vector of S; raises InapplicableError unless rank(S) = 1."""
    basis = stoich_basis(net)
    if len(basis) != 1:
        raise InapplicableError(f"network has rank {len(basis)}, rank one required")
    return basis[0]


def conservation_basis(net: Network) -> list[list[Fraction]]:
    """Basis of the orthogonal complement of S."""
    return linalg.nullspace([net.reaction_vector(q) for q in range(net.r)], net.m)


def is_co_conservative(net: Network) -> bool:
    """True iff S contains a strictly positive vector."""
    return linalg.span_contains_positive_vector(stoich_basis(net))


def is_conservative(net: Network) -> bool:
    """True iff the orthogonal complement of S contains a strictly positive vector."""
    return linalg.span_contains_positive_vector(conservation_basis(net))


# structure -------------------------------------------------------------------

@dataclass(frozen=True)
class StructuralReport:
    m: int
    n: int
    n_r: int
    r: int
    l: int
    sl: int
    sl_nontrivial: int
    t: int
    s: int
    delta: int
    linkage_classes: tuple[tuple[int, ...], ...]
    strong_linkage_classes: tuple[tuple[int, ...], ...]
    terminal_classes: tuple[tuple[int, ...], ...]
    weakly_reversible: bool
    t_minimal: bool
    cycle_terminal: bool
    conservative: bool
    co_conservative: bool

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def _graph(net: Network) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(range(net.n))
    g.add_edges_from(net.edges())
    return g


def _ordered(components) -> tuple[tuple[int, ...], ...]:
    return tuple(sorted((tuple(sorted(c)) for c in components), key=lambda c: c[0]))


def linkage_classes(net: Network) -> tuple[tuple[int, ...], ...]:
    return _ordered(nx.weakly_connected_components(_graph(net)))


def strong_linkage_classes(net: Network) -> tuple[tuple[int, ...], ...]:
    return _ordered(nx.strongly_connected_components(_graph(net)))


def terminal_strong_linkage_classes(net: Network) -> tuple[tuple[int, ...], ...]:
    g = _graph(net)
    out = []
    for scc in nx.strongly_connected_components(g):
        if all(w in scc for v in scc for w in g.successors(v)):
            out.append(scc)
    return _ordered(out)


def structural_report(net: Network) -> StructuralReport:
    lc = linkage_classes(net)
    slc = strong_linkage_classes(net)
    tlc = terminal_strong_linkage_classes(net)
    s = stoich_rank(net)
    delta = net.n - len(lc) - s
    return StructuralReport(
        m=net.m, n=net.n, n_r=net.n_r, r=net.r,
        l=len(lc), sl=len(slc), sl_nontrivial=sum(1 for c in slc if len(c) > 1), t=len(tlc),
        s=s, delta=delta,
        linkage_classes=lc, strong_linkage_classes=slc, terminal_classes=tlc,
        weakly_reversible=len(slc) == len(lc),
        t_minimal=len(tlc) == len(lc),
        cycle_terminal=net.n == net.n_r,
        conservative=is_conservative(net),
        co_conservative=is_co_conservative(net),
    )
