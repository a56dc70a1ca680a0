"""Power-law kinetics on a reaction network."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .network import Network, incidence_matrix, stoichiometric_matrix


class KineticsClass(enum.Enum):
    MAK = "MAK"
    PL_RDK = "PL-RDK"
    PL_NDK = "PL-NDK"


@dataclass(frozen=True, eq=False)
class PowerLawKinetics:
    """Rate functions ``K_i(x) = k_i * prod_j x_j ** F[i, j]``.

    Attributes:
        F: kinetic order matrix, one row per reaction, one column per species.
        k: positive rate constants, one per reaction.
    """

    F: np.ndarray
    k: np.ndarray

    def __post_init__(self):
        F = np.array(self.F, dtype=float)
        k = np.array(self.k, dtype=float).reshape(-1)
        if F.ndim != 2:
            raise ValueError("kinetic order matrix must be two-dimensional")
        if F.shape[0] != k.shape[0]:
            raise ValueError(f"{F.shape[0]} kinetic order rows but {k.shape[0]} rate constants")
        if not np.all(np.isfinite(F)):
            raise ValueError("kinetic orders must be finite")
        if not np.all(np.isfinite(k)) or np.any(k <= 0):
            raise ValueError("rate constants must be positive and finite")
        F.setflags(write=False)
        k.setflags(write=False)
        object.__setattr__(self, "F", F)
        object.__setattr__(self, "k", k)

    @property
    def r(self) -> int:
        return self.F.shape[0]

    @property
    def m(self) -> int:
        return self.F.shape[1]

    def rates(self, x) -> np.ndarray:
        """Evaluate the reaction rate vector K(x) at a positive point."""
        x = _positive(x, self.m)
        return self.k * np.prod(x[None, :] ** self.F, axis=1)

    def check_network(self, net: Network) -> None:
        if self.F.shape != (net.r, net.m):
            raise ValueError(f"kinetics has shape {self.F.shape}, network needs {(net.r, net.m)}")


def _positive(x, m: int) -> np.ndarray:
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != m:
        raise ValueError(f"expected {m} concentrations, got {x.shape[0]}")
    if not np.all(x > 0) or not np.all(np.isfinite(x)):
        raise ValueError("concentrations must be strictly positive and finite")
    return x


def mass_action_orders(net: Network) -> np.ndarray:
    """Kinetic order matrix of mass action: reactant stoichiometry row by row."""
    return np.array([[float(c) for c in rx.reactant.vector(net.m)] for rx in net.reactions], dtype=float)


def mak_kinetics(net: Network, k=None) -> PowerLawKinetics:
    """Mass action kinetics with rate constants ``k``.

    When ``k`` is omitted the rates stored on the reactions are used, and unit
    rates for reactions that carry none.
    """
    if k is None:
        k = [1.0 if rx.rate is None else rx.rate for rx in net.reactions]
    k = np.asarray(k, dtype=float).reshape(-1)
    if k.shape[0] != net.r:
        raise ValueError(f"expected {net.r} rate constants, got {k.shape[0]}")
    return PowerLawKinetics(mass_action_orders(net), k)


def classify(net: Network, K: PowerLawKinetics) -> KineticsClass:
    K.check_network(net)
    if np.array_equal(K.F, mass_action_orders(net)):
        return KineticsClass.MAK
    rows_by_reactant: dict[int, np.ndarray] = {}
    for i, rx in enumerate(net.reactions):
        c = net.complex_index(rx.reactant)
        if c in rows_by_reactant and not np.array_equal(rows_by_reactant[c], K.F[i]):
            return KineticsClass.PL_NDK
        rows_by_reactant.setdefault(c, K.F[i])
    return KineticsClass.PL_RDK


def sf_pairs(K: PowerLawKinetics, species: int, *, strict: bool = False) -> list[tuple[int, int]]:
    """Reaction pairs whose kinetic order rows differ only in column ``species``.

    Identical rows count as an SF-pair in every species unless ``strict`` is
    set, in which case the rows must actually differ in ``species``.
    """
    if not 0 <= species < K.m:
        raise IndexError(f"species index {species} out of range")
    others = np.delete(K.F, species, axis=1)
    pairs = []
    for i, l in combinations(range(K.r), 2):
        if np.array_equal(others[i], others[l]):
            if strict and K.F[i, species] == K.F[l, species]:
                continue
            pairs.append((i, l))
    return pairs


def evaluate_sfrf(net: Network, K: PowerLawKinetics, x) -> np.ndarray:
    """Species formation rate f(x) = N K(x)."""
    K.check_network(net)
    N = stoichiometric_matrix(net).astype(float)
    return N @ K.rates(x)


def evaluate_cfrf(net: Network, K: PowerLawKinetics, x) -> np.ndarray:
    """Complex formation rate g(x) = I_a K(x)."""
    K.check_network(net)
    return incidence_matrix(net) @ K.rates(x)


def is_complex_balanced_at(net: Network, K: PowerLawKinetics, x, tol: float = 1e-12) -> bool:
    return bool(np.max(np.abs(evaluate_cfrf(net, K, x))) <= tol)


def homogeneous_pl_quotient(net: Network, K: PowerLawKinetics, beta) -> PowerLawKinetics:
    """Same rate constants, every kinetic order row reduced by ``beta``."""
    if classify(net, K) is not KineticsClass.MAK:
        raise ValueError("homogeneous PL quotients are defined for mass action kinetics only")
    beta = np.asarray(beta, dtype=float).reshape(-1)
    if beta.shape[0] != net.m:
        raise ValueError(f"beta needs {net.m} entries, got {beta.shape[0]}")
    return PowerLawKinetics(K.F - beta[None, :], K.k)


def pff_equivalent(K: PowerLawKinetics, K2: PowerLawKinetics, *, rtol: float = 1e-12, atol: float = 1e-12) -> bool:
    """Positive-function-factor equivalence of two power-law kinetics.

    ``K_q / K2_q = (k_q / k2_q) x^(F_q - F2_q)`` is independent of q exactly
    when every row of ``F - F2`` is the same and ``k / k2`` is constant.
    """
    if K.F.shape != K2.F.shape:
        return False
    D = K.F - K2.F
    ratio = K.k / K2.k
    same_rows = np.allclose(D, D[0][None, :], rtol=rtol, atol=atol)
    same_ratio = np.allclose(ratio, ratio[0], rtol=rtol, atol=0.0)
    return bool(same_rows and same_ratio)


def is_homogeneous_quotient_of_mak(net: Network, K: PowerLawKinetics, *, atol: float = 1e-12) -> bool:
    """True iff ``K`` is a homogeneous PL quotient of the mass action system with K's rates."""
    K.check_network(net)
    D = mass_action_orders(net) - K.F
    return bool(np.allclose(D, D[0][None, :], rtol=0.0, atol=atol))
