"""Ring of q-level investors: domain types, energy function, enumeration oracles.

N agents sit on a ring (agent N neighbours agent 1) and each picks an
investment level sigma_i in {0, ..., q-1}, or more generally a value from a
strictly increasing level vector (d_0, ..., d_{q-1}).  A configuration's
energy adds a per-level interaction J(sigma_i) for every pair of equal
neighbouring choices, plus an external bias D coupled to the invested total:

    H(sigma) = sum_i J(sigma_i) * [sigma_i == sigma_{i+1}] + D * sum_i d(sigma_i)

with the index wrapping around the ring.  The Gibbs weight exp(-beta * H)
turns this into a probability model: beta = 0 makes every configuration
equally likely, large beta concentrates the ensemble on energy minimisers.

Everything here is a pure function of its inputs.  The brute-force routines
enumerate all q**N ring configurations and serve as ground truth for the
spectral machinery in :mod:`.transfer`; they refuse systems larger than
``ENUMERATION_STATE_CAP`` states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ENUMERATION_STATE_CAP",
    "EnumerationCapError",
    "CouplingProfile",
    "ModelParams",
    "SpinConfig",
    "total_investment",
    "hamiltonian",
    "partition_function_bruteforce",
    "expected_investment_bruteforce",
]

# Largest q ** n_sites the enumeration oracles will walk.  Keeps the oracle
# path interactive; larger systems belong to the transfer-matrix path.
ENUMERATION_STATE_CAP = 1 << 24

# Enumeration chunk size; bounds peak memory independent of system size.
_BLOCK = 1 << 16


class EnumerationCapError(RuntimeError):
    """Asked a brute-force oracle for more than ENUMERATION_STATE_CAP states."""


@dataclass(frozen=True)
class CouplingProfile:
    """Per-level interaction strengths (J(0), ..., J(q-1)).

    Negative J(k) rewards neighbours who both invest at level k, positive
    J(k) penalises them.  Index k is the level the two neighbours share.
    """

    values: tuple[float, ...]

    def __post_init__(self) -> None:
        values = tuple(float(v) for v in self.values)
        if len(values) < 2:
            raise ValueError("coupling profile needs at least two levels")
        if not all(math.isfinite(v) for v in values):
            raise ValueError("coupling strengths must be finite")
        object.__setattr__(self, "values", values)

    @property
    def q(self) -> int:
        return len(self.values)

    def unique_min_index(self) -> int | None:
        """Index of the strictly smallest coupling, or None if the minimum ties."""
        lowest = min(self.values)
        hits = [k for k, v in enumerate(self.values) if v == lowest]
        return hits[0] if len(hits) == 1 else None


@dataclass(frozen=True)
class ModelParams:
    """Full parameter set for one model instance.

    ``beta`` is the inverse-temperature-like control parameter, ``field``
    the external bias D, and ``levels`` the investment value of each choice
    (defaults to 0, 1, ..., q-1 and must be strictly increasing).
    """

    q: int
    beta: float
    couplings: CouplingProfile
    field: float = 0.0
    levels: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.q, int) or isinstance(self.q, bool):
            raise ValueError("q must be an integer")
        if self.q < 2:
            raise ValueError("need at least two investment levels (q >= 2)")
        beta = float(self.beta)
        if not math.isfinite(beta) or beta < 0.0:
            raise ValueError("beta must be finite and non-negative")
        bias = float(self.field)
        if not math.isfinite(bias):
            raise ValueError("field must be finite")
        couplings = self.couplings
        if not isinstance(couplings, CouplingProfile):
            couplings = CouplingProfile(tuple(couplings))
        if couplings.q != self.q:
            raise ValueError(
                f"coupling profile has {couplings.q} levels, expected q={self.q}"
            )
        if self.levels is None:
            levels = tuple(float(k) for k in range(self.q))
        else:
            levels = tuple(float(v) for v in self.levels)
            if len(levels) != self.q:
                raise ValueError(f"levels must have length q={self.q}")
            if not all(math.isfinite(v) for v in levels):
                raise ValueError("levels must be finite")
            if any(b <= a for a, b in zip(levels, levels[1:])):
                raise ValueError("levels must be strictly increasing")
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "field", bias)
        object.__setattr__(self, "couplings", couplings)
        object.__setattr__(self, "levels", levels)


@dataclass(frozen=True)
class SpinConfig:
    """One assignment of levels to the ring sites, site order preserved."""

    sites: tuple[int, ...]

    def __post_init__(self) -> None:
        sites = tuple(self.sites)
        if len(sites) < 1:
            raise ValueError("a configuration needs at least one site")
        for s in sites:
            if not isinstance(s, (int, np.integer)) or isinstance(s, bool) or s < 0:
                raise ValueError("site values must be non-negative integers")
        object.__setattr__(self, "sites", tuple(int(s) for s in sites))

    @property
    def n_sites(self) -> int:
        return len(self.sites)


def _check_config(config: SpinConfig, params: ModelParams) -> None:
    if any(s >= params.q for s in config.sites):
        raise ValueError(f"configuration uses levels outside 0..{params.q - 1}")


def total_investment(config: SpinConfig, params: ModelParams) -> float:
    """Sum of the invested values over all sites, sum_i levels[sigma_i]."""
    _check_config(config, params)
    return math.fsum(params.levels[s] for s in config.sites)


def hamiltonian(config: SpinConfig, params: ModelParams) -> float:
    """Ring energy: equal-neighbour couplings plus the bias times total investment."""
    _check_config(config, params)
    sites = config.sites
    n = len(sites)
    bond = math.fsum(
        params.couplings.values[sites[i]]
        for i in range(n)
        if sites[i] == sites[(i + 1) % n]
    )
    return bond + params.field * total_investment(config, params)


def _check_enumerable(q: int, n_sites: int) -> None:
    if not isinstance(n_sites, int) or isinstance(n_sites, bool) or n_sites < 1:
        raise ValueError("n_sites must be a positive integer")
    if q**n_sites > ENUMERATION_STATE_CAP:
        raise EnumerationCapError(
            f"{q}**{n_sites} states exceed the enumeration cap of "
            f"{ENUMERATION_STATE_CAP}; use the transfer-matrix path"
        )


def _config_blocks(q: int, n_sites: int):
    """Yield all q**n_sites ring configurations as (block, n_sites) int arrays."""
    total = q**n_sites
    shape = (q,) * n_sites
    for start in range(0, total, _BLOCK):
        idx = np.arange(start, min(start + _BLOCK, total), dtype=np.int64)
        yield np.stack(np.unravel_index(idx, shape), axis=1)


def _block_energy_and_total(block: np.ndarray, params: ModelParams):
    j = np.asarray(params.couplings.values)
    lev = np.asarray(params.levels)
    nbr = np.roll(block, -1, axis=1)
    bond = np.where(block == nbr, j[block], 0.0).sum(axis=1)
    total = lev[block].sum(axis=1)
    return bond + params.field * total, total


def partition_function_bruteforce(params: ModelParams, n_sites: int) -> float:
    """Exact partition sum Z_N = sum over all configurations of exp(-beta * H).

    Strictly positive.  Intended for small rings; raises
    :class:`EnumerationCapError` beyond ``ENUMERATION_STATE_CAP`` states.
    """
    _check_enumerable(params.q, n_sites)
    z = 0.0
    for block in _config_blocks(params.q, n_sites):
        energy, _ = _block_energy_and_total(block, params)
        z += float(np.exp(-params.beta * energy).sum())
    return z


def expected_investment_bruteforce(params: ModelParams, n_sites: int) -> float:
    """Gibbs-average invested value per site, <sum_i levels[sigma_i]> / N.

    Always lies inside [levels[0], levels[q-1]].
    """
    _check_enumerable(params.q, n_sites)
    z = 0.0
    weighted = 0.0
    for block in _config_blocks(params.q, n_sites):
        energy, total = _block_energy_and_total(block, params)
        w = np.exp(-params.beta * energy)
        z += float(w.sum())
        weighted += float((total * w).sum())
    return weighted / (z * n_sites)
