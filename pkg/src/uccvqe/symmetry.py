"""Abelian point-group bookkeeping and spin-sector labeling.

Irreps follow the Molpro/FCIDUMP ORBSYM convention: integer labels 1..8
where label 1 is the totally symmetric irrep and the product of two irreps
is the XOR of their 3-bit codes (label - 1). This covers D2h and all its
subgroups; non-Abelian groups are rejected.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


class SymmetryError(ValueError):
    pass


# Molpro D2h ordering; subgroups use a prefix of the same code space.
D2H_LABELS = ("Ag", "B3u", "B2u", "B1g", "B1u", "B2g", "B3g", "Au")


@dataclass(frozen=True)
class Irrep:
    """One irreducible representation, stored by its 1-based ORBSYM label."""

    label: int

    def __post_init__(self):
        if not 1 <= self.label <= 8:
            raise SymmetryError(
                f"irrep label {self.label} outside 1..8; only Abelian groups "
                "(D2h and subgroups) are supported - relabel the orbitals in "
                "a D2h-adapted FCIDUMP"
            )

    @property
    def code(self) -> int:
        return self.label - 1

    @property
    def name(self) -> str:
        return D2H_LABELS[self.code]

    def is_totally_symmetric(self) -> bool:
        return self.code == 0


TOTALLY_SYMMETRIC = Irrep(1)


def irrep_product(a: Irrep, b: Irrep) -> Irrep:
    """Group product of two irreps (XOR of codes)."""
    return Irrep((a.code ^ b.code) + 1)


@dataclass(frozen=True)
class OrbitalSymmetry:
    """Per-spatial-orbital irrep labels, in orbital order."""

    irreps: tuple[Irrep, ...]

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "OrbitalSymmetry":
        return cls(tuple(Irrep(int(l)) for l in labels))

    @classmethod
    def all_symmetric(cls, n_orbitals: int) -> "OrbitalSymmetry":
        return cls((TOTALLY_SYMMETRIC,) * n_orbitals)

    def __len__(self) -> int:
        return len(self.irreps)

    def __getitem__(self, i: int) -> Irrep:
        return self.irreps[i]

    def labels(self) -> tuple[int, ...]:
        return tuple(ir.label for ir in self.irreps)


def excitation_allowed(exc, sym: OrbitalSymmetry) -> bool:
    """Whether an excitation survives point-group screening.

    The product of the irreps of every involved spatial orbital (with
    multiplicity) must be the totally symmetric representation, i.e. the
    XOR of their codes must vanish.
    """
    code = 0
    for i in exc.spatial_orbitals_with_multiplicity():
        if i >= len(sym):
            raise SymmetryError(f"orbital {i} outside symmetry table of length {len(sym)}")
        code ^= sym[i].code
    return code == 0


@dataclass(frozen=True)
class SpinSector:
    """Electron counts per spin manifold."""

    n_alpha: int
    n_beta: int

    def __post_init__(self):
        if self.n_alpha < 0 or self.n_beta < 0:
            raise SymmetryError("negative electron count")

    @property
    def n_electrons(self) -> int:
        return self.n_alpha + self.n_beta


def sector_of_bitstring(bits: str, mapping) -> SpinSector:
    """Count measured '1's separately on alpha and beta qubits.

    ``bits`` is a computational-basis outcome with qubit 0 leftmost.
    """
    if len(bits) != mapping.n_qubits:
        raise SymmetryError(
            f"bitstring length {len(bits)} != qubit count {mapping.n_qubits}"
        )
    n_alpha = sum(bits[q] == "1" for q in mapping.alpha_qubits())
    n_beta = sum(bits[q] == "1" for q in mapping.beta_qubits())
    return SpinSector(n_alpha, n_beta)
