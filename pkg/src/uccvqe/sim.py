"""Dense statevector execution, exact expectations, and shot sampling.

Amplitude indices put qubit 0 in the most significant bit, matching the
textual bitstring convention (qubit 0 leftmost). Sampling runs through
numpy's PCG64 generator so histograms are reproducible bit-for-bit across
platforms for a given seed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .circuit import Circuit

MAX_QUBITS = 24

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


class SimulationError(ValueError):
    pass


class Statevector:
    """2**n complex amplitudes, unit norm."""

    __slots__ = ("n_qubits", "amplitudes")

    def __init__(self, n_qubits: int, amplitudes: np.ndarray):
        if n_qubits > MAX_QUBITS:
            raise SimulationError(f"{n_qubits} qubits exceeds the dense cap of {MAX_QUBITS}")
        if amplitudes.shape != (1 << n_qubits,):
            raise SimulationError("amplitude array has wrong length")
        self.n_qubits = n_qubits
        self.amplitudes = amplitudes

    @classmethod
    def zero(cls, n_qubits: int) -> "Statevector":
        amps = np.zeros(1 << n_qubits, dtype=np.complex128)
        amps[0] = 1.0
        return cls(n_qubits, amps)

    @classmethod
    def from_bitstring(cls, bits: str) -> "Statevector":
        n = len(bits)
        amps = np.zeros(1 << n, dtype=np.complex128)
        amps[int(bits, 2)] = 1.0
        return cls(n, amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def bitstring_of_index(self, index: int) -> str:
        return format(index, f"0{self.n_qubits}b")

    def copy(self) -> "Statevector":
        return Statevector(self.n_qubits, self.amplitudes.copy())


def _index_bit(n: int, q: int) -> int:
    return 1 << (n - 1 - q)


def word_masks(n: int, x_mask: int, z_mask: int) -> tuple[int, int, int]:
    """Convert qubit-indexed Pauli masks to amplitude-index masks; returns
    (x_bits, z_bits, y_count)."""
    xb = zb = 0
    for q in range(n):
        if (x_mask >> q) & 1:
            xb |= _index_bit(n, q)
        if (z_mask >> q) & 1:
            zb |= _index_bit(n, q)
    return xb, zb, (x_mask & z_mask).bit_count()


def apply_circuit(state: Statevector, circuit: Circuit,
                  params: Optional[dict[str, float]] = None) -> Statevector:
    """Run a circuit gate by gate; returns a new statevector."""
    if circuit.n_qubits != state.n_qubits:
        raise SimulationError("register sizes differ")
    params = params or {}
    amps = state.amplitudes.copy()
    n = state.n_qubits
    for g in circuit.gates:
        if g.kind == "CNOT":
            kernels.apply_cnot(amps, n, g.qubits[0], g.qubits[1])
        elif g.kind == "X":
            kernels.apply_1q(amps, n, g.qubits[0], 0.0, 1.0, 1.0, 0.0)
        elif g.kind == "H":
            kernels.apply_1q(amps, n, g.qubits[0], _INV_SQRT2, _INV_SQRT2, _INV_SQRT2, -_INV_SQRT2)
        elif g.kind == "S":
            kernels.apply_phase(amps, n, g.qubits[0], 1.0, 1.0j)
        elif g.kind == "SDG":
            kernels.apply_phase(amps, n, g.qubits[0], 1.0, -1.0j)
        elif g.kind == "RZ":
            theta = g.resolve_angle(params)
            kernels.apply_phase(
                amps, n, g.qubits[0],
                complex(math.cos(theta / 2), -math.sin(theta / 2)),
                complex(math.cos(theta / 2), math.sin(theta / 2)),
            )
        else:  # pragma: no cover - Gate validates kinds
            raise SimulationError(f"cannot simulate gate {g.kind}")
    return Statevector(n, amps)


def expectation(state: Statevector, hamiltonian) -> float:
    """<psi| H |psi> for a QubitHamiltonian-like object (offset + PauliSum)."""
    if hamiltonian.n_qubits != state.n_qubits:
        raise SimulationError("register sizes differ")
    n = state.n_qubits
    acc = complex(hamiltonian.offset)
    for w in hamiltonian.terms.words():
        xb, zb, ny = word_masks(n, w.x_mask, w.z_mask)
        val = kernels.pauli_expectation(state.amplitudes, n, xb, zb)
        acc += w.coefficient * (1j**ny) * val
    if abs(acc.imag) > 1e-10:
        raise SimulationError(f"expectation has imaginary residue {acc.imag:.3e}")
    return float(acc.real)


@dataclass
class Histogram:
    """Counts per measured bitstring for one measurement group."""

    counts: dict[str, int]
    shots: int
    group_id: int
    seed: int

    def __post_init__(self):
        total = sum(self.counts.values())
        if total != self.shots:
            raise SimulationError(f"counts sum to {total}, expected {self.shots}")

    def to_text(self) -> str:
        lines = [f"GROUP {self.group_id}", f"SHOTS {self.shots}", f"SEED {self.seed}"]
        for bits in sorted(self.counts):
            lines.append(f"{bits} {self.counts[bits]}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Histogram":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if len(lines) < 3 or not lines[0].startswith("GROUP "):
            raise SimulationError("malformed histogram file")
        gid = int(lines[0].split()[1])
        shots = int(lines[1].split()[1])
        seed = int(lines[2].split()[1])
        counts = {}
        for ln in lines[3:]:
            bits, c = ln.split()
            counts[bits] = int(c)
        return cls(counts, shots, gid, seed)


def basis_change_circuit(group, n: int) -> Circuit:
    """H for X-assigned qubits, Sdg then H for Y-assigned ones."""
    from .circuit import Gate

    gates = []
    for q, axis in enumerate(group.basis):
        if axis == "X":
            gates.append(Gate("H", (q,)))
        elif axis == "Y":
            gates.append(Gate("SDG", (q,)))
            gates.append(Gate("H", (q,)))
    return Circuit(n, gates)


def sample_group(state: Statevector, group, shots: int, seed: int) -> Histogram:
    """Rotate into the group's shared eigenbasis and draw multinomial shots."""
    if shots <= 0:
        raise SimulationError("shots must be positive")
    rotated = apply_circuit(state, basis_change_circuit(group, state.n_qubits))
    probs = rotated.probabilities()
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    draws = rng.multinomial(shots, probs)
    counts = {
        format(idx, f"0{state.n_qubits}b"): int(c)
        for idx, c in enumerate(draws)
        if c
    }
    return Histogram(counts, shots, getattr(group, "index", 0), seed)


def _word_value(bits: str, support: Sequence[int]) -> int:
    ones = sum(bits[q] == "1" for q in support)
    return -1 if ones % 2 else 1


def group_shot_values(group, histogram: Histogram) -> tuple[np.ndarray, np.ndarray]:
    """Per-bitstring contribution of a whole group and the matching counts."""
    values = []
    weights = []
    for bits, count in sorted(histogram.counts.items()):
        total = 0.0
        for w in group.words:
            total += w.coefficient.real * _word_value(bits, w.support)
        values.append(total)
        weights.append(count)
    return np.asarray(values), np.asarray(weights, dtype=np.float64)


def energy_from_histograms(groups: Sequence, histograms: Sequence[Histogram],
                           offset: float = 0.0) -> tuple[float, float]:
    """Energy estimate and standard error from one histogram per group.

    Within a group all member words are read off the same shots, so their
    covariance enters through the per-shot group totals; groups are sampled
    independently and their variances add.
    """
    if len(groups) != len(histograms):
        raise SimulationError(
            f"{len(groups)} groups but {len(histograms)} histograms"
        )
    energy = float(offset)
    variance = 0.0
    for group, hist in zip(groups, histograms):
        values, weights = group_shot_values(group, hist)
        shots = weights.sum()
        if shots <= 0:
            raise SimulationError(f"group {hist.group_id} has no shots")
        mean = float(np.dot(values, weights) / shots)
        energy += mean
        if shots > 1:
            var = float(np.dot(weights, (values - mean) ** 2) / (shots - 1))
            variance += var / shots
    return energy, math.sqrt(variance)
