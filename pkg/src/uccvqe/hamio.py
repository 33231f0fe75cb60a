"""FCIDUMP ingestion, qubit-Hamiltonian assembly, measurement grouping, and
the dense diagonalization reference.

Integrals follow the FCIDUMP conventions: chemists' notation (pq|rs) for the
two-electron block, 8-fold permutational symmetry, 1-based indices on file,
ORBSYM irrep labels per orbital. Spin orbitals are ordered alpha block then
beta block before the qubit mapping permutes them.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .ansatz import ActiveSpace
from .mapping import QubitMapping
from .pauli import FermionTerm, PauliSum, PauliWord, jw_transform
from .symmetry import OrbitalSymmetry, SpinSector

HERMITICITY_TOL = 1e-10
DENSE_QUBIT_LIMIT = 14


class FcidumpError(ValueError):
    pass


class HamiltonianError(ValueError):
    pass


@dataclass
class MolecularIntegrals:
    """One- and two-electron integrals in Hartree over N spatial orbitals."""

    n_orbitals: int
    n_electrons: int
    ms2: int
    core_energy: float
    h: np.ndarray              # (N, N), one-electron
    g: np.ndarray              # (N, N, N, N), chemists' (pq|rs)
    orbsym: OrbitalSymmetry


def parse_fcidump(path: str) -> MolecularIntegrals:
    """Read a Molpro-style FCIDUMP file."""
    with open(path) as fh:
        text = fh.read()

    m = re.search(r"(&END|/)", text)
    if not m or "&FCI" not in text.upper():
        raise FcidumpError(f"{path}: missing &FCI ... &END header")
    header, body = text[: m.start()], text[m.end() :]

    def header_int(key: str) -> int:
        hm = re.search(rf"{key}\s*=\s*(-?\d+)", header, re.IGNORECASE)
        if not hm:
            raise FcidumpError(f"{path}: header lacks {key}")
        return int(hm.group(1))

    norb = header_int("NORB")
    nelec = header_int("NELEC")
    ms2_match = re.search(r"MS2\s*=\s*(-?\d+)", header, re.IGNORECASE)
    ms2 = int(ms2_match.group(1)) if ms2_match else 0
    sym_match = re.search(r"ORBSYM\s*=\s*([0-9,\s]+)", header, re.IGNORECASE)
    if sym_match:
        labels = [int(tok) for tok in sym_match.group(1).replace(",", " ").split()]
        if len(labels) < norb:
            raise FcidumpError(f"{path}: ORBSYM lists {len(labels)} of {norb} orbitals")
        orbsym = OrbitalSymmetry.from_labels(labels[:norb])
    else:
        orbsym = OrbitalSymmetry.all_symmetric(norb)

    h = np.zeros((norb, norb))
    g = np.zeros((norb, norb, norb, norb))
    core = 0.0
    for raw in body.splitlines():
        line = raw.strip()
        if not line:
            continue
        tok = line.split()
        if len(tok) != 5:
            raise FcidumpError(f"{path}: expected 5 columns, got {line!r}")
        try:
            val = float(tok[0])
            i, j, k, l = (int(t) for t in tok[1:])
        except ValueError as exc:
            raise FcidumpError(f"{path}: non-numeric record {line!r}") from exc
        if max(i, j, k, l) > norb or min(i, j, k, l) < 0:
            raise FcidumpError(f"{path}: orbital index out of range in {line!r}")
        if i == 0:
            core = val
        elif k == 0:
            h[i - 1, j - 1] = val
            h[j - 1, i - 1] = val
        else:
            p, q, r, s = i - 1, j - 1, k - 1, l - 1
            for a, b, c, d in (
                (p, q, r, s), (q, p, r, s), (p, q, s, r), (q, p, s, r),
                (r, s, p, q), (s, r, p, q), (r, s, q, p), (s, r, q, p),
            ):
                g[a, b, c, d] = val
    return MolecularIntegrals(norb, nelec, ms2, core, h, g, orbsym)


def write_fcidump(path: str, ints: MolecularIntegrals) -> None:
    """Write integrals back out (canonical-order entries only)."""
    n = ints.n_orbitals
    lines = [
        f" &FCI NORB={n},NELEC={ints.n_electrons},MS2={ints.ms2},",
        "  ORBSYM=" + ",".join(str(l) for l in ints.orbsym.labels()) + ",",
        "  ISYM=1,",
        " &END",
    ]
    for p in range(n):
        for q in range(p + 1):
            for r in range(p + 1):
                smax = q if r == p else r
                for s in range(smax + 1):
                    if abs(ints.g[p, q, r, s]) > 1e-14:
                        lines.append(f" {ints.g[p, q, r, s]:23.16e} {p+1:3d} {q+1:3d} {r+1:3d} {s+1:3d}")
    for p in range(n):
        for q in range(p + 1):
            if abs(ints.h[p, q]) > 1e-14:
                lines.append(f" {ints.h[p, q]:23.16e} {p+1:3d} {q+1:3d}   0   0")
    lines.append(f" {ints.core_energy:23.16e}   0   0   0   0")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


@dataclass(frozen=True)
class ActiveSelection:
    """Electron count and spatial-orbital indices kept in the correlation
    treatment; everything below stays doubly occupied (frozen core)."""

    n_electrons: int
    orbitals: tuple[int, ...]

    def active_space(self) -> ActiveSpace:
        return ActiveSpace(self.n_electrons, len(self.orbitals))

    @classmethod
    def full(cls, ints: MolecularIntegrals) -> "ActiveSelection":
        return cls(ints.n_electrons, tuple(range(ints.n_orbitals)))


def restrict_to_active(ints: MolecularIntegrals, sel: ActiveSelection):
    """Fold frozen doubly-occupied orbitals into effective integrals.

    Returns (core_eff, h_eff, g_act, orbsym_act) over the active orbitals in
    the order given by the selection.
    """
    act = list(sel.orbitals)
    if len(set(act)) != len(act) or any(o < 0 or o >= ints.n_orbitals for o in act):
        raise HamiltonianError(f"invalid active orbital list {act}")
    n_frozen_elec = ints.n_electrons - sel.n_electrons
    if n_frozen_elec < 0 or n_frozen_elec % 2:
        raise HamiltonianError(
            f"cannot freeze {n_frozen_elec} electrons (total {ints.n_electrons}, "
            f"active {sel.n_electrons})"
        )
    rest = [o for o in range(ints.n_orbitals) if o not in act]
    frozen = rest[: n_frozen_elec // 2]
    if len(frozen) < n_frozen_elec // 2:
        raise HamiltonianError("not enough inactive orbitals to hold frozen electrons")

    h, g = ints.h, ints.g
    core = ints.core_energy
    for f in frozen:
        core += 2.0 * h[f, f]
        for f2 in frozen:
            core += 2.0 * g[f, f, f2, f2] - g[f, f2, f2, f]
    h_eff = h[np.ix_(act, act)].copy()
    for f in frozen:
        h_eff += 2.0 * g[np.ix_(act, act, [f], [f])][:, :, 0, 0]
        h_eff -= g[np.ix_(act, [f], [f], act)][:, 0, 0, :]
    g_act = g[np.ix_(act, act, act, act)].copy()
    orbsym_act = OrbitalSymmetry(tuple(ints.orbsym[o] for o in act))
    return core, h_eff, g_act, orbsym_act


def rhf_energy(core: float, h: np.ndarray, g: np.ndarray, n_occ: int) -> float:
    """Closed-shell mean-field energy of the (effective) active problem."""
    e = core
    for i in range(n_occ):
        e += 2.0 * h[i, i]
        for j in range(n_occ):
            e += 2.0 * g[i, i, j, j] - g[i, j, j, i]
    return float(e)


@dataclass
class QubitHamiltonian:
    """Hermitian Pauli sum plus identity offset over the mapped register.

    ``mapping`` may be None for synthetic operators; sector-aware operations
    then refuse to run.
    """

    n_qubits: int
    terms: PauliSum
    offset: float
    mapping: Optional[QubitMapping]
    active_space: ActiveSpace

    @property
    def term_count(self) -> int:
        return len(self.terms)

    def hf_bitstring(self) -> str:
        if self.mapping is None:
            raise HamiltonianError("no qubit mapping attached")
        bits = ["0"] * self.n_qubits
        for k in range(self.active_space.n_occupied):
            bits[self.mapping.alpha_qubit(k)] = "1"
            bits[self.mapping.beta_qubit(k)] = "1"
        return "".join(bits)


def build_qubit_hamiltonian(
    ints: MolecularIntegrals,
    selection: ActiveSelection,
    mapping: Optional[QubitMapping] = None,
    integral_threshold: float = 1e-12,
) -> QubitHamiltonian:
    """Jordan-Wigner image of the active-space electronic Hamiltonian.

    H = E_core + sum_pq h_pq a+_ps a_qs + 1/2 sum_pqrs (pq|rs) a+_ps a+_rt a_st a_qs
    with p..s active spatial orbitals and s, t spins.
    """
    core, h_eff, g_act, _ = restrict_to_active(ints, selection)
    space = selection.active_space()
    n_act = space.n_orbitals
    if mapping is None:
        mapping = QubitMapping.identity(n_act)
    if mapping.n_qubits != 2 * n_act:
        raise HamiltonianError("mapping register does not fit the active space")

    n = mapping.n_qubits
    alpha = lambda p: mapping.qubit_of(p)
    beta = lambda p: mapping.qubit_of(n_act + p)
    spins = (alpha, beta)

    total = PauliSum(n)
    for p in range(n_act):
        for q in range(n_act):
            if abs(h_eff[p, q]) <= integral_threshold:
                continue
            for spin in spins:
                term = FermionTerm(((spin(p), True), (spin(q), False)), h_eff[p, q])
                total = total + jw_transform(term, n)
    nz = np.argwhere(np.abs(g_act) > integral_threshold)
    for p, q, r, s in nz:
        coeff = 0.5 * g_act[p, q, r, s]
        for s1 in spins:
            for s2 in spins:
                term = FermionTerm(
                    ((s1(p), True), (s2(r), True), (s2(s), False), (s1(q), False)),
                    coeff,
                )
                total = total + jw_transform(term, n)

    for w in total.words():
        if abs(w.coefficient.imag) > HERMITICITY_TOL:
            raise HamiltonianError(
                f"non-hermitian assembly: term {w.axes} has imaginary part "
                f"{w.coefficient.imag:.3e}"
            )
    real_terms = PauliSum(n, (PauliWord(n, w.x_mask, w.z_mask, w.coefficient.real)
                              for w in total.words()))
    offset = core + real_terms.identity_part().real
    return QubitHamiltonian(n, real_terms.without_identity(), float(offset), mapping, space)


# ---------------------------------------------------------------------------
# measurement grouping

@dataclass(frozen=True)
class MeasurementGroup:
    """Qubit-wise commuting words plus the shared basis per qubit
    ('X', 'Y', 'Z', or '-' when unconstrained)."""

    index: int
    words: tuple[PauliWord, ...]
    basis: tuple[str, ...]

    def is_z_basis(self) -> bool:
        return all(b in ("Z", "-") for b in self.basis)


def qwc_group(h: QubitHamiltonian) -> list[MeasurementGroup]:
    """Greedy first-fit grouping, words in descending coefficient magnitude."""
    order = sorted(h.terms.words(), key=lambda w: (-abs(w.coefficient), w.axes))
    bases: list[list[str]] = []
    members: list[list[PauliWord]] = []
    for w in order:
        axes = w.axes
        placed = False
        for basis, group in zip(bases, members):
            if all(basis[q] in ("-", axes[q]) for q in w.support):
                for q in w.support:
                    basis[q] = axes[q]
                group.append(w)
                placed = True
                break
        if not placed:
            basis = ["-"] * h.n_qubits
            for q in w.support:
                basis[q] = axes[q]
            bases.append(basis)
            members.append([w])
    return [
        MeasurementGroup(i, tuple(ws), tuple(basis))
        for i, (ws, basis) in enumerate(zip(members, bases))
    ]


# ---------------------------------------------------------------------------
# dense reference

def _mask_table(h: QubitHamiltonian) -> list[tuple[int, int, complex]]:
    from .sim import word_masks

    table = []
    for w in h.terms.words():
        xb, zb, ny = word_masks(h.n_qubits, w.x_mask, w.z_mask)
        table.append((xb, zb, w.coefficient * (1j**ny)))
    return table


def dense_matrix(h: QubitHamiltonian) -> np.ndarray:
    """Full 2^n matrix including the offset (testing and small references)."""
    n = h.n_qubits
    if n > DENSE_QUBIT_LIMIT:
        raise HamiltonianError(f"{n} qubits too large for a dense matrix")
    dim = 1 << n
    idx = np.arange(dim, dtype=np.uint64)
    mat = np.zeros((dim, dim), dtype=complex)
    mat[idx.astype(np.int64), idx.astype(np.int64)] = h.offset
    for xb, zb, coeff in _mask_table(h):
        src = idx.astype(np.int64)
        dst = (idx ^ np.uint64(xb)).astype(np.int64)
        signs = 1.0 - 2.0 * (np.bitwise_count(idx & np.uint64(zb)) & np.uint64(1)).astype(float)
        mat[dst, src] += coeff * signs
    return mat


def sector_indices(h: QubitHamiltonian, sector: SpinSector) -> np.ndarray:
    """Amplitude indices whose alpha/beta occupation matches the sector."""
    if h.mapping is None:
        raise HamiltonianError("sector restriction needs a qubit mapping")
    n = h.n_qubits
    alpha_bits = sum(1 << (n - 1 - q) for q in h.mapping.alpha_qubits())
    beta_bits = sum(1 << (n - 1 - q) for q in h.mapping.beta_qubits())
    idx = np.arange(1 << n, dtype=np.uint64)
    na = np.bitwise_count(idx & np.uint64(alpha_bits))
    nb = np.bitwise_count(idx & np.uint64(beta_bits))
    return idx[(na == sector.n_alpha) & (nb == sector.n_beta)].astype(np.int64)


def exact_ground_energy(h: QubitHamiltonian, sector: Optional[SpinSector] = None) -> float:
    """Lowest eigenvalue, optionally restricted to a particle/spin sector.

    The molecular Hamiltonian conserves both spin occupations, so the sector
    block is exact rather than a projection.
    """
    n = h.n_qubits
    if n > DENSE_QUBIT_LIMIT:
        raise HamiltonianError(f"{n} qubits exceeds the {DENSE_QUBIT_LIMIT}-qubit dense cap")
    if sector is not None:
        keep = sector_indices(h, sector)
        lookup = {int(s): i for i, s in enumerate(keep)}
        dim = len(keep)
        if dim == 0:
            raise HamiltonianError("empty sector")
        sub = np.zeros((dim, dim), dtype=complex)
        for xb, zb, coeff in _mask_table(h):
            for j, s in enumerate(keep):
                target = int(s) ^ xb
                i = lookup.get(target)
                if i is not None:
                    sign = -1.0 if ((int(s) & zb).bit_count() & 1) else 1.0
                    sub[i, j] += coeff * sign
        vals = np.linalg.eigvalsh(sub)
        return float(vals[0] + h.offset)
    if n <= 10:
        vals = np.linalg.eigvalsh(dense_matrix(h))
        return float(vals[0])
    from scipy.sparse.linalg import LinearOperator, eigsh

    from . import kernels

    table = _mask_table(h)
    op = LinearOperator(
        (1 << n, 1 << n),
        matvec=lambda v: kernels.apply_pauli_sum(np.ascontiguousarray(v, dtype=np.complex128), n, table),
        dtype=np.complex128,
    )
    vals = eigsh(op, k=1, which="SA", return_eigenvectors=False)
    return float(vals[0] + h.offset)
