"""Pauli-string algebra and the Jordan-Wigner transformation.

Words are stored symplectically as two bitmasks (bit q set = non-trivial
action on qubit q) plus a complex coefficient:

    x_mask bit only  -> X,   z_mask bit only -> Z,   both bits -> Y.

Qubit 0 is the leftmost tensor factor everywhere, so the textual form of a
word reads left to right in qubit order ("XZIY" puts X on qubit 0).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

COEFF_EPS = 1e-12

_AXIS_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BIT_AXES = {bits: axis for axis, bits in _AXIS_BITS.items()}


def _axis_of(x: int, z: int) -> str:
    return _BIT_AXES[(x, z)]


class PauliError(ValueError):
    pass


@dataclass(frozen=True)
class PauliWord:
    """A coefficient times a tensor product of single-qubit Paulis."""

    n: int
    x_mask: int
    z_mask: int
    coefficient: complex = 1.0 + 0j

    def __post_init__(self):
        if self.n < 0 or self.x_mask >> self.n or self.z_mask >> self.n:
            raise PauliError(f"masks exceed {self.n} qubits")

    @classmethod
    def from_axes(cls, axes: str, coefficient: complex = 1.0) -> "PauliWord":
        x = z = 0
        for q, a in enumerate(axes):
            try:
                xb, zb = _AXIS_BITS[a]
            except KeyError:
                raise PauliError(f"invalid axis {a!r}") from None
            x |= xb << q
            z |= zb << q
        return cls(len(axes), x, z, coefficient)

    @property
    def axes(self) -> str:
        return "".join(
            _axis_of((self.x_mask >> q) & 1, (self.z_mask >> q) & 1) for q in range(self.n)
        )

    @property
    def support(self) -> tuple[int, ...]:
        m = self.x_mask | self.z_mask
        return tuple(q for q in range(self.n) if (m >> q) & 1)

    def is_identity(self) -> bool:
        return not (self.x_mask | self.z_mask)

    def __mul__(self, other: "PauliWord") -> "PauliWord":
        if self.n != other.n:
            raise PauliError("qubit counts differ")
        x3 = self.x_mask ^ other.x_mask
        z3 = self.z_mask ^ other.z_mask
        # i-exponent from recanonicalizing Y = iXZ on every qubit
        k = (
            (self.x_mask & self.z_mask).bit_count()
            + (other.x_mask & other.z_mask).bit_count()
            - (x3 & z3).bit_count()
            + 2 * (self.z_mask & other.x_mask).bit_count()
        ) % 4
        return PauliWord(self.n, x3, z3, self.coefficient * other.coefficient * (1j**k))

    def commutes_with(self, other: "PauliWord") -> bool:
        anti = (self.x_mask & other.z_mask).bit_count() + (self.z_mask & other.x_mask).bit_count()
        return anti % 2 == 0

    def qubitwise_commutes_with(self, other: "PauliWord") -> bool:
        """True when on every qubit the axes agree or at least one is I."""
        s1 = self.x_mask | self.z_mask
        s2 = other.x_mask | other.z_mask
        both = s1 & s2
        return (self.x_mask ^ other.x_mask) & both == 0 and (self.z_mask ^ other.z_mask) & both == 0

    def conjugate(self) -> "PauliWord":
        return PauliWord(self.n, self.x_mask, self.z_mask, self.coefficient.conjugate())

    def __str__(self) -> str:
        c = self.coefficient
        if abs(c.imag) < COEFF_EPS:
            return f"{c.real:+.12e} {self.axes}"
        return f"({c.real:.12e}{c.imag:+.12e}j) {self.axes}"


class PauliSum:
    """Canonicalized linear combination of Pauli words on a fixed register.

    Duplicate axes merge by coefficient addition; terms with magnitude below
    ``COEFF_EPS`` are dropped.
    """

    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms: Iterable[PauliWord] = ()):
        self.n = n
        self._terms: dict[tuple[int, int], complex] = {}
        for w in terms:
            self.add_word(w)
        self.prune()

    def add_word(self, w: PauliWord) -> None:
        if w.n != self.n:
            raise PauliError("qubit counts differ")
        key = (w.x_mask, w.z_mask)
        self._terms[key] = self._terms.get(key, 0.0 + 0j) + complex(w.coefficient)

    def prune(self) -> None:
        dead = [k for k, c in self._terms.items() if abs(c) < COEFF_EPS]
        for k in dead:
            del self._terms[k]

    def words(self) -> Iterator[PauliWord]:
        for (x, z), c in sorted(self._terms.items()):
            yield PauliWord(self.n, x, z, c)

    def coefficient(self, axes: str) -> complex:
        w = PauliWord.from_axes(axes)
        return self._terms.get((w.x_mask, w.z_mask), 0.0 + 0j)

    def __len__(self) -> int:
        return len(self._terms)

    def __add__(self, other: "PauliSum") -> "PauliSum":
        if self.n != other.n:
            raise PauliError("qubit counts differ")
        out = PauliSum(self.n)
        out._terms = dict(self._terms)
        for (x, z), c in other._terms.items():
            out._terms[(x, z)] = out._terms.get((x, z), 0.0 + 0j) + c
        out.prune()
        return out

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + (other * -1.0)

    def __mul__(self, scalar: complex) -> "PauliSum":
        out = PauliSum(self.n)
        out._terms = {k: c * scalar for k, c in self._terms.items()}
        out.prune()
        return out

    def product(self, other: "PauliSum") -> "PauliSum":
        out = PauliSum(self.n)
        for w1 in self.words():
            for w2 in other.words():
                out.add_word(w1 * w2)
        out.prune()
        return out

    def adjoint(self) -> "PauliSum":
        out = PauliSum(self.n)
        out._terms = {k: c.conjugate() for k, c in self._terms.items()}
        return out

    def is_hermitian(self, tol: float = COEFF_EPS) -> bool:
        return all(abs(c.imag) < tol for c in self._terms.values())

    def identity_part(self) -> complex:
        return self._terms.get((0, 0), 0.0 + 0j)

    def without_identity(self) -> "PauliSum":
        out = PauliSum(self.n)
        out._terms = {k: c for k, c in self._terms.items() if k != (0, 0)}
        return out

    def __str__(self) -> str:
        return "\n".join(str(w) for w in self.words())

    def __repr__(self) -> str:
        return f"PauliSum(n={self.n}, terms={len(self)})"


@dataclass(frozen=True)
class FermionTerm:
    """Ordered product of ladder operators times a coefficient.

    ``ops`` entries are (mode index, dagger). Mode indices refer to whatever
    register the caller works in; for us that is qubit order, i.e. spin
    orbitals already sent through a QubitMapping.
    """

    ops: tuple[tuple[int, bool], ...]
    coefficient: complex = 1.0 + 0j

    def adjoint(self) -> "FermionTerm":
        return FermionTerm(
            tuple((p, not dag) for p, dag in reversed(self.ops)),
            self.coefficient.conjugate(),
        )


def jw_ladder(p: int, dagger: bool, n: int) -> PauliSum:
    """Jordan-Wigner image of a single ladder operator on mode p of n.

    a_p^dag -> Z x ... x Z x (X - iY)/2 x I x ... (Z on modes < p); the
    un-daggered operator flips the sign of the Y part.
    """
    if not 0 <= p < n:
        raise PauliError(f"mode {p} out of range for {n} qubits")
    zchain = (1 << p) - 1
    sign = -1j if dagger else 1j
    return PauliSum(
        n,
        [
            PauliWord(n, 1 << p, zchain, 0.5),
            PauliWord(n, 1 << p, zchain | (1 << p), 0.5 * sign),
        ],
    )


def jw_transform(term: FermionTerm, n: int) -> PauliSum:
    """Jordan-Wigner image of an ordered ladder-operator product."""
    out = PauliSum(n, [PauliWord(n, 0, 0, term.coefficient)])
    for p, dag in term.ops:
        out = out.product(jw_ladder(p, dag, n))
    return out


def antihermitian_generator(exc, mapping) -> PauliSum:
    """Generator t - t^dag of one cluster-operator excitation, unit amplitude.

    ``exc`` supplies the spin orbitals via ``exc.spin_orbital_pairs(n_spatial)``
    (a creation/annihilation pair list, outermost first) and ``mapping`` sends
    spin orbitals to qubits. Coefficients of the result are purely imaginary:
    8 words for a double excitation, 2 for a single.
    """
    n = mapping.n_qubits
    ops: list[tuple[int, bool]] = []
    for create_so, annihilate_so in exc.spin_orbital_pairs(mapping.n_spatial):
        ops.append((mapping.qubit_of(create_so), True))
        ops.append((mapping.qubit_of(annihilate_so), False))
    t = FermionTerm(tuple(ops))
    return jw_transform(t, n) - jw_transform(t.adjoint(), n)
