import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import d2h_product_label
from uccvqe.ansatz import Excitation
from uccvqe.mapping import QubitMapping
from uccvqe.symmetry import (
    Irrep,
    OrbitalSymmetry,
    SpinSector,
    SymmetryError,
    excitation_allowed,
    irrep_product,
    sector_of_bitstring,
)


class TestIrrepProduct:
    def test_identity_element(self):
        ag = Irrep(1)
        for label in range(1, 9):
            assert irrep_product(ag, Irrep(label)).label == label

    def test_against_character_table(self):
        for a in range(1, 9):
            for b in range(1, 9):
                got = irrep_product(Irrep(a), Irrep(b)).label
                assert got == d2h_product_label(a, b), (a, b)

    def test_named_products(self):
        b2g, b3g, b1u, au = Irrep(6), Irrep(7), Irrep(5), Irrep(8)
        assert irrep_product(b2g, b3g).name == "B1g"
        assert irrep_product(au, b1u).name == "B1g"

    def test_group_axioms(self):
        items = [Irrep(l) for l in range(1, 9)]
        for a, b, c in itertools.product(items, repeat=3):
            assert irrep_product(irrep_product(a, b), c) == irrep_product(a, irrep_product(b, c))
        for a in items:
            assert irrep_product(a, a).is_totally_symmetric()

    def test_label_out_of_range(self):
        with pytest.raises(SymmetryError, match="D2h"):
            Irrep(9)
        with pytest.raises(SymmetryError):
            Irrep(0)


class TestScreening:
    def test_paired_always_allowed(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            sym = OrbitalSymmetry.from_labels(rng.integers(1, 9, size=4))
            exc = Excitation("double", "ab", (0, 0), (3, 3), 0)
            assert excitation_allowed(exc, sym)

    def test_benzene_singles_all_forbidden(self, benzene_pi_symmetry):
        for i in (0, 1):
            for a in (2, 3):
                exc = Excitation("single", "aa", (i,), (a,), 0)
                assert not excitation_allowed(exc, benzene_pi_symmetry)

    def test_benzene_ab_doubles_half_allowed(self, benzene_pi_symmetry):
        allowed = 0
        for i, j, a, b in itertools.product((0, 1), (0, 1), (2, 3), (2, 3)):
            exc = Excitation("double", "ab", (i, j), (a, b), 0)
            if excitation_allowed(exc, benzene_pi_symmetry):
                allowed += 1
        assert allowed == 8

    def test_all_symmetric_never_screens(self):
        sym = OrbitalSymmetry.all_symmetric(5)
        rng = np.random.default_rng(1)
        for _ in range(20):
            i, j = rng.integers(0, 2, size=2)
            a, b = rng.integers(2, 5, size=2)
            exc = Excitation("double", "ab", (int(i), int(j)), (int(a), int(b)), 0)
            assert excitation_allowed(exc, sym)

    @given(st.permutations(range(4)), st.lists(st.integers(1, 8), min_size=4, max_size=4))
    @settings(max_examples=50, deadline=None)
    def test_screening_stable_under_relabeling(self, perm, labels):
        sym = OrbitalSymmetry.from_labels(labels)
        sym_p = OrbitalSymmetry.from_labels([labels[perm[k]] for k in range(4)])
        inverse = {perm[k]: k for k in range(4)}
        excs = [
            Excitation("double", "ab", (i, j), (a, b), 0)
            for i, j, a, b in itertools.product((0, 1), (0, 1), (2, 3), (2, 3))
        ]
        count = sum(excitation_allowed(e, sym) for e in excs)
        count_p = sum(
            excitation_allowed(
                Excitation("double", "ab",
                           (inverse[e.occ[0]], inverse[e.occ[1]]),
                           (inverse[e.virt[0]], inverse[e.virt[1]]), 0),
                sym_p,
            )
            for e in excs
        )
        assert count == count_p

    def test_orbital_outside_table(self):
        exc = Excitation("single", "aa", (0,), (5,), 0)
        with pytest.raises(SymmetryError):
            excitation_allowed(exc, OrbitalSymmetry.all_symmetric(3))


class TestSpinSector:
    def test_all_zero_bitstring(self):
        assert sector_of_bitstring("0000", QubitMapping.identity(2)) == SpinSector(0, 0)

    def test_hartree_fock_occupation(self):
        m = QubitMapping.identity(4)
        assert sector_of_bitstring("11001100", m) == SpinSector(2, 2)

    def test_single_alpha_flip(self):
        m = QubitMapping.identity(4)
        assert sector_of_bitstring("10001100", m) == SpinSector(1, 2)

    def test_respects_mapping(self):
        m = QubitMapping.from_spatial_order([1, 0])
        # alpha qubits are 1 and 0; "10" on the first two qubits is one alpha
        assert sector_of_bitstring("1000", m) == SpinSector(1, 0)

    def test_length_mismatch(self):
        with pytest.raises(SymmetryError):
            sector_of_bitstring("000", QubitMapping.identity(2))

    def test_negative_counts_rejected(self):
        with pytest.raises(SymmetryError):
            SpinSector(-1, 0)
