#!/usr/bin/env python3
"""Generate the benzene (4e,4o) pi-space FCIDUMP used by the optional
reference-energy tests.

Needs pyscf (not a dependency of this package). The active space is the
degenerate HOMO pair plus the degenerate LUMO pair of the pi system, which
in D2h carry the B2g/B3g and Au/B1u labels. Frozen-core contributions are
folded into the effective integrals, so the file is self-contained for a
4-orbital, 4-electron problem.

Usage:
    python scripts/make_benzene_fcidump.py [out.fcidump]

Then point the test suite at the file:
    UCCVQE_BENZENE_FCIDUMP=out.fcidump pytest tests/test_acceptance.py
or copy it to tests/data/benzene_cas44.fcidump.
"""
import sys

import numpy as np

try:
    from pyscf import ao2mo, gto, mcscf, scf, symm
except ImportError:
    sys.exit("this helper needs pyscf: pip install pyscf")

# Molpro/FCIDUMP ORBSYM labels for D2h
MOLPRO_D2H = {"Ag": 1, "B3u": 2, "B2u": 3, "B1g": 4, "B1u": 5, "B2g": 6, "B3g": 7, "Au": 8}

RING_RADIUS = 1.39  # angstrom, C-C bond length
CH_BOND = 1.09


def benzene_geometry():
    atoms = []
    for k in range(6):
        angle = np.pi / 3 * k
        c = np.array([np.cos(angle), np.sin(angle), 0.0])
        atoms.append(("C", tuple(RING_RADIUS * c)))
        atoms.append(("H", tuple((RING_RADIUS + CH_BOND) * c)))
    return atoms


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "benzene_cas44.fcidump"
    mol = gto.M(atom=benzene_geometry(), basis="sto-3g", symmetry="d2h", verbose=0)
    mf = scf.RHF(mol).run()
    print(f"RHF energy: {mf.e_tot:.6f} Ha")

    mc = mcscf.CASCI(mf, 4, 4)
    mo = mcscf.sort_mo_by_irrep(mc, mf.mo_coeff, {"B2g": 1, "B3g": 1, "B1u": 1, "Au": 1})
    mc.kernel(mo)
    print(f"CASCI(4,4) energy: {mc.e_tot:.6f} Ha")

    h1eff, ecore = mc.get_h1eff()
    h2eff = ao2mo.restore(1, mc.get_h2eff(), 4)
    cas_orbitals = mc.mo_coeff[:, mc.ncore : mc.ncore + 4]
    names = symm.label_orb_symm(mol, mol.irrep_name, mol.symm_orb, cas_orbitals)
    labels = [MOLPRO_D2H[name] for name in names]
    print(f"active orbital irreps: {list(names)} -> ORBSYM {labels}")

    lines = [
        " &FCI NORB=4,NELEC=4,MS2=0,",
        "  ORBSYM=" + ",".join(map(str, labels)) + ",",
        "  ISYM=1,",
        " &END",
    ]
    for p in range(4):
        for q in range(p + 1):
            for r in range(p + 1):
                smax = q if r == p else r
                for s in range(smax + 1):
                    if abs(h2eff[p, q, r, s]) > 1e-14:
                        lines.append(
                            f" {h2eff[p, q, r, s]:23.16e} {p+1:3d} {q+1:3d} {r+1:3d} {s+1:3d}"
                        )
    for p in range(4):
        for q in range(p + 1):
            if abs(h1eff[p, q]) > 1e-14:
                lines.append(f" {h1eff[p, q]:23.16e} {p+1:3d} {q+1:3d}   0   0")
    lines.append(f" {ecore:23.16e}   0   0   0   0")
    with open(out, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {out}")

    # cross-check with this package's own diagonalization
    try:
        from uccvqe.hamio import ActiveSelection, build_qubit_hamiltonian, exact_ground_energy, parse_fcidump
        from uccvqe.mapping import QubitMapping
        from uccvqe.symmetry import SpinSector

        ints = parse_fcidump(out)
        h = build_qubit_hamiltonian(ints, ActiveSelection.full(ints), QubitMapping.identity(4))
        e = exact_ground_energy(h, SpinSector(2, 2))
        print(f"uccvqe sector diagonalization: {e:.6f} Ha (CASCI {mc.e_tot:.6f})")
        assert abs(e - mc.e_tot) < 1e-6
    except ImportError:
        pass


if __name__ == "__main__":
    main()
