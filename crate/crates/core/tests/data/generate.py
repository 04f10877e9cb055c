"""Regenerate the FCIDUMP fixtures and their reference FCI energies.

Requires pyscf. Writes <name>.fcidump files next to this script and prints
reference energies as JSON (stored in reference_energies.json).
"""
import json
import os

from pyscf import fci, gto, scf
from pyscf.tools import fcidump

HERE = os.path.dirname(os.path.abspath(__file__))


def chain(bonds):
    z, atoms = 0.0, ["H 0 0 0"]
    for b in bonds:
        z += b
        atoms.append(f"H 0 0 {z}")
    return "; ".join(atoms)


SYSTEMS = {
    "h2_0.735": "H 0 0 0; H 0 0 0.735",
    "h2_2.5": "H 0 0 0; H 0 0 2.5",
    "h4_reactant": chain([0.74, 1.60, 0.74]),
    "h4_ts": chain([0.90, 1.10, 0.90]),
    "h4_product": chain([0.80, 1.30, 0.95]),
    "h6_chain": chain([1.0] * 5),
}


def main():
    refs = {}
    for name, geom in SYSTEMS.items():
        mol = gto.M(atom=geom, basis="sto-3g", unit="Angstrom", verbose=0)
        mf = scf.RHF(mol).run(conv_tol=1e-12)
        path = os.path.join(HERE, f"{name}.fcidump")
        fcidump.from_scf(mf, path, tol=1e-15)
        cis = fci.FCI(mf)
        cis.conv_tol = 1e-12
        e_fci, _ = cis.kernel()
        refs[name] = {"hf": mf.e_tot, "fci": e_fci}
    with open(os.path.join(HERE, "reference_energies.json"), "w") as f:
        json.dump(refs, f, indent=2, sort_keys=True)
    print(json.dumps(refs, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
