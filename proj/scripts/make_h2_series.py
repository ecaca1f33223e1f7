"""Writes H2/STO-3G integral files along a bond-stretch series and a scan
config that walks them.  Needs PySCF; the outputs are committed, so this is
only for regenerating them."""

import argparse
from pathlib import Path

from pyscf import gto, scf
from pyscf.tools import fcidump

R0_BOHR = 1.4011
RATIOS = [0.75, 1.0, 1.25, 1.5, 2.0, 2.5, 3.0]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data" / "h2_series")
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    points = []
    for ratio in RATIOS:
        r = ratio * R0_BOHR
        mol = gto.M(atom=f"H 0 0 0; H 0 0 {r}", unit="Bohr", basis="sto-3g", verbose=0)
        mf = scf.RHF(mol).run()
        name = f"h2_r{ratio:.2f}.fcidump"
        fcidump.from_scf(mf, str(args.out / name), tol=1e-15)
        points.append((ratio, name, mf.e_tot))

    lines = [
        "# H2/STO-3G bond stretch, r0 = 1.4011 bohr",
        "emax = 1.5",
        "emin = -2.0",
        "bits = 20",
        "variant = A",
        "samples = 1000",
        "seed = 20260101",
        "csv = h2_scan.csv",
        "json = h2_scan.json",
        "",
    ]
    for ratio, name, _ in points:
        lines += ["[point]", f"label = r/r0={ratio:.2f}", f"fcidump = {name}", "sector = 1,1",
                  "guess = hf", "target = 0", ""]
    (args.out / "scan.ini").write_text("\n".join(lines))
    for ratio, name, e in points:
        print(f"{ratio:5.2f}  {name}  E(RHF) = {e:.10f}")


if __name__ == "__main__":
    main()
