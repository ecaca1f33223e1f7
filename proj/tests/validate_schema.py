"""Runs the CLI on a few scan configs and checks every JSON report against
the shipped schemas and every CSV against the documented header."""

import json
import shutil
import subprocess
import sys
from pathlib import Path

import jsonschema

SCAN_HEADER = ("label,guess,n_alpha,n_beta,target,variant,repetitions,fci_energy,overlap2,"
               "overlap2_scaled,p_down,p_up,p_tot,p_success,pruned_mass,samples,sampled_success,"
               "min_energy,min_energy_count,window_brackets,error")
SCALING_HEADER = "label,n_basis,fci_dim,pauli_strings,hadamard,cnot,rx,rz,controlled_rz,gate_total"

POINTS = """
[point]
label = hf
fcidump = h2_sto3g_1.4011.fcidump
sector = 1,1
guess = hf
target = 0

[point]
label = triplet
fcidump = h2_sto3g_1.4011.fcidump
sector = 1,1
guess = csf:triplet:0:1
target = 1

[point]
label = broken
fcidump = h2_sto3g_1.4011.fcidump
sector = 1,1
guess = hf
target = 7
"""

CONFIGS = {
    "a": "emax = 1\nemin = -2\nbits = 16\nsamples = 50\nseed = 3\n",
    "b": "emax = 1\nemin = -2\nbits = 12\nvariant = B\nreps = 11,31\nsamples = 5\nseed = 3\n",
    "empty": "emax = 1\nemin = -2\n",
}


def check(cond, msg):
    if not cond:
        print("FAIL:", msg)
        sys.exit(1)


def main():
    exe, schema_path, data_dir, work = sys.argv[1:5]
    work = Path(work)
    shutil.rmtree(work, ignore_errors=True)
    work.mkdir(parents=True)
    shutil.copy(Path(data_dir) / "h2_sto3g_1.4011.fcidump", work)
    scan_schema = json.loads(Path(schema_path).read_text())
    scaling_schema = json.loads((Path(schema_path).parent / "scaling_report.schema.json").read_text())

    for name, head in CONFIGS.items():
        body = head + f"csv = {name}.csv\njson = {name}.json\n" + ("" if name == "empty" else POINTS)
        (work / f"{name}.ini").write_text(body)
        subprocess.run([exe, "run", "--config", str(work / f"{name}.ini")], check=True, capture_output=True)
        doc = json.loads((work / f"{name}.json").read_text())
        jsonschema.validate(doc, scan_schema)
        lines = (work / f"{name}.csv").read_text().splitlines()
        check(lines[0] == SCAN_HEADER, f"{name}: CSV header changed")
        expected_rows = 0 if name == "empty" else 3 * len(doc["config"]["repetitions"] if name == "b" else [1])
        check(len(lines) - 1 == expected_rows, f"{name}: {len(lines) - 1} CSV rows, expected {expected_rows}")
        if name != "empty":
            check(doc["points"][2]["error"], f"{name}: broken point has no error")
        print(f"{name}: schema ok, {len(doc['points'])} points")

    subprocess.run([exe, "scaling", "--sizes", "4,6,8", "--seed", "1", "--csv", str(work / "scaling.csv"),
                    "--json", str(work / "scaling.json")], check=True, capture_output=True)
    jsonschema.validate(json.loads((work / "scaling.json").read_text()), scaling_schema)
    check((work / "scaling.csv").read_text().splitlines()[0] == SCALING_HEADER, "scaling CSV header changed")
    print("scaling: schema ok")


if __name__ == "__main__":
    main()
