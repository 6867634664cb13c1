"""
Galois fields from data files
=============================

The cubic field of conductor 7 and Q(zeta_5) ship with the package as
JSON field data.  Load them, inspect a few invariants, then compute S_k.
"""

from importlib import resources
from itertools import islice

from isoprimes.galois import load_field_data
from isoprimes.orchestrator import RunConfig, run_combined

data = resources.files("isoprimes.data")

for name in ("3.3.49.1.json", "4.0.125.1.json"):
    path = str(data.joinpath(name))
    K = load_field_data(path)
    print(name, "degree", K.degree, "disc", K.discriminant, "h", K.class_number)
    print("  first split primes:", list(islice(K.split_primes(), 5)))
    print("  residue degrees of 2:", K.residue_degrees(2))
    report = run_combined(RunConfig(kind="galois", path=path, type2_cap=10 ** 5))
    print("  S_k minus Mazur:", report.beyond_mazur)
    print("  caveats:", report.caveats)
