"""Enumerating all critical local spectra for small qubit counts.

The sweep classifies every L-subset of cube vertices (one representative
per signed-permutation orbit for L >= 5), keeps min-norm points passing
the positivity and edge filters, and adds the two manual points: the
origin and the separable corner.

Run with L=7 to reproduce the full exhaustive computation (about five
minutes; 221778 orbits standing for 9.45e10 subsets):

    python demos/02_enumerate_spectra.py 7
"""

import sys
import time

from entpoly.spectra import critical_spectra_enumerate, save_spectra_db

L = int(sys.argv[1]) if len(sys.argv) > 1 else 4

t0 = time.perf_counter()
enum = critical_spectra_enumerate(L)
elapsed = time.perf_counter() - t0

print(f"=== Critical local spectra at L={L} ({elapsed:.1f}s) ===")
print(f"subsets swept: {enum.subsets_total} "
      f"({len(enum.records)} records, reduction={'on' if enum.reduced else 'off'})")
print(f"linearly dependent: {enum.dependent_weight} "
      f"({enum.dependent_weight / enum.subsets_total:.1%})")
print(f"accepted classes: {len(enum.accepted_classes)}")
print(f"distinct spectra: {enum.total_spectra}  "
      f"(permutation orbits: {enum.permutation_orbits})")

m = enum.min_accepted_norm_sq()
if m is not None:
    print(f"min accepted |lambda|^2 = {m} = {float(m):.6g}")

show = enum.classes if len(enum.classes) <= 12 else enum.classes[:12]
print("\nclass representative (sorted desc) | |lambda|^2 | perms | subsets | E_C")
for cls in show:
    tag = " (manual)" if cls.manual else ""
    print(f"  {[str(x) for x in cls.lam]} | {cls.norm_sq} | {cls.perm_orbit_size} "
          f"| {cls.subset_weight} | {cls.linear_entropy()}{tag}")
if len(enum.classes) > 12:
    print(f"  ... and {len(enum.classes) - 12} more classes")

out = f"spectra_L{L}.json"
save_spectra_db(out, enum)
print(f"\nwrote {out}")
