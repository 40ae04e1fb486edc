"""From quantum states to spectra, and what purity buys experimentally.

The one-qubit marginals of a pure state give its local spectra vector;
the W state lands exactly on the L=3 critical spectrum found by the
enumeration.  The purity table answers: how pure must a lab state be for
its spectra to resolve different polytope classes?
"""

import numpy as np

from entpoly.marginals import (
    ghz_state,
    in_delta_H,
    linear_entropy,
    local_spectra,
    product_zero_state,
    w_state,
)
from entpoly.purity import delta_precision, generic_threshold, purity_table
from entpoly.spectra import critical_spectra_enumerate

print("=== Local spectra of reference states (L=3) ===")
for name, st in (("product |000>", product_zero_state(3)),
                 ("GHZ", ghz_state(3)),
                 ("W", w_state(3))):
    lam = local_spectra(st)
    print(f"  {name:<14} lambda = {np.round(lam, 6)}  "
          f"E = {linear_entropy(st):.6f}  in polytope: {in_delta_H(lam)}")

enum = critical_spectra_enumerate(3)
print("\naccepted L=3 spectra:", [[str(x) for x in c.lam] for c in enum.accepted_classes])
print("the W state sits exactly on the (1/6,1/6,1/6) critical point")

print("\n=== Precision delta_L(p) = (L/2)(1 - sqrt(2p-1)) ===")
for p in (0.95, 0.99, 0.999):
    print(f"  L=7, p={p}: delta = {delta_precision(7, p):.4f}")
print(f"  generic threshold at L=7: 1/(2*sqrt(7)) = {generic_threshold(7):.4f}")

print("\n=== Purity requirements table ===")
dbs = {}
for L in (3, 4):
    e = critical_spectra_enumerate(L)
    dbs[L] = {"L": L, "spectra": [(c.lam, c.norm_sq, c.perm_orbit_size) for c in e.classes]}
print(f"{'L':>3} {'p_generic':>10} {'p_all':>10}")
for pt in purity_table(range(2, 11), dbs):
    p_all = f"{pt.p_all:.4f}" if pt.p_all is not None else "-"
    print(f"{pt.L:>3} {pt.p_generic:>10.4f} {p_all:>10}")
print("\n(the p_all column needs a spectra database; run the L=7 enumeration")
print(" and pass its JSON to `entpoly purity --db` for the headline numbers)")
