"""Exact hypercube geometry: sign vectors, Gram determinants, simplex heights.

Every quantity in this walk-through is exact: integer Gram matrices,
Bareiss determinants, rational squared distances.
"""

from entpoly import SignVector, VertexSubset, det_exact, dot, gram, squared_distance
from entpoly.spectra import affine_foot, min_norm_point

def sv(pattern):
    return SignVector.from_signs([1 if c == "+" else -1 for c in pattern])

print("=== Vertices of the 3-cube as sign patterns ===")
u, v = sv("+++"), sv("+--")
print(f"{u!r} . {v!r} = {dot(u, v)}   (L - 2 * Hamming distance)")

print("\n=== A Gram matrix and its exact determinant ===")
s = VertexSubset((sv("+++"), sv("++-"), sv("+-+")))
g = gram(s)
for row in g.entries:
    print("   ", row)
print("det =", det_exact(g))

print("\n=== Squared distance from the origin to the affine hull ===")
print("d^2 =", squared_distance(s), " (|lambda|^2 =", squared_distance(s) / 4, ")")

w_config = VertexSubset((sv("-++"), sv("+-+"), sv("++-")))
print("\nW-type triple:", [str(x) for x in w_config])
print("d^2 =", squared_distance(w_config), "so |lambda|^2 =", squared_distance(w_config) / 4)

foot, coeffs = affine_foot(w_config)
print("affine foot (half scaling):", foot, "coefficients:", coeffs)

print("\n=== Min-norm point of a hull vs the affine foot ===")
# here the foot is infeasible and the true min-norm point sits on a face
face_case = VertexSubset.from_bits([1, 2, 4, 9], 4)
foot, coeffs = affine_foot(face_case)
print("foot:", foot, "coefficients:", coeffs, "(one negative -> infeasible)")
res = min_norm_point(face_case)
print("hull min-norm point:", res.point)
print("supporting face:", res.on_boundary_face, "weights:", res.coefficients)
print("norm^2:", res.norm_sq, ">", sum(f * f for f in foot), "= foot norm^2")
