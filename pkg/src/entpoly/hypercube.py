"""Exact combinatorics of sign-vector subsets of the hypercube.

Vertices of the L-dimensional hypercube centred at the origin are stored
as L-bit masks (bit i set means entry i equals -1, in the +/-1 scaling).
Everything in this module is exact: determinants use fraction-free
(Bareiss) elimination over Python's arbitrary-precision integers, and
squared simplex heights are returned as `fractions.Fraction`.

Floating point appears only in the Monte Carlo subset sampler, which is
consumed by `entpoly.spectra` for large-L distance statistics.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

MAX_LENGTH = 256
EXHAUSTIVE_CAP = 7

# Prime used by the exact singularity screen in the vectorized sampler.
# Small enough that fraction-free elimination mod p stays inside int64.
_SCREEN_PRIME = 2**30 - 35

_CHUNK = 4096
_HASH_WEIGHTS_SEED = 0x5EED_CAFE


class DependentSubsetError(ValueError):
    """Raised when an operation requires a linearly independent subset."""


class EnumerationCapError(ValueError):
    """Raised when exhaustive enumeration is requested above the cap."""


@dataclass(frozen=True)
class SignVector:
    """A hypercube vertex as an L-bit sign pattern.

    ``bits`` has bit i set exactly when entry i equals -1; entries are
    indexed 0..length-1.  The squared Euclidean norm of the +/-1 vector
    is exactly ``length``.
    """

    bits: int
    length: int

    def __post_init__(self):
        if not 1 <= self.length <= MAX_LENGTH:
            raise ValueError(f"length must be in 1..{MAX_LENGTH}, got {self.length}")
        if not 0 <= self.bits < (1 << self.length):
            raise ValueError("bits outside the valid range for this length")

    @classmethod
    def from_signs(cls, signs: Iterable[int]) -> "SignVector":
        signs = list(signs)
        bits = 0
        for i, s in enumerate(signs):
            if s == -1:
                bits |= 1 << i
            elif s != 1:
                raise ValueError(f"entries must be +1 or -1, got {s!r}")
        return cls(bits, len(signs))

    def entry(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(f"entry index {i} out of range for length {self.length}")
        return -1 if (self.bits >> i) & 1 else 1

    def signs(self) -> tuple[int, ...]:
        return tuple(-1 if (self.bits >> i) & 1 else 1 for i in range(self.length))

    def half(self) -> tuple[Fraction, ...]:
        """The +/-(1/2)-scaled view of this vertex."""
        h = Fraction(1, 2)
        return tuple(-h if (self.bits >> i) & 1 else h for i in range(self.length))

    def as_array(self) -> np.ndarray:
        return np.array(self.signs(), dtype=np.int8)

    def __repr__(self):
        pattern = "".join("-" if (self.bits >> i) & 1 else "+" for i in range(self.length))
        return f"SignVector({pattern!r})"


@dataclass(frozen=True)
class VertexSubset:
    """An ordered collection of exactly L distinct vertices of the L-cube."""

    vertices: tuple[SignVector, ...]

    def __post_init__(self):
        if not self.vertices:
            raise ValueError("subset must not be empty")
        L = self.vertices[0].length
        if any(v.length != L for v in self.vertices):
            raise ValueError("all vertices must share the same length")
        if len(self.vertices) != L:
            raise ValueError(f"subset must contain exactly L={L} vertices, got {len(self.vertices)}")
        if len({v.bits for v in self.vertices}) != len(self.vertices):
            raise ValueError("vertices must be distinct")

    @classmethod
    def from_bits(cls, ids: Sequence[int], length: int) -> "VertexSubset":
        return cls(tuple(SignVector(b, length) for b in ids))

    @property
    def length(self) -> int:
        return self.vertices[0].length

    def ids(self) -> tuple[int, ...]:
        return tuple(v.bits for v in self.vertices)

    def as_matrix(self) -> np.ndarray:
        """Rows are the +/-1 vertex vectors."""
        return np.stack([v.as_array() for v in self.vertices])

    def __iter__(self) -> Iterator[SignVector]:
        return iter(self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class GramMatrixInt:
    """Exact integer Gram matrix of a vertex subset (+/-1 scaling)."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.entries)
        if any(len(row) != n for row in self.entries):
            raise ValueError("Gram matrix must be square")
        for i in range(n):
            if self.entries[i][i] != n:
                raise ValueError("diagonal entries must equal L")
            for j in range(i):
                e = self.entries[i][j]
                if e != self.entries[j][i]:
                    raise ValueError("Gram matrix must be symmetric")
                if abs(e) > n or (e - n) % 2 != 0:
                    raise ValueError("off-diagonal entries must be in [-L, L] and congruent to L mod 2")

    @property
    def dim(self) -> int:
        return len(self.entries)

    def rows(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def dot(u: SignVector, v: SignVector) -> int:
    """Exact dot product of two +/-1 sign vectors."""
    if u.length != v.length:
        raise ValueError(f"length mismatch: {u.length} != {v.length}")
    return u.length - 2 * (u.bits ^ v.bits).bit_count()


def gram(s: VertexSubset) -> GramMatrixInt:
    """Gram matrix G_ij = v_i . v_j of the +/-1 vertex vectors."""
    ids = s.ids()
    L = s.length
    entries = tuple(
        tuple(L - 2 * (ids[i] ^ ids[j]).bit_count() for j in range(L)) for i in range(L)
    )
    return GramMatrixInt(entries)


def det_exact(matrix) -> int:
    """Exact determinant of a square integer matrix (Bareiss elimination).

    Accepts a GramMatrixInt or any sequence of equal-length integer rows.
    Intermediate values are arbitrary-precision, so there is no overflow
    and no rounding; the empty (0x0) matrix has determinant 1.
    """
    if isinstance(matrix, GramMatrixInt):
        m = matrix.rows()
    else:
        m = [list(row) for row in matrix]
    n = len(m)
    if n == 0:
        return 1
    if any(len(row) != n for row in m):
        raise ValueError("matrix must be square")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            row_i = m[i]
            row_k = m[k]
            f = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - f * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def vertex_matrix_det(s: VertexSubset) -> int:
    """Exact determinant of the L x L matrix whose rows are the +/-1 vertices."""
    return det_exact([list(v.signs()) for v in s.vertices])


def is_independent(s: VertexSubset) -> bool:
    """True iff the vertex vectors are linearly independent."""
    return vertex_matrix_det(s) != 0


def _difference_gram_rows(g_rows: list[list[int]]) -> list[list[int]]:
    """Gram matrix of (v_i - v_last), i < L-1, from the Gram matrix of the v_i."""
    L = len(g_rows)
    last = L - 1
    return [
        [
            g_rows[i][j] - g_rows[i][last] - g_rows[last][j] + g_rows[last][last]
            for j in range(L - 1)
        ]
        for i in range(L - 1)
    ]


def squared_distance(s: VertexSubset) -> Fraction:
    """Squared distance from the origin to the affine hull of the +/-1 vertices.

    This is the ratio |G(v_1..v_L)| / |G(v_1-v_L, .., v_{L-1}-v_L)| as an
    exact positive rational.  In the +/-(1/2) vertex scaling the squared
    distance is a quarter of this value.
    """
    g_rows = gram(s).rows()
    num = det_exact(g_rows)
    if num == 0:
        raise DependentSubsetError("subset is linearly dependent")
    den = det_exact(_difference_gram_rows(g_rows))
    if den == 0:  # unreachable: independence implies affine independence
        raise DependentSubsetError("degenerate simplex base")
    return Fraction(num, den)


def squared_distance_from_ids(ids: Sequence[int], length: int) -> Fraction:
    """`squared_distance` on raw vertex ids, without building objects."""
    L = length
    g = [[L - 2 * (ids[i] ^ ids[j]).bit_count() for j in range(L)] for i in range(L)]
    num = det_exact(g)
    if num == 0:
        raise DependentSubsetError("subset is linearly dependent")
    den = det_exact(_difference_gram_rows(g))
    if den == 0:
        raise DependentSubsetError("degenerate simplex base")
    return Fraction(num, den)


# ---------------------------------------------------------------------------
# Exhaustive enumeration, plain and symmetry-reduced
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EnumerationSummary:
    """What an exhaustive sweep visited.

    ``total_weight`` counts subsets including orbit multiplicity, so with
    symmetry reduction it still equals C(2^L, L).
    """

    length: int
    visited: int
    total_weight: int
    reduced: bool


def enumerate_subsets(
    L: int,
    visitor: Callable[[VertexSubset, int], None],
    symmetry_reduction: bool = False,
    cap: int = EXHAUSTIVE_CAP,
) -> EnumerationSummary:
    """Visit every L-subset of the 2^L cube vertices exactly once.

    With ``symmetry_reduction`` the visitor instead receives one canonical
    representative per orbit of the signed-permutation symmetry group of
    the cube (coordinate permutations and sign flips), together with the
    orbit size as multiplicity; without it, multiplicity is always 1.
    Visitation order is deterministic either way.
    """
    if L > cap:
        raise EnumerationCapError(f"exhaustive enumeration capped at L={cap}, got L={L}")
    if L < 1:
        raise ValueError("L must be positive")
    if symmetry_reduction:
        visited = 0
        weight = 0
        for ids, orbit_size in orbit_representatives(L):
            visitor(VertexSubset.from_bits(ids, L), orbit_size)
            visited += 1
            weight += orbit_size
        return EnumerationSummary(L, visited, weight, True)
    visited = 0
    for ids in itertools.combinations(range(1 << L), L):
        visitor(VertexSubset.from_bits(ids, L), 1)
        visited += 1
    return EnumerationSummary(L, visited, visited, False)


class _SignedPermTables:
    """Lookup tables for the signed-permutation group acting on vertex ids."""

    def __init__(self, L: int):
        self.L = L
        nv = 1 << L
        perms = list(itertools.permutations(range(L)))
        table = np.zeros((len(perms), nv), dtype=np.uint8 if L <= 8 else np.uint32)
        for pi, perm in enumerate(perms):
            shifted = np.zeros(nv, dtype=np.int64)
            for i in range(L):
                bit = (np.arange(nv) >> i) & 1
                shifted |= bit << perm[i]
            table[pi] = shifted
        self.perm_table = table
        self.group_order = len(perms) << L
        pc = np.array([bin(v).count("1") for v in range(nv)], dtype=np.uint8)
        self.popcount = pc
        # perm ids mapping vertex u onto the packed-low vertex with the same
        # popcount; used to restrict scans to candidate-minimal images.
        self.coset: dict[int, np.ndarray] = {}
        for u in range(1, nv):
            target = (1 << int(pc[u])) - 1
            self.coset[u] = np.nonzero(table[:, u] == target)[0]

    def min_image_packed(self, ids_arr: np.ndarray, base: int, perm_ids: np.ndarray):
        """Min (and multiplicity) over `perm_ids` of the packed sorted image tuple."""
        imgs = self.perm_table[np.ix_(perm_ids, ids_arr ^ base)].astype(np.uint64)
        imgs.sort(axis=1)
        k = imgs.shape[1]
        weights = (np.uint64(1) << (np.uint64(8) * np.arange(k - 1, -1, -1, dtype=np.uint64)))
        packed = imgs @ weights
        best = packed.min()
        return best, int((packed == best).sum())


def _pack_ids(ids: Sequence[int]) -> int:
    out = 0
    for v in ids:
        out = (out << 8) | v
    return out


def _canonical_scan(tables: _SignedPermTables, ids: tuple[int, ...]):
    """Min packed canonical key and its multiplicity over the whole group.

    Only (base, permutation) pairs that can reach the minimal possible
    second element are scanned; every group element attaining the overall
    minimum lies in that set, so the returned multiplicity is the order
    of the subset stabilizer whenever `ids` is canonical.
    """
    arr = np.asarray(ids, dtype=np.int64)
    pc = tables.popcount
    best = None
    count = 0
    cmins = []
    for v in ids:
        others = arr[arr != v] ^ v
        cmins.append(int(pc[others].min()) if others.size else 0)
    cstar = min(cmins)
    if len(ids) == 1:
        return np.uint64(0), tables.group_order // (1 << tables.L)
    for v, cv in zip(ids, cmins):
        if cv != cstar:
            continue
        translated = arr ^ v
        for u in translated[translated != 0]:
            if pc[u] != cstar:
                continue
            cand, mult = tables.min_image_packed(arr, v, tables.coset[int(u)])
            if best is None or cand < best:
                best, count = cand, mult
            elif cand == best:
                count += mult
    return best, count


def _is_canonical(tables: _SignedPermTables, ids: tuple[int, ...]):
    """(is canonical, stabilizer order).  `ids` must be sorted and contain 0."""
    own = np.uint64(_pack_ids(ids))
    best, count = _canonical_scan(tables, ids)
    if best != own:
        return False, 0
    return True, count


def orbit_representatives(L: int) -> Iterator[tuple[tuple[int, ...], int]]:
    """Yield (canonical subset ids, orbit size) for every orbit of L-subsets.

    Orbits are taken under the full signed-permutation group of the cube
    (order 2^L * L!).  Representatives are generated by orderly extension:
    a sorted subset is kept iff it equals the lexicographically smallest
    sorted tuple in its orbit, and children are parents plus one id larger
    than the parent's maximum.  Yield order is deterministic, and
    summing the yielded orbit sizes recovers C(2^L, L) exactly.
    """
    tables = _SignedPermTables(L)
    nv = 1 << L
    if L == 1:
        yield (0,), 2
        return
    level: list[tuple[int, ...]] = [(0,)]
    final: list[tuple[tuple[int, ...], int]] = []
    for size in range(2, L + 1):
        nxt = []
        for parent in level:
            top = parent[-1]
            parr = np.asarray(parent, dtype=np.int64)
            for w in range(top + 1, nv):
                child = parent + (w,)
                # cheap reject: the canonical form's second element is the
                # packed-low vertex for the minimal pairwise XOR popcount
                carr = np.append(parr, w)
                xs = (carr[:, None] ^ carr[None, :])[np.triu_indices(size, 1)]
                cstar = int(tables.popcount[xs].min())
                if child[1] != (1 << cstar) - 1:
                    continue
                ok, stab = _is_canonical(tables, child)
                if ok:
                    if size == L:
                        final.append((child, tables.group_order // stab))
                    else:
                        nxt.append(child)
        if size < L:
            nxt.sort()
            level = nxt
    final.sort()
    yield from final


# ---------------------------------------------------------------------------
# Monte Carlo subset sampling
# ---------------------------------------------------------------------------

def _chunk_seeds(seed: int, n_chunks: int) -> list[np.random.SeedSequence]:
    return np.random.SeedSequence(seed).spawn(n_chunks)


def _row_hash_weights(L: int) -> np.ndarray:
    rng = np.random.default_rng(_HASH_WEIGHTS_SEED)
    return rng.integers(1, 2**63, size=L, dtype=np.uint64) | np.uint64(1)


def _draw_bit_chunk(rng: np.random.Generator, m: int, L: int) -> np.ndarray:
    """`m` subsets as (m, L, L) 0/1 uint8 arrays with distinct rows each.

    Row i of a subset is the bit pattern of one vertex (1 means entry -1).
    Subsets containing a repeated vertex are redrawn, which conditions the
    i.i.d. uniform draw on distinctness, i.e. uniform sampling without
    replacement.
    """
    weights = _row_hash_weights(L)
    bits = rng.integers(0, 2, size=(m, L, L), dtype=np.uint8)
    while True:
        h = bits.astype(np.uint64) @ weights  # (m, L) wraparound row hashes
        h.sort(axis=1)
        suspect = np.nonzero((h[:, 1:] == h[:, :-1]).any(axis=1))[0]
        bad = []
        for i in suspect:
            rows = {bytes(r) for r in bits[i]}
            if len(rows) != L:
                bad.append(i)
        if not bad:
            return bits
        bits[bad] = rng.integers(0, 2, size=(len(bad), L, L), dtype=np.uint8)


def _singular_screen_mod_p(mats: np.ndarray, p: int = _SCREEN_PRIME) -> np.ndarray:
    """Exact singularity of integer matrices mod p, vectorized over a batch.

    Uses fraction-free elimination (no modular inverses): each step
    multiplies the trailing block by the pivot before subtracting, which
    scales the determinant but preserves (non)vanishing mod p.  Entries
    stay below p, so intermediates fit int64 for p < 2^31.
    """
    A = np.mod(mats, p).astype(np.int64)
    nb, L, _ = A.shape
    singular = np.zeros(nb, dtype=bool)
    bidx = np.arange(nb)
    for k in range(L):
        col = A[:, k:, k]
        nz = col != 0
        piv_rel = np.argmax(nz, axis=1)
        has_pivot = nz[bidx, piv_rel]
        singular |= ~has_pivot
        piv = k + piv_rel
        rows_k = A[bidx, k, :].copy()
        A[bidx, k, :] = A[bidx, piv, :]
        A[bidx, piv, :] = rows_k
        if k + 1 < L:
            pivots = A[:, k, k][:, None, None]
            factors = A[:, k + 1 :, k].copy()[:, :, None]
            block = A[:, k + 1 :, k:]
            np.multiply(block, pivots, out=block)
            block -= factors * A[:, k : k + 1, k:]
            np.mod(block, p, out=block)
    return singular


def sample_subsets(L: int, n: int, seed: int) -> Iterator[VertexSubset]:
    """Stream of `n` uniformly drawn L-subsets of distinct cube vertices.

    The stream is a pure function of (L, n, seed): it is produced in
    fixed-size chunks with per-chunk generators spawned from the seed, so
    any parallel consumer that preserves chunk order sees the same stream.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    for _, bits in sample_bit_chunks(L, n, seed):
        shifts = np.arange(L, dtype=object)
        for sub in bits:
            ids = [int(sum(int(b) << int(s) for b, s in zip(row, shifts))) for row in sub]
            yield VertexSubset.from_bits(ids, L)


def _chunk_size(L: int) -> int:
    """Subsets per chunk: capped so an L x L float batch stays ~100 MB."""
    return max(256, min(_CHUNK, (1 << 23) // (L * L)))


def sample_bit_chunks(L: int, n: int, seed: int) -> Iterator[tuple[int, np.ndarray]]:
    """Deterministic chunked view of the subset sample stream.

    Yields (chunk index, bits) with bits of shape (m, L, L); chunk
    boundaries depend only on L, never on the consumer, so chunks can be
    processed by any number of workers and merged by index, and the
    stream is a pure function of (L, n, seed).
    """
    if not 1 <= L <= MAX_LENGTH:
        raise ValueError(f"L must be in 1..{MAX_LENGTH}")
    chunk = _chunk_size(L)
    n_chunks = (n + chunk - 1) // chunk
    seeds = _chunk_seeds(seed, n_chunks)
    for ci in range(n_chunks):
        m = min(chunk, n - ci * chunk)
        rng = np.random.default_rng(seeds[ci])
        yield ci, _draw_bit_chunk(rng, m, L)
