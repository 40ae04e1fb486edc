"""Pure-state ground truth: one-qubit marginals and the linear entropy.

Qubit index convention: qubit 1 corresponds to the MOST significant bit
of the amplitude index, so |i_1 i_2 ... i_L> has amplitude index
i_1 * 2^(L-1) + ... + i_L.  All operations renormalize through the trace,
so any nonzero amplitude vector is a valid input.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

MAX_QUBITS = 20
_ATOL = 1e-12


@dataclass(frozen=True)
class PureState:
    """State vector of L qubits with 2^L complex amplitudes."""

    amplitudes: np.ndarray
    L: int

    @classmethod
    def from_amplitudes(cls, amplitudes: Sequence[complex]) -> "PureState":
        amps = np.asarray(amplitudes, dtype=np.complex128)
        if amps.ndim != 1:
            raise ValueError("amplitudes must be a vector")
        n = amps.size
        L = n.bit_length() - 1
        if n != (1 << L) or L < 1:
            raise ValueError(f"amplitude count must be 2^L with L >= 1, got {n}")
        if L > MAX_QUBITS:
            raise ValueError(f"at most {MAX_QUBITS} qubits supported, got {L}")
        norm = np.linalg.norm(amps)
        if not np.isfinite(norm) or norm == 0:
            raise ValueError("amplitudes must be finite and not all zero")
        amps = amps / norm
        amps.setflags(write=False)
        return cls(amps, L)

    def norm_sq(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


def product_zero_state(L: int) -> PureState:
    amps = np.zeros(1 << L, dtype=np.complex128)
    amps[0] = 1.0
    return PureState.from_amplitudes(amps)


def ghz_state(L: int) -> PureState:
    amps = np.zeros(1 << L, dtype=np.complex128)
    amps[0] = amps[-1] = 1.0
    return PureState.from_amplitudes(amps)


def w_state(L: int) -> PureState:
    amps = np.zeros(1 << L, dtype=np.complex128)
    for i in range(L):
        amps[1 << i] = 1.0
    return PureState.from_amplitudes(amps)


def haar_random_state(L: int, seed) -> PureState:
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(1 << L) + 1j * rng.standard_normal(1 << L)
    return PureState.from_amplitudes(z)


def one_qubit_rdm(state: PureState, i: int) -> np.ndarray:
    """Reduced density matrix of qubit i (1-based), a 2x2 Hermitian PSD
    matrix of unit trace."""
    if not 1 <= i <= state.L:
        raise IndexError(f"qubit index must be in 1..{state.L}, got {i}")
    # qubit 1 is the most significant bit: axis i-1 after reshaping
    tensor = state.amplitudes.reshape([2] * state.L)
    moved = np.moveaxis(tensor, i - 1, 0).reshape(2, -1)
    rho = moved @ moved.conj().T
    return rho


def _min_eigenvalue_2x2(rho: np.ndarray) -> float:
    """Smaller eigenvalue of a 2x2 Hermitian matrix, in closed form."""
    a = rho[0, 0].real
    d = rho[1, 1].real
    b = rho[0, 1]
    disc = math.sqrt(max((a - d) ** 2 + 4.0 * (b * b.conjugate()).real, 0.0))
    return 0.5 * (a + d - disc)


def local_spectra(state: PureState) -> np.ndarray:
    """Shifted one-qubit spectra: lambda_i = 1/2 - p_i, p_i the smaller
    RDM eigenvalue; entries lie in [0, 1/2]."""
    out = np.empty(state.L)
    for i in range(1, state.L + 1):
        p = _min_eigenvalue_2x2(one_qubit_rdm(state, i))
        out[i - 1] = 0.5 - min(max(p, 0.0), 0.5)
    return out


def linear_entropy(state_or_spectra) -> float:
    """Mean linear entropy of the one-qubit marginals, in [0, 1/2].

    Given a state, uses the trace form 1 - (1/L) sum tr(rho_i^2); given a
    spectra vector, the equivalent form 1/2 - (2/L) |lambda|^2.
    """
    if isinstance(state_or_spectra, PureState):
        state = state_or_spectra
        total = 0.0
        for i in range(1, state.L + 1):
            rho = one_qubit_rdm(state, i)
            total += float(np.trace(rho @ rho).real)
        return 1.0 - total / state.L
    lam = np.asarray(state_or_spectra, dtype=float)
    return 0.5 - (2.0 / lam.size) * float(lam @ lam)


def in_delta_H(lam: Sequence, tol: float = _ATOL) -> bool:
    """Membership in the polytope of admissible shifted local spectra.

    Requires every entry in [0, 1/2] and, for each i, that 1/2 - lam_i
    not exceed the sum of the other 1/2 - lam_j.  Exact for rational
    input with tol=0; the default tolerance absorbs float roundoff.
    """
    lam = tuple(lam)
    L = len(lam)
    half = type(lam[0])(1) / 2 if not isinstance(lam[0], float) else 0.5
    for x in lam:
        if x < -tol or x > half + tol:
            return False
    gaps = [half - x for x in lam]
    total = sum(gaps)
    for g in gaps:
        if g > total - g + tol:
            return False
    return True


# ---------------------------------------------------------------------------
# State file input (JSON or CSV of (index, re, im) triples)
# ---------------------------------------------------------------------------

def load_state_file(path, norm_tol: float = 1e-6) -> PureState:
    """Read a state vector from a JSON or CSV list of (index, re, im).

    JSON: {"L": int, "amplitudes": [[index, re, im], ...]}; CSV: rows of
    index,re,im with an optional header.  Unlisted amplitudes are zero.
    The squared norm must be within `norm_tol` of 1; the state is then
    renormalized exactly.
    """
    path = str(path)
    triples: list[tuple[int, float, float]] = []
    L = None
    if path.endswith(".json"):
        with open(path) as fh:
            raw = json.load(fh)
        if isinstance(raw, dict):
            L = int(raw["L"]) if "L" in raw else None
            rows = raw["amplitudes"]
        else:
            rows = raw
        for row in rows:
            idx, re, im = row
            triples.append((int(idx), float(re), float(im)))
    else:
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or not row[0].strip().lstrip("-").isdigit():
                    continue
                triples.append((int(row[0]), float(row[1]), float(row[2])))
    if not triples:
        raise ValueError(f"no amplitudes found in {path}")
    max_idx = max(t[0] for t in triples)
    if L is None:
        L = max(max_idx.bit_length(), 1)
    if max_idx >= (1 << L):
        raise ValueError(f"amplitude index {max_idx} out of range for L={L}")
    amps = np.zeros(1 << L, dtype=np.complex128)
    for idx, re, im in triples:
        amps[idx] = complex(re, im)
    norm_sq = float(np.vdot(amps, amps).real)
    if abs(norm_sq - 1.0) > norm_tol:
        raise ValueError(f"state squared norm {norm_sq:.9f} not within {norm_tol} of 1")
    return PureState.from_amplitudes(amps)
