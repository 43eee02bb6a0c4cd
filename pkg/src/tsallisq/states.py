"""Named few-qubit states, seeded random ensembles, and the JSON state-file format.

Qubit ordering follows :mod:`tsallisq.linalg`: qubit 0 is the most
significant bit of the basis index.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from . import linalg
from .errors import (
    BadRankError,
    InvalidDensityMatrixError,
    OutOfRangeError,
    UnsupportedSizeError,
)

NORM_TOL = 1e-12
TRACE_TOL = 1e-12
# File loading is forgiving up to these gates, then exact types take over.
FILE_NORM_GATE = 1e-6
FILE_TRACE_GATE = 1e-6
FILE_HERM_GATE = 1e-8
FILE_EIG_GATE = -1e-8


@dataclass(frozen=True, eq=False)
class StateVector:
    """Pure state on ``n_qubits`` qubits; unit norm within 1e-12."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if self.n_qubits < 1:
            raise UnsupportedSizeError(f"n_qubits must be >= 1, got {self.n_qubits}")
        if amps.size != 2**self.n_qubits:
            raise ValueError(
                f"amplitude vector length {amps.size} != 2**{self.n_qubits}"
            )
        if not np.all(np.isfinite(amps.real)) or not np.all(np.isfinite(amps.imag)):
            raise ValueError("amplitudes contain non-finite entries")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {norm!r} deviates from 1 beyond {NORM_TOL}")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian PSD unit-trace operator on ``n_qubits`` qubits."""

    n_qubits: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        dim = 2**self.n_qubits
        if self.n_qubits < 1:
            raise UnsupportedSizeError(f"n_qubits must be >= 1, got {self.n_qubits}")
        if m.shape != (dim, dim):
            raise InvalidDensityMatrixError(
                f"matrix shape {m.shape} != ({dim}, {dim})"
            )
        if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
            raise InvalidDensityMatrixError("matrix contains non-finite entries")
        defect = linalg.hermiticity_defect(m)
        if defect > linalg.HERMITICITY_TOL:
            raise InvalidDensityMatrixError(
                f"hermiticity defect {defect:.3e} exceeds {linalg.HERMITICITY_TOL}"
            )
        trace = complex(np.trace(m))
        if abs(trace - 1.0) > TRACE_TOL:
            raise InvalidDensityMatrixError(
                f"trace {trace!r} deviates from 1 beyond {TRACE_TOL}"
            )
        low = float(np.linalg.eigvalsh((m + m.conj().T) / 2).min())
        if low < linalg.PSD_CLAMP:
            raise InvalidDensityMatrixError(
                f"eigenvalue {low:.3e} below {linalg.PSD_CLAMP}"
            )
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    def eigenvalues(self) -> np.ndarray:
        """Ascending real eigenvalues of the symmetrized matrix."""
        m = self.matrix
        return np.linalg.eigvalsh((m + m.conj().T) / 2)


State = Union[StateVector, DensityMatrix]


@dataclass(frozen=True)
class SeededSampler:
    """Counter-based RNG handle keyed by (master_seed, sample_index).

    Each sample index owns an independent substream, so sweep results do not
    depend on execution order or worker count.  ``generator(stream=k)`` hands
    out disjoint streams within one sample (the optimizer uses stream 1 so it
    never replays the draws that built the state).
    """

    master_seed: int
    sample_index: int = 0

    def __post_init__(self):
        if not 0 <= self.master_seed < 2**64:
            raise OutOfRangeError(f"master_seed {self.master_seed} outside [0, 2^64)")
        if not 0 <= self.sample_index < 2**64:
            raise OutOfRangeError(
                f"sample_index {self.sample_index} outside [0, 2^64)"
            )

    def at(self, sample_index: int) -> "SeededSampler":
        """Sampler for another sample index under the same master seed."""
        return SeededSampler(self.master_seed, sample_index)

    def generator(self, stream: int = 0) -> np.random.Generator:
        key = np.array([self.master_seed, self.sample_index], dtype=np.uint64)
        # Streams sit 2^128 counter blocks apart, so they never overlap.
        counter = np.array([0, 0, stream, 0], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key, counter=counter))


def ghz(n: int) -> StateVector:
    """(|0...0> + |1...1>)/sqrt(2) on n qubits, 2 <= n <= 6."""
    if not 2 <= n <= 6:
        raise UnsupportedSizeError(f"ghz supports 2..6 qubits, got {n}")
    amps = np.zeros(2**n, dtype=complex)
    amps[0] = amps[-1] = 1 / math.sqrt(2)
    return StateVector(n, amps)


def w(n: int) -> StateVector:
    """Uniform single-excitation superposition on n qubits, 2 <= n <= 6."""
    if not 2 <= n <= 6:
        raise UnsupportedSizeError(f"w supports 2..6 qubits, got {n}")
    amps = np.zeros(2**n, dtype=complex)
    for i in range(n):
        amps[2 ** (n - 1 - i)] = 1 / math.sqrt(n)
    return StateVector(n, amps)


def ghz_w_superposition(p: float) -> StateVector:
    """sqrt(p)*ghz(3) - sqrt(1-p)*w(3); normalized for every p in [0, 1].

    The two branches are orthogonal, so no renormalization is needed.  The
    minus sign on the W branch is a fixed convention preserved in file output;
    every measure in this package is insensitive to it.
    """
    if not 0 <= p <= 1:
        raise OutOfRangeError(f"p={p} outside [0, 1]")
    amps = math.sqrt(p) * ghz(3).amplitudes - math.sqrt(1 - p) * w(3).amplitudes
    return StateVector(3, amps)


def random_pure(n: int, sampler: SeededSampler) -> StateVector:
    """Haar-distributed pure state: 2^n complex standard normals, normalized."""
    if not 1 <= n <= 6:
        raise UnsupportedSizeError(f"random_pure supports 1..6 qubits, got {n}")
    gen = sampler.generator()
    dim = 2**n
    z = gen.standard_normal((2, dim))
    amps = z[0] + 1j * z[1]
    norm = np.linalg.norm(amps)
    while norm < 1e-12:  # unreachable in practice, kept for safety
        z = gen.standard_normal((2, dim))
        amps = z[0] + 1j * z[1]
        norm = np.linalg.norm(amps)
    return StateVector(n, amps / norm)


def random_mixed(n: int, rank: int, sampler: SeededSampler) -> DensityMatrix:
    """Ginibre-induced mixed state GG†/tr(GG†) with G of shape 2^n x rank."""
    if not 1 <= n <= 6:
        raise UnsupportedSizeError(f"random_mixed supports 1..6 qubits, got {n}")
    dim = 2**n
    if not 1 <= rank <= dim:
        raise BadRankError(f"rank {rank} outside [1, {dim}]")
    gen = sampler.generator()
    z = gen.standard_normal((2, dim, rank))
    g = z[0] + 1j * z[1]
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    rho /= np.trace(rho).real
    return DensityMatrix(n, rho)


def density_of(psi: StateVector) -> DensityMatrix:
    """Projector |psi><psi| as a DensityMatrix."""
    amps = psi.amplitudes
    return DensityMatrix(psi.n_qubits, np.outer(amps, amps.conj()))


def reduced_density(psi: StateVector, keep: Sequence[int]) -> DensityMatrix:
    """Marginal of a pure state on the kept qubits (order preserved)."""
    rho = linalg.partial_trace(
        np.outer(psi.amplitudes, psi.amplitudes.conj()), psi.n_qubits, keep
    )
    return DensityMatrix(len(keep), rho)


def save_state_file(path, state: State) -> None:
    """Write a state as JSON; floats use repr so round-trips are exact."""
    if isinstance(state, StateVector):
        payload = {
            "n_qubits": state.n_qubits,
            "kind": "pure",
            "amplitudes": [[float(a.real), float(a.imag)] for a in state.amplitudes],
        }
    elif isinstance(state, DensityMatrix):
        payload = {
            "n_qubits": state.n_qubits,
            "kind": "mixed",
            "matrix": [
                [[float(e.real), float(e.imag)] for e in row] for row in state.matrix
            ],
        }
    else:
        raise TypeError(f"cannot serialize {type(state).__name__}")
    Path(path).write_text(json.dumps(payload, indent=1) + "\n", encoding="utf-8")


def _as_complex_array(entries, what: str) -> np.ndarray:
    arr = np.asarray(entries, dtype=float)
    if arr.ndim < 1 or arr.shape[-1] != 2:
        raise ValueError(f"{what} must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def load_state_file(path) -> State:
    """Read a state file; mild numerical drift is repaired, worse rejected.

    Pure: norm within 1e-6 of 1 is renormalized exactly.  Mixed: hermiticity
    defect up to 1e-8 symmetrized, trace within 1e-6 rescaled, eigenvalues
    down to -1e-8 clipped to zero.  Beyond those gates the file is rejected
    with ValueError (the CLI maps that to exit code 1).
    """
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError(f"not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ValueError("state file must hold a JSON object")
    try:
        kind = payload["kind"]
        n = int(payload["n_qubits"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"missing or malformed field: {exc}") from exc
    if not 1 <= n <= 6:
        raise ValueError(f"n_qubits {n} outside [1, 6]")
    dim = 2**n

    if kind == "pure":
        if "amplitudes" not in payload:
            raise ValueError("pure state file lacks 'amplitudes'")
        amps = _as_complex_array(payload["amplitudes"], "amplitudes").reshape(-1)
        if amps.size != dim:
            raise ValueError(f"amplitude count {amps.size} != 2**{n}")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > FILE_NORM_GATE:
            raise ValueError(
                f"state norm {norm!r} deviates from 1 beyond {FILE_NORM_GATE}"
            )
        return StateVector(n, amps / norm)

    if kind == "mixed":
        if "matrix" not in payload:
            raise ValueError("mixed state file lacks 'matrix'")
        m = _as_complex_array(payload["matrix"], "matrix")
        if m.shape != (dim, dim):
            raise ValueError(f"matrix shape {m.shape} != ({dim}, {dim})")
        if linalg.hermiticity_defect(m) > FILE_HERM_GATE:
            raise ValueError(
                f"hermiticity defect {linalg.hermiticity_defect(m):.3e} "
                f"exceeds {FILE_HERM_GATE}"
            )
        m = (m + m.conj().T) / 2
        trace = float(np.trace(m).real)
        if abs(trace - 1.0) > FILE_TRACE_GATE:
            raise ValueError(f"trace {trace!r} deviates from 1 beyond {FILE_TRACE_GATE}")
        m = m / trace
        vals, vecs = np.linalg.eigh(m)
        if float(vals.min()) < FILE_EIG_GATE:
            raise ValueError(
                f"eigenvalue {float(vals.min()):.3e} below {FILE_EIG_GATE}"
            )
        if float(vals.min()) < 0.0:
            vals = np.clip(vals, 0.0, None)
            vals = vals / vals.sum()
            m = (vecs * vals) @ vecs.conj().T
        return DensityMatrix(n, m)

    raise ValueError(f"unknown state kind {kind!r}")
