"""Entanglement measures for few-qubit states.

Tsallis-q entropy and entanglement, concurrence (pure bipartitions and the
two-qubit mixed-state spin-flip construction), the closed-form curve
relating the two, its derivatives, and the boundary limits that locate the
critical orders where convexity is lost.

Everything with a 1/(q-1) factor is evaluated through ``expm1`` so values
stay accurate through the von Neumann window around q=1 instead of losing
ten digits to cancellation.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import linalg
from .errors import (
    BadPartitionError,
    EndpointError,
    InvalidDensityMatrixError,
    NotTwoQubitsError,
    OutOfRangeError,
    QIsOneError,
    QOutsideAnalyticRangeError,
)
from .states import DensityMatrix, StateVector, reduced_density

# Closed-form mixed-state formula is established for q in this interval.
ANALYTIC_Q_MIN = (5 - math.sqrt(13)) / 2
ANALYTIC_Q_MAX = (5 + math.sqrt(13)) / 2
# Inside this window of q=1 the von Neumann (natural log) limit is used.
VON_NEUMANN_WINDOW = 1e-9
# Probabilities at or below this are treated as exact zeros (0*log 0 = 0).
EIGENVALUE_FLOOR = 1e-14


class Regime(enum.Enum):
    BELOW_ANALYTIC = "BelowAnalytic"
    ANALYTIC_RANGE = "AnalyticRange"
    ABOVE_ANALYTIC = "AboveAnalytic"
    VON_NEUMANN_LIMIT = "VonNeumannLimit"


@dataclass(frozen=True)
class QParam:
    """Entropic order q > 0 together with its classified regime."""

    q: float
    regime: Regime

    @classmethod
    def of(cls, q: float) -> "QParam":
        q = float(q)
        if not math.isfinite(q) or q <= 0:
            raise OutOfRangeError(f"q must be a positive real, got {q!r}")
        if abs(q - 1.0) <= VON_NEUMANN_WINDOW:
            regime = Regime.VON_NEUMANN_LIMIT
        elif q < ANALYTIC_Q_MIN:
            regime = Regime.BELOW_ANALYTIC
        elif q <= ANALYTIC_Q_MAX:
            regime = Regime.ANALYTIC_RANGE
        else:
            regime = Regime.ABOVE_ANALYTIC
        return cls(q, regime)

    @property
    def is_von_neumann(self) -> bool:
        return self.regime is Regime.VON_NEUMANN_LIMIT

    @property
    def in_analytic_range(self) -> bool:
        # The von Neumann point sits inside the analytic interval.
        return self.regime in (Regime.ANALYTIC_RANGE, Regime.VON_NEUMANN_LIMIT)


QLike = Union[float, QParam]


def as_qparam(q: QLike) -> QParam:
    """Coerce a float or QParam to a classified QParam."""
    return q if isinstance(q, QParam) else QParam.of(q)


_as_qparam = as_qparam


@dataclass(frozen=True)
class BipartitionSpec:
    """Two disjoint ordered qubit index groups covering a whole state."""

    side_a: tuple
    side_b: tuple

    def __init__(self, side_a: Sequence[int], side_b: Sequence[int]):
        object.__setattr__(self, "side_a", tuple(int(i) for i in side_a))
        object.__setattr__(self, "side_b", tuple(int(i) for i in side_b))

    def validate(self, n_qubits: int) -> None:
        combined = self.side_a + self.side_b
        if not self.side_a or not self.side_b:
            raise BadPartitionError("both sides of the bipartition must be non-empty")
        if len(set(combined)) != len(combined):
            raise BadPartitionError(f"sides overlap: {self.side_a} | {self.side_b}")
        if set(combined) != set(range(n_qubits)):
            raise BadPartitionError(
                f"sides {self.side_a} | {self.side_b} do not cover qubits 0..{n_qubits - 1}"
            )


def focus_vs_rest(focus: int, n_qubits: int) -> BipartitionSpec:
    """One qubit against all the others, in ascending order on the rest."""
    rest = tuple(i for i in range(n_qubits) if i != focus)
    return BipartitionSpec((focus,), rest)


def _entropy_from_probs(probs: np.ndarray, qp: QParam) -> float:
    """(1 - sum p^q)/(q-1), von Neumann limit inside the q=1 window.

    Written as -sum p*expm1((q-1) ln p)/(q-1): each term is computed
    relative to its own p=1 anchor, which is what keeps the result at
    machine-relative accuracy when q-1 is tiny.
    """
    ps = np.asarray(probs, dtype=float)
    ps = ps[ps > EIGENVALUE_FLOOR]
    if ps.size == 0:
        return 0.0
    if qp.is_von_neumann:
        return float(-(ps * np.log(ps)).sum())
    e = qp.q - 1.0
    return float(-(ps * np.expm1(e * np.log(ps))).sum() / e)


def tsallis_entropy(rho, q: QLike) -> float:
    """Tsallis-q entropy (1 - tr rho^q)/(q-1) of a density matrix.

    Accepts a DensityMatrix or a raw matrix (validated on the spot).
    Eigenvalues at or below 1e-14 are skipped, so exact zero modes
    contribute nothing for any q.
    """
    qp = _as_qparam(q)
    if not isinstance(rho, DensityMatrix):
        m = np.asarray(rho, dtype=complex)
        n = int(round(math.log2(m.shape[0]))) if m.ndim == 2 and m.shape[0] else 0
        if m.ndim != 2 or 2**max(n, 0) != m.shape[0]:
            raise InvalidDensityMatrixError(f"bad density matrix shape {m.shape}")
        rho = DensityMatrix(n, m)
    return _entropy_from_probs(rho.eigenvalues(), qp)


def concurrence_pure(psi: StateVector, part: BipartitionSpec) -> float:
    """sqrt(2(1 - tr rho_A^2)) for a pure state under a bipartition."""
    part.validate(psi.n_qubits)
    rho_a = reduced_density(psi, part.side_a).matrix
    purity = float(np.trace(rho_a @ rho_a).real)
    # Clamp to [0, 1]: purity rounding can land epsilon outside.
    return min(1.0, math.sqrt(max(0.0, 2.0 * (1.0 - purity))))


_YY = np.kron(
    np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]])
)


def concurrence_wootters(rho: DensityMatrix) -> float:
    """Two-qubit mixed-state concurrence via the spin-flip construction.

    Uses the Hermitian route: square roots of the eigenvalues of
    sqrt(rho) rho~ sqrt(rho).  Rank-deficient products leave O(1e-16)
    garbage in the null space that the square root would inflate to
    O(1e-8), so eigenvalues below 1e-14 of the leading one are zeroed
    before taking roots.
    """
    if not isinstance(rho, DensityMatrix) or rho.n_qubits != 2:
        raise NotTwoQubitsError("concurrence_wootters needs a 2-qubit DensityMatrix")
    m = rho.matrix
    s = linalg.sqrt_psd(m)
    flipped = _YY @ m.conj() @ _YY
    prod = s @ flipped @ s
    ev = np.linalg.eigvalsh((prod + prod.conj().T) / 2)
    floor = EIGENVALUE_FLOOR * max(float(ev[-1]), 0.0)
    ev = np.where(ev < floor, 0.0, ev)
    lam = np.sort(np.sqrt(ev))[::-1]
    return min(1.0, max(0.0, float(lam[0] - lam[1] - lam[2] - lam[3])))


def tsallis_pure(psi: StateVector, part: BipartitionSpec, q: QLike) -> float:
    """Tsallis-q entanglement of a pure state: S_q of the side-A marginal.

    In debug mode, single-qubit side A inside the analytic range is also
    cross-checked against the concurrence route g_q(C) at 1e-10.
    """
    qp = _as_qparam(q)
    part.validate(psi.n_qubits)
    value = _entropy_from_probs(
        reduced_density(psi, part.side_a).eigenvalues(), qp
    )
    if __debug__ and len(part.side_a) == 1 and qp.in_analytic_range:
        via_curve = g_q(concurrence_pure(psi, part), qp)
        assert abs(value - via_curve) <= 1e-10, (
            f"entropy route {value!r} vs concurrence route {via_curve!r}"
        )
    return value


def tsallis_two_qubit_mixed(rho: DensityMatrix, q: QLike) -> float:
    """Tsallis-q entanglement of a two-qubit mixed state: g_q(C(rho)).

    Only valid where the convex-roof equality is established; outside the
    analytic range this refuses rather than returning a wrong number.
    """
    qp = _as_qparam(q)
    if not isinstance(rho, DensityMatrix) or rho.n_qubits != 2:
        raise NotTwoQubitsError("tsallis_two_qubit_mixed needs a 2-qubit DensityMatrix")
    if not qp.in_analytic_range:
        raise QOutsideAnalyticRangeError(
            f"q={qp.q} outside [{ANALYTIC_Q_MIN:.6f}, {ANALYTIC_Q_MAX:.6f}]; "
            "the closed form is not established there"
        )
    return g_q(concurrence_wootters(rho), qp)


def g_q(x: float, q: QLike) -> float:
    """Two-qubit pure-state Tsallis-q entanglement as a function of concurrence.

    S_q of the binary distribution ((1+s)/2, (1-s)/2) with s = sqrt(1-x^2);
    the von Neumann window returns the natural-log binary entropy.
    """
    qp = _as_qparam(q)
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise OutOfRangeError(f"concurrence x={x} outside [0, 1]")
    s = math.sqrt(max(0.0, 1.0 - x * x))
    return _entropy_from_probs(np.array([(1 + s) / 2, (1 - s) / 2]), qp)


def f_q(y: float, q: QLike) -> float:
    """Same curve as g_q but against squared concurrence: f_q(C^2) = g_q(C)."""
    qp = _as_qparam(q)
    y = float(y)
    if not 0.0 <= y <= 1.0:
        raise OutOfRangeError(f"squared concurrence y={y} outside [0, 1]")
    t = math.sqrt(max(0.0, 1.0 - y))
    return _entropy_from_probs(np.array([(1 + t) / 2, (1 - t) / 2]), qp)


def _pow_diff_ratio(a: float, b: float, qp: QParam) -> float:
    """(a^(q-1) - b^(q-1))/(q-1), finite and accurate through q=1.

    At the von Neumann window this is the exact limit ln(a/b); in a wider
    guard band the powers are taken via expm1 to avoid the 1 - 1 loss.
    """
    e = qp.q - 1.0
    if abs(e) <= VON_NEUMANN_WINDOW:
        return math.log(a / b)
    if abs(e) < 1e-5:
        return (math.expm1(e * math.log(a)) - math.expm1(e * math.log(b))) / e
    return (a**e - b**e) / e


def d2g_dx2(x: float, q: QLike) -> float:
    """Second derivative of g_q with respect to concurrence, open interval.

    Hand-derived closed form: with s = sqrt(1-x^2), P = (1+s)/2,
    Q = (1-s)/2 and D1 = (P^(q-1) - Q^(q-1))/(q-1),

        g_q'' = (q/2) [ D1/s^3 - (x^2/(2 s^2)) (P^(q-2) + Q^(q-2)) ].

    As x -> 1 this approaches q times limit_d2g_dx2_at_1(q); the two share
    sign and roots, which is all the critical-point analysis uses.
    """
    qp = _as_qparam(q)
    x = float(x)
    if not 0.0 < x < 1.0:
        raise EndpointError(f"x={x} outside the open interval (0, 1)")
    s = math.sqrt(1.0 - x * x)
    p_hi = (1.0 + s) / 2.0
    p_lo = (1.0 - s) / 2.0
    d1 = _pow_diff_ratio(p_hi, p_lo, qp)
    e = qp.q - 2.0
    return (qp.q / 2.0) * (
        d1 / s**3 - (x * x / (2.0 * s * s)) * (p_hi**e + p_lo**e)
    )


def limit_d2g_dx2_at_1(q: QLike) -> float:
    """Boundary expression -2^(1-q) (3 - 5q + q^2)/3 for the x->1 analysis.

    Its roots (5 -+ sqrt(13))/2 are the critical orders where the curvature
    of g_q at maximal concurrence changes sign.  Note d2g_dx2 itself tends
    to q times this value; sign and roots are what matter and both agree.
    """
    qp = _as_qparam(q)
    qv = qp.q
    return -(2.0 ** (1.0 - qv)) * (3.0 - 5.0 * qv + qv * qv) / 3.0


def dTq2_dx(x: float, q: QLike) -> float:
    """First derivative of squared Tsallis-q entanglement in squared concurrence.

    With t = sqrt(1-x), M = 1+t, N = 1-t and
    D1 = (M^(q-1) - N^(q-1))/(q-1):

        d(T_q^2)/dx = 2 f_q(x) * q 2^(-1-q) D1 / t.

    x = 0 returns exactly 0; x = 1 returns the analytic limit
    q 2^(1-q) f_q(1).  Nonnegative for all q > 0 (checked at grid level).
    """
    qp = _as_qparam(q)
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise OutOfRangeError(f"squared concurrence x={x} outside [0, 1]")
    if x == 0.0:
        return 0.0
    f_val = f_q(x, qp)
    if x == 1.0:
        return qp.q * 2.0 ** (1.0 - qp.q) * f_val
    t = math.sqrt(1.0 - x)
    d1 = _pow_diff_ratio(1.0 + t, 1.0 - t, qp)
    return 2.0 * f_val * qp.q * 2.0 ** (-1.0 - qp.q) * d1 / t


def _d2f2_dx2(x: float, qp: QParam) -> float:
    """Second derivative of f_q(x)^2 in x, stable through q near 1."""
    t = math.sqrt(1.0 - x)
    m_hi = 1.0 + t
    m_lo = 1.0 - t
    f_val = f_q(x, qp)
    d1 = _pow_diff_ratio(m_hi, m_lo, qp)
    e = qp.q - 2.0
    scale = qp.q * 2.0 ** (-2.0 - qp.q)
    curvature = 2.0 * f_val * scale * (d1 / t**3 - (m_hi**e + m_lo**e) / (t * t))
    slope_sq = 2.0 * (2.0 ** (-1.0 - qp.q) * qp.q * d1 / t) ** 2
    return curvature + slope_sq


def big_F(x: float, q: QLike) -> float:
    """(q-1)^2 times the second derivative of T_q^2 in squared concurrence.

    The sign of this surface over (0,1) x [1,4] is the convexity statement
    behind the squared-entanglement monogamy inequality.  Inside the von
    Neumann window the (q-1)^2 factor makes the true value O(1e-18), so 0.0
    is returned exactly.
    """
    qp = _as_qparam(q)
    x = float(x)
    if not 0.0 < x < 1.0:
        raise EndpointError(f"x={x} outside the open interval (0, 1)")
    if qp.is_von_neumann:
        return 0.0
    return (qp.q - 1.0) ** 2 * _d2f2_dx2(x, qp)


def limit_F_at_x0(q: QLike) -> float:
    """Boundary value 2^(-1-2q) q (2^q - 2)(q - 1) used at the x=0 grid edge.

    The interior expression big_F itself tends to q^2/8 as x -> 0 for q > 1
    (and to 0 at q = 1); this reported edge formula differs from that limit
    but is likewise nonnegative on q in [1, 4], which is the property the
    surface scan certifies.  At q = 0.5 the formula evaluates to +0.0366
    (two negative factors cancel).
    """
    qp = _as_qparam(q)
    qv = qp.q
    return 2.0 ** (-1.0 - 2.0 * qv) * qv * (2.0**qv - 2.0) * (qv - 1.0)


def x1_curvature_bracket(q: QLike) -> float:
    """Polynomial-in-2^q bracket whose roots locate the x->1 convexity change.

    bracket(q) = 6(2^q - 2) + (16 - 5*2^q) q + (2^q - 8) q^2.
    Anchors: bracket(1) = 0, bracket(2) = -12.
    """
    qp = _as_qparam(q)
    qv = qp.q
    two_q = 2.0**qv
    return 6.0 * (two_q - 2.0) + (16.0 - 5.0 * two_q) * qv + (two_q - 8.0) * qv * qv


def limit_F_at_x1(q: QLike) -> float:
    """Boundary value 4^(-q)(1-q) q bracket(q)/3 used at the x=1 grid edge.

    Shares its nontrivial roots with x1_curvature_bracket.  Note the value
    at q=4 is 0.6875, not zero: bracket(4) = -44 while the q-roots of the
    bracket sit near 0.65 and 4.66.
    """
    qp = _as_qparam(q)
    qv = qp.q
    return 4.0 ** (-qv) * (1.0 - qv) * qv * x1_curvature_bracket(qp) / 3.0


def limit_d2Tq2_dx2_at_1(q: QLike) -> float:
    """x -> 1 limit of the second derivative of T_q^2: -4^(-q) q bracket(q)/(3(q-1)).

    Undefined at q = 1 (0/0); callers wanting the surface there should use
    big_F, whose (q-1)^2 prefactor removes the pole.
    """
    qp = _as_qparam(q)
    if qp.is_von_neumann:
        raise QIsOneError("limit_d2Tq2_dx2_at_1 has no finite closed form at q=1")
    qv = qp.q
    return -(4.0 ** (-qv)) * qv * x1_curvature_bracket(qp) / (3.0 * (qv - 1.0))
