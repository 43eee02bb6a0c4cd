"""Monogamy and polygamy residuals for squared entanglement measures.

Every check is expressed as a signed residual (lhs - rhs) packed into a
MonogamyRecord, so sweep output, violation detection, and saturation tests
all read the same field.  Monogamy inequalities expect residual >= 0,
polygamy ones expect residual <= 0; the noise floor is -1e-10.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Tuple

from .errors import (
    BadIndexError,
    DomainError,
    NegativeBeyondToleranceError,
    OutOfRangeError,
    QOutsideAnalyticRangeError,
    UnsupportedSizeError,
    ZeroBasePowerError,
)
from .measures import (
    QLike,
    as_qparam,
    concurrence_pure,
    concurrence_wootters,
    focus_vs_rest,
    g_q,
    tsallis_pure,
)
from .states import StateVector, reduced_density

RESIDUAL_NOISE_FLOOR = -1e-10


class Inequality(enum.Enum):
    CKW = "CKW"
    STQE = "STqE"
    MU_POWER = "MuPower"
    MU_POLYGAMY = "MuPolygamy"


@dataclass(frozen=True)
class MonogamyRecord:
    """One evaluated inequality instance; residual = lhs - rhs."""

    inequality: Inequality
    q: float
    mu: float
    lhs: float
    rhs: float
    residual: float
    state_id: str = ""
    seed_info: Tuple[int, int] = (0, 0)
    note: str = ""


def _check_focus(psi: StateVector, focus: int) -> None:
    if not 0 <= focus < psi.n_qubits:
        raise BadIndexError(
            f"focus {focus} outside [0, {psi.n_qubits}) for this state"
        )


def ckw_residual(
    psi: StateVector,
    focus: int = 0,
    state_id: str = "",
    seed_info: Tuple[int, int] = (0, 0),
) -> MonogamyRecord:
    """Squared-concurrence monogamy: C^2(focus|rest) - sum_j C^2(focus, j).

    Pure states on 3..6 qubits.  The q and mu fields are unused here and
    set to 1 by convention.
    """
    n = psi.n_qubits
    if not 3 <= n <= 6:
        raise UnsupportedSizeError(f"ckw_residual supports 3..6 qubits, got {n}")
    _check_focus(psi, focus)
    lhs = concurrence_pure(psi, focus_vs_rest(focus, n)) ** 2
    rhs = 0.0
    for j in range(n):
        if j == focus:
            continue
        rhs += concurrence_wootters(reduced_density(psi, (focus, j))) ** 2
    return MonogamyRecord(
        Inequality.CKW, 1.0, 1.0, lhs, rhs, lhs - rhs, state_id, seed_info
    )


def focus_and_pair_entanglements(
    psi: StateVector, focus: int, q: QLike
) -> Tuple[float, Tuple[float, ...]]:
    """T_q(focus|rest) and the pairwise mixed-state T_q values.

    The shared computation behind the squared and power-lifted residuals;
    exposed so callers can pre-screen bases before raising powers.
    """
    qp = as_qparam(q)
    n = psi.n_qubits
    if not 3 <= n <= 6:
        raise UnsupportedSizeError(f"needs 3..6 qubits, got {n}")
    _check_focus(psi, focus)
    if not qp.in_analytic_range:
        raise QOutsideAnalyticRangeError(
            f"q={qp.q} is outside the range where pairwise T_q is established"
        )
    t_focus = tsallis_pure(psi, focus_vs_rest(focus, n), qp)
    pairs = tuple(
        g_q(concurrence_wootters(reduced_density(psi, (focus, j))), qp)
        for j in range(n)
        if j != focus
    )
    return t_focus, pairs


def stqe_residual(
    psi: StateVector,
    focus: int,
    q: QLike,
    state_id: str = "",
    seed_info: Tuple[int, int] = (0, 0),
) -> MonogamyRecord:
    """Squared Tsallis-q entanglement monogamy: T_q^2(focus|rest) - sum T_q^2 pairs."""
    qp = as_qparam(q)
    t_focus, pairs = focus_and_pair_entanglements(psi, focus, qp)
    lhs = t_focus**2.0
    rhs = math.fsum(t**2.0 for t in pairs)
    return MonogamyRecord(
        Inequality.STQE, qp.q, 1.0, lhs, rhs, lhs - rhs, state_id, seed_info
    )


def mu_power_residual(
    psi: StateVector,
    focus: int,
    q: QLike,
    mu: float,
    state_id: str = "",
    seed_info: Tuple[int, int] = (0, 0),
) -> MonogamyRecord:
    """Power-lifted relation T_q^mu(focus|rest) vs sum of pairwise T_q^mu.

    mu >= 2 is the monogamy direction (residual expected >= 0), mu <= 0 the
    polygamy direction (residual expected <= 0).  mu = 0 is vacuous (1 vs 2)
    and flagged in the note.  Three-qubit pure states only.
    """
    qp = as_qparam(q)
    mu = float(mu)
    if psi.n_qubits != 3:
        raise UnsupportedSizeError(
            f"mu_power_residual is defined for 3 qubits, got {psi.n_qubits}"
        )
    if not (mu >= 2.0 or mu <= 0.0):
        raise OutOfRangeError(f"mu={mu} must satisfy mu >= 2 or mu <= 0")
    t_focus, pairs = focus_and_pair_entanglements(psi, focus, qp)
    kind = Inequality.MU_POWER if mu >= 2.0 else Inequality.MU_POLYGAMY
    if mu == 0.0:
        # Bases are irrelevant: 1 <= 2 holds trivially.
        return MonogamyRecord(
            kind, qp.q, mu, 1.0, 2.0, -1.0, state_id, seed_info, note="vacuous"
        )
    if mu < 0.0:
        for label, base in [("focus", t_focus)] + [
            (f"pair{k}", t) for k, t in enumerate(pairs)
        ]:
            if base == 0.0:
                raise ZeroBasePowerError(
                    f"T_q({label}) = 0 cannot be raised to mu={mu}"
                )
    lhs = t_focus**mu
    rhs = math.fsum(t**mu for t in pairs)
    return MonogamyRecord(kind, qp.q, mu, lhs, rhs, lhs - rhs, state_id, seed_info)


def three_tangle(psi: StateVector) -> float:
    """Residual tripartite entanglement of a 3-qubit pure state.

    The squared-concurrence monogamy residual, clamped at zero; a residual
    below the -1e-10 noise floor indicates a bug and raises instead.
    """
    if psi.n_qubits != 3:
        raise UnsupportedSizeError(
            f"three_tangle is defined for 3 qubits, got {psi.n_qubits}"
        )
    residual = ckw_residual(psi, 0).residual
    if residual < RESIDUAL_NOISE_FLOOR:
        raise NegativeBeyondToleranceError(
            f"tangle residual {residual:.3e} below the noise floor"
        )
    return max(0.0, residual)


def three_tangle_analytic(p: float) -> float:
    """Signed closed form p^2 - 8 sqrt(6 p (1-p)^3)/9 for the GHZ/W mix.

    The numerical three_tangle of ghz_w_superposition(p) equals the absolute
    value of this expression; keeping the sign makes the p-axis zero crossing
    (near p = 0.627) visible and bisectable.  Zeros: p = 0 and the crossing;
    the expression is negative between them.
    """
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise OutOfRangeError(f"p={p} outside [0, 1]")
    return p * p - 8.0 * math.sqrt(6.0 * p * (1.0 - p) ** 3) / 9.0


def scalar_power_lemma_check(x: float, t: float) -> bool:
    """Check the scalar inequality behind the power-lifted relations.

    For 0 < x <= 1 and t >= 1:  (1+x)^t >= 1 + x^t   (monogamy direction).
    For x > 0 and t <= 0:       (1+x)^t <  1 + x^t   (polygamy direction).
    Returns whether the relevant inequality holds; other (x, t) raise.
    """
    x = float(x)
    t = float(t)
    if t >= 1.0:
        if not 0.0 < x <= 1.0:
            raise DomainError(f"monogamy branch needs 0 < x <= 1, got x={x}")
        return (1.0 + x) ** t >= 1.0 + x**t
    if t <= 0.0:
        if not x > 0.0:
            raise DomainError(f"polygamy branch needs x > 0, got x={x}")
        return (1.0 + x) ** t < 1.0 + x**t
    raise DomainError(f"t={t} in (0, 1) is outside both branches")
