"""Closed-form quantities for search on ``K_M^{(x)j}``.

Jumping rates:

========================  =========================================  =========
formula_id                value                                      orders
========================  =========================================  =========
grover_1N                 1/N                                        j = 1
srg_k_mu                  1/k + 1/((N-1) mu)                         j = 2
third_order_exact         1/(M^2 (M-3))                              j = 3
practical_Mminus1_pow_j   1/(M-1)^j                                  j >= 4
========================  =========================================  =========
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidArgument, SingularFormula
from .graph import SrgParams

GROVER = "grover_1N"
SRG = "srg_k_mu"
THIRD_ORDER = "third_order_exact"
PRACTICAL = "practical_Mminus1_pow_j"


@dataclass(frozen=True)
class GammaChoice:
    value: float
    formula_id: str

    def __post_init__(self):
        if not (self.value > 0 and math.isfinite(self.value)):
            raise InvalidArgument(f"jumping rate must be positive and finite, got {self.value}")


def practical_gamma(M: int, j: int) -> GammaChoice:
    if M < 2 or j < 1:
        raise InvalidArgument("need M >= 2 and j >= 1")
    return GammaChoice(1.0 / (M - 1) ** j, PRACTICAL)


def critical_gamma(M: int, j: int) -> GammaChoice:
    if M < 2 or j < 1:
        raise InvalidArgument("need M >= 2 and j >= 1")
    if j == 1:
        return GammaChoice(1.0 / M, GROVER)
    if j == 2:
        if M < 3:
            # mu = 0 for K_2 (x) K_2, so the SRG rate is undefined
            return practical_gamma(M, j)
        s = srg_closed_form(M)
        return GammaChoice(1.0 / s.k + 1.0 / ((s.N - 1) * s.mu), SRG)
    if j == 3:
        if M == 3:
            raise SingularFormula(
                "1/(M^2 (M-3)) is singular at M = 3; use the practical rate 1/(M-1)^3",
                fallback=PRACTICAL,
            )
        if M < 3:
            return practical_gamma(M, j)
        return GammaChoice(1.0 / (M * M * (M - 3)), THIRD_ORDER)
    return practical_gamma(M, j)


def default_gamma(M: int, j: int) -> GammaChoice:
    """Rate used when none is requested: critical for j <= 2, practical otherwise.

    The third-order critical value only wins for large M; ``1/(M-1)^3`` reaches
    the asymptotic runtime at smaller M.
    """
    if j <= 2:
        return critical_gamma(M, j)
    return practical_gamma(M, j)


def predicted_runtime(N: int) -> float:
    if N < 1:
        raise InvalidArgument("N must be >= 1")
    return math.pi * math.sqrt(N) / 2.0


# -- second order ----------------------------------------------------------------

def srg_closed_form(M: int) -> SrgParams:
    if M < 3:
        raise InvalidArgument("K_M (x) K_M has degenerate lambda/mu for M < 3")
    return SrgParams(M * M, (M - 1) ** 2, (M - 2) ** 2, (M - 1) * (M - 2))


@dataclass(frozen=True)
class SearchConditions:
    M: int
    k_over_N: float
    k_over_muN23: float
    k_over_N_shrinks: bool
    k_over_muN23_shrinks: bool
    satisfied: bool


def _srg_ratios(M: int) -> tuple[float, float]:
    s = srg_closed_form(M)
    return s.k / s.N, s.k / (s.mu * s.N) ** (2.0 / 3.0)


def srg_search_conditions(M: int) -> SearchConditions:
    """Ratios k/N and k/(mu N)^(2/3) at M, and whether each shrinks at 2M.

    Shrinking under doubling is the finite-size stand-in for ``k = o(N)`` and
    ``k = o((mu N)^(2/3))``. For ``K_M (x) K_M`` the second ratio falls like
    M^(-2/3), but k/N = ((M-1)/M)^2 rises towards 1, so ``satisfied`` is False.
    """
    r1, r2 = _srg_ratios(M)
    n1, n2 = _srg_ratios(2 * M)
    return SearchConditions(M, r1, r2, n1 < r1, n2 < r2, n1 < r1 and n2 < r2)


# -- third order -----------------------------------------------------------------

BASIS_NOTE = (
    "rotated basis {|a>, |r>, |r'>, |r''>}: |a> = marked vertex, |r> = uniform "
    "superposition of unmarked vertices, |r'> = (sqrt(M-1)|c> - |d>)/sqrt(M), "
    "|r''> = |r> x |r'>; the perturbation mixes |a> and |r> with coefficients "
    "(alpha_a, alpha_r) = (+1, 1)/sqrt(2) for E0 and (-1, 1)/sqrt(2) for E1"
)


@dataclass(frozen=True)
class PerturbationReport:
    M: int
    gamma: float
    E0: float
    E1: float
    gap: float
    runtime_estimate: float
    mixing: tuple[tuple[float, float], tuple[float, float]]
    basis_note: str = BASIS_NOTE

    def as_dict(self) -> dict:
        return asdict(self)


def _check_third_order_M(M: int):
    if M == 3:
        raise SingularFormula("third-order critical rate is singular at M = 3", fallback=PRACTICAL)
    if M < 3:
        raise InvalidArgument("third-order analysis needs M >= 4")


def perturbation_report(M: int) -> PerturbationReport:
    """Two-level degenerate perturbation result at ``gamma = 1/(M^2 (M-3))``."""
    _check_third_order_M(M)
    gamma = 1.0 / (M * M * (M - 3))
    split = 1.0 / (math.sqrt(M) * (M - 3))
    E0, E1 = -1.0 - split, -1.0 + split
    h = 1.0 / math.sqrt(2.0)
    return PerturbationReport(
        M=M,
        gamma=gamma,
        E0=E0,
        E1=E1,
        gap=E1 - E0,
        runtime_estimate=math.pi / (E1 - E0),
        mixing=((h, h), (-h, h)),
    )


def rotated_basis(M: int) -> np.ndarray:
    """Orthogonal matrix whose columns are |a>, |r>, |r'>, |r''> in the
    (a, b, c, d) cell basis of the third-order graph."""
    if M < 2:
        raise InvalidArgument("need M >= 2")
    m1 = M - 1
    nr = math.sqrt(M**3 - 1)
    T = np.zeros((4, 4))
    T[0, 0] = 1.0
    T[1:, 1] = np.array([math.sqrt(m1**3), math.sqrt(3 * m1), math.sqrt(3 * m1**2)]) / nr
    T[1:, 2] = np.array([0.0, math.sqrt(m1), -1.0]) / math.sqrt(M)
    T[1:, 3] = np.array([-M * math.sqrt(3 * m1), math.sqrt(m1**3), m1**2]) / (nr * math.sqrt(M))
    return T


def rotated_hamiltonian_leading(M: int, gamma: float) -> np.ndarray:
    """Large-M form of ``T^T H T`` keeping entries at least linear in M."""
    s = M**1.5
    inner = np.array([
        [1.0 / gamma, s, 0.0, -math.sqrt(3) * M],
        [s, M**3 - 3 * M**2 + 3 * M, 0.0, 0.0],
        [0.0, 0.0, 0.0, -s],
        [-math.sqrt(3) * M, 0.0, -s, -(M**2) + 3 * M],
    ])
    return -gamma * inner


def rotated_perturbation_split(M: int, gamma: float) -> tuple[np.ndarray, np.ndarray]:
    """Leading part and first perturbation of the rotated Hamiltonian."""
    s = M**1.5
    h0 = -gamma * np.diag([1.0 / gamma, M**3 - 3 * M**2, 0.0, -(M**2)])
    h1 = -gamma * np.array([
        [0.0, s, 0.0, 0.0],
        [s, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, -s],
        [0.0, 0.0, -s, 0.0],
    ])
    return h0, h1


@dataclass(frozen=True)
class TaylorGap:
    M: int
    difference: float
    scaled: float


def gamma_taylor_gap(M: int) -> TaylorGap:
    """``1/(M-1)^3 - 1/(M^2 (M-3))`` and the same times ``M^5`` (tends to -3).

    Evaluated in exact rational arithmetic.
    """
    _check_third_order_M(M)
    diff = Fraction(1, (M - 1) ** 3) - Fraction(1, M * M * (M - 3))
    return TaylorGap(M, float(diff), float(diff * M**5))


# printed large-M expansion coefficients of 1/M^3, 1/M^4, 1/M^5
TAYLOR_PRACTICAL = (1, 3, 6)
TAYLOR_CRITICAL = (1, 3, 9)
