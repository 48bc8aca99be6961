"""Continuous-time quantum walk search: ``i d/dt psi = H psi`` with
``H = -gamma A - |w><w|``, started from the uniform superposition.

Two propagators are used:

* exact: eigendecomposition of the dense Hermitian ``H`` (any reduced problem,
  and full problems up to ``EXACT_MAX_DIM`` vertices);
* Chebyshev: ``exp(-iHt)`` expanded in Chebyshev polynomials of the rescaled
  operator, applied matrix-free. Terms are kept until the Bessel coefficients
  fall below 1e-16, so the result matches the exact propagator to roundoff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import jv

from .errors import CapacityExceeded, InvalidArgument, NumericalFailure
from .graph import Graph
from .reduce import Partition, ReducedHamiltonian, reduce_hamiltonian
from .state import NORM_TOL, StateVector

EXACT_MAX_DIM = 2048
FULL_MAX_DIM = 2**22
COARSE_SAMPLES = 512
PEAK_RTOL = 1e-4
PROB_SLACK = 1e-12

# Max rescaled time per Chebyshev chunk; keeps the Bessel series short.
_CHEB_CHUNK = 50.0
_CHEB_EPS = 1e-16

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SearchProblem:
    graph: Graph
    marked: int
    gamma: float

    def __post_init__(self):
        if not 0 <= self.marked < self.graph.num_vertices:
            raise InvalidArgument(f"marked vertex {self.marked} out of range")
        if not (self.gamma > 0 and math.isfinite(self.gamma)):
            raise InvalidArgument("gamma must be a positive finite number")

    @property
    def N(self) -> int:
        return self.graph.num_vertices

    def apply(self, psi: np.ndarray) -> np.ndarray:
        """``H @ psi`` without forming ``H``."""
        out = -self.gamma * self.graph.matvec(psi)
        out[self.marked] -= psi[self.marked]
        return out

    def dense_hamiltonian(self) -> np.ndarray:
        if self.N > EXACT_MAX_DIM:
            raise CapacityExceeded(f"dense H limited to {EXACT_MAX_DIM} vertices")
        H = -self.gamma * self.graph.dense()
        H[self.marked, self.marked] -= 1.0
        return H

    def spectral_bounds(self) -> tuple[float, float]:
        # spectrum of A lies in [-k_max, k_max]; the oracle shifts one direction by -1
        r = self.gamma * self.graph.max_degree()
        return -r - 1.0, r

    def reduced(self, partition: Partition) -> ReducedHamiltonian:
        return _reduced(self, partition)


@dataclass(frozen=True)
class SimulationResult:
    times: np.ndarray
    probabilities: np.ndarray
    peak_time: float
    peak_probability: float
    gamma: float
    N: int
    boundary_peak: bool = False
    propagator: str = field(default="exact")


def uniform_state(problem: SearchProblem, partition: Partition | None = None) -> StateVector:
    """``|s>`` in the full basis, or its cell coefficients when ``partition`` is given."""
    N = problem.N
    if partition is None:
        if N > FULL_MAX_DIM:
            raise CapacityExceeded(f"full state limited to {FULL_MAX_DIM} amplitudes")
        return StateVector(np.full(N, 1.0 / math.sqrt(N), dtype=complex))
    if partition.N != N:
        raise InvalidArgument("partition does not match the problem graph")
    return StateVector(np.sqrt(np.asarray(partition.sizes, dtype=float) / N), partition=partition)


# -- propagators ---------------------------------------------------------------

class _Exact:
    name = "exact"

    def __init__(self, H: np.ndarray):
        self.H = H
        self.evals, self.evecs = np.linalg.eigh(H)

    def evolve(self, psi: np.ndarray, t: float) -> np.ndarray:
        c = self.evecs.conj().T @ psi
        return self.evecs @ (np.exp(-1j * self.evals * t) * c)

    def amplitude_series(self, psi0: np.ndarray, index: int, times: np.ndarray) -> np.ndarray:
        c = self.evecs.conj().T @ psi0
        weights = self.evecs[index, :] * c
        out = np.empty(times.size, dtype=complex)
        step = max(1, 2**22 // max(1, self.evals.size))
        for s in range(0, times.size, step):
            t = times[s:s + step]
            out[s:s + step] = np.exp(-1j * np.outer(t, self.evals)) @ weights
        return out


class _Chebyshev:
    name = "chebyshev"

    def __init__(self, apply: Callable[[np.ndarray], np.ndarray], lo: float, hi: float):
        self.apply = apply
        # pad so rounding never pushes an eigenvalue outside [-1, 1]
        pad = 1e-3 * (hi - lo) + 1e-12
        self.center = 0.5 * (hi + lo)
        self.half = 0.5 * (hi - lo) + pad

    def _step(self, psi: np.ndarray, dt: float) -> np.ndarray:
        x = self.half * dt
        n_max = int(x + 10.0 * max(1.0, x) ** (1 / 3) + 30)
        orders = np.arange(n_max + 1)
        coef = jv(orders, x)
        tail = np.flatnonzero(np.abs(coef) > _CHEB_EPS)
        n_terms = int(tail[-1]) + 1 if tail.size else 1
        coef = coef[:n_terms] * (-1j) ** orders[:n_terms]
        coef[1:] *= 2.0

        def scaled(v):
            return (self.apply(v) - self.center * v) / self.half

        t_prev = psi
        out = coef[0] * t_prev
        if n_terms > 1:
            t_cur = scaled(psi)
            out = out + coef[1] * t_cur
            for n in range(2, n_terms):
                t_prev, t_cur = t_cur, 2.0 * scaled(t_cur) - t_prev
                out = out + coef[n] * t_cur
        return np.exp(-1j * self.center * dt) * out

    def evolve(self, psi: np.ndarray, t: float) -> np.ndarray:
        if t == 0:
            return psi.copy()
        chunks = max(1, math.ceil(self.half * t / _CHEB_CHUNK))
        dt = t / chunks
        if dt <= 0 or not math.isfinite(dt):
            raise NumericalFailure(f"time step underflow (t={t}, chunks={chunks})")
        for _ in range(chunks):
            psi = self._step(psi, dt)
        if not np.all(np.isfinite(psi)):
            raise NumericalFailure("non-finite amplitudes in Chebyshev propagation")
        return psi


@lru_cache(maxsize=16)
def _reduced(problem: SearchProblem, partition: Partition) -> ReducedHamiltonian:
    return reduce_hamiltonian(problem.graph, partition, problem.gamma, problem.marked)


@lru_cache(maxsize=8)
def _propagator(problem: SearchProblem, partition: Partition | None, method: str):
    if partition is not None:
        H = _reduced(problem, partition).matrix
        if method == "chebyshev":
            lo, hi = np.linalg.eigvalsh(H)[[0, -1]]
            return _Chebyshev(lambda v: H @ v, lo, hi)
        return _Exact(H)
    if method == "auto":
        method = "exact" if problem.N <= EXACT_MAX_DIM else "chebyshev"
    if method == "exact":
        return _Exact(problem.dense_hamiltonian())
    if method == "chebyshev":
        if problem.N > FULL_MAX_DIM:
            raise CapacityExceeded(
                f"full-space evolution limited to {FULL_MAX_DIM} vertices; use reduced mode"
            )
        return _Chebyshev(problem.apply, *problem.spectral_bounds())
    raise InvalidArgument(f"unknown propagator {method!r}")


def evolve(problem: SearchProblem, psi0: StateVector, t: float, method: str = "auto") -> StateVector:
    """Return ``exp(-iHt) psi0`` in the basis of ``psi0``.

    ``method`` is ``"auto"``, ``"exact"`` or ``"chebyshev"``.
    """
    if t < 0:
        raise InvalidArgument("evolution time must be nonnegative")
    p = psi0.partition
    if p is not None and (p.N != problem.N or p.marked != problem.marked):
        raise InvalidArgument("reduced state does not belong to this problem")
    if p is None and psi0.dim != problem.N:
        raise InvalidArgument(f"state has {psi0.dim} amplitudes, graph has {problem.N} vertices")
    if t == 0:
        return psi0
    prop = _propagator(problem, p, method)
    psi = prop.evolve(psi0.amplitudes, t)
    drift = abs(np.linalg.norm(psi) - 1.0)
    if drift > NORM_TOL:
        raise NumericalFailure(f"norm drifted by {drift:.3e}")
    return StateVector(psi, partition=p)


def success_probability(problem: SearchProblem, psi: StateVector) -> float:
    idx = 0 if psi.partition is not None else problem.marked
    return _clamp(abs(psi.amplitudes[idx]) ** 2)


def _clamp(p):
    lo, hi = np.min(p), np.max(p)
    if lo < -PROB_SLACK or hi > 1 + PROB_SLACK:
        raise NumericalFailure(f"probability outside [0, 1]: [{lo}, {hi}]")
    return np.clip(p, 0.0, 1.0)


class _Curve:
    """Success probability as a function of time for one problem and basis."""

    def __init__(self, problem: SearchProblem, partition: Partition | None, method: str = "auto"):
        self.problem = problem
        self.psi0 = uniform_state(problem, partition)
        self.prop = _propagator(problem, partition, method)
        self.index = 0 if partition is not None else problem.marked
        self._anchor = (0.0, self.psi0.amplitudes)

    def sample(self, times: np.ndarray) -> np.ndarray:
        if isinstance(self.prop, _Exact):
            amps = self.prop.amplitude_series(self.psi0.amplitudes, self.index, times)
            return _clamp(np.abs(amps) ** 2)
        out = np.empty(times.size)
        t_prev, psi = 0.0, self.psi0.amplitudes
        for i, t in enumerate(times):
            psi = self.prop.evolve(psi, t - t_prev)
            t_prev = t
            out[i] = abs(psi[self.index]) ** 2
            if i and abs(np.linalg.norm(psi) - 1.0) > NORM_TOL:
                raise NumericalFailure("norm drift during sampling")
        return _clamp(out)

    def set_anchor(self, t: float):
        """Cache the state at ``t`` so later point queries near it are cheap."""
        if isinstance(self.prop, _Chebyshev):
            self._anchor = (t, self.prop.evolve(self.psi0.amplitudes, t))

    def at(self, t: float) -> float:
        if isinstance(self.prop, _Exact):
            return float(self.sample(np.array([t]))[0])
        t0, psi = self._anchor
        if t < t0:
            t0, psi = 0.0, self.psi0.amplitudes
        return float(_clamp(abs(self.prop.evolve(psi, t - t0)[self.index]) ** 2))


def _first_local_max(probs: np.ndarray) -> int | None:
    """Index of the first interior local maximum (ties resolve to the earliest)."""
    for i in range(1, probs.size - 1):
        if probs[i] >= probs[i - 1] and probs[i] > probs[i + 1]:
            return i
    return None


def _golden_max(f: Callable[[float], float], a: float, b: float, rtol: float) -> tuple[float, float]:
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > rtol * max(abs(c), abs(d), 1e-300):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def _refine(curve: _Curve, times: np.ndarray, probs: np.ndarray) -> tuple[float, float, bool]:
    i = _first_local_max(probs)
    if i is None:
        k = int(np.argmax(probs))  # argmax returns the earliest of equal values
        return float(times[k]), float(probs[k]), True
    curve.set_anchor(float(times[i - 1]))
    t, p = _golden_max(curve.at, float(times[i - 1]), float(times[i + 1]), PEAK_RTOL)
    if p < probs[i]:
        t, p = float(times[i]), float(probs[i])
    return t, p, False


def probability_series(
    problem: SearchProblem,
    t_max: float,
    samples: int,
    partition: Partition | None = None,
    method: str = "auto",
) -> SimulationResult:
    """Success probability on ``samples`` evenly spaced times in ``[0, t_max]``.

    The peak is the first local maximum of the sampled curve, refined by
    golden-section search; ``boundary_peak`` flags curves without one.
    """
    if not t_max > 0:
        raise InvalidArgument("t_max must be positive")
    if samples < 2:
        raise InvalidArgument("need at least two samples")
    curve = _Curve(problem, partition, method)
    times = np.linspace(0.0, t_max, samples)
    probs = curve.sample(times)
    t, p, flag = _refine(curve, times, probs)
    return SimulationResult(times, probs, t, p, problem.gamma, problem.N, flag, curve.prop.name)


def find_peak(
    problem: SearchProblem,
    t_hint: float,
    partition: Partition | None = None,
    method: str = "auto",
) -> tuple[float, float, bool]:
    """First maximum of the success probability near ``t_hint``.

    Scans ``[0, 1.5 t_hint]`` at 512 points, then refines by golden section
    to relative time tolerance 1e-4. Returns ``(time, probability, boundary)``.
    """
    if not t_hint > 0:
        raise InvalidArgument("t_hint must be positive")
    curve = _Curve(problem, partition, method)
    times = np.linspace(0.0, 1.5 * t_hint, COARSE_SAMPLES)
    return _refine(curve, times, curve.sample(times))


def expected_energy(problem: SearchProblem, psi: StateVector) -> float:
    v = psi.amplitudes
    if psi.partition is not None:
        Hv = _reduced(problem, psi.partition).matrix @ v
    else:
        Hv = problem.apply(v)
    return float(np.real(np.vdot(v, Hv)))
