"""Brute-force oracle suites shared by the ``verify`` command and the tests."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import analysis
from .graph import common_neighbor_count, decode, diameter, kron_complete, srg_params
from .reduce import kronecker_partition, third_order_census
from .walk import SearchProblem, _Curve

QUOTIENT_CASES = ((4, 2), (4, 3), (5, 3))
QUOTIENT_TOL = 1e-8
QUOTIENT_POINTS = 200


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    passed: bool
    detail: str


def census_by_enumeration(M: int, w: int = 0) -> dict[tuple[bool, bool, bool], tuple[int, set[int]]]:
    """Group every vertex other than ``w`` in ``K_M^{(x)3}`` by which of its
    coordinates equal ``w``'s, counting members and the distinct numbers of
    common neighbours with ``w`` (set intersection of neighbour lists)."""
    g = kron_complete(M, 3)
    wc = decode(w, M, 3)
    table: dict = {}
    for v in range(g.num_vertices):
        if v == w:
            continue
        same = tuple(a == b for a, b in zip(decode(v, M, 3), wc))
        n, mutual = table.get(same, (0, set()))
        mutual.add(common_neighbor_count(g, w, v))
        table[same] = (n + 1, mutual)
    return table


def check_srg(Ms=range(3, 9)) -> list[Check]:
    out = []
    for M in Ms:
        got = srg_params(kron_complete(M, 2))
        want = analysis.srg_closed_form(M)
        ok = got == want and got.feasible()
        out.append(Check("srg", f"K_{M}^2", ok, f"{got.as_tuple()} vs {want.as_tuple()}"))
    return out


def check_census(Ms=range(3, 6)) -> list[Check]:
    out = []
    for M in Ms:
        rows = third_order_census(M)
        brute = census_by_enumeration(M)
        bad = [r.label for r in rows if brute.get(r.same_coords) != (r.count, {r.mutual_neighbors})]
        total = 1 + sum(r.count for r in rows)
        identity = 1 + (M - 1) ** 3 + 3 * (M - 1) + 3 * (M - 1) ** 2
        ok = not bad and total == M**3 == identity and len(brute) == len(rows)
        detail = f"total {total}/{M**3}" + (f"; mismatched: {bad}" if bad else "")
        out.append(Check("census", f"M={M}", ok, detail))
    return out


def quotient_discrepancy(M: int, j: int, gamma: float | None = None, points: int = QUOTIENT_POINTS) -> float:
    """Max |p_reduced - p_full| over ``points`` times in ``[0, 2 pi sqrt(N)]``."""
    g = kron_complete(M, j)
    if gamma is None:
        gamma = analysis.default_gamma(M, j).value
    problem = SearchProblem(g, 0, gamma)
    times = np.linspace(0.0, 2 * math.pi * math.sqrt(g.num_vertices), points)
    full = _Curve(problem, None).sample(times)
    reduced = _Curve(problem, kronecker_partition(M, j)).sample(times)
    return float(np.max(np.abs(full - reduced)))


def check_quotient(cases=QUOTIENT_CASES) -> list[Check]:
    out = []
    for M, j in cases:
        err = quotient_discrepancy(M, j)
        out.append(Check("quotient", f"K_{M}^{j}", err <= QUOTIENT_TOL, f"max |dp| = {err:.2e}"))
    return out


def diameter_cases(max_n: int = 4096):
    return [(M, j) for M in range(3, 7) for j in range(2, 5) if M**j <= max_n]


def check_diameter() -> list[Check]:
    out = []
    for M, j in diameter_cases():
        d = diameter(kron_complete(M, j))
        out.append(Check("diameter", f"K_{M}^{j}", d == 2, f"diameter {d}"))
    return out


def coordinate_law_violations(M: int, j: int) -> int:
    """Pairs where adjacency disagrees with 'differs at every coordinate'."""
    g = kron_complete(M, j)
    a = g.adjacency
    bad = 0
    for u, v in combinations(range(g.num_vertices), 2):
        law = all(x != y for x, y in zip(decode(u, M, j), decode(v, M, j)))
        bad += law != bool(a[u, v])
    return bad


SUITES = {
    "srg": check_srg,
    "census": check_census,
    "quotient": check_quotient,
    "diameter": check_diameter,
}


def run_suite(name: str) -> list[Check]:
    if name == "all":
        return [c for fn in SUITES.values() for c in fn()]
    return SUITES[name]()
