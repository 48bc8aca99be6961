"""Symmetry reduction of the search Hamiltonian.

Starting from a cell-uniform state, evolution under ``H = -gamma A - |w><w|``
stays inside the span of the cell-uniform superpositions of any equitable
partition that isolates ``w``. The quotient matrix on that span has entries

    B[a, b] = d[a, b] * sqrt(|C_a| / |C_b|)

where ``d[a, b]`` is the number of neighbours each vertex of ``C_a`` has in
``C_b``. ``B`` is symmetric because ``|C_a| d[a, b] = |C_b| d[b, a]``.

Two ways to get a partition are provided: ``equitable_partition`` refines
``{{w}, V - {w}}`` on an explicit graph, and ``kronecker_partition`` writes down
the orbit partition of ``K_M^{(x)j}`` directly (vertices grouped by how many
coordinates they share with ``w``), which needs no graph at all and so scales
to ``N = 256**3``.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from math import comb
from pathlib import Path
from typing import TextIO

import numpy as np

from .errors import CapacityExceeded, InvalidArgument
from .graph import Graph, decode, decode_many
from .state import StateVector

MATERIALIZE_LIMIT = 2**22


@dataclass(frozen=True, eq=False)
class Partition:
    """Ordered cells; cell 0 is ``{marked}``.

    ``labels[v]`` is the cell of vertex ``v`` and may be ``None`` for closed-form
    partitions of graphs too large to enumerate. ``counts[a, b]`` is the
    neighbour count from any vertex of cell ``a`` into cell ``b`` when known.
    """

    sizes: tuple[int, ...]
    marked: int
    labels: np.ndarray | None = None
    counts: np.ndarray | None = None
    kronecker: tuple[int, int] | None = None

    @property
    def num_cells(self) -> int:
        return len(self.sizes)

    @property
    def N(self) -> int:
        return sum(self.sizes)

    def cells(self) -> list[np.ndarray]:
        if self.labels is None:
            raise CapacityExceeded("partition cells were not materialized")
        order = np.argsort(self.labels, kind="stable")
        bounds = np.cumsum((0,) + self.sizes)
        return [order[bounds[c]:bounds[c + 1]] for c in range(self.num_cells)]

    def to_json(self) -> dict:
        return {"cells": [c.tolist() for c in self.cells()], "sizes": list(self.sizes)}

    @classmethod
    def from_json(cls, data: dict) -> Partition:
        cells = [np.asarray(c, dtype=np.int64) for c in data["cells"]]
        sizes = tuple(int(s) for s in data["sizes"])
        if tuple(c.size for c in cells) != sizes:
            raise InvalidArgument("cell sizes do not match listed cells")
        if sizes[0] != 1:
            raise InvalidArgument("cell 0 must hold only the marked vertex")
        N = sum(sizes)
        labels = np.full(N, -1, dtype=np.int64)
        for i, c in enumerate(cells):
            labels[c] = i
        if np.any(labels < 0) or np.concatenate(cells).size != N:
            raise InvalidArgument("cells must partition the vertex set")
        return cls(sizes, int(cells[0][0]), labels=labels)


@dataclass(frozen=True, eq=False)
class ReducedHamiltonian:
    matrix: np.ndarray
    gamma: float
    cell_sizes: tuple[int, ...]
    adjacency: np.ndarray  # quotient of A alone, same basis

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def _neighbor_counts(g: Graph, labels: np.ndarray, num_cells: int) -> np.ndarray:
    onehot = np.zeros((g.num_vertices, num_cells))
    onehot[np.arange(g.num_vertices), labels] = 1.0
    counts = g.matvec(onehot)
    rounded = np.rint(counts)
    if np.abs(counts - rounded).max(initial=0.0) > 1e-6:
        raise ArithmeticError("non-integer neighbour counts")
    return rounded.astype(np.int64)


def equitable_partition(g: Graph, w: int) -> Partition:
    """Coarsest equitable refinement of ``{{w}, V - {w}}``.

    Cells are split by exact integer neighbour-count signatures until the
    number of cells stops growing. Cell order: ``{w}`` first, then by smallest
    member.
    """
    g._check_vertex(w)
    N = g.num_vertices
    if N == 1:
        return Partition((1,), w, labels=np.zeros(1, dtype=np.int64), counts=np.zeros((1, 1), dtype=np.int64))
    labels = np.ones(N, dtype=np.int64)
    labels[w] = 0
    num_cells = 2
    while True:
        counts = _neighbor_counts(g, labels, num_cells)
        signature = np.column_stack([labels, counts])
        _, group = np.unique(signature, axis=0, return_inverse=True)
        group = group.ravel()
        n_groups = int(group.max()) + 1
        first = np.full(n_groups, N, dtype=np.int64)
        np.minimum.at(first, group, np.arange(N))
        # w is a singleton with the smallest key (label 0); force it first anyway
        key = first.copy()
        key[group[w]] = -1
        rank = np.empty(n_groups, dtype=np.int64)
        rank[np.argsort(key)] = np.arange(n_groups)
        labels = rank[group]
        if n_groups == num_cells:
            break
        num_cells = n_groups
    counts = _neighbor_counts(g, labels, num_cells)
    reps = np.array([np.flatnonzero(labels == c)[0] for c in range(num_cells)])
    sizes = tuple(int(s) for s in np.bincount(labels, minlength=num_cells))
    return Partition(sizes, w, labels=labels, counts=counts[reps])


def kronecker_cell_counts(M: int, j: int) -> tuple[tuple[int, ...], np.ndarray, list[int]]:
    """Sizes and neighbour counts of the agreement classes of ``K_M^{(x)j}``.

    Class ``m`` holds vertices equal to ``w`` in exactly ``m`` coordinates.
    A vertex agreeing on a set S (|S| = m) has neighbours that differ from it
    everywhere: inside S they have M-1 choices (none agreeing with w), outside
    S one choice agrees with w and M-2 do not. Hence
    ``d(m -> m') = C(j-m, m') (M-2)^(j-m-m') (M-1)^m``.
    Classes are returned in order m = j, j-1, ..., 0, dropping empty ones.
    """
    agreements = [m for m in range(j, -1, -1) if comb(j, m) * (M - 1) ** (j - m) > 0]
    sizes = tuple(comb(j, m) * (M - 1) ** (j - m) for m in agreements)
    C = len(agreements)
    counts = np.zeros((C, C), dtype=np.int64)
    for a, m in enumerate(agreements):
        for b, mp in enumerate(agreements):
            if mp <= j - m:
                counts[a, b] = comb(j - m, mp) * (M - 2) ** (j - m - mp) * (M - 1) ** m
    return sizes, counts, agreements


def kronecker_partition(M: int, j: int, w: int = 0, materialize: bool | None = None) -> Partition:
    """Closed-form equitable partition of ``K_M^{(x)j}`` around ``w``.

    Vertex labels are only built when ``materialize`` is true, or by default
    when ``M**j <= MATERIALIZE_LIMIT``.
    """
    if M < 1 or j < 1:
        raise InvalidArgument("need M >= 1 and j >= 1")
    N = M**j
    if not 0 <= w < N:
        raise InvalidArgument(f"marked vertex {w} out of range")
    sizes, counts, agreements = kronecker_cell_counts(M, j)
    if materialize is None:
        materialize = N <= MATERIALIZE_LIMIT
    labels = None
    if materialize:
        if N > MATERIALIZE_LIMIT:
            raise CapacityExceeded(f"{N} vertices exceeds the label limit {MATERIALIZE_LIMIT}")
        wc = np.asarray(decode(w, M, j))
        agree = (decode_many(np.arange(N), M, j) == wc).sum(axis=1)
        lookup = np.full(j + 1, -1, dtype=np.int64)
        lookup[agreements] = np.arange(len(agreements))
        labels = lookup[agree]
    return Partition(sizes, w, labels=labels, counts=counts, kronecker=(M, j))


def is_equitable(g: Graph, p: Partition) -> bool:
    """Check equitability by walking every vertex's neighbour list."""
    if p.labels is None or p.labels.size != g.num_vertices:
        return False
    if p.sizes[0] != 1 or p.labels[p.marked] != 0:
        return False
    ref = {}
    for v in range(g.num_vertices):
        row = np.bincount(p.labels[g.neighbors(v)], minlength=p.num_cells)
        c = int(p.labels[v])
        if c not in ref:
            ref[c] = row
        elif not np.array_equal(ref[c], row):
            return False
    return True


def reduce_hamiltonian(g: Graph, p: Partition, gamma: float, w: int) -> ReducedHamiltonian:
    """Quotient of ``-gamma A - |w><w|`` on the cell-uniform subspace of ``p``."""
    if p.marked != w or p.sizes[0] != 1:
        raise InvalidArgument("partition must isolate the marked vertex in cell 0")
    if p.N != g.num_vertices:
        raise InvalidArgument(f"partition covers {p.N} vertices, graph has {g.num_vertices}")
    if p.labels is not None:
        if p.labels[w] != 0:
            raise InvalidArgument("marked vertex is not in cell 0")
        per_vertex = _neighbor_counts(g, p.labels, p.num_cells)
        counts = np.zeros((p.num_cells, p.num_cells), dtype=np.int64)
        for c in range(p.num_cells):
            rows = per_vertex[p.labels == c]
            if np.any(rows != rows[0]):
                raise InvalidArgument(f"partition is not equitable (cell {c})")
            counts[c] = rows[0]
    elif p.counts is not None and p.kronecker == g.provenance and g.complete_initiator:
        counts = p.counts
    else:
        raise InvalidArgument("cannot verify partition: no labels and no matching closed form")
    sizes = np.asarray(p.sizes, dtype=float)
    B = counts * np.sqrt(sizes[:, None] / sizes[None, :])
    if not np.allclose(B, B.T, rtol=1e-12, atol=0):
        raise InvalidArgument("partition is not equitable (asymmetric quotient)")
    B = 0.5 * (B + B.T)
    H = -gamma * B
    H[0, 0] -= 1.0
    return ReducedHamiltonian(H, float(gamma), p.sizes, B)


def project_uniform(p: Partition, N: int) -> StateVector:
    if N != p.N:
        raise InvalidArgument(f"partition covers {p.N} vertices, not {N}")
    return StateVector(np.sqrt(np.asarray(p.sizes, dtype=float) / N), partition=p)


def lift(p: Partition, reduced_state: StateVector) -> StateVector:
    """Map a cell-coefficient state back to vertex amplitudes."""
    coeffs = np.asarray(reduced_state.amplitudes)
    if coeffs.size != p.num_cells:
        raise InvalidArgument(f"expected {p.num_cells} coefficients, got {coeffs.size}")
    if p.labels is None:
        raise CapacityExceeded("partition cells were not materialized")
    sizes = np.asarray(p.sizes, dtype=float)
    return StateVector(coeffs[p.labels] / np.sqrt(sizes[p.labels]))


# -- the third-order layout ----------------------------------------------------

def third_order_layout(p: Partition, M: int) -> tuple[int, int, int, int]:
    """Cell indices of (marked, adjacent, 3(M-1) class, 3(M-1)^2 class).

    Applying this permutation to a reduced j=3 matrix gives the printed
    (a, b, c, d) layout. Cells are identified structurally, so the result does
    not depend on which vertex is marked.
    """
    if p.num_cells != 4 or p.counts is None:
        raise InvalidArgument("need a 4-cell partition with known counts")
    adjacent = [c for c in range(1, 4) if p.counts[0, c] > 0]
    if len(adjacent) != 1:
        raise InvalidArgument("marked vertex must be adjacent to exactly one cell")
    b = adjacent[0]
    rest = [c for c in range(1, 4) if c != b]
    c = next(x for x in rest if p.sizes[x] == 3 * (M - 1))
    d = next(x for x in rest if x != c)
    return (0, b, c, d)


def in_layout(matrix: np.ndarray, layout) -> np.ndarray:
    idx = np.asarray(layout)
    return matrix[np.ix_(idx, idx)]


# -- census of the third-order graph -------------------------------------------

@dataclass(frozen=True)
class CensusRow:
    label: str
    count: int
    mutual_neighbors: int
    same_coords: tuple[bool, bool, bool]  # (same set, same subset, same position)


def third_order_census(M: int) -> list[CensusRow]:
    """Vertex classes of ``K_M^{(x)3}`` relative to a marked vertex.

    Rows: the adjacent class, then the six nonadjacent classes, each with its
    size and the number of neighbours it shares with the marked vertex. With
    the marked vertex itself the counts sum to ``M**3``.
    """
    if M < 3:
        raise InvalidArgument("third_order_census needs M >= 3")
    a, b = M - 1, M - 2
    rows = [CensusRow("Adjacent", a**3, b**3, (False, False, False))]
    for same, label in [
        ((True, True, False), "Same set, same subset, different position"),
        ((True, False, True), "Same set, different subset, same position"),
        ((True, False, False), "Same set, different subset, different position"),
        ((False, True, True), "Different set, same subset, same position"),
        ((False, True, False), "Different set, same subset, different position"),
        ((False, False, True), "Different set, different subset, same position"),
    ]:
        n_same = sum(same)
        # each differing coordinate has M-1 choices; mutual neighbours avoid
        # one value at agreeing coordinates and two at differing ones
        count = a ** (3 - n_same)
        mutual = a**n_same * b ** (3 - n_same)
        rows.append(CensusRow(label, count, mutual, same))
    return rows


def write_census_csv(rows: list[CensusRow], dest: str | Path | TextIO):
    def emit(fh):
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["class", "count", "mutual_neighbors"])
        for r in rows:
            writer.writerow([r.label, r.count, r.mutual_neighbors])

    if isinstance(dest, (str, Path)):
        with open(dest, "w", newline="") as fh:
            emit(fh)
    else:
        emit(dest)


def write_partition_json(p: Partition, dest: str | Path):
    Path(dest).write_text(json.dumps(p.to_json()) + "\n")


def read_partition_json(src: str | Path) -> Partition:
    return Partition.from_json(json.loads(Path(src).read_text()))
