"""Kronecker powers of the complete graph and basic graph queries.

Vertices are 0-based. A vertex of ``K_M^{(x)j}`` is identified with its
coordinates ``(p_1, ..., p_j)``, ``p_i in [0, M)``, through the mixed-radix
index ``sum_i p_i * M**(j - i)`` (most significant digit first), which is the
block order produced by ``numpy.kron``. Two vertices of the complete-initiator
power are adjacent iff they differ at every coordinate.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence, TextIO

import numpy as np
from scipy import sparse

from .errors import CapacityExceeded, DegenerateSRG, InvalidArgument, NotStronglyRegular

MAX_VERTICES = 2**62
MAX_MATERIALIZED_EDGES = 50_000_000
SRG_BRUTE_FORCE_LIMIT = 4096

UNREACHABLE = math.inf


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected simple graph.

    ``provenance`` is ``(M, j)`` for Kronecker powers of an ``M``-vertex
    initiator. When ``complete_initiator`` is set, adjacency is answered from
    the coordinate law and the sparse matrix is only built on demand.
    """

    num_vertices: int
    provenance: tuple[int, int] | None = None
    complete_initiator: bool = False
    _csr: sparse.csr_array | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.num_vertices < 1:
            raise InvalidArgument("graph needs at least one vertex")
        if self._csr is None and not self.complete_initiator:
            raise InvalidArgument("graph needs an adjacency structure")

    @property
    def N(self) -> int:
        return self.num_vertices

    @property
    def M(self) -> int | None:
        return self.provenance[0] if self.provenance else None

    @property
    def order(self) -> int | None:
        return self.provenance[1] if self.provenance else None

    @property
    def num_edges(self) -> int:
        if self.complete_initiator:
            M, j = self.provenance
            return self.num_vertices * (M - 1) ** j // 2
        return int(self.adjacency.nnz) // 2

    @cached_property
    def adjacency(self) -> sparse.csr_array:
        """Sorted CSR adjacency with float64 ones."""
        if self._csr is not None:
            return self._csr
        M, j = self.provenance
        nnz = self.num_vertices * (M - 1) ** j
        if nnz > MAX_MATERIALIZED_EDGES:
            raise CapacityExceeded(
                f"K_{M}^{j} has {nnz} adjacency entries; "
                f"limit is {MAX_MATERIALIZED_EDGES}"
            )
        return _kron_csr(_complete_csr(M), j)

    def max_degree(self) -> int:
        if self.complete_initiator:
            M, j = self.provenance
            return (M - 1) ** j
        return int(np.diff(self.adjacency.indptr).max(initial=0))

    def degrees(self) -> np.ndarray:
        if self.complete_initiator:
            M, j = self.provenance
            return np.full(self.num_vertices, (M - 1) ** j, dtype=np.int64)
        return np.diff(self.adjacency.indptr).astype(np.int64)

    def neighbors(self, v: int) -> np.ndarray:
        self._check_vertex(v)
        if self.complete_initiator:
            M, j = self.provenance
            p = decode(v, M, j)
            choices = [[q for q in range(M) if q != pi] for pi in p]
            if any(not c for c in choices):
                return np.empty(0, dtype=np.int64)
            grids = np.meshgrid(*[np.asarray(c, dtype=np.int64) for c in choices], indexing="ij")
            coords = np.stack([g.ravel() for g in grids], axis=1)
            return encode_many(coords, M)
        a = self.adjacency
        return a.indices[a.indptr[v]:a.indptr[v + 1]].astype(np.int64)

    def has_edge(self, u: int, v: int) -> bool:
        self._check_vertex(u)
        self._check_vertex(v)
        if self.complete_initiator:
            M, j = self.provenance
            return all(a != b for a, b in zip(decode(u, M, j), decode(v, M, j)))
        nb = self.neighbors(u)
        k = np.searchsorted(nb, v)
        return bool(k < nb.size and nb[k] == v)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        """Return ``A @ x`` for ``x`` of shape ``(N,)`` or ``(N, B)``."""
        x = np.asarray(x)
        if x.shape[0] != self.num_vertices:
            raise InvalidArgument(f"expected leading dimension {self.num_vertices}")
        if not self.complete_initiator:
            return self.adjacency @ x
        M, j = self.provenance
        tail = x.shape[1:]
        y = x.reshape((M,) * j + tail)
        # K_M acting on one axis is "sum over the axis minus self".
        for axis in range(j):
            y = y.sum(axis=axis, keepdims=True) - y
        return y.reshape(x.shape)

    def dense(self) -> np.ndarray:
        return self.adjacency.toarray()

    def _check_vertex(self, v: int):
        if not 0 <= v < self.num_vertices:
            raise InvalidArgument(f"vertex {v} out of range [0, {self.num_vertices})")


@dataclass(frozen=True)
class SrgParams:
    N: int
    k: int
    lam: int
    mu: int

    def feasible(self) -> bool:
        return self.k * (self.k - self.lam - 1) == (self.N - self.k - 1) * self.mu

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.N, self.k, self.lam, self.mu)


def _complete_csr(M: int) -> sparse.csr_array:
    dense = np.ones((M, M)) - np.eye(M)
    return sparse.csr_array(dense)


def _kron_csr(a: sparse.csr_array, j: int) -> sparse.csr_array:
    out = a
    for _ in range(j - 1):
        out = sparse.kron(out, a, format="csr")
    out = sparse.csr_array(out, dtype=np.float64)
    out.sort_indices()
    out.eliminate_zeros()
    return out


def from_csr(adjacency, provenance: tuple[int, int] | None = None) -> Graph:
    """Wrap a symmetric 0/1 matrix as a ``Graph`` after validating it."""
    a = sparse.csr_array(adjacency, dtype=np.float64)
    a.eliminate_zeros()
    a.sort_indices()
    if a.shape[0] != a.shape[1]:
        raise InvalidArgument("adjacency must be square")
    if a.diagonal().any():
        raise InvalidArgument("self-loops are not allowed")
    if a.nnz and not np.all(a.data == 1.0):
        raise InvalidArgument("adjacency entries must be 0 or 1")
    if (a != a.T).nnz:
        raise InvalidArgument("adjacency must be symmetric")
    return Graph(a.shape[0], provenance=provenance, _csr=a)


def complete_graph(M: int) -> Graph:
    if M < 1:
        raise InvalidArgument("complete_graph needs M >= 1")
    return Graph(M, provenance=(M, 1), complete_initiator=True)


def kron_power(g: Graph, j: int) -> Graph:
    """j-fold Kronecker power of an initiator graph."""
    if j < 1:
        raise InvalidArgument("order j must be >= 1")
    if g.provenance is not None and g.provenance[1] != 1:
        raise InvalidArgument("initiator must be a first-order graph")
    M = g.num_vertices
    if M > 1 and j * math.log2(M) >= math.log2(MAX_VERTICES):
        raise CapacityExceeded(f"{M}**{j} vertices exceeds the index range")
    if g.complete_initiator:
        return Graph(M**j, provenance=(M, j), complete_initiator=True)
    return Graph(M**j, provenance=(M, j), _csr=_kron_csr(g.adjacency, j))


def kron_complete(M: int, j: int) -> Graph:
    return kron_power(complete_graph(M), j)


# -- vertex coordinates ------------------------------------------------------

def encode(positions: Sequence[int], M: int) -> int:
    index = 0
    for p in positions:
        if not 0 <= p < M:
            raise InvalidArgument(f"coordinate {p} out of range [0, {M})")
        index = index * M + int(p)
    return index


def decode(index: int, M: int, j: int) -> tuple[int, ...]:
    if not 0 <= index < M**j:
        raise InvalidArgument(f"index {index} out of range [0, {M}**{j})")
    digits = []
    for _ in range(j):
        index, r = divmod(index, M)
        digits.append(r)
    return tuple(reversed(digits))


def encode_many(coords: np.ndarray, M: int) -> np.ndarray:
    coords = np.asarray(coords, dtype=np.int64)
    out = np.zeros(coords.shape[0], dtype=np.int64)
    for col in range(coords.shape[1]):
        out = out * M + coords[:, col]
    return out


def decode_many(indices: np.ndarray, M: int, j: int) -> np.ndarray:
    """Coordinates of many vertices, shape ``(len(indices), j)``."""
    rest = np.asarray(indices, dtype=np.int64).copy()
    out = np.empty((rest.size, j), dtype=np.int64)
    for col in range(j - 1, -1, -1):
        rest, out[:, col] = np.divmod(rest, M)
    return out


# -- queries -----------------------------------------------------------------

def common_neighbor_count(g: Graph, u: int, v: int) -> int:
    if u == v:
        raise InvalidArgument("common_neighbor_count needs two distinct vertices")
    return int(np.intersect1d(g.neighbors(u), g.neighbors(v), assume_unique=True).size)


def eccentricities(g: Graph, sources: Iterable[int] | None = None, block: int = 256) -> np.ndarray:
    """BFS eccentricity of each source; ``inf`` where some vertex is unreachable.

    Sources are processed in blocks with level-synchronous frontiers, so one
    ``matvec`` advances ``block`` searches at once.
    """
    N = g.num_vertices
    src = np.arange(N) if sources is None else np.asarray(list(sources), dtype=np.int64)
    ecc = np.zeros(src.size, dtype=float)
    for start in range(0, src.size, block):
        s = src[start:start + block]
        cols = np.arange(s.size)
        visited = np.zeros((N, s.size), dtype=bool)
        visited[s, cols] = True
        frontier = visited.astype(float)
        depth = np.zeros(s.size)
        level = 0
        while True:
            new = (g.matvec(frontier) > 0.5) & ~visited
            grew = new.any(axis=0)
            if not grew.any():
                break
            level += 1
            depth[grew] = level
            visited |= new
            frontier = new.astype(float)
        depth[~visited.all(axis=0)] = UNREACHABLE
        ecc[start:start + block] = depth
    return ecc


def diameter(g: Graph) -> float:
    """Largest BFS distance, or ``UNREACHABLE`` (inf) for a disconnected graph."""
    if g.num_vertices == 1:
        return 0
    ecc = eccentricities(g)
    d = ecc.max()
    return UNREACHABLE if math.isinf(d) else int(d)


def srg_params(g: Graph) -> SrgParams:
    """Strongly-regular parameters by exhaustive census of all vertex pairs.

    Raises ``DegenerateSRG`` for complete graphs and ``NotStronglyRegular``
    (with a reason) for everything else that fails the definition.
    """
    N = g.num_vertices
    if N < 2:
        raise InvalidArgument("srg_params needs at least two vertices")
    if N > SRG_BRUTE_FORCE_LIMIT:
        raise CapacityExceeded(f"brute-force SRG census is limited to N <= {SRG_BRUTE_FORCE_LIMIT}")
    if math.isinf(diameter(g)):
        raise NotStronglyRegular("graph is disconnected")
    deg = g.degrees()
    if np.any(deg != deg[0]):
        raise NotStronglyRegular(f"degrees range over {deg.min()}..{deg.max()}")
    k = int(deg[0])
    a = g.adjacency
    common = (a @ a).toarray()
    adj = a.toarray() > 0
    off_diag = ~np.eye(N, dtype=bool)
    lam_values = np.unique(common[adj])
    nonadj = off_diag & ~adj
    if not nonadj.any():
        raise DegenerateSRG("complete graph: no nonadjacent pair, mu undefined")
    mu_values = np.unique(common[nonadj])
    if lam_values.size > 1:
        raise NotStronglyRegular(f"adjacent pairs share {lam_values.tolist()} common neighbours")
    if mu_values.size > 1:
        raise NotStronglyRegular(f"nonadjacent pairs share {mu_values.tolist()} common neighbours")
    lam = int(lam_values[0]) if lam_values.size else 0
    return SrgParams(N, k, lam, int(mu_values[0]))


# -- edge-list text format -----------------------------------------------------

_HEADER = re.compile(r"#\s*vertices\s+(\d+)(?:\s+kronecker\s+M=(\d+)\s+j=(\d+))?")


def write_edgelist(g: Graph, dest: str | Path | TextIO):
    """Write ``u v`` lines (u < v, sorted) preceded by a ``# vertices`` header."""
    lines = [f"# vertices {g.num_vertices}"]
    if g.provenance is not None:
        lines[0] += f" kronecker M={g.provenance[0]} j={g.provenance[1]}"
    upper = sparse.triu(g.adjacency, k=1, format="coo")
    order = np.lexsort((upper.col, upper.row))
    lines.extend(f"{u} {v}" for u, v in zip(upper.row[order], upper.col[order]))
    text = "\n".join(lines) + "\n"
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(text)
    else:
        dest.write(text)


def read_edgelist(src: str | Path | TextIO) -> Graph:
    text = Path(src).read_text() if isinstance(src, (str, Path)) else src.read()
    n_declared = None
    provenance = None
    rows, cols = [], []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _HEADER.match(line)
            if m:
                n_declared = int(m.group(1))
                if m.group(2):
                    provenance = (int(m.group(2)), int(m.group(3)))
            continue
        parts = line.split()
        if len(parts) != 2:
            raise InvalidArgument(f"line {lineno}: expected 'u v', got {line!r}")
        u, v = int(parts[0]), int(parts[1])
        if u == v or u < 0 or v < 0:
            raise InvalidArgument(f"line {lineno}: invalid edge {u} {v}")
        rows.append(u)
        cols.append(v)
    n = n_declared if n_declared is not None else (max(rows + cols) + 1 if rows else 1)
    r = np.asarray(rows + cols, dtype=np.int64)
    c = np.asarray(cols + rows, dtype=np.int64)
    a = sparse.coo_array((np.ones(r.size), (r, c)), shape=(n, n)).tocsr()
    if a.nnz and a.data.max() > 1:
        raise InvalidArgument("duplicate edge in edge list")
    return from_csr(a, provenance=provenance)
