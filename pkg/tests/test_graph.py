import io
import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kronwalk.errors import CapacityExceeded, DegenerateSRG, InvalidArgument, NotStronglyRegular
from kronwalk.graph import (
    UNREACHABLE,
    SrgParams,
    common_neighbor_count,
    complete_graph,
    decode,
    decode_many,
    diameter,
    encode,
    encode_many,
    from_csr,
    kron_complete,
    kron_power,
    read_edgelist,
    srg_params,
    write_edgelist,
)
from kronwalk.verify import coordinate_law_violations

# A (x) A for A = K_4, as printed row by row
K4_SQUARED = """
0000011101110111
0000101110111011
0000110111011101
0000111011101110
0111000001110111
1011000010111011
1101000011011101
1110000011101110
0111011100000111
1011101100001011
1101110100001101
1110111000001110
0111011101110000
1011101110110000
1101110111010000
1110111011100000
"""

SMALL_POWERS = [(M, j) for M in range(2, 9) for j in range(1, 5) if M**j <= 4096]


def test_complete_graph_k4_matches_printed_matrix():
    expected = np.array([[0, 1, 1, 1], [1, 0, 1, 1], [1, 1, 0, 1], [1, 1, 1, 0]])
    g = complete_graph(4)
    np.testing.assert_array_equal(g.dense(), expected)
    assert g.provenance == (4, 1)


def test_complete_graph_small_cases():
    assert complete_graph(1).num_edges == 0
    assert complete_graph(1).adjacency.nnz == 0
    k2 = complete_graph(2)
    assert k2.num_edges == 1 and k2.has_edge(0, 1)
    with pytest.raises(InvalidArgument):
        complete_graph(0)


def test_kron_square_matches_printed_matrix():
    expected = np.array([[int(c) for c in row] for row in K4_SQUARED.split()])
    g = kron_power(complete_graph(4), 2)
    np.testing.assert_array_equal(g.dense(), expected)
    assert g.provenance == (4, 2)
    assert set(g.degrees()) == {9}


def test_kron_first_power_is_identity():
    for M in (1, 2, 5):
        np.testing.assert_array_equal(kron_power(complete_graph(M), 1).dense(), complete_graph(M).dense())


def test_kron_power_rejects_bad_input():
    with pytest.raises(InvalidArgument):
        kron_power(complete_graph(3), 0)
    with pytest.raises(InvalidArgument):
        kron_power(kron_complete(3, 2), 2)
    with pytest.raises(CapacityExceeded):
        kron_power(complete_graph(256), 8)
    # representable index range, but far too many edges to list
    with pytest.raises(CapacityExceeded):
        kron_complete(256, 3).adjacency


def test_kron_power_generic_initiator():
    path = from_csr(np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]]))
    g = kron_power(path, 2)
    np.testing.assert_array_equal(g.dense(), np.kron(path.dense(), path.dense()))
    assert not g.complete_initiator


@pytest.mark.parametrize("M,j", SMALL_POWERS)
def test_degree_is_M_minus_one_to_the_j(M, j):
    g = kron_complete(M, j)
    # degrees read off the materialized CSR built by sparse Kronecker products
    assert np.all(np.diff(g.adjacency.indptr) == (M - 1) ** j)
    assert g.max_degree() == (M - 1) ** j


@pytest.mark.parametrize("M,j", [(2, 3), (3, 2), (3, 3), (4, 2), (4, 3), (5, 2), (3, 4)])
def test_adjacency_coordinate_law_exhaustive(M, j):
    assert coordinate_law_violations(M, j) == 0


def test_adjacency_symmetric_no_loops():
    a = kron_complete(4, 3).adjacency
    assert (a != a.T).nnz == 0
    assert not a.diagonal().any()


@given(st.integers(2, 6), st.integers(1, 4), st.data())
def test_implicit_neighbors_match_csr(M, j, data):
    g = kron_complete(M, j)
    v = data.draw(st.integers(0, M**j - 1))
    a = g.adjacency
    np.testing.assert_array_equal(g.neighbors(v), a.indices[a.indptr[v]:a.indptr[v + 1]])


@given(st.integers(2, 6), st.integers(1, 4), st.integers(0, 2**31))
def test_fast_matvec_matches_sparse(M, j, seed):
    g = kron_complete(M, j)
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(M**j, 3)) + 1j * rng.normal(size=(M**j, 3))
    np.testing.assert_allclose(g.matvec(x), g.adjacency @ x, atol=1e-10)
    np.testing.assert_allclose(g.matvec(x[:, 0]), g.adjacency @ x[:, 0], atol=1e-10)


# -- codec --------------------------------------------------------------------

def test_encode_examples():
    assert encode((0, 0, 0), 4) == 0
    assert encode((3, 3, 3), 4) == 63
    assert encode((1, 2), 4) == 1 * 4 + 2
    assert decode(6, 4, 2) == (1, 2)
    with pytest.raises(InvalidArgument):
        encode((4, 0), 4)
    with pytest.raises(InvalidArgument):
        decode(16, 4, 2)


@given(st.integers(2, 9), st.integers(1, 6), st.data())
def test_codec_round_trip(M, j, data):
    pos = tuple(data.draw(st.lists(st.integers(0, M - 1), min_size=j, max_size=j)))
    idx = encode(pos, M)
    assert 0 <= idx < M**j
    assert decode(idx, M, j) == pos
    assert decode_many(np.array([idx]), M, j)[0].tolist() == list(pos)
    assert encode_many(np.array([pos]), M)[0] == idx


# -- common neighbours, diameter, SRG --------------------------------------------

def test_common_neighbor_examples():
    g3 = kron_complete(4, 3)
    # same set and subset, different position: vertices (0,0,0) and (0,0,1)
    assert common_neighbor_count(g3, 0, 1) == 18
    assert common_neighbor_count(complete_graph(2), 0, 1) == 0
    # vertices 1 and 6 in 1-based labels
    assert common_neighbor_count(kron_complete(4, 2), 0, 5) == 4
    with pytest.raises(InvalidArgument):
        common_neighbor_count(g3, 3, 3)


def test_diameter_examples():
    for M in range(2, 7):
        assert diameter(complete_graph(M)) == 1
    assert diameter(complete_graph(1)) == 0
    # K_2 (x) K_2 is the perfect matching {0-3, 1-2}
    g = kron_complete(2, 2)
    assert sorted(map(tuple, np.argwhere(np.triu(g.dense())))) == [(0, 3), (1, 2)]
    assert diameter(g) is UNREACHABLE
    assert math.isinf(diameter(kron_complete(2, 3)))


@pytest.mark.parametrize("M,j", [(M, j) for M in range(3, 7) for j in range(2, 5) if M**j <= 4096])
def test_diameter_two(M, j):
    assert diameter(kron_complete(M, j)) == 2


def _srg_by_pairs(g):
    nb = [set(g.neighbors(v).tolist()) for v in range(g.num_vertices)]
    lam, mu = set(), set()
    for u, v in itertools.combinations(range(g.num_vertices), 2):
        (lam if v in nb[u] else mu).add(len(nb[u] & nb[v]))
    return {len(s) for s in nb}, lam, mu


def test_srg_examples():
    assert srg_params(kron_complete(4, 2)) == SrgParams(16, 9, 4, 6)
    g = kron_complete(5, 2)
    assert srg_params(g) == SrgParams(25, 16, 9, 12)
    assert _srg_by_pairs(g) == ({16}, {9}, {12})
    with pytest.raises(DegenerateSRG):
        srg_params(complete_graph(5))


@pytest.mark.parametrize("M", range(3, 9))
def test_srg_closed_forms(M):
    s = srg_params(kron_complete(M, 2))
    assert s.as_tuple() == (M * M, (M - 1) ** 2, (M - 2) ** 2, (M - 1) * (M - 2))
    assert s.feasible()


def test_srg_rejections():
    with pytest.raises(NotStronglyRegular, match="disconnected"):
        srg_params(kron_complete(2, 2))
    # K_3^(x)3 is regular but not strongly regular
    with pytest.raises(NotStronglyRegular):
        srg_params(kron_complete(3, 3))
    star = from_csr(np.array([[0, 1, 1], [1, 0, 0], [1, 0, 0]]))
    with pytest.raises(NotStronglyRegular, match="degrees"):
        srg_params(star)


def test_from_csr_validation():
    with pytest.raises(InvalidArgument):
        from_csr(np.array([[0, 1], [0, 0]]))
    with pytest.raises(InvalidArgument):
        from_csr(np.array([[1, 0], [0, 0]]))


# -- edge list -----------------------------------------------------------------

def test_edgelist_round_trip(tmp_path):
    g = kron_complete(3, 2)
    path = tmp_path / "g.txt"
    write_edgelist(g, path)
    text = path.read_text()
    h = read_edgelist(path)
    assert h.provenance == (3, 2)
    np.testing.assert_array_equal(h.dense(), g.dense())
    buf = io.StringIO()
    write_edgelist(h, buf)
    assert buf.getvalue() == text
    assert sum(1 for line in text.splitlines() if not line.startswith("#")) == g.num_edges


def test_edgelist_reader_comments_and_errors():
    g = read_edgelist(io.StringIO("# a comment\n0 1\n\n1 2\n"))
    assert g.num_vertices == 3 and g.num_edges == 2
    assert read_edgelist(io.StringIO("# vertices 5\n0 1\n")).num_vertices == 5
    with pytest.raises(InvalidArgument):
        read_edgelist(io.StringIO("0 0\n"))
    with pytest.raises(InvalidArgument):
        read_edgelist(io.StringIO("0 1 2\n"))
    with pytest.raises(InvalidArgument):
        read_edgelist(io.StringIO("0 1\n1 0\n"))
