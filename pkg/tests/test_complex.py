from __future__ import annotations

from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import betti, boundary_matrix, all_simplices, in_column_space
from tritopo.complex import (
    ChainZ2,
    SimplicialComplex,
    barycentric_subdivide,
    barycentric_subdivision,
    boundary,
    euler_characteristic,
    homology_rank,
    homology_ranks,
    is_boundary,
    regular_neighborhood,
    stellar_subdivide,
)
from tritopo.corpus import GENERATORS, STACKS, generate
from tritopo.errors import ComplexError, InvalidChainError, PreconditionError

SMALL = [n for n in GENERATORS]


@pytest.mark.parametrize("name", SMALL)
def test_corpus_matches_declared_invariants(name):
    e = generate(name)
    K = e.complex
    assert homology_ranks(K, K.dim) == tuple(e.expected["ranks"])
    assert euler_characteristic(K) == e.expected["euler"]
    if "f" in e.expected:
        assert K.f_vector == tuple(e.expected["f"])


@pytest.mark.parametrize("name", SMALL)
def test_homology_matches_dense_oracle(name):
    K = generate(name).complex
    assert homology_ranks(K, K.dim) == betti(K.facets, K.dim)


def test_join_face_counts():
    # join of two 3-cycles: C(3,1)*... vertices 3+3, edges 3+3+9, triangles 3*3*2, tets 9
    K = generate("join-triangles-s3").complex
    assert K.f_vector == (6, 3 + 3 + 9, 9 + 9, 9)
    assert set(K.labels) == {"coreA", "coreB"}


def test_missing_face_rejected():
    with pytest.raises(ComplexError, match=r"face \(1, 2\)"):
        SimplicialComplex([(0,), (1,), (2,), (0, 1), (0, 2), (0, 1, 2)])


def test_label_outside_complex_rejected():
    with pytest.raises(ComplexError, match="label 'x'"):
        SimplicialComplex([(0, 1, 2)], {"x": [(2, 3)]}, close=True)


def test_chain_outside_complex_rejected():
    K = SimplicialComplex([(0, 1, 2)], close=True)
    with pytest.raises(InvalidChainError):
        is_boundary(ChainZ2(1, frozenset({(0, 5)})), K)


def test_is_boundary_witness_and_nonbounding():
    K = generate("torus-7").complex
    tri = ChainZ2(2, frozenset({(0, 1, 3)}))
    ok, w = is_boundary(boundary(tri), K)
    assert ok and boundary(w) == boundary(tri)
    # a meridian of the 7-vertex torus: 0 -> 1 -> 2 -> ... -> 6 -> 0
    loop = ChainZ2(1, frozenset(tuple(sorted((i, (i + 1) % 7))) for i in range(7)))
    assert not is_boundary(loop, K)[0]
    simp = all_simplices(K.facets)
    v = np.array([1 if e in loop.support else 0 for e in simp[1]], dtype=np.uint8)
    assert not in_column_space(boundary_matrix(simp, 2), v)


def test_is_boundary_needs_cycle():
    K = SimplicialComplex([(0, 1, 2)], close=True)
    with pytest.raises(PreconditionError):
        is_boundary(ChainZ2(1, frozenset({(0, 1)})), K)


def test_homology_rank_dimension_range():
    with pytest.raises(PreconditionError):
        homology_rank(SimplicialComplex([(0, 1)], close=True), 3)


@pytest.mark.parametrize("name", ["boundary-4-simplex", "torus-7", "octahedral-ball"])
def test_barycentric_subdivision_preserves_homology(name):
    K = generate(name).complex
    sd, bary = barycentric_subdivision(K)
    assert homology_ranks(sd, K.dim) == homology_ranks(K, K.dim)
    assert euler_characteristic(sd) == euler_characteristic(K)
    assert len(sd.facets) == len(K.facets) * {2: 6, 3: 24}[K.dim]


def test_subdivided_chain_keeps_boundary_class():
    K = generate("join-triangles-s3").complex
    core = K.label_chain("coreA", 1)
    sd, (c,) = barycentric_subdivide(K, [core])
    assert not boundary(c)
    assert len(c) == 2 * len(core)


def test_stellar_subdivision():
    K = generate("boundary-4-simplex").complex
    S = stellar_subdivide(K, (0, 1, 2))
    assert homology_ranks(S, 3) == (1, 0, 0, 1)
    assert len(S.simplices(3)) == 5 - 2 + 2 * 3
    with pytest.raises(PreconditionError):
        stellar_subdivide(K, (0, 1, 9))


def test_regular_neighbourhood_of_an_edge_is_a_ball():
    K = generate("boundary-4-simplex").complex
    _, N = regular_neighborhood(K, [(0, 1)])
    assert homology_ranks(N, 3) == (1, 0, 0, 0)


@st.composite
def random_complexes(draw):
    n = draw(st.integers(4, 7))
    tris = list(combinations(range(n), 3))
    chosen = draw(st.lists(st.sampled_from(tris), min_size=1, max_size=12, unique=True))
    edges = draw(st.lists(st.sampled_from(list(combinations(range(n), 2))), max_size=4, unique=True))
    return chosen + edges


@settings(max_examples=80, deadline=None)
@given(random_complexes())
def test_random_complexes_match_oracle(facets):
    K = SimplicialComplex(facets, close=True)
    ranks = homology_ranks(K, 2)
    assert ranks == betti(facets, 2)
    assert sum((-1) ** i * b for i, b in enumerate(ranks)) == euler_characteristic(K)


@settings(max_examples=60, deadline=None)
@given(random_complexes(), st.data())
def test_boundaries_bound(facets, data):
    K = SimplicialComplex(facets, close=True)
    tris = sorted(K.simplices(2))
    pick = data.draw(st.lists(st.sampled_from(tris), min_size=1, unique=True))
    c = boundary(ChainZ2(2, frozenset(pick)))
    ok, w = is_boundary(c, K)
    assert ok and boundary(w) == c
    assert not boundary(c)
