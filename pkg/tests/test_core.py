import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypermatch import (
    Hypergraph,
    Matching,
    hyperedge_of,
    is_matching,
    make_params,
)
from hypermatch.errors import DivisibilityError, DomainError
from hypermatch.sampler import sample_uniform


def test_make_params_examples():
    p = make_params(2, 2, 2)
    assert p.half_edges == 4 and p.n_vertices == 2
    with pytest.raises(DivisibilityError):
        make_params(3, 2, 3)  # l*m = 9 is odd
    p = make_params(2, 3, 3)
    assert p.half_edges == 6 and p.n_vertices == 2


def test_make_params_domain():
    with pytest.raises(DomainError):
        make_params(0, 2, 2)
    with pytest.raises(DomainError):
        make_params(2, 1, 2)
    with pytest.raises(DomainError):
        make_params(2, 2, 1)


def test_hyperedge_of():
    p = make_params(2, 2, 2)
    assert hyperedge_of(p, 2) == 1  # third half-edge starts the second edge
    p3 = make_params(2, 2, 3)
    assert hyperedge_of(p3, 0) == 0
    assert hyperedge_of(p3, 5) == 1
    with pytest.raises(IndexError):
        hyperedge_of(p, 4)


def test_is_matching_two_edge_instance():
    p = make_params(2, 2, 2)
    # pairing {(1,3),(2,4)} in 1-based labels: vertex 0 = {0,2}, vertex 1 = {1,3}
    G = Hypergraph(p, [0, 1, 0, 1])
    assert is_matching(G, Matching([0]))
    assert not is_matching(G, Matching([0, 1]))
    assert is_matching(G, Matching([]))


def test_singleton_with_internal_collision_is_not_matching():
    p = make_params(2, 2, 2)
    G = Hypergraph(p, [0, 0, 1, 1])  # both half-edges of each edge share a vertex
    assert not is_matching(G, [0])
    assert not is_matching(G, [1])


def test_is_matching_monotone_under_subsets():
    p = make_params(4, 2, 3)
    G = sample_uniform(p, 123)
    for r in range(p.m + 1):
        import itertools

        for sub in itertools.combinations(range(p.m), r):
            if is_matching(G, sub):
                for drop in range(len(sub)):
                    assert is_matching(G, sub[:drop] + sub[drop + 1 :])


def test_validate():
    p = make_params(2, 2, 2)
    assert Hypergraph(p, [0, 0, 1, 1]).validate()
    assert not Hypergraph(p, [0, 0, 0, 1]).validate()
    assert not Hypergraph(p, [0, 0, 1]).validate()  # wrong length


def test_canonical_equality_up_to_relabeling():
    p = make_params(2, 2, 2)
    a = Hypergraph(p, [0, 1, 0, 1])
    b = Hypergraph(p, [1, 0, 1, 0])
    c = Hypergraph(p, [0, 1, 1, 0])
    assert a == b and hash(a) == hash(b)
    assert a != c


def test_matching_bound_on_valid_instances():
    p = make_params(4, 2, 3)
    G = sample_uniform(p, 7)
    import itertools

    for r in range(p.m + 1):
        for sub in itertools.combinations(range(p.m), r):
            if is_matching(G, sub):
                assert len(sub) <= p.max_matching_size


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**63 - 1))
def test_serialization_roundtrip(seed):
    p = make_params(3, 2, 2)
    G = sample_uniform(p, seed)
    assert Hypergraph.from_json(G.to_json()) == G
    assert Hypergraph.from_line(G.to_line()) == G


def test_cycle_census_type():
    from hypermatch import CycleCensus

    c = CycleCensus((2, 0, 1))
    assert c.b == 3 and c[1] == 2 and c[3] == 1
    with pytest.raises(IndexError):
        c[4]


def test_vertex_of_is_readonly():
    p = make_params(2, 2, 2)
    G = Hypergraph(p, [0, 1, 0, 1])
    with pytest.raises(ValueError):
        G.vertex_of[0] = 1
    assert isinstance(G.vertex_of, np.ndarray)
