from __future__ import annotations

import itertools

import pytest

from src.core.multigraph import Partition
from src.core.tree_packing import (
    ForestPacking,
    all_copies,
    copy_vertices,
    count_bound,
    deficiency,
    deficiency_bruteforce,
    edge_split_forest_packing,
    fundamental_circuit,
    is_independent,
    min_copy_base,
    partition_deficiency,
    rank_and_base,
    set_partitions,
    split_forest_packing,
)
from src.exceptions import PreconditionException
from tests.graphs import (
    D2,
    D3,
    bowtie,
    complete,
    cycle,
    double_edge,
    graph,
    k23,
    multigraph_corpus,
    path,
    random_multigraphs,
)


@pytest.mark.parametrize(
    "g, dim, k",
    [
        (path(2), D2, 1),
        (complete(3), D2, 0),
        (complete(4), D2, 0),
        (cycle(4), D2, 1),
        (path(3), D2, 2),
        (k23(), D2, 0),
        (bowtie(), D2, 0),
        (double_edge(), D3, 0),
        (cycle(6), D3, 0),
        (cycle(7), D3, 1),
        (graph(3, []), D2, 6),
    ],
)
def test_deficiency_examples(g, dim, k) -> None:
    report = deficiency(g, dim)
    assert report.k == k
    assert report.base_size + report.k == dim.D * (g.vertex_count - 1)


def _agrees_with_partition_bound(g, dim) -> None:
    fast = deficiency(g, dim)
    slow = deficiency_bruteforce(g, dim)
    assert fast.k == slow.k, g
    assert partition_deficiency(g, dim, slow.witness_partition) == slow.k
    size, base, packing = rank_and_base(g, dim)
    assert size == len(base) == packing.size
    assert size + fast.k == dim.D * (g.vertex_count - 1)


@pytest.mark.parametrize("dim", [D2, D3])
def test_matroid_union_matches_partition_bound_on_small_graphs(dim) -> None:
    for g in multigraph_corpus(max_vertices=3, max_edges=5):
        _agrees_with_partition_bound(g, dim)
    for g in (graph(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]), graph(4, [(0, 1), (0, 1), (2, 3), (1, 2)])):
        _agrees_with_partition_bound(g, dim)


@pytest.mark.slow
@pytest.mark.parametrize("dim", [D2, D3])
def test_matroid_union_matches_partition_bound_on_the_corpus(dim) -> None:
    for g in multigraph_corpus(max_vertices=4, max_edges=6):
        _agrees_with_partition_bound(g, dim)
    for g in random_multigraphs(1500, seed=dim.d, max_vertices=5, max_edges=8):
        _agrees_with_partition_bound(g, dim)


def test_packing_is_a_valid_forest_packing() -> None:
    size, base, packing = rank_and_base(complete(4), D2)
    packing.validate(complete(4), D2)
    assert size == len(base) == packing.size == 9
    assert packing.copies() == base


def test_forest_packing_validation_catches_cycles() -> None:
    triangle = complete(3)
    bad = ForestPacking((frozenset({(0, 1), (1, 1), (2, 1)}), frozenset(), frozenset()))
    with pytest.raises(PreconditionException):
        bad.validate(triangle, D2)
    with pytest.raises(PreconditionException):
        ForestPacking((frozenset(),)).validate(triangle, D2)


def test_is_independent_reports_violating_set() -> None:
    assert is_independent(complete(3), D2, all_copies(complete(3), D2)).independent
    result = is_independent(double_edge(), D2, all_copies(double_edge(), D2))
    assert not result.independent
    assert result.violating
    assert len(result.violating) >= count_bound(double_edge(), D2, result.violating)


def test_is_independent_rejects_unknown_copies() -> None:
    with pytest.raises(PreconditionException):
        is_independent(complete(3), D2, [(0, 3)])


def test_set_partitions_enumerates_bell_numbers() -> None:
    assert sum(1 for _ in set_partitions([0, 1, 2, 3])) == 15
    assert next(iter(set_partitions([5, 6]))).as_lists() == [[5, 6]]


def test_bruteforce_respects_vertex_bound() -> None:
    with pytest.raises(PreconditionException):
        deficiency_bruteforce(cycle(6), D2, max_vertices=5)


def test_partition_deficiency_of_singletons() -> None:
    singletons = Partition.of([[v] for v in range(7)])
    assert partition_deficiency(cycle(7), D3, singletons) == 6 * 6 - 5 * 7


def _satisfies_count_bound(g, dim, copies) -> bool:
    copies = sorted(copies)
    for size in range(1, len(copies) + 1):
        for subset in itertools.combinations(copies, size):
            if len(subset) > count_bound(g, dim, subset):
                return False
    return True


def test_is_independent_agrees_with_the_subset_count() -> None:
    g = graph(3, [(0, 1), (0, 1), (1, 2), (0, 2)])
    copies = all_copies(g, D2)
    for size in range(3, 8):
        for chosen in itertools.combinations(copies, size):
            result = is_independent(g, D2, chosen)
            assert result.independent == _satisfies_count_bound(g, D2, chosen), chosen
            if result.independent:
                result.packing.validate(g, D2)
                assert result.packing.copies() == frozenset(chosen)


def _assert_circuit_identity(g, dim) -> None:
    _, base, _ = rank_and_base(g, dim)
    for copy in all_copies(g, dim):
        if copy in base:
            continue
        circuit = fundamental_circuit(g, dim, base, copy)
        spanned = copy_vertices(g, circuit)
        assert copy in circuit
        assert len(circuit) == dim.D * (len(spanned) - 1) + 1, (g, copy)
        for member in circuit:
            rest = is_independent(g, dim, circuit - {member})
            assert rest.independent
            assert rest.packing.size == dim.D * (len(spanned) - 1)


def test_fundamental_circuit_of_redundant_copy() -> None:
    g = complete(4)
    _, base, _ = rank_and_base(g, D2)
    outside = [c for c in all_copies(g, D2) if c not in base]
    assert len(outside) == 3
    for copy in outside:
        circuit = fundamental_circuit(g, D2, base, copy)
        assert not is_independent(g, D2, circuit).independent
    _assert_circuit_identity(g, D2)


def test_fundamental_circuit_of_a_double_edge_takes_every_copy() -> None:
    g = double_edge()
    _, base, _ = rank_and_base(g, D2)
    (outside,) = [c for c in all_copies(g, D2) if c not in base]
    assert fundamental_circuit(g, D2, base, outside) == frozenset(all_copies(g, D2))


def test_circuit_size_identity_on_a_braced_bowtie() -> None:
    _assert_circuit_identity(graph(5, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0), (1, 3)]), D2)


@pytest.mark.slow
def test_circuit_size_identity_on_a_cycle_with_a_doubled_edge() -> None:
    _assert_circuit_identity(graph(6, [(i, (i + 1) % 6) for i in range(6)] + [(0, 1)]), D3)


@pytest.mark.slow
@pytest.mark.parametrize("dim", [D2, D3])
def test_circuit_size_identity_on_the_corpus(dim) -> None:
    for g in multigraph_corpus(max_vertices=4, max_edges=5):
        _assert_circuit_identity(g, dim)


def test_fundamental_circuit_needs_a_dependent_copy() -> None:
    g = graph(3, [(0, 1), (0, 1), (1, 2)])
    _, base, _ = rank_and_base(g, D2)
    with pytest.raises(PreconditionException):
        fundamental_circuit(g, D2, base, next(iter(base)))


def test_min_copy_base_finds_edges_outside_some_base() -> None:
    _, h = min_copy_base(complete(4), D2, 0)
    assert h == 0
    _, h = min_copy_base(cycle(6), D3, 0)
    assert h == 5


def test_min_copy_base_on_a_double_edge_and_a_cut_edge() -> None:
    base, h = min_copy_base(double_edge(), D2, 0)
    assert h == 1
    assert {c for c in base if c[0] == 1} == {(1, 1), (1, 2)}
    assert len(base) == D2.D

    _, h = min_copy_base(path(3), D2, 0)
    assert h == D2.D - 1
    _, h = min_copy_base(graph(4, [(0, 1), (1, 2), (2, 0), (2, 3)]), D3, 3)
    assert h == D3.D - 1


def _ab_copies(split, packing) -> int:
    ab = split.edges[-1].id
    return sum(1 for c in packing.copies() if c[0] == ab)


def test_split_forest_packing_loses_exactly_D() -> None:
    g = cycle(6)
    _, _, packing = rank_and_base(g, D3)
    for v in g.vertices:
        split, carried = split_forest_packing(g, D3, packing, v)
        carried.validate(split, D3)
        assert split.vertex_count == 5
        assert carried.size == packing.size - D3.D == 24
        assert _ab_copies(split, carried) < D3.D - 1


def test_split_forest_packing_of_a_triangle_base() -> None:
    g = complete(3)
    _, _, packing = rank_and_base(g, D2)
    split, carried = split_forest_packing(g, D2, packing, 2)
    carried.validate(split, D2)
    assert carried.size == 3
    assert _ab_copies(split, carried) <= 1


def test_split_forest_packing_moves_copies_into_untouched_forests() -> None:
    g = complete(3)
    packing = ForestPacking((frozenset({(1, 1), (2, 1)}), frozenset({(1, 2), (2, 2)}), frozenset()))
    split, carried = split_forest_packing(g, D2, packing, 2)
    carried.validate(split, D2)
    assert carried.size == packing.size - D2.D == 1
    assert _ab_copies(split, carried) == 1


def test_split_forest_packing_without_doubled_forests_adds_no_ab_copy() -> None:
    g = complete(3)
    packing = ForestPacking((frozenset({(1, 1), (0, 1)}), frozenset({(2, 1), (0, 2)}), frozenset({(1, 2)})))
    split, carried = split_forest_packing(g, D2, packing, 2)
    carried.validate(split, D2)
    assert carried.size == 2
    assert _ab_copies(split, carried) == 0


def test_split_forest_packing_needs_D_copies_at_v() -> None:
    g = complete(3)
    thin = ForestPacking((frozenset({(1, 1), (2, 1)}), frozenset(), frozenset()))
    with pytest.raises(PreconditionException):
        split_forest_packing(g, D2, thin, 2)
    with pytest.raises(PreconditionException):
        split_forest_packing(g, D2, thin, 5)


def test_edge_split_forest_packing_grows_the_packing() -> None:
    g = cycle(5)
    _, _, packing = rank_and_base(g, D3)
    h = sum(1 for c in packing.copies() if c[0] == 0)
    split, v, carried = edge_split_forest_packing(g, D3, packing, 0)
    carried.validate(split, D3)
    assert split.degree(v) == 2
    assert carried.size == packing.size + (D3.D if h < D3.D - 1 else D3.D - 1)


def test_edge_split_forest_packing_when_ab_has_a_spare_copy() -> None:
    g = double_edge()
    _, _, packing = rank_and_base(g, D2)
    assert sum(1 for c in packing.copies() if c[0] == 1) == 1
    split, v, carried = edge_split_forest_packing(g, D2, packing, 1)
    carried.validate(split, D2)
    assert carried.size == 3 + D2.D
    vb = max(e.id for e in split.edges)
    assert sum(1 for c in carried.copies() if c[0] == vb) == 2


def test_edge_split_forest_packing_when_every_ab_copy_is_used() -> None:
    g = path(2)
    _, _, packing = rank_and_base(g, D3)
    assert packing.size == D3.D - 1
    split, v, carried = edge_split_forest_packing(g, D3, packing, 0)
    carried.validate(split, D3)
    assert split.degree(v) == 2
    assert carried.size == packing.size + D3.D - 1


def test_split_then_edge_split_restores_the_size() -> None:
    g = cycle(6)
    _, _, packing = rank_and_base(g, D3)
    split, carried = split_forest_packing(g, D3, packing, 0)
    ab = split.edges[-1].id
    grown, v, restored = edge_split_forest_packing(split, D3, carried, ab)
    restored.validate(grown, D3)
    assert grown.degree(v) == 2
    assert restored.size == packing.size
