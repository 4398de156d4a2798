from __future__ import annotations

from fractions import Fraction

import pytest

from src.core.decomposition import minimize
from src.core.frameworks import BodyHingeRealization, PanelHingeRealization
from src.core.geometry import Hinge, Panel
from src.core.multigraph import Chain, Dimension, split_off
from src.core.rigidity_matrix import assemble, rank_without_vertex
from src.core.sampling import RationalSampler
from src.core.tree_packing import deficiency
from src.exceptions import NotMinimalException, PreconditionException
from src.services.molecular import MolecularService
from src.services.realization import RealizationService
from tests.graphs import (
    D2,
    D3,
    complete,
    cycle,
    double_edge,
    graph,
    k23,
    multigraph_corpus,
    path,
    random_multigraphs,
    theta,
)


@pytest.fixture
def service(settings) -> RealizationService:
    return RealizationService(settings)


@pytest.mark.parametrize("g, expected", [(complete(4), 9), (cycle(4), 8), (path(3), 4)])
def test_generic_body_hinge_reaches_predicted_rank(service, rng, g, expected) -> None:
    realization = service.generic_body_hinge(g, D2, rng)
    realization.validate(g)
    assert service.rank(g, realization) == expected


@pytest.mark.parametrize(
    "g, dim, expected",
    [
        (complete(3), D2, 6),
        (path(3), D2, 4),
        (complete(4), D2, 9),
        (k23(), D2, 12),
        (double_edge(), D3, 6),
        (cycle(6), D3, 30),
        (cycle(7), D3, 35),
        (graph(4, [(0, 1), (0, 1), (2, 3), (2, 3)]), D3, 12),
    ],
)
def test_realize_panel_hinge_matches_the_count(service, rng, g, dim, expected) -> None:
    realization = service.realize_panel_hinge(g, dim, rng)
    realization.validate(g, require_common_panel=False)
    assert realization.is_nondegenerate()
    assert service.rank(g, realization) == expected == service.target_rank(g, dim)


@pytest.mark.slow
def test_realize_panel_hinge_on_a_long_theta_graph(service, rng) -> None:
    g = theta((4, 4, 4))
    realization = service.realize_panel_hinge(g, D3, rng)
    realization.validate(g)
    assert service.rank(g, realization) == 60


def test_minimal_simple_graphs_get_nonparallel_panels(service, rng) -> None:
    for g in (complete(3), k23()):
        realization = service.realize_minimal(g, D2, rng)
        assert realization.is_nonparallel()
        realization.validate(g)


def test_realize_minimal_rejects_redundant_graphs(service, rng) -> None:
    with pytest.raises(NotMinimalException) as info:
        service.realize_minimal(complete(4), D2, rng)
    assert info.value.details["redundant_edges"] == list(range(6))


def test_realize_is_deterministic_for_a_seed(service) -> None:
    first = service.realize(k23(), D2, seed=3)
    second = service.realize(k23(), D2, seed=3)
    assert first.realization.dump() == second.realization.dump()
    assert first.matches
    assert (first.mode, first.deficiency, first.predicted_rank) == ("panel", 0, 12)


def test_realize_body_mode_and_unknown_mode(service) -> None:
    result = service.realize(cycle(4), D2, seed=1, mode="body")
    assert result.mode == "body"
    assert (result.rank, result.deficiency) == (8, 1)
    with pytest.raises(PreconditionException):
        service.realize(cycle(4), D2, mode="rods")


def test_base_two_vertex_uses_one_panel(service, rng) -> None:
    realization = service.base_two_vertex(D3, rng)
    assert realization.panels[0] == realization.panels[1]
    assert service.rank(double_edge(), realization) == D3.D


def test_generic_panel_realization_needs_a_simple_graph(service, rng) -> None:
    with pytest.raises(PreconditionException):
        service.generic_nonparallel_panel_hinge(double_edge(), D3, rng)
    realization = service.generic_nonparallel_panel_hinge(cycle(5), D3, rng)
    assert realization.is_nonparallel()
    assert service.rank(cycle(5), realization) == 24


def test_redundancy_certificate_combines_rows_to_zero(service, rng) -> None:
    split = split_off(k23(), 2)
    q = service.realize_minimal(split, D2, rng)
    ab = split.edges[-1].id
    certificate = service.redundancy_certificate(split, D2, q, ab)
    assert certificate.edge == ab
    assert certificate.lambdas[(ab, certificate.i_star)] == 1

    matrix = assemble(split, q)
    for column in range(matrix.shape[1]):
        total = sum(
            (certificate.lambdas[c] * matrix.entries[r, column] for c, r in matrix.row_index.items()), Fraction(0)
        )
        assert total == 0


def test_chain_candidates_on_k23(service, rng) -> None:
    candidate_set, chosen = service.chain_candidates(k23(), D2, rng)
    assert candidate_set.chain == Chain((0, 2, 1))
    assert len(candidate_set.candidates) == D2.d
    assert len(candidate_set.determinants) == D2.d
    assert candidate_set.span_check
    assert chosen is not None
    assert candidate_set.ranks[candidate_set.chosen] == 12
    for (u, v), candidate in zip(candidate_set.coincident_pairs, candidate_set.candidates):
        assert candidate.panels[u] == candidate.panels[v]


@pytest.mark.slow
def test_chain_candidates_on_a_theta_graph(service, rng) -> None:
    candidate_set, chosen = service.chain_candidates(theta((4, 4, 4)), D3, rng)
    assert len(candidate_set.candidates) == D3.d
    assert chosen is not None


def test_realize_split_k0_needs_three_vertices(service, rng) -> None:
    with pytest.raises(PreconditionException):
        service.realize_split_k0(double_edge(), D3, rng)


def test_perturb_nonparallel_separates_coincident_panels(service) -> None:
    triangle = graph(3, [(0, 1), (0, 2), (1, 2)])
    realization = PanelHingeRealization(
        D2,
        {0: Panel((1, 0)), 1: Panel((1, 0)), 2: Panel((0, 1))},
        {0: Hinge(((1, 5),)), 1: Hinge(((1, 1),)), 2: Hinge(((1, 1),))},
    )
    assert service.rank(triangle, realization) == 5
    perturbed = service.perturb_nonparallel(triangle, realization, RationalSampler(0))
    assert perturbed.is_nonparallel()
    perturbed.validate(triangle)
    assert service.rank(triangle, perturbed) == 6


def test_perturb_nondegenerate_tilts_parallel_panels(service) -> None:
    g = path(3)
    realization = PanelHingeRealization(
        D2,
        {0: Panel((1, 0)), 1: Panel((0, 1)), 2: Panel((2, 0))},
        {0: Hinge(((1, 1),)), 1: Hinge(((Fraction(1, 2), 1),))},
    )
    assert not realization.is_nondegenerate()
    perturbed = service.perturb_nondegenerate(g, realization, RationalSampler(0))
    assert perturbed.is_nondegenerate()
    perturbed.validate(g)
    assert service.rank(g, perturbed) == 4


def test_attach_degree2_goes_through_the_removed_graph(service, rng) -> None:
    g = minimize(complete(4), D2)
    realization = service.realize_attach_degree2(g, D2, rng)
    realization.validate(g)
    assert service.rank(g, realization) == 9


def test_realize_split_k0_falls_back_to_a_later_candidate(service, rng, monkeypatch) -> None:
    first = []
    build = service.build_candidates

    def record_first(*args):
        candidate_set = build(*args)
        first.append(candidate_set.candidates[0])
        return candidate_set

    def short_for_first(graph, realization):
        drop = 1 if any(realization is c for c in first) else 0
        return RealizationService.rank(graph, realization) - drop

    monkeypatch.setattr(service, "build_candidates", record_first)
    monkeypatch.setattr(service, "rank", short_for_first)

    candidate_set, chosen = service.chain_candidates(k23(), D2, rng)
    assert candidate_set.ranks[0] < 12
    assert candidate_set.chosen == 1
    assert chosen is candidate_set.candidates[1]

    realization = service.realize_split_k0(k23(), D2, rng)
    realization.validate(k23())
    assert realization.is_nonparallel()
    assert RealizationService.rank(k23(), realization) == 12


def _best_body_rank(g, dim, stop_at: int, seeds: int = 8) -> int:
    best = 0
    for seed in range(seeds):
        draw = RationalSampler(seed)
        realization = BodyHingeRealization(dim, {e.id: draw.hinge(dim) for e in g.edges})
        best = max(best, assemble(g, realization).rank())
        if best >= stop_at:
            break
    return best


@pytest.mark.slow
@pytest.mark.parametrize("dim", [D2, D3])
def test_generic_body_hinge_rank_matches_the_count_on_the_corpus(dim) -> None:
    for g in multigraph_corpus(max_vertices=4, max_edges=5):
        full = dim.D * (g.vertex_count - 1)
        k = deficiency(g, dim).k
        best = _best_body_rank(g, dim, stop_at=full - k)
        assert best == full - k, g
        if best < full:
            assert k > 0


@pytest.mark.slow
@pytest.mark.parametrize("dim", [D2, D3])
def test_random_multigraphs_reach_the_predicted_rank(service, dim) -> None:
    for position, g in enumerate(random_multigraphs(100, seed=dim.d, max_vertices=7, max_edges=9, connected=False)):
        rng = RationalSampler(seed=position)
        target = service.target_rank(g, dim)
        realization = service.realize_panel_hinge(g, dim, rng)
        realization.validate(g, require_common_panel=False)
        matrix = assemble(g, realization)
        assert matrix.rank() == target, g
        for v in g.vertices:
            assert rank_without_vertex(matrix, v) == target
        if dim == D3 and realization.is_nonparallel():
            dual = MolecularService.dualize3d(g, realization)
            assert service.rank(g, dual) == target
        body = service.generic_body_hinge(g, dim, rng)
        assert service.rank(g, body) == target, g


@pytest.mark.slow
def test_panel_hinge_realizations_in_four_dimensions(service) -> None:
    d4 = Dimension(4)
    for g in [complete(3), double_edge(), cycle(5)]:
        realization = service.realize_panel_hinge(g, d4, RationalSampler(1))
        assert service.rank(g, realization) == service.target_rank(g, d4)
    for position, g in enumerate(random_multigraphs(20, seed=4, max_vertices=4, max_edges=5)):
        realization = service.realize_panel_hinge(g, d4, RationalSampler(seed=position))
        realization.validate(g, require_common_panel=False)
        assert service.rank(g, realization) == service.target_rank(g, d4), g
