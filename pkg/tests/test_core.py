import pytest

from domkernel.core import (
    AdaptiveConstants,
    Infeasible,
    NeedEscalation,
    StructurePair,
    audit_structure,
    extract_structure,
    find_irrelevant,
    reduce_core,
)
from domkernel.generators import caterpillar, grid, path, random_bounded_degree, star
from domkernel.graph import ContractViolation, Graph
from domkernel.oracles import exact_annotated_ds, exact_ds, is_domination_core, is_scattered


def test_constants_validation():
    with pytest.raises(ValueError):
        AdaptiveConstants(xi=0)
    with pytest.raises(ValueError):
        AdaptiveConstants(max_escalations=-1)
    c = AdaptiveConstants()
    assert c.escalated("round_cap").round_cap == 16
    bumped = c.escalated("density")
    assert bumped.xi == 8 and bumped.round_cap == 8


def test_extract_empty_targets():
    out = extract_structure(path(5), [], 1, 2, AdaptiveConstants())
    assert out == StructurePair(frozenset(), frozenset(), ())


def test_extract_rejects_foreign_targets():
    with pytest.raises(ContractViolation):
        extract_structure(path(3), [7], 1, 1, AdaptiveConstants())


def test_extract_p9_audits():
    g = path(9)
    assert exact_ds(g, 1).optimum == 3
    consts = AdaptiveConstants(c0=1, round_cap=20)
    out = extract_structure(g, range(9), 1, 3, consts)
    assert isinstance(out, (StructurePair, NeedEscalation))
    pairs = [out] if isinstance(out, StructurePair) else list(out.fallback)
    for pair in pairs:
        audit = audit_structure(g, range(9), pair, 1, consts)
        assert all(audit.values()), audit


def test_extract_star_accepts_isolated_leaves():
    # removing the centre isolates the leaves, so they are scattered in G - X
    consts = AdaptiveConstants()
    out = extract_structure(star(6), range(7), 1, 1, consts)
    assert isinstance(out, StructurePair) and out.X == {0} and out.S == set(range(1, 7))
    assert all(audit_structure(star(6), range(7), out, 1, consts).values())


def test_extract_star_small_core_needs_escalation():
    # with only two leaves left as targets, |S| > C0 |X| is out of reach
    out = extract_structure(star(6), [0, 1, 2], 1, 1, AdaptiveConstants())
    assert isinstance(out, NeedEscalation)


def test_extract_infeasible():
    out = extract_structure(path(7), range(7), 1, 1, AdaptiveConstants())
    assert isinstance(out, Infeasible)
    assert len(out.certificate) > 1 and is_scattered(path(7), out.certificate, 2)


def test_distinct_profiles_give_nothing():
    g = path(7)
    assert find_irrelevant(g, range(7), {3}, {1, 5}, 1) is None


def test_twenty_leaves_batch():
    g = star(20)
    found = find_irrelevant(g, range(21), {0}, set(range(1, 21)), 1, batch=True)
    assert found.kappa == set(range(1, 21)) and found.projection == {0}
    assert len(found.removals) == 18
    Z = set(range(21)) - found.removals
    assert is_domination_core(g, Z, 1)


def test_boundary_class_single_removal():
    g = star(3)  # class of 3 leaves, projection {0}: exactly |M| + 2
    found = find_irrelevant(g, range(4), {0}, {1, 2, 3}, 1)
    assert len(found.removals) == 1
    found = find_irrelevant(g, range(4), {0}, {1, 2, 3}, 1, batch=True)
    assert len(found.removals) == 1
    assert find_irrelevant(g, range(4), {0}, {1, 2}, 1) is None


def test_removal_picks_highest_ids():
    found = find_irrelevant(star(6), range(7), {0}, set(range(1, 7)), 1, batch=True)
    assert found.removals == {3, 4, 5, 6}


def test_reduce_core_single_vertex():
    res = reduce_core(Graph.empty(1), 1, 1)
    assert res.tag == "core" and res.Z == {0}


def test_reduce_core_p7_infeasible():
    res = reduce_core(path(7), 1, 1)
    assert res.tag == "infeasible"
    assert len(res.certificate) > 1 and is_scattered(path(7), res.certificate, 2)


def test_reduce_core_bad_arguments():
    with pytest.raises(ValueError):
        reduce_core(path(3), 1, -1)
    with pytest.raises(ValueError):
        reduce_core(path(3), 0, 1)


@pytest.mark.parametrize("g, r", [
    (star(12), 1), (star(12), 2), (caterpillar(3, 4), 1), (caterpillar(3, 4), 2),
    (grid(3, 4), 1), (random_bounded_degree(16, 3, 5), 1),
])
def test_core_sound_after_every_batch(g, r):
    ds = exact_ds(g, r).optimum
    seen = []

    def check(Z, batch):
        seen.append(len(Z))
        assert is_domination_core(g, Z, r)
        assert exact_annotated_ds(g, Z, r).optimum == ds

    res = reduce_core(g, r, ds, on_removal=check)
    assert seen == sorted(seen, reverse=True)
    assert is_domination_core(g, res.Z, r)


def test_star_core_shrinks():
    res = reduce_core(star(12), 1, 1)
    assert res.Z == {0, 1, 2}
    assert res.removed_count == 10 and is_domination_core(star(12), res.Z, 1)


def test_batch_matches_single_in_soundness():
    g = caterpillar(4, 4)
    ds = exact_ds(g, 1).optimum
    res = reduce_core(g, 1, ds, AdaptiveConstants(batch=True))
    assert is_domination_core(g, res.Z, 1)


def test_grid_core_keeps_domination_number():
    g = grid(10, 10)
    res = reduce_core(g, 1, 20)
    assert res.tag in ("core", "escalated")
    # the domination number is preserved whatever was removed (checked at reduced scale)
    small = grid(4, 5)
    res_small = reduce_core(small, 1, exact_ds(small, 1).optimum)
    assert exact_annotated_ds(small, res_small.Z, 1).optimum == exact_ds(small, 1).optimum


@pytest.mark.xfail(strict=True, reason="grids have no interchangeable scattered classes; Z stays V")
def test_grid_core_is_proper_subset():
    g = grid(10, 10)
    assert len(reduce_core(g, 1, 20).Z) < g.n


def test_escalation_log_records_reasons():
    res = reduce_core(grid(4, 4), 1, 4, AdaptiveConstants(max_escalations=2))
    assert len(res.escalation_log) <= 2
    assert all("reason" in e for e in res.escalation_log)
