import itertools

import pytest

from finram import (
    WHOLE,
    BinaryDigraph,
    Diagram,
    InputError,
    Morphism,
    big_degree_exact,
    category_from_pool,
    chain,
    check_additivity,
    check_cocone_transfer,
    check_monotonicity,
    check_multiplicativity,
    check_smaller,
    check_sub_representation,
    clique,
    empty_graph,
    full_subcategory,
    order_forgetting_expansion,
    path_graph,
    pool_degree_exact,
    restrict_category,
    small_degree_bounds,
    sub_power_category,
)
from finram.expansion import _with_order, find_source_object
from oracles import degree_by_colorings, degree_by_partitions


# ---------------------------------------------------------------------------
# big degrees

def test_rigid_host_degree_is_class_count(chains_cat):
    rep = big_degree_exact(chains_cat, "c4", "c2", "classes")
    assert rep.value == 6
    assert rep.params["self_map_count"] == 1


def test_k2_in_p3_both_modes(graphs_cat):
    assert big_degree_exact(graphs_cat, "p3", "k2", "classes").value == 2
    assert big_degree_exact(graphs_cat, "p3", "k2", "morphisms").value == 4


def test_empty_domain_flag(graphs_cat):
    rep = big_degree_exact(graphs_cat, "e2", "k2", "classes")
    assert rep.value == 1
    assert rep.params["empty_domain"]
    assert rep.notes


def test_degree_report_shape(chains_cat):
    rep = big_degree_exact(chains_cat, "c6", "c2", "morphisms")
    d = rep.to_dict()
    assert d["value"] == 15
    assert d["exact"] is True
    assert d["witnesses"]["minimizing_self_map"].startswith("c6->c6")


def test_matches_partition_oracle(graphs_cat, chains_cat):
    cases = [
        (chains_cat, "c4", "c2"),
        (chains_cat, "c4", "c1"),
        (graphs_cat, "p3", "k2"),
        (graphs_cat, "p3", "e1"),
        (graphs_cat, "k3", "k2"),
        (graphs_cat, "e2", "e1"),
        (graphs_cat, "k3", "e2"),
    ]
    for cat, s, a in cases:
        for mode in ("classes", "morphisms"):
            got = big_degree_exact(cat, s, a, mode).value
            want = degree_by_partitions(cat, s, a, mode)
            assert got == want, (s, a, mode)


def test_matches_bounded_coloring_oracle(graphs_cat):
    # with k at the domain size, plain colorings reach the partition value
    for s, a, mode in [("p3", "k2", "morphisms"), ("k3", "k2", "classes")]:
        n = len(graphs_cat.hom(a, s))
        got = big_degree_exact(graphs_cat, s, a, mode).value
        assert got == degree_by_colorings(graphs_cat, s, a, mode, max(n, 1))


def test_power_category_degree_matches_partition_oracle():
    cat = category_from_pool({"c1": chain(1), "c2": chain(2)})
    power = sub_power_category(cat)
    got = big_degree_exact(power, WHOLE, "c1", "morphisms").value
    assert got == degree_by_partitions(power, WHOLE, "c1", "morphisms") == 2


# ---------------------------------------------------------------------------
# pool-relative small degrees

def test_pool_degree_two_chains():
    cat = category_from_pool({"c1": chain(1), "c2": chain(2)})
    value, witness = pool_degree_exact(cat, "c1")
    assert value == 2
    assert witness["hardest_B"] == "c2"


def test_pool_degree_single_rigid_object():
    cat = category_from_pool({"c1": chain(1)})
    assert pool_degree_exact(cat, "c1")[0] == 1


def test_pool_degree_chains_le6(chains_cat):
    assert pool_degree_exact(chains_cat, "c2")[0] == 15


def test_small_degree_bounds_report():
    cat = category_from_pool({f"c{i}": chain(i) for i in range(1, 5)})
    rep = small_degree_bounds(cat, "c2", k_max=2, t_max=6)
    assert rep.value == 6  # saturated: c4 hosting itself forces all pairs
    assert rep.params["upper"] == 2  # two colors never force more than two
    assert rep.params["lower"] == 2
    assert rep.unknown_above is None


def test_small_degree_bounds_t_max_exhausted():
    cat = category_from_pool({f"c{i}": chain(i) for i in range(1, 5)})
    rep = small_degree_bounds(cat, "c2", k_max=2, t_max=1)
    assert rep.params["upper"] is None
    assert rep.unknown_above == 1
    assert rep.params["lower"] == 2


def test_pool_degree_requires_membership(chains_cat):
    with pytest.raises(InputError):
        pool_degree_exact(chains_cat, "c2", pool=["c1"])


# ---------------------------------------------------------------------------
# multiplicativity

def test_multiplicativity_k2_p3(graphs_cat):
    rep = check_multiplicativity(graphs_cat, "k2", "p3")
    assert rep["holds"]
    assert rep["degree_morphisms"] == 4
    assert rep["aut_order"] == 2
    assert rep["degree_objects"] == 2


def test_multiplicativity_rigid(chains_cat):
    rep = check_multiplicativity(chains_cat, "c2", "c5")
    assert rep["holds"] and rep["aut_order"] == 1


def test_multiplicativity_e2_in_e3():
    cat = category_from_pool({"e2": empty_graph(2), "e3": empty_graph(3)})
    rep = check_multiplicativity(cat, "e2", "e3")
    assert rep["holds"]
    assert rep["degree_morphisms"] == 2 * rep["degree_objects"]


def test_rigidity_corollary(chains_cat):
    rep = check_multiplicativity(chains_cat, "c1", "c1")
    assert rep["degree_morphisms"] == 1
    assert rep["rigidity_corollary"]


# ---------------------------------------------------------------------------
# sub-representation

def test_sub_representation_two_chains():
    cat = category_from_pool({"c1": chain(1), "c2": chain(2)})
    rep = check_sub_representation(cat, "c1")
    assert rep["holds"] and rep["small_degree"] == 2


def test_sub_representation_singleton():
    cat = category_from_pool({"c1": chain(1)})
    rep = check_sub_representation(cat, "c1")
    assert rep["holds"] and rep["small_degree"] == 1


def test_sub_representation_undirected_pool_skipped(graphs_cat):
    rep = check_sub_representation(graphs_cat, "e2", pool=["e2", "k2"])
    assert not rep["hypothesis_satisfied"]


# ---------------------------------------------------------------------------
# additivity

@pytest.fixture(scope="module")
def u_age_p3():
    pool = [("e1", empty_graph(1)), ("e2", empty_graph(2)), ("k2", clique(2)),
            ("p3", path_graph(3))]
    return order_forgetting_expansion(pool, age_of=_with_order(path_graph(3), (0, 1, 2)))


def test_additivity_headline_instance(u_age_p3):
    s_star = find_source_object(u_age_p3, _with_order(path_graph(3), (0, 1, 2)))
    rep = check_additivity(u_age_p3, "k2", s_star)
    assert rep["hypothesis_satisfied"]
    assert rep["degree_downstairs"] == 4
    assert rep["sum_upstairs"] == 4
    assert rep["degree_terms_upstairs"] == {"k2*0": 2, "k2*1": 2}
    assert rep["self_similar"]
    assert rep["equality_holds"]
    assert rep["degree_downstairs_objects"] == 2
    assert rep["weighted_sum_objects"] == {"numerator": 2, "denominator": 1}
    assert rep["weighted_equality_holds"]
    assert rep["iso_class_representatives"] == ["k2*0"]
    assert rep["representative_sum_objects"] == 2
    assert rep["representative_equality_holds"]


def test_additivity_rigid_singleton_fiber():
    pool = [("e1", empty_graph(1))]
    u = order_forgetting_expansion(pool)
    rep = check_additivity(u, "e1", "e1*0")
    assert rep["hypothesis_satisfied"]
    assert rep["degree_downstairs"] == rep["sum_upstairs"] == 1


def test_additivity_hypothesis_fails_without_universal_host():
    pool = [("e1", empty_graph(1)), ("e2", empty_graph(2)), ("k2", clique(2)),
            ("p3", path_graph(3))]
    u_all = order_forgetting_expansion(pool)
    s_star = find_source_object(u_all, _with_order(path_graph(3), (0, 1, 2)))
    rep = check_additivity(u_all, "k2", s_star)
    assert not rep["hypothesis_satisfied"]
    assert "universal" in rep["reason"]


# ---------------------------------------------------------------------------
# monotonicity

def test_monotonicity_reflexive(graphs_cat):
    rep = check_monotonicity(graphs_cat, "k3", "k2", "k2")
    assert rep["hypothesis_satisfied"]
    assert rep["degree_A"] == rep["degree_B"]
    assert rep["holds"]


def test_monotonicity_hypothesis_fails(chains_cat):
    rep = check_monotonicity(chains_cat, "c4", "c2", "c3")
    assert not rep["hypothesis_satisfied"]


def test_monotonicity_no_morphism(graphs_cat):
    rep = check_monotonicity(graphs_cat, "k3", "k2", "e2")
    assert not rep["hypothesis_satisfied"]
    assert "no morphism" in rep["reason"]


# ---------------------------------------------------------------------------
# smaller-than

def test_smaller_chains_instance(chains_cat):
    rep = check_smaller(chains_cat, [f"c{i}" for i in range(1, 7)], "c6", "c2")
    assert rep["hypothesis_satisfied"]
    assert rep["small_degree"] == 15
    assert rep["big_degree"] == 15
    assert rep["holds"]


def test_smaller_local_finiteness_fails():
    cat = category_from_pool({"c1": chain(1), "c2": chain(2), "c4": chain(4)})
    rep = check_smaller(cat, ["c1", "c2"], "c4", "c2")
    assert not rep["hypothesis_satisfied"]
    assert "locally finite" in rep["reason"]


def test_smaller_trivial_pool():
    cat = category_from_pool({"c1": chain(1)})
    rep = check_smaller(cat, ["c1"], "c1", "c1")
    assert rep["hypothesis_satisfied"]
    assert rep["small_degree"] == rep["big_degree"] == 1


def test_hosting_equivalence_in_universal_locally_finite_host(chains_cat):
    """Some pool object arrows B exactly when the universal locally finite
    host does; the equivalence behind the small-degree bound."""
    from finram import arrow_morphisms

    pool = [f"c{i}" for i in range(1, 7)]
    for b, k, t in [("c3", 2, 1), ("c3", 2, 2), ("c4", 2, 1), ("c2", 2, 1)]:
        in_pool = any(
            arrow_morphisms(chains_cat, c, b, "c2", k, t).holds for c in pool
        )
        in_host = arrow_morphisms(chains_cat, "c6", b, "c2", k, t).holds
        assert in_pool == in_host, (b, k, t)


# ---------------------------------------------------------------------------
# cocone transfer

def test_cocone_transfer_same_category(chains_cat):
    whole = full_subcategory(chains_cat, chains_cat.objects)
    rep = check_cocone_transfer(chains_cat, whole, "c1", "c6", "c6", [])
    assert rep["hypothesis_satisfied"]
    assert rep["degree_in_subcategory"] == rep["degree_in_ambient"]
    assert rep["holds"]
    assert rep["conditional_on_supplied_diagrams"]


def test_cocone_transfer_hypothesis_failure():
    cat = category_from_pool({"e1": empty_graph(1), "e2": empty_graph(2)})
    m0, m1 = cat.hom("e1", "e2")
    keep = [m0, m1]  # both maps, but no swap upstairs
    sub = restrict_category(cat, ["e1", "e2"], keep)
    shape = BinaryDigraph(("t0", "t1"), ("s0",), (("s0", "t0", "t1"),))
    diagram = Diagram(shape, "e1", "e2", (("s0", m0, m1),))
    rep = check_cocone_transfer(cat, sub, "e1", "e2", "e2", [diagram])
    assert not rep["hypothesis_satisfied"]
    assert "cocone" in rep["reason"]
