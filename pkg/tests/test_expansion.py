import pytest

from finram import (
    HypothesisNotSatisfied,
    InputError,
    Morphism,
    aut_count_identity,
    category_from_pool,
    category_from_tables,
    chain,
    classify_restrictions,
    clique,
    empty_graph,
    expansion_from_json,
    expansion_to_json,
    find_source_object,
    is_self_similar,
    make_expansion,
    order_forgetting_expansion,
    ordered_versions,
    path_graph,
    property_checks,
    restriction,
    validate_category,
)
from finram.expansion import ExpansionError, _with_order


@pytest.fixture(scope="module")
def u_graphs():
    pool = [("e1", empty_graph(1)), ("e2", empty_graph(2)), ("k2", clique(2)),
            ("p3", path_graph(3))]
    return order_forgetting_expansion(pool)


@pytest.fixture(scope="module")
def u_age_p3():
    pool = [("e1", empty_graph(1)), ("e2", empty_graph(2)), ("k2", clique(2)),
            ("p3", path_graph(3))]
    return order_forgetting_expansion(pool, age_of=_with_order(path_graph(3), (0, 1, 2)))


# ---------------------------------------------------------------------------
# construction

def test_order_forgetting_is_a_valid_expansion(u_graphs):
    assert len(u_graphs.source.objects) == 1 + 2 + 2 + 6
    assert validate_category(u_graphs.source, guard_limit=10**8)["ok"]


def test_identity_expansion_is_valid():
    cat = category_from_pool({"c1": chain(1), "c2": chain(2)})
    u = make_expansion(cat, cat, {o: o for o in cat.objects},
                       {m: m for m in cat.morphisms()})
    assert u.fiber("c1") == ("c1",)


def test_collapsing_morphism_map_rejected():
    cat = category_from_pool({"c1": chain(1), "c2": chain(2)})
    mor_map = {}
    target_id = cat.identity("c1")
    for m in cat.morphisms():
        if m.src == "c1" and m.dst == "c2":
            mor_map[m] = Morphism("c1", "c2", cat.hom("c1", "c2")[0].key)
        else:
            mor_map[m] = m
    with pytest.raises(ExpansionError) as exc:
        make_expansion(cat, cat, {o: o for o in cat.objects}, mor_map)
    assert "injective" in str(exc.value)


def test_non_surjective_rejected():
    big = category_from_pool({"c1": chain(1), "c2": chain(2)})
    small = category_from_pool({"c1": chain(1)})
    with pytest.raises(ExpansionError) as exc:
        make_expansion(small, big, {"c1": "c1"}, {m: m for m in small.morphisms()})
    assert "surjective" in str(exc.value)


# ---------------------------------------------------------------------------
# fibers and restrictions

def test_fiber_of_k2(u_graphs):
    fib = u_graphs.fiber("k2")
    assert len(fib) == 2
    s0 = u_graphs.source.structure(fib[0])
    s1 = u_graphs.source.structure(fib[1])
    from finram import are_isomorphic

    assert are_isomorphic(s0, s1)[0]


def test_fiber_of_single_vertex(u_graphs):
    assert len(u_graphs.fiber("e1")) == 1
    with pytest.raises(InputError):
        u_graphs.fiber("zz")


def test_order_forgetting_has_unique_restrictions(u_graphs, u_age_p3):
    for u in (u_graphs, u_age_p3):
        rep = classify_restrictions(u)
        assert rep["has_restrictions"] and rep["has_unique_restrictions"]


def test_missing_order_expansion_breaks_restrictions():
    target = category_from_pool({"k2": clique(2)})
    ordered = ordered_versions(clique(2))[0]  # keep only 0<1
    source = category_from_pool({"k2*0": ordered})
    obj_map = {"k2*0": "k2"}
    mor_map = {m: Morphism("k2", "k2", m.key) for m in source.morphisms()}
    u = make_expansion(source, target, obj_map, mor_map)
    rep = classify_restrictions(u)
    assert not rep["has_restrictions"]
    assert rep["counterexample"]["morphism"] == "k2->k2:(1, 0)"


def test_restriction_pulls_back_the_order(u_graphs):
    b_star = find_source_object(u_graphs, _with_order(path_graph(3), (0, 1, 2)))
    f = Morphism("k2", "p3", (1, 2))
    a_star, lift = restriction(u_graphs, b_star, f)
    assert u_graphs.source.structure(a_star) == _with_order(clique(2), (0, 1))
    assert lift.key == (1, 2)


def test_restriction_along_identity(u_graphs):
    b_star = u_graphs.fiber("p3")[0]
    ident = u_graphs.target.identity("p3")
    a_star, lift = restriction(u_graphs, b_star, ident)
    assert a_star == b_star
    assert lift == u_graphs.source.identity(b_star)


def test_restriction_along_iso_is_isomorphic(u_graphs):
    from finram import are_isomorphic

    b_star = find_source_object(u_graphs, _with_order(clique(2), (0, 1)))
    flip = Morphism("k2", "k2", (1, 0))
    a_star, _ = restriction(u_graphs, b_star, flip)
    assert a_star != b_star
    assert are_isomorphic(
        u_graphs.source.structure(a_star), u_graphs.source.structure(b_star)
    )[0]


def test_restriction_is_functorial(u_graphs):
    b_star = find_source_object(u_graphs, _with_order(path_graph(3), (0, 1, 2)))
    f = Morphism("k2", "p3", (1, 2))
    g = Morphism("e1", "k2", (0,))
    fa, _ = restriction(u_graphs, b_star, f)
    one_step, _ = restriction(u_graphs, b_star, u_graphs.target.compose(f, g))
    two_step, _ = restriction(u_graphs, fa, g)
    assert one_step == two_step


# ---------------------------------------------------------------------------
# counting and properties

def test_aut_counting_identity(u_graphs):
    for a, aut, members in [("k2", 2, 2), ("e2", 2, 2), ("e1", 1, 1)]:
        rep = aut_count_identity(u_graphs, a)
        assert rep["disjoint_union_holds"] and rep["product_identity_holds"]
        assert rep["aut_order"] == aut
        assert rep["iso_member_count"] == members
        assert rep["expansion_aut_order"] == 1


def test_property_checks(u_graphs):
    rep = property_checks(u_graphs)
    assert rep["reasonable"]
    # e1, e2 and k2 each host all of their own orderings (via the flip),
    # but no pool member receives all six orderings of p3
    assert not rep["expansion_property"]
    assert rep["expansion_property_counterexample"] == {"object": "p3"}
    witnesses = rep["expansion_property_witnesses"]
    assert witnesses["e1"] == "e1"
    assert witnesses["e2"] == "e2"
    assert witnesses["k2"] == "k2"
    assert "p3" not in witnesses


def test_expansion_property_holds_without_p3():
    pool = [("e1", empty_graph(1)), ("e2", empty_graph(2)), ("k2", clique(2))]
    u = order_forgetting_expansion(pool)
    rep = property_checks(u)
    assert rep["expansion_property"]
    assert rep["expansion_property_witnesses"]["e2"] == "e2"


def test_reasonable_fails_when_target_order_missing():
    # source keeps only one order of e2, so pushing an order forward along
    # e1 -> e2 can fail
    target = category_from_pool({"e1": empty_graph(1), "e2": empty_graph(2)})
    src_pool = {
        "e1*0": _with_order(empty_graph(1), (0,)),
        "e2*0": _with_order(empty_graph(2), (0, 1)),
    }
    source = category_from_pool(src_pool)
    obj_map = {"e1*0": "e1", "e2*0": "e2"}
    mor_map = {m: Morphism(obj_map[m.src], obj_map[m.dst], m.key)
               for m in source.morphisms()}
    u = make_expansion(source, target, obj_map, mor_map)
    rep = classify_restrictions(u)
    assert not rep["has_restrictions"]


# ---------------------------------------------------------------------------
# self-similarity

def test_rigid_host_is_self_similar(u_graphs):
    s_star = u_graphs.fiber("e1")[0]
    ok, detail = is_self_similar(u_graphs, s_star)
    assert ok
    assert list(detail["witnesses"]) == ["(0,)"]


def test_ordered_path_is_self_similar(u_age_p3):
    s_star = find_source_object(u_age_p3, _with_order(path_graph(3), (0, 1, 2)))
    ok, detail = is_self_similar(u_age_p3, s_star)
    assert ok
    assert len(detail["witnesses"]) == 2


def test_universality_transfers_downstairs(u_age_p3):
    from finram import is_universal_for

    s_star = find_source_object(u_age_p3, _with_order(path_graph(3), (0, 1, 2)))
    up, _ = is_universal_for(u_age_p3.source, s_star, u_age_p3.source.objects)
    assert up
    down, _ = is_universal_for(
        u_age_p3.target, u_age_p3.apply_obj(s_star), u_age_p3.target.objects
    )
    assert down


def test_self_similarity_fails_on_idempotent_host():
    """A host with a non-invertible self-map whose restriction the host
    cannot reach; full embedding categories never produce this, so the
    instance is a hand-built table category."""
    objects = ["s"]
    homs = {("s", "s"): ["id", "e"]}
    identities = {"s": "id"}
    comp = {}
    for g in ["id", "e"]:
        comp[(("s", "s", "id"), ("s", "s", g))] = g
        comp[(("s", "s", g), ("s", "s", "id"))] = g
    comp[(("s", "s", "e"), ("s", "s", "e"))] = "e"
    target = category_from_tables(objects, homs, identities, comp)

    up_objects = ["x", "y"]
    up_homs = {("x", "x"): ["idx"], ("y", "y"): ["idy", "eyy"],
               ("y", "x"): ["eyx"], ("x", "y"): []}
    up_ids = {"x": "idx", "y": "idy"}
    up_comp = {}
    for o, i in [("x", "idx"), ("y", "idy")]:
        up_comp[(("%s" % o, o, i), (o, o, i))] = i
    up_comp[(("y", "y", "idy"), ("y", "y", "eyy"))] = "eyy"
    up_comp[(("y", "y", "eyy"), ("y", "y", "idy"))] = "eyy"
    up_comp[(("y", "y", "eyy"), ("y", "y", "eyy"))] = "eyy"
    up_comp[(("y", "x", "eyx"), ("y", "y", "idy"))] = "eyx"
    up_comp[(("x", "x", "idx"), ("y", "x", "eyx"))] = "eyx"
    up_comp[(("y", "x", "eyx"), ("y", "y", "eyy"))] = "eyx"
    source = category_from_tables(up_objects, up_homs, up_ids, up_comp)
    assert validate_category(source)["ok"]

    obj_map = {"x": "s", "y": "s"}
    mor_map = {
        Morphism("x", "x", "idx"): Morphism("s", "s", "id"),
        Morphism("y", "y", "idy"): Morphism("s", "s", "id"),
        Morphism("y", "y", "eyy"): Morphism("s", "s", "e"),
        Morphism("y", "x", "eyx"): Morphism("s", "s", "e"),
    }
    u = make_expansion(source, target, obj_map, mor_map)
    rep = classify_restrictions(u)
    assert rep["has_unique_restrictions"]
    ok, detail = is_self_similar(u, "x")
    assert not ok
    assert detail["failing_self_map"] == "s->s:e"
    # y reaches both of its restrictions, so it is self-similar
    assert is_self_similar(u, "y")[0]


# ---------------------------------------------------------------------------
# description files

def test_expansion_json_round_trip(u_age_p3):
    data = expansion_to_json(u_age_p3)
    u2 = expansion_from_json(data)
    assert u2.source.objects == u_age_p3.source.objects
    assert u2.object_map == dict(u_age_p3.object_map)
    assert classify_restrictions(u2)["has_unique_restrictions"]


def test_age_restriction_requires_coverage():
    pool = [("e1", empty_graph(1)), ("k3", clique(3))]
    with pytest.raises(ExpansionError):
        order_forgetting_expansion(pool, age_of=_with_order(empty_graph(1), (0,)))
