import itertools

import pytest
from hypothesis import given, settings, strategies as st

from finram import (
    GuardExceeded,
    InputError,
    arrow_morphisms,
    arrow_objects,
    category_from_pool,
    chain,
    clique,
    empty_graph,
    find_bad_coloring,
    path_graph,
    sierpinski_coloring,
)
from oracles import arrow_by_product


@pytest.fixture(scope="module")
def small_graphs_cat():
    return category_from_pool({
        "e1": empty_graph(1), "e2": empty_graph(2), "e3": empty_graph(3),
        "k2": clique(2), "p3": path_graph(3), "k3": clique(3),
    })


# ---------------------------------------------------------------------------
# the classical anchor

def test_ramsey_3_3_holds_at_six(chains_cat):
    res = arrow_objects(chains_cat, "c6", "c3", "c2", 2, 1)
    assert res.holds
    assert res.counts["domain_size"] == 15
    assert res.counts["k_effective"] == 2


def test_ramsey_3_3_refuted_at_five(chains_cat):
    res = arrow_objects(chains_cat, "c5", "c3", "c2", 2, 1)
    assert not res.holds
    cert = res.certificate
    assert cert is not None
    # re-validate: every 3-chain inside c5 must see both colors
    color = dict(zip(cert.items, cert.colors))
    for triple in itertools.combinations(range(5), 3):
        pair_colors = {
            color[(triple[i], triple[j])]
            for i in range(3)
            for j in range(i + 1, 3)
        }
        assert len(pair_colors) == 2


# ---------------------------------------------------------------------------
# degenerate conventions

def test_no_hosting_morphism_refutes(chains_cat):
    # copies of c2 exist in c3, but c4 does not embed into c3
    res = arrow_objects(chains_cat, "c3", "c4", "c2", 2, 1)
    assert not res.holds
    assert res.certificate is not None
    assert "no morphism" in res.note


def test_empty_domain_with_host_holds(chains_cat):
    # no copies of c4 inside c3; c2 -> c3 exists and is vacuously good
    res = arrow_objects(chains_cat, "c3", "c2", "c4", 2, 1)
    assert res.holds
    assert res.counts["domain_size"] == 0
    assert "vacuously" in res.note


def test_doubly_empty_is_refuted(chains_cat):
    res = arrow_objects(chains_cat, "c3", "c4", "c5", 2, 1)
    assert not res.holds
    assert res.certificate is None
    assert "existential" in res.note


def test_threshold_at_domain_size(chains_cat):
    res = arrow_objects(chains_cat, "c3", "c2", "c2", 2, 3)
    assert res.holds and res.counts["coloring_space"] == 0
    res2 = arrow_objects(chains_cat, "c3", "c2", "c2", 5, 3)
    assert res2.holds


def test_morphism_mode_p3_k2(small_graphs_cat):
    # w . hom(k2,k2) always carries exactly two morphisms, so two colors fit
    res = arrow_morphisms(small_graphs_cat, "p3", "k2", "k2", 2, 2)
    assert res.holds
    res1 = arrow_morphisms(small_graphs_cat, "p3", "k2", "k2", 2, 1)
    assert not res1.holds


def test_chains_give_identical_verdicts_in_both_modes(chains_cat):
    for (c, b, a, k, t) in [("c4", "c3", "c2", 2, 1), ("c5", "c3", "c2", 2, 2),
                            ("c4", "c2", "c1", 3, 1)]:
        assert (
            arrow_objects(chains_cat, c, b, a, k, t).holds
            == arrow_morphisms(chains_cat, c, b, a, k, t).holds
        )


# ---------------------------------------------------------------------------
# find_bad_coloring

def test_find_bad_on_refuted_instance(chains_cat):
    bad = find_bad_coloring(chains_cat, "c5", "c3", "c2", 2, 1)
    assert bad is not None
    assert bad.colors == arrow_objects(chains_cat, "c5", "c3", "c2", 2, 1).certificate.colors


def test_find_bad_none_when_arrow_holds(chains_cat):
    assert find_bad_coloring(chains_cat, "c6", "c3", "c2", 2, 1) is None


def test_find_bad_none_when_threshold_covers(chains_cat):
    assert find_bad_coloring(chains_cat, "c4", "c3", "c2", 4, 6) is None


# ---------------------------------------------------------------------------
# invariants

def test_color_count_sufficiency(chains_cat):
    # more colors than domain elements changes nothing
    n = len(chains_cat.hom("c2", "c4")) // 1
    r1 = arrow_objects(chains_cat, "c4", "c3", "c2", 6, 2)
    r2 = arrow_objects(chains_cat, "c4", "c3", "c2", 60, 2)
    assert r1.holds == r2.holds
    assert r1.counts["k_effective"] == r2.counts["k_effective"] == 6


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=1, max_value=3), st.integers(min_value=2, max_value=3))
def test_monotone_in_t(chains_cat, t, k):
    held = arrow_objects(chains_cat, "c4", "c3", "c2", k, t).holds
    if held:
        assert arrow_objects(chains_cat, "c4", "c3", "c2", k, t + 1).holds
    bad_higher = find_bad_coloring(chains_cat, "c4", "c3", "c2", k, t + 1)
    if bad_higher is not None:
        # a coloring defeating threshold t+1 also defeats threshold t
        assert find_bad_coloring(chains_cat, "c4", "c3", "c2", k, t) is not None


def test_agrees_with_product_oracle(small_graphs_cat, chains_cat):
    cases = [
        (chains_cat, "c4", "c3", "c2", 2, 1, "classes"),
        (chains_cat, "c5", "c3", "c2", 2, 1, "classes"),
        (chains_cat, "c5", "c4", "c2", 3, 2, "classes"),
        (small_graphs_cat, "p3", "k2", "k2", 2, 1, "morphisms"),
        (small_graphs_cat, "k3", "k2", "k2", 2, 1, "morphisms"),
        (small_graphs_cat, "e3", "e2", "e1", 2, 1, "classes"),
        (small_graphs_cat, "k3", "k2", "e2", 2, 1, "classes"),
    ]
    for cat, c, b, a, k, t, mode in cases:
        fn = arrow_objects if mode == "classes" else arrow_morphisms
        res = fn(cat, c, b, a, k, t)
        want_holds, want_cert = arrow_by_product(cat, c, b, a, k, t, mode)
        assert res.holds == want_holds
        if res.certificate is not None and want_cert is not None:
            assert res.certificate.colors == want_cert


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_fuzz_against_product_oracle(small_graphs_cat, data):
    objs = list(small_graphs_cat.objects)
    c = data.draw(st.sampled_from(objs), label="C")
    b = data.draw(st.sampled_from(objs), label="B")
    a = data.draw(st.sampled_from(objs), label="A")
    k = data.draw(st.integers(min_value=2, max_value=3), label="k")
    t = data.draw(st.integers(min_value=1, max_value=3), label="t")
    mode = data.draw(st.sampled_from(["classes", "morphisms"]), label="mode")
    fn = arrow_objects if mode == "classes" else arrow_morphisms
    res = fn(small_graphs_cat, c, b, a, k, t)
    want_holds, want_cert = arrow_by_product(small_graphs_cat, c, b, a, k, t, mode)
    assert res.holds == want_holds
    got_cert = None if res.certificate is None else res.certificate.colors
    assert got_cert == want_cert


def test_quotient_consistency_directions(small_graphs_cat):
    """The two coloring constructions translating between copy-level and
    morphism-level arrows, on small instances."""
    cat = small_graphs_cat
    instances = [("p3", "k2", "k2"), ("k3", "k2", "k2"), ("e3", "e2", "e2")]
    for c, b, a in instances:
        aut = len(cat.aut(a))
        for k, t in [(2, 1), (2, 2)]:
            # power-set construction: copy-level arrow at 2^k colors gives the
            # morphism-level arrow at k colors and threshold t * |Aut(A)|
            if arrow_objects(cat, c, b, a, 2**k, t).holds:
                assert arrow_morphisms(cat, c, b, a, k, t * aut).holds
            # product construction: a copy-level bad coloring at (k, t) gives a
            # morphism-level bad coloring at (k * |Aut|, (t+1) * |Aut| - 1)
            if find_bad_coloring(cat, c, b, a, k, t, "classes") is not None:
                assert (
                    find_bad_coloring(
                        cat, c, b, a, k * aut, (t + 1) * aut - 1, "morphisms"
                    )
                    is not None
                )


# ---------------------------------------------------------------------------
# pruning and parallelism

def test_pruning_preserves_verdict_and_certificate(small_graphs_cat, chains_cat):
    cases = [
        (small_graphs_cat, "k3", "k2", "k2", 2, 1, "morphisms"),
        (small_graphs_cat, "k3", "k2", "e1", 2, 1, "classes"),
        (small_graphs_cat, "p3", "k2", "k2", 3, 1, "morphisms"),
        (chains_cat, "c5", "c3", "c2", 2, 1, "classes"),
    ]
    for cat, c, b, a, k, t, mode in cases:
        fn = arrow_objects if mode == "classes" else arrow_morphisms
        plain = fn(cat, c, b, a, k, t, pruning=False)
        pruned = fn(cat, c, b, a, k, t, pruning=True)
        assert plain.holds == pruned.holds
        if plain.certificate is None:
            assert pruned.certificate is None
        else:
            assert plain.certificate == pruned.certificate


def test_workers_preserve_verdict_and_certificate(chains_cat):
    for c, b, a, k, t in [("c6", "c3", "c2", 2, 1), ("c5", "c3", "c2", 3, 1)]:
        seq = arrow_objects(chains_cat, c, b, a, k, t, workers=1)
        par = arrow_objects(chains_cat, c, b, a, k, t, workers=4)
        assert seq.holds == par.holds
        assert seq.certificate == par.certificate


def test_guard_exceeded(chains_cat):
    with pytest.raises(GuardExceeded):
        arrow_objects(chains_cat, "c6", "c3", "c2", 2, 1, guard_limit=100)


def test_trace_mode_lists_a_witness_per_coloring(chains_cat):
    res = arrow_objects(chains_cat, "c3", "c3", "c2", 2, 2, trace=True)
    assert res.holds
    assert len(res.witnesses) == 2 ** 3  # three pair classes, two colors
    for coloring, w_key in res.witnesses:
        assert len(set(coloring)) <= 2
        assert w_key == (0, 1, 2)  # the identity is the only self-map


# ---------------------------------------------------------------------------
# the two-coloring of pair-classes from an enumeration

def test_sierpinski_agreeing_enumeration():
    col = sierpinski_coloring(chain(4), (0, 1, 2, 3))
    assert set(col.colors) == {0}


def test_sierpinski_reversed_enumeration():
    col = sierpinski_coloring(chain(4), (3, 2, 1, 0))
    assert set(col.colors) == {1}


def test_sierpinski_mixed_enumeration():
    col = sierpinski_coloring(chain(4), (2, 0, 3, 1))
    got = dict(zip(col.items, col.colors))
    assert got == {
        (0, 1): 0, (0, 2): 1, (0, 3): 0,
        (1, 2): 1, (1, 3): 1, (2, 3): 0,
    }


def test_sierpinski_rejects_non_chains():
    with pytest.raises(InputError):
        sierpinski_coloring(clique(3), (0, 1, 2))
    with pytest.raises(InputError):
        sierpinski_coloring(chain(3), (0, 1))


def test_sierpinski_color_classes_are_transitive():
    """Both color classes compare two linear orders, so each is transitive;
    in particular no enumeration of a 5-chain defeats every 3-subchain
    (unlike the refutation search, which finds the non-transitive pentagon)."""

    def transitive(pairs):
        s = set(pairs)
        return all(
            (x, z) in s for (x, y) in s for (y2, z) in s if y == y2
        )

    best = 0
    for perm in itertools.permutations(range(5)):
        col = sierpinski_coloring(chain(5), perm)
        for c in (0, 1):
            assert transitive(
                it for it, color in zip(col.items, col.colors) if color == c
            )
        color = dict(zip(col.items, col.colors))
        bichromatic = sum(
            1
            for t in itertools.combinations(range(5), 3)
            if len({color[(t[i], t[j])] for i in range(3) for j in range(i + 1, 3)}) == 2
        )
        best = max(best, bichromatic)
    assert best == 9  # never all ten
