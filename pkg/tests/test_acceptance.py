"""Acceptance suite: each criterion prints one pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines.
"""

import time

import pytest

from finram import (
    arrow_objects,
    automorphism_group,
    big_degree_exact,
    builtin_reduct_spec,
    apply_reduct,
    category_from_pool,
    chain,
    check_multiplicativity,
    check_smaller,
    check_sub_representation,
    pool_degree_exact,
)
from finram.report import canonical_json
from finram.verify import run_suite


def _report(criterion: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {criterion}: {status}" + (f" ({detail})" if detail else ""))
    assert ok, f"criterion {criterion} failed: {detail}"


@pytest.fixture(scope="module")
def chains6():
    return category_from_pool({f"c{i}": chain(i) for i in range(1, 7)})


def test_criterion_1_arrow_exactness(chains6):
    t0 = time.monotonic()
    held = arrow_objects(chains6, "c6", "c3", "c2", 2, 1)
    t_hold = time.monotonic() - t0
    t0 = time.monotonic()
    refuted = arrow_objects(chains6, "c5", "c3", "c2", 2, 1)
    t_refute = time.monotonic() - t0
    cert_ok = False
    if refuted.certificate is not None:
        color = dict(zip(refuted.certificate.items, refuted.certificate.colors))
        import itertools

        cert_ok = all(
            len({color[(t[i], t[j])] for i in range(3) for j in range(i + 1, 3)}) > 1
            for t in itertools.combinations(range(5), 3)
        )
    _report(
        "1 (arrow exactness at the R(3,3)=6 threshold)",
        held.holds and not refuted.holds and cert_ok
        and t_hold < 30 and t_refute < 30,
        f"hold {t_hold:.2f}s, refute {t_refute:.2f}s, certificate re-validated",
    )


def test_criterion_2_rigid_host_degree(chains6):
    rep = big_degree_exact(chains6, "c4", "c2", "classes")
    _report("2 (big degree in a rigid host = class count)", rep.value == 6,
            f"value {rep.value}")


def test_criterion_3_multiplicativity_suite():
    suite = run_suite("mult")
    spot = next(c for c in suite["cases"] if c["case"] == "A=g2_1, S=g3_2")
    ok = suite["ok"] and suite["checked"] >= 80 and spot["lhs"] == 4
    _report(
        "3 (multiplicativity: graphs A<=3 into S<=4, exhaustive)",
        ok,
        f"{suite['checked']} pairs, 0 violations, spot value {spot['lhs']} = 2*2",
    )


def test_criterion_4_sub_representation():
    suite = run_suite("sub")
    cat = category_from_pool({"c1": chain(1), "c2": chain(2)})
    spot = check_sub_representation(cat, "c1")
    ok = (suite["ok"] and suite["checked"] >= 100
          and spot["small_degree"] == 2
          and spot["big_degree_in_power_category"] == 2)
    _report(
        "4 (pool degree = power-category big degree, directed mono pools <= 3 objects)",
        ok,
        f"{suite['checked']} cases, spot {{chain1, chain2}}: both sides 2",
    )


def test_criterion_5_additivity():
    suite = run_suite("additivity")
    spot = next(c for c in suite["cases"]
                if c["case"] == "age_of_ordered_P3|A=n2e1")
    ok = (suite["ok"] and spot["holds"] and spot["self_similar"]
          and spot["lhs"] == 4 and spot["rhs"] == 4)
    _report(
        "5 (additivity over the order-forgetting expansion of P3's substructures)",
        ok,
        "self-similar host, 4 = 2 + 2, copy-level corollaries included",
    )


def test_criterion_6_lemma_suite():
    suite = run_suite("lemmas")
    spot = next(c for c in suite["cases"]
                if c["case"] == "age_of_ordered_P3|aut_count:A=n2e1")
    ok = suite["ok"] and spot["lhs"] == 2 and spot["rhs"] == 2
    _report(
        "6 (restriction lemmas: disjoint union and aut counting, 2 = 2*1 spot)",
        ok,
        f"{suite['checked']} identities checked",
    )


def test_criterion_7_monotonicity():
    suite = run_suite("monotonicity")
    ok = suite["ok"] and suite["params"]["hypothesis_true"] > 500
    _report(
        "7 (degree monotonicity under weak homogeneity, graphs <= 4)",
        ok,
        f"{suite['params']['hypothesis_true']} hypothesis-true triples, 0 violations",
    )


def test_criterion_8_reducts():
    cyc_aut = len(automorphism_group(apply_reduct(builtin_reduct_spec(["Cyc"]), chain(3))))
    betw_aut = len(automorphism_group(apply_reduct(builtin_reduct_spec(["Betw"]), chain(3))))
    suite = run_suite("reducts")
    ok = cyc_aut == 3 and betw_aut == 2 and suite["ok"]
    _report(
        "8 (reducts: aut orders 3 and 2; embedding transport everywhere)",
        ok,
        f"cyc aut {cyc_aut}, betw aut {betw_aut}",
    )


def test_criterion_9_smaller_than(chains6):
    rep = check_smaller(chains6, [f"c{i}" for i in range(1, 7)], "c6", "c2")
    ok = (rep["hypothesis_satisfied"] and rep["holds"]
          and rep["big_degree"] == 15
          and rep["small_degree"] <= rep["big_degree"])
    _report(
        "9 (pool degree <= big degree in the verified universal locally finite host)",
        ok,
        f"{rep['small_degree']} <= {rep['big_degree']}",
    )


def test_criterion_10_determinism():
    runs = {}
    for workers, pruning in [(1, False), (8, False), (1, True), (8, True)]:
        result = run_suite("all", workers=workers, pruning=pruning)
        runs[(workers, pruning)] = canonical_json(result)
    blobs = set(runs.values())
    _report(
        "10 (byte-identical verdicts across parallelism and pruning toggles)",
        len(blobs) == 1,
        "4 configurations compared over all suites",
    )
