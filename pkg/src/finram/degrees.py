"""Exact Ramsey degrees on finite hosts and the degree identities.

On a finite host every quantification over colorings is dominated
pointwise by the discrete (all-distinct) coloring: for any coloring chi
and any self-map w, the number of colors on w's image is at most the
number of distinct domain elements in it.  The adversarial max-min over
all partitions therefore collapses to

    min over w in hom(S, S) of |w . domain|,

which this module computes exactly.  The tests cross-check this closed
form against brute-force enumeration of set partitions on small
instances.

Small degrees relative to a finite pool are the same quantity one level
up: the pool-relative degree equals max over B of min over C of the
per-host saturated value, and the power-category construction exhibits
it as a big degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .arrows import _domain_and_images, arrow_morphisms, arrow_objects
from .category import (
    WHOLE,
    FiniteCategory,
    Morphism,
    Diagram,
    full_subcategory,
    has_commuting_cocone,
    is_locally_finite,
    is_universal_for,
    is_weakly_homogeneous_pair,
    predicates,
    sub_power_category,
)
from .errors import InputError
from .expansion import (
    Expansion,
    classify_restrictions,
    is_self_similar,
)


@dataclass
class DegreeReport:
    quantity: str
    value: int | None
    exact: bool
    unknown_above: int | None = None
    witnesses: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "quantity": self.quantity,
            "value": self.value,
            "exact": self.exact,
            "unknown_above": self.unknown_above,
            "witnesses": self.witnesses,
            "params": self.params,
            "notes": self.notes,
        }


def _mkey(m: Morphism) -> str:
    return f"{m.src}->{m.dst}:{m.key}"


def saturated_arrow_value(
    cat: FiniteCategory, c_obj: str, b: str, a: str, mode: str
) -> tuple[int | None, Morphism | None]:
    """The least t at which c_obj arrows b for every number of colors:
    min over w in hom(b, c_obj) of the number of domain elements hit, 1
    when there is nothing to color but some w exists, None (no finite t)
    when no w exists at all.  Also returns the least minimizing w."""
    items, images = _domain_and_images(cat, c_obj, b, a, mode)
    if not images:
        return None, None
    if not items:
        return 1, images[0][0]
    best_w, best = None, None
    for w, img in images:
        v = max(1, len(img))
        if best is None or v < best:
            best, best_w = v, w
    return best, best_w


def big_degree_exact(
    cat: FiniteCategory, s: str, a: str, mode: str = "morphisms"
) -> DegreeReport:
    """The exact big degree of a in the finite host s: the largest color
    count some coloring forces on every self-copy of s.

    The discrete coloring is extremal, so the value is the minimum over
    self-maps w of the size of w's image in the colored domain; it equals
    the domain size whenever hom(s, s) is a single identity."""
    value, w = saturated_arrow_value(cat, s, s, a, mode)
    items, images = _domain_and_images(cat, s, s, a, mode)
    empty = not items
    kind = "morphisms" if mode == "morphisms" else "classes"
    report = DegreeReport(
        quantity=f"big_degree[{kind}]({a} in {s})",
        value=value,
        exact=True,
        witnesses={},
        params={
            "mode": mode,
            "domain_size": len(items),
            "self_map_count": len(images),
            "empty_domain": empty,
        },
    )
    if empty:
        report.notes.append("empty domain: value 1 by the one-empty-partition convention")
    elif value is not None:
        report.witnesses = {
            "minimizing_self_map": _mkey(w),
            "extremal_coloring": "discrete (every domain element its own color)",
        }
    return report


def pool_degree_exact(
    cat: FiniteCategory,
    a: str,
    mode: str = "morphisms",
    pool: Sequence[str] | None = None,
) -> tuple[int, dict]:
    """The pool-relative small degree at color saturation: the least t
    such that for every number of colors and every B in the pool some C
    in the pool arrows it.  Equals max over B of min over C of the
    per-host saturated value."""
    objs = list(pool) if pool is not None else list(cat.objects)
    if a not in objs:
        raise InputError(f"object {a!r} is not in the pool")
    best_overall = 1
    witness: dict[str, Any] = {}
    for b in objs:
        per_b = None
        chosen = None
        for c in objs:
            v, w = saturated_arrow_value(cat, c, b, a, mode)
            if v is None:
                continue
            if per_b is None or v < per_b:
                per_b, chosen = v, (c, w)
        if per_b is None:
            raise InputError(
                f"pool is not directed enough: no host for B = {b!r}"
            )
        if per_b > best_overall:
            best_overall = per_b
            witness = {
                "hardest_B": b,
                "best_C": chosen[0],
                "minimizing_self_map": _mkey(chosen[1]) if chosen[1] else None,
            }
    return best_overall, witness


def small_degree_bounds(
    cat: FiniteCategory,
    a: str,
    k_max: int,
    t_max: int,
    mode: str = "morphisms",
    pool: Sequence[str] | None = None,
    workers: int = 1,
    pruning: bool = False,
    guard_limit: int | None = None,
) -> DegreeReport:
    """Pool-relative small-degree report.

    The (lower, upper) pair comes from exhaustive arrow decisions with at
    most k_max colors and threshold at most t_max; the saturated value
    (all color counts) is reported as exact for this finite category.
    For a pool that truncates a larger category the saturated value is
    pool-relative, which the notes record.
    """
    objs = list(pool) if pool is not None else list(cat.objects)
    if a not in objs:
        raise InputError(f"object {a!r} is not in the pool")
    arrow = arrow_morphisms if mode == "morphisms" else arrow_objects
    exact_value, exact_witness = pool_degree_exact(cat, a, mode, objs)

    upper = None
    upper_witnesses: dict[str, str] = {}
    for t in range(1, t_max + 1):
        ok = True
        witnesses_t: dict[str, str] = {}
        for b in objs:
            for k in range(2, k_max + 1):
                host = None
                for c in objs:
                    res = arrow(
                        cat, c, b, a, k, t,
                        workers=workers, pruning=pruning, guard_limit=guard_limit,
                    )
                    if res.holds:
                        host = c
                        break
                if host is None:
                    ok = False
                    break
                witnesses_t[f"B={b},k={k}"] = host
            if not ok:
                break
        if ok:
            upper = t
            upper_witnesses = witnesses_t
            break
    lower = 1 if upper is None else upper
    if upper is None:
        lower = t_max + 1

    report = DegreeReport(
        quantity=f"small_degree[{mode}]({a})",
        value=exact_value,
        exact=True,
        unknown_above=t_max if upper is None else None,
        witnesses={"saturated": exact_witness, "bounded_sweep_hosts": upper_witnesses},
        params={
            "mode": mode,
            "pool": objs,
            "k_max": k_max,
            "t_max": t_max,
            "lower": lower,
            "upper": upper,
        },
        notes=[
            "value is exact for this finite category (color counts saturate "
            "per hosting object); for a truncation of a larger category read "
            "it as pool-relative",
            f"(lower, upper) from the k <= {k_max} sweep: ({lower}, {upper})",
        ],
    )
    return report


# ---------------------------------------------------------------------------
# Identity checks

def check_multiplicativity(cat: FiniteCategory, a: str, s: str) -> dict:
    """Morphism-level degree = |Aut(A)| times copy-level degree, for mono
    hom(A,S); when the morphism-level degree is 1 the object is rigid."""
    non_mono = [f for f in cat.hom(a, s) if not cat.is_mono(f)]
    if non_mono:
        return {
            "identity": "multiplicativity",
            "hypothesis_satisfied": False,
            "reason": f"non-mono morphism in hom({a},{s}): {_mkey(non_mono[0])}",
        }
    t_mor = big_degree_exact(cat, s, a, "morphisms")
    t_obj = big_degree_exact(cat, s, a, "classes")
    aut = len(cat.aut(a))
    holds = t_mor.value == aut * t_obj.value
    out = {
        "identity": "multiplicativity",
        "hypothesis_satisfied": True,
        "A": a,
        "S": s,
        "aut_order": aut,
        "degree_morphisms": t_mor.value,
        "degree_objects": t_obj.value,
        "holds": holds,
    }
    if t_mor.value == 1:
        out["rigidity_corollary"] = aut == 1
    return out


def check_sub_representation(
    cat: FiniteCategory,
    a: str,
    pool: Sequence[str] | None = None,
    guard_limit: int | None = None,
) -> dict:
    """Pool-relative small degree equals the big degree of the same object
    in the power category with the whole pool as host."""
    objs = list(pool) if pool is not None else list(cat.objects)
    sub_base = full_subcategory(cat, objs)
    preds = predicates(sub_base)
    if not preds["all_mono"] or not preds["directed"]:
        return {
            "identity": "sub_representation",
            "hypothesis_satisfied": False,
            "reason": "pool must be directed with mono morphisms",
            "predicates": {
                "all_mono": preds["all_mono"],
                "directed": preds["directed"],
            },
        }
    power = sub_power_category(sub_base, guard_limit)
    big = saturated_arrow_value(power, WHOLE, WHOLE, a, "morphisms")[0]
    small, witness = pool_degree_exact(cat, a, "morphisms", objs)
    return {
        "identity": "sub_representation",
        "hypothesis_satisfied": True,
        "A": a,
        "pool": objs,
        "small_degree": small,
        "big_degree_in_power_category": big,
        "holds": small == big,
        "witness": witness,
    }


def check_additivity(u: Expansion, a: str, s_star: str) -> dict:
    """Degrees upstairs bound (and under self-similarity, sum to) the
    degree downstairs, fiber member by fiber member."""
    s = u.apply_obj(s_star)
    reasons = []
    non_mono = [f for f in u.target.morphisms() if not u.target.is_mono(f)]
    if non_mono:
        reasons.append(f"target category has a non-mono morphism {_mkey(non_mono[0])}")
    restr = classify_restrictions(u)
    if not restr["has_restrictions"]:
        reasons.append(f"expansion lacks restrictions: {restr['counterexample']}")
    universal, uni_detail = is_universal_for(u.source, s_star, u.source.objects)
    if not universal:
        reasons.append(f"{s_star!r} is not universal for the source: {uni_detail}")
    if reasons:
        return {
            "identity": "additivity",
            "hypothesis_satisfied": False,
            "reason": "; ".join(reasons),
        }
    lhs = big_degree_exact(u.target, s, a, "morphisms").value
    fiber = u.fiber(a)
    terms = {
        a_star: big_degree_exact(u.source, s_star, a_star, "morphisms").value
        for a_star in fiber
    }
    total = sum(terms.values())
    out = {
        "identity": "additivity",
        "hypothesis_satisfied": True,
        "A": a,
        "S": s,
        "S_star": s_star,
        "fiber": list(fiber),
        "degree_downstairs": lhs,
        "degree_terms_upstairs": {k: v for k, v in terms.items()},
        "sum_upstairs": total,
        "inequality_holds": lhs <= total,
    }
    equality_ready = restr["has_unique_restrictions"]
    if equality_ready:
        selfsim, detail = is_self_similar(u, s_star)
        out["self_similar"] = selfsim
        out["self_similarity_detail"] = detail
        if selfsim:
            out["equality_holds"] = lhs == total
            # copy-level corollaries
            lhs_obj = big_degree_exact(u.target, s, a, "classes").value
            aut_a = len(u.target.aut(a))
            weighted = Fraction(0)
            for a_star in fiber:
                t_obj = big_degree_exact(u.source, s_star, a_star, "classes").value
                weighted += Fraction(len(u.source.aut(a_star)), aut_a) * t_obj
            out["degree_downstairs_objects"] = lhs_obj
            out["weighted_sum_objects"] = {
                "numerator": weighted.numerator,
                "denominator": weighted.denominator,
            }
            out["weighted_equality_holds"] = weighted == lhs_obj
            reps: list[str] = []
            for a_star in fiber:
                if not any(u.source.iso_set(a_star, r) for r in reps):
                    reps.append(a_star)
            rep_sum = sum(
                big_degree_exact(u.source, s_star, r, "classes").value for r in reps
            )
            out["iso_class_representatives"] = reps
            out["representative_sum_objects"] = rep_sum
            out["representative_equality_holds"] = rep_sum == lhs_obj
    else:
        out["self_similar"] = None
        out["notes"] = ["unique restrictions fail, equality clauses skipped"]
    return out


def check_monotonicity(cat: FiniteCategory, s: str, a: str, b: str) -> dict:
    """Weak homogeneity for the pair transfers the degree bound from b
    down to a."""
    if not cat.hom(a, b):
        return {
            "identity": "monotonicity",
            "hypothesis_satisfied": False,
            "reason": f"no morphism {a} -> {b}",
        }
    wh, witness = is_weakly_homogeneous_pair(cat, s, a, b)
    if not wh:
        return {
            "identity": "monotonicity",
            "hypothesis_satisfied": False,
            "reason": f"{s!r} is not weakly homogeneous for ({a!r}, {b!r})",
        }
    deg_a = big_degree_exact(cat, s, a, "morphisms").value
    deg_b = big_degree_exact(cat, s, b, "morphisms").value
    return {
        "identity": "monotonicity",
        "hypothesis_satisfied": True,
        "S": s,
        "A": a,
        "B": b,
        "witness": {"f": _mkey(witness[0]), "g": _mkey(witness[1])},
        "degree_A": deg_a,
        "degree_B": deg_b,
        "holds": deg_a <= deg_b,
    }


def check_smaller(
    cat: FiniteCategory, pool_d: Sequence[str], s: str, a: str
) -> dict:
    """The pool-relative small degree bounds the big degree in any
    universal, locally finite host."""
    if a not in pool_d:
        raise InputError(f"object {a!r} is not in the pool")
    universal, uni_detail = is_universal_for(cat, s, pool_d)
    if not universal:
        return {
            "identity": "smaller",
            "hypothesis_satisfied": False,
            "reason": f"{s!r} not universal for the pool: {uni_detail}",
        }
    locfin, lf_detail = is_locally_finite(cat, s, pool_d)
    if not locfin:
        return {
            "identity": "smaller",
            "hypothesis_satisfied": False,
            "reason": f"{s!r} not locally finite for the pool: {lf_detail}",
        }
    small, witness = pool_degree_exact(cat, a, "morphisms", list(pool_d))
    big = big_degree_exact(cat, s, a, "morphisms").value
    return {
        "identity": "smaller",
        "hypothesis_satisfied": True,
        "A": a,
        "S": s,
        "pool": list(pool_d),
        "small_degree": small,
        "big_degree": big,
        "holds": big is None or small <= big,
        "witness": witness,
        "local_finiteness": lf_detail,
    }


def check_cocone_transfer(
    cat: FiniteCategory,
    subcat: FiniteCategory,
    a: str,
    b_obj: str,
    c_obj: str,
    diagrams: Sequence[Diagram],
    guard_limit: int | None = None,
) -> dict:
    """Degree transfer along a subcategory: if every supplied diagram
    with a cocone over the big host also has one inside the subcategory,
    the subcategory degree is bounded by the big one.  The hypothesis is
    checked only on the supplied diagrams, so the conclusion is reported
    as conditional on that list."""
    for o in subcat.objects:
        cat.object_index(o)
    uni_b, det_b = is_universal_for(subcat, b_obj, subcat.objects)
    if not uni_b:
        return {
            "identity": "cocone_transfer",
            "hypothesis_satisfied": False,
            "reason": f"{b_obj!r} not universal for the subcategory: {det_b}",
        }
    uni_c, det_c = is_universal_for(cat, c_obj, cat.objects)
    if not uni_c:
        return {
            "identity": "cocone_transfer",
            "hypothesis_satisfied": False,
            "reason": f"{c_obj!r} not universal for the ambient category: {det_c}",
        }
    checked = []
    for i, diagram in enumerate(diagrams):
        if diagram.bottom_object != a or diagram.top_object != b_obj:
            raise InputError(f"diagram {i} is not an ({a},{b_obj})-diagram")
        big_side, _ = has_commuting_cocone(cat, diagram, c_obj, guard_limit)
        small_side = False
        if big_side:
            for tip in subcat.objects:
                ok, _ = has_commuting_cocone(subcat, diagram, tip, guard_limit)
                if ok:
                    small_side = True
                    break
        checked.append({"diagram": i, "cocone_in_ambient": big_side,
                        "cocone_in_subcategory": small_side if big_side else None})
        if big_side and not small_side:
            return {
                "identity": "cocone_transfer",
                "hypothesis_satisfied": False,
                "reason": f"diagram {i} has an ambient cocone but none in the subcategory",
                "diagrams_checked": checked,
            }
    deg_b = big_degree_exact(subcat, b_obj, a, "classes").value
    deg_c = big_degree_exact(cat, c_obj, a, "classes").value
    return {
        "identity": "cocone_transfer",
        "hypothesis_satisfied": True,
        "conditional_on_supplied_diagrams": True,
        "A": a,
        "B": b_obj,
        "C": c_obj,
        "diagrams_checked": checked,
        "degree_in_subcategory": deg_b,
        "degree_in_ambient": deg_c,
        "holds": deg_b <= deg_c,
    }
