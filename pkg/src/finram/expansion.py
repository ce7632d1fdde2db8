"""Expansion functors between finite categories and their restriction
machinery.

An expansion maps a source category onto a target category, forgetting
part of the structure: it is surjective on objects, injective on each
hom-set, and functorial.  The canonical instance is forgetting a linear
order from ordered structures; :func:`order_forgetting_expansion` builds
that instance from a structure pool.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

from .category import FiniteCategory, Morphism, category_from_pool
from .errors import InputError
from .structures import Signature, Structure, enumerate_embeddings


class ExpansionError(InputError):
    """An expansion axiom fails; the message names the axiom."""


@dataclass(frozen=True)
class Expansion:
    source: FiniteCategory
    target: FiniteCategory
    object_map: Mapping[str, str]
    morphism_map: Mapping[Morphism, Morphism]

    def apply_obj(self, a_star: str) -> str:
        return self.object_map[a_star]

    def apply(self, f: Morphism) -> Morphism:
        return self.morphism_map[f]

    def fiber(self, a: str) -> tuple[str, ...]:
        self.target.object_index(a)
        return tuple(x for x in self.source.objects if self.object_map[x] == a)

    def lifted_hom(self, a_star: str, b_star: str) -> dict[Morphism, Morphism]:
        """Map from target morphisms back to their lifts in this hom-set."""
        return {self.apply(f): f for f in self.source.hom(a_star, b_star)}


def make_expansion(
    source: FiniteCategory,
    target: FiniteCategory,
    object_map: Mapping[str, str],
    morphism_map: Mapping[Morphism, Morphism],
) -> Expansion:
    """Validate the expansion axioms and return the functor.

    Raises ExpansionError naming the failing axiom: totality, typing,
    functoriality (identities and composition), surjectivity on objects,
    or injectivity on a hom-set.
    """
    for x in source.objects:
        if x not in object_map:
            raise ExpansionError(f"object map missing source object {x!r}")
        target.object_index(object_map[x])
    for f in source.morphisms():
        if f not in morphism_map:
            raise ExpansionError(f"morphism map missing {f}")
        img = morphism_map[f]
        if img.src != object_map[f.src] or img.dst != object_map[f.dst]:
            raise ExpansionError(
                f"image of {f} has wrong endpoints: {img}"
            )
        if img not in target.hom(img.src, img.dst):
            raise ExpansionError(f"image {img} is not a target morphism")
    for x in source.objects:
        if morphism_map[source.identity(x)] != target.identity(object_map[x]):
            raise ExpansionError(f"not functorial: identity of {x!r} not preserved")
    for f in source.morphisms():
        for g in source.morphisms():
            if g.src != f.dst:
                continue
            lhs = morphism_map[source.compose(g, f)]
            rhs = target.compose(morphism_map[g], morphism_map[f])
            if lhs != rhs:
                raise ExpansionError(
                    f"not functorial: composition of {f} then {g} not preserved"
                )
    covered = {object_map[x] for x in source.objects}
    missing = [a for a in target.objects if a not in covered]
    if missing:
        raise ExpansionError(f"not surjective on objects: {missing} uncovered")
    for a_star in source.objects:
        for b_star in source.objects:
            hs = source.hom(a_star, b_star)
            images = {morphism_map[f] for f in hs}
            if len(images) != len(hs):
                raise ExpansionError(
                    f"not injective on hom({a_star!r},{b_star!r})"
                )
    return Expansion(source, target, dict(object_map), dict(morphism_map))


def fiber(u: Expansion, a: str) -> tuple[str, ...]:
    return u.fiber(a)


def classify_restrictions(u: Expansion) -> dict:
    """Decide whether the expansion has restrictions / unique restrictions.

    Works through the hom-set identity: for every target object A and
    every source object B*, hom(A, U(B*)) must equal the union over the
    fiber of A of the lifted hom-sets into B* (a disjoint union for
    uniqueness).  A counterexample morphism is reported on failure.
    """
    has_restrictions = True
    has_unique = True
    counterexample = None
    uniqueness_counterexample = None
    for a in u.target.objects:
        fiber_a = u.fiber(a)
        for b_star in u.source.objects:
            b = u.apply_obj(b_star)
            covered: dict[Morphism, list[str]] = {}
            for a_star in fiber_a:
                for f in u.source.hom(a_star, b_star):
                    covered.setdefault(u.apply(f), []).append(a_star)
            for f in u.target.hom(a, b):
                lifts = covered.get(f, [])
                if not lifts:
                    has_restrictions = False
                    has_unique = False
                    if counterexample is None:
                        counterexample = {
                            "morphism": f"{f.src}->{f.dst}:{f.key}",
                            "into": b_star,
                            "reason": "no lift",
                        }
                elif len(lifts) > 1:
                    has_unique = False
                    if uniqueness_counterexample is None:
                        uniqueness_counterexample = {
                            "morphism": f"{f.src}->{f.dst}:{f.key}",
                            "into": b_star,
                            "lifts": sorted(lifts),
                        }
    return {
        "has_restrictions": has_restrictions,
        "has_unique_restrictions": has_unique,
        "counterexample": counterexample,
        "uniqueness_counterexample": uniqueness_counterexample,
    }


def restriction(u: Expansion, b_star: str, f: Morphism) -> tuple[str, Morphism]:
    """The unique fiber member through which f: A -> U(B*) lifts into B*,
    together with the lift.  Requires unique restrictions at this instance."""
    b = u.apply_obj(b_star)
    if f.dst != b:
        raise InputError(f"morphism {f} does not end at the image of {b_star!r}")
    hits = []
    for a_star in u.fiber(f.src):
        lift = u.lifted_hom(a_star, b_star).get(f)
        if lift is not None:
            hits.append((a_star, lift))
    if not hits:
        raise ExpansionError(f"no restriction: {f} has no lift into {b_star!r}")
    if len(hits) > 1:
        raise ExpansionError(
            f"restriction not unique: {f} lifts through {[h[0] for h in hits]}"
        )
    return hits[0]


def aut_count_identity(u: Expansion, a: str) -> dict:
    """For the least fiber member A* of a: the automorphisms of a downstairs
    decompose as the disjoint union, over fiber members isomorphic to A*,
    of the iso-sets into A*; counting gives |Aut(a)| = |I| * |Aut(A*)|."""
    fiber_a = u.fiber(a)
    if not fiber_a:
        raise InputError(f"object {a!r} has an empty fiber")
    a_star = fiber_a[0]
    iso_members = [
        x for x in fiber_a if u.source.iso_set(x, a_star)
    ]
    union: list[Morphism] = []
    for x in iso_members:
        union.extend(u.apply(f) for f in u.source.iso_set(x, a_star))
    aut_a = u.target.aut(a)
    disjoint = len(set(union)) == len(union)
    equal = set(union) == set(aut_a) and disjoint
    lhs = len(aut_a)
    rhs = len(iso_members) * len(u.source.aut(a_star))
    return {
        "object": a,
        "chosen_expansion": a_star,
        "iso_fiber_members": iso_members,
        "aut_order": lhs,
        "iso_member_count": len(iso_members),
        "expansion_aut_order": len(u.source.aut(a_star)),
        "disjoint_union_holds": equal,
        "product_identity_holds": lhs == rhs,
    }


def property_checks(u: Expansion) -> dict:
    """Decide reasonableness and the expansion property exhaustively."""
    reasonable = True
    reasonable_counter = None
    for a in u.target.objects:
        for b in u.target.objects:
            for f in u.target.hom(a, b):
                for a_star in u.fiber(a):
                    ok = any(
                        f in u.lifted_hom(a_star, b_star)
                        for b_star in u.fiber(b)
                    )
                    if not ok:
                        reasonable = False
                        if reasonable_counter is None:
                            reasonable_counter = {
                                "morphism": f"{f.src}->{f.dst}:{f.key}",
                                "from_expansion": a_star,
                            }
    xp = True
    xp_counter = None
    xp_witnesses = {}
    for a in u.target.objects:
        witness = None
        for b in u.target.objects:
            if all(
                u.source.hom(a_star, b_star)
                for a_star in u.fiber(a)
                for b_star in u.fiber(b)
            ):
                witness = b
                break
        if witness is None:
            xp = False
            if xp_counter is None:
                xp_counter = {"object": a}
        else:
            xp_witnesses[a] = witness
    return {
        "reasonable": reasonable,
        "reasonable_counterexample": reasonable_counter,
        "expansion_property": xp,
        "expansion_property_witnesses": xp_witnesses,
        "expansion_property_counterexample": xp_counter,
    }


def is_self_similar(u: Expansion, s_star: str) -> tuple[bool, dict]:
    """For every self-morphism w of the image of S*, S* must map into the
    restriction of S* along w.  Returns per-w witnesses, or the failing w.
    Requires unique restrictions (a hypothesis, not an input defect)."""
    from .errors import HypothesisNotSatisfied

    s = u.apply_obj(s_star)
    witnesses = {}
    for w in u.target.hom(s, s):
        try:
            restricted, _ = restriction(u, s_star, w)
        except ExpansionError as e:
            raise HypothesisNotSatisfied(
                f"self-similarity needs unique restrictions: {e}"
            ) from None
        hs = u.source.hom(s_star, restricted)
        if not hs:
            return False, {"failing_self_map": f"{w.src}->{w.dst}:{w.key}"}
        witnesses[str(w.key)] = f"{hs[0].src}->{hs[0].dst}:{hs[0].key}"
    return True, {"witnesses": witnesses}


# ---------------------------------------------------------------------------
# The order-forgetting instance

def _with_order(s: Structure, perm: Sequence[int]) -> Structure:
    """Expand a structure with the linear order placing perm[0] first."""
    if "<" in s.signature.arity:
        raise InputError("structure already interprets '<'")
    sig = Signature(s.signature.relations + (("<", 2),), s.signature.constants)
    rank = {v: i for i, v in enumerate(perm)}
    lt = [
        (a, b)
        for a in range(s.size)
        for b in range(s.size)
        if a != b and rank[a] < rank[b]
    ]
    rels = dict(s.relations)
    rels["<"] = lt
    return Structure.make(sig, s.size, rels, dict(s.constants))


def ordered_versions(s: Structure) -> list[Structure]:
    """All expansions of s by a linear order, one per permutation, in
    lexicographic permutation order (duplicates impossible: distinct
    permutations give distinct order relations)."""
    return [_with_order(s, perm) for perm in itertools.permutations(range(s.size))]


def order_forgetting_expansion(
    pool: Sequence[tuple[str, Structure]],
    age_of: Structure | None = None,
) -> Expansion:
    """Build the expansion that forgets a linear order.

    The target category is the pool with embeddings; the source category
    consists of order-expansions of the pool members, either all of them
    or (when ``age_of`` is an ordered structure) only those that order-embed
    into it.  Source object ids are ``name*k`` with k the permutation index.
    """
    target = category_from_pool(dict(pool))
    src_entries: list[tuple[str, Structure]] = []
    obj_map: dict[str, str] = {}
    for name, s in pool:
        kept = 0
        for k, perm in enumerate(itertools.permutations(range(s.size))):
            ordered = _with_order(s, perm)
            if age_of is not None and not enumerate_embeddings(ordered, age_of):
                continue
            sid = f"{name}*{k}"
            src_entries.append((sid, ordered))
            obj_map[sid] = name
            kept += 1
        if kept == 0:
            raise ExpansionError(
                f"object {name!r} has no order-expansion inside the given age"
            )
    source = category_from_pool(dict(src_entries))
    mor_map = {
        f: Morphism(obj_map[f.src], obj_map[f.dst], f.key)
        for f in source.morphisms()
    }
    return make_expansion(source, target, obj_map, mor_map)


def find_source_object(u: Expansion, s: Structure) -> str:
    """The id of the source object whose payload equals the given structure."""
    for x in u.source.objects:
        if u.source.structure(x) == s:
            return x
    raise InputError("no source object carries the given structure")


# ---------------------------------------------------------------------------
# Expansion description files (JSON)

EXPANSION_SCHEMA = "finram-expansion/1"


def expansion_to_json(u: Expansion) -> dict:
    """Serialize pools, the object map, and per-hom-set morphism
    identification by index (source hom order -> target hom index)."""
    from .structures import serialize_structure

    def pool_of(cat: FiniteCategory) -> dict:
        out = {}
        for o in cat.objects:
            s = cat.structure(o)
            if s is None:
                raise InputError("only structure-backed categories serialize")
            out[o] = serialize_structure(s)
        return out

    mor_idx: dict[str, list[int]] = {}
    for a_star in u.source.objects:
        for b_star in u.source.objects:
            hs = u.source.hom(a_star, b_star)
            if not hs:
                continue
            a, b = u.apply_obj(a_star), u.apply_obj(b_star)
            target_hom = list(u.target.hom(a, b))
            mor_idx[f"{a_star}|{b_star}"] = [
                target_hom.index(u.apply(f)) for f in hs
            ]
    return {
        "schema": EXPANSION_SCHEMA,
        "source_pool": pool_of(u.source),
        "target_pool": pool_of(u.target),
        "object_map": dict(u.object_map),
        "morphism_map": mor_idx,
    }


def expansion_from_json(data: dict) -> Expansion:
    from .structures import parse_structure

    if data.get("schema") != EXPANSION_SCHEMA:
        raise InputError(f"unsupported expansion schema {data.get('schema')!r}")
    source = category_from_pool(
        {name: parse_structure(text) for name, text in data["source_pool"].items()}
    )
    target = category_from_pool(
        {name: parse_structure(text) for name, text in data["target_pool"].items()}
    )
    obj_map = dict(data["object_map"])
    mor_map: dict[Morphism, Morphism] = {}
    for key, indices in data["morphism_map"].items():
        a_star, b_star = key.split("|", 1)
        hs = source.hom(a_star, b_star)
        if len(indices) != len(hs):
            raise InputError(f"morphism index list for {key!r} has wrong length")
        target_hom = target.hom(obj_map[a_star], obj_map[b_star])
        for f, idx in zip(hs, indices):
            if not 0 <= idx < len(target_hom):
                raise InputError(f"morphism index {idx} out of range for {key!r}")
            mor_map[f] = target_hom[idx]
    return make_expansion(source, target, obj_map, mor_map)
