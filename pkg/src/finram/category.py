"""Explicit finite categories and the categorical predicates.

Objects are opaque string ids, optionally carrying a Structure payload.
A morphism is identified by (source, target, key); hom-sets are kept
sorted by key, and every predicate returns the lexicographically least
witness or counterexample in that order, so reports are reproducible.

Composition is written `compose(g, f)` for "g after f".
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Mapping, Sequence

from .errors import InputError, SignatureMismatch, check_guard
from .structures import Structure, enumerate_embeddings

#: object id of the whole-category object in a power category
WHOLE = "*"


@dataclass(frozen=True)
class Morphism:
    src: str
    dst: str
    key: Any

    def triple(self) -> tuple[str, str, Any]:
        return (self.src, self.dst, self.key)


class FiniteCategory:
    """Objects, hom-sets and a composition rule, with lazy caching."""

    def __init__(
        self,
        objects: Sequence[str],
        homs: Mapping[tuple[str, str], Sequence[Morphism]],
        identities: Mapping[str, Morphism],
        compose_fn: Callable[[Morphism, Morphism], Morphism],
        payloads: Mapping[str, Structure] | None = None,
        assume_mono: bool = False,
    ):
        self._objects = tuple(objects)
        if len(set(self._objects)) != len(self._objects):
            raise InputError("duplicate object ids")
        self._index = {o: i for i, o in enumerate(self._objects)}
        self._homs = {}
        for (a, b), ms in homs.items():
            if a not in self._index or b not in self._index:
                raise InputError(f"hom-set ({a},{b}) references unknown objects")
            for m in ms:
                if m.src != a or m.dst != b:
                    raise InputError(f"morphism {m} filed under wrong hom-set ({a},{b})")
            self._homs[(a, b)] = tuple(sorted(ms, key=lambda m: m.key))
        self._hom_sets = {pair: frozenset(ms) for pair, ms in self._homs.items()}
        self._identities = dict(identities)
        for o in self._objects:
            if o not in self._identities:
                raise InputError(f"object {o} has no identity morphism")
            if self._identities[o] not in self.hom(o, o):
                raise InputError(f"identity of {o} is not in hom({o},{o})")
        self._compose_fn = compose_fn
        self._payloads = dict(payloads or {})
        # set when every morphism is known mono by construction
        # (e.g. embedding categories: injective maps are left-cancellable)
        self.assume_mono = assume_mono
        self._compose_cache: dict[tuple[Morphism, Morphism], Morphism] = {}
        self._mono_cache: dict[Morphism, bool] = {}
        self._inverse_cache: dict[Morphism, Morphism | None] = {}

    @property
    def objects(self) -> tuple[str, ...]:
        return self._objects

    def object_index(self, o: str) -> int:
        if o not in self._index:
            raise InputError(f"unknown object {o!r}")
        return self._index[o]

    def structure(self, o: str) -> Structure | None:
        self.object_index(o)
        return self._payloads.get(o)

    def hom(self, a: str, b: str) -> tuple[Morphism, ...]:
        self.object_index(a)
        self.object_index(b)
        return self._homs.get((a, b), ())

    def morphisms(self) -> Iterable[Morphism]:
        for a in self._objects:
            for b in self._objects:
                yield from self.hom(a, b)

    def identity(self, o: str) -> Morphism:
        self.object_index(o)
        return self._identities[o]

    def compose(self, g: Morphism, f: Morphism) -> Morphism:
        """g after f; requires cod(f) = dom(g)."""
        if f.dst != g.src:
            raise InputError(f"not composable: {f} then {g}")
        cached = self._compose_cache.get((g, f))
        if cached is None:
            cached = self._compose_fn(g, f)
            if cached not in self._hom_sets.get((f.src, g.dst), frozenset()):
                raise InputError(
                    f"composition of {f} and {g} leaves the category: {cached}"
                )
            self._compose_cache[(g, f)] = cached
        return cached

    # -- derived morphism properties ------------------------------------

    def is_mono(self, f: Morphism) -> bool:
        if self.assume_mono:
            return True
        cached = self._mono_cache.get(f)
        if cached is None:
            cached = True
            for a in self._objects:
                hs = self.hom(a, f.src)
                for g, h in itertools.combinations(hs, 2):
                    if self.compose(f, g) == self.compose(f, h):
                        cached = False
                        break
                if not cached:
                    break
            self._mono_cache[f] = cached
        return cached

    def inverse(self, f: Morphism) -> Morphism | None:
        if f not in self._inverse_cache:
            inv = None
            for g in self.hom(f.dst, f.src):
                if (
                    self.compose(g, f) == self.identity(f.src)
                    and self.compose(f, g) == self.identity(f.dst)
                ):
                    inv = g
                    break
            self._inverse_cache[f] = inv
        return self._inverse_cache[f]

    def iso_set(self, a: str, b: str) -> tuple[Morphism, ...]:
        return tuple(f for f in self.hom(a, b) if self.inverse(f) is not None)

    def aut(self, o: str) -> tuple[Morphism, ...]:
        return self.iso_set(o, o)


# ---------------------------------------------------------------------------
# Constructors

def _embedding_morphism(a: str, b: str, m: tuple[int, ...]) -> Morphism:
    return Morphism(a, b, m)


def category_from_pool(
    pool: Sequence[Structure] | Sequence[tuple[str, Structure]] | Mapping[str, Structure],
) -> FiniteCategory:
    """The category of embeddings on the given structures.  Objects are the
    pool entries (duplicates allowed, as distinct objects); hom-sets are
    all embeddings; composition is map composition."""
    if isinstance(pool, Mapping):
        entries = list(pool.items())
    else:
        entries = []
        for i, item in enumerate(pool):
            if isinstance(item, Structure):
                entries.append((f"o{i}", item))
            else:
                name, s = item
                entries.append((str(name), s))
    sigs = {s.signature for _, s in entries}
    if len(sigs) > 1:
        raise SignatureMismatch("pool mixes structures over different signatures")
    payloads = dict(entries)
    homs = {}
    for a, sa in entries:
        for b, sb in entries:
            homs[(a, b)] = tuple(
                _embedding_morphism(a, b, e.map) for e in enumerate_embeddings(sa, sb)
            )
    identities = {a: _embedding_morphism(a, a, tuple(range(sa.size))) for a, sa in entries}

    def compose_fn(g: Morphism, f: Morphism) -> Morphism:
        return Morphism(f.src, g.dst, tuple(g.key[x] for x in f.key))

    return FiniteCategory(
        [a for a, _ in entries], homs, identities, compose_fn, payloads,
        assume_mono=True,
    )


def category_from_tables(
    objects: Sequence[str],
    homs: Mapping[tuple[str, str], Sequence[Any]],
    identities: Mapping[str, Any],
    composition: Mapping[tuple[tuple[str, str, Any], tuple[str, str, Any]], Any],
) -> FiniteCategory:
    """A hand-built category: hom-sets given by keys, composition by an
    explicit table mapping (g.triple(), f.triple()) to the key of g.f."""
    hom_map = {
        (a, b): tuple(Morphism(a, b, k) for k in ks) for (a, b), ks in homs.items()
    }
    id_map = {o: Morphism(o, o, k) for o, k in identities.items()}

    def compose_fn(g: Morphism, f: Morphism) -> Morphism:
        key = composition.get((g.triple(), f.triple()))
        if key is None:
            raise InputError(f"composition table has no entry for {f} then {g}")
        return Morphism(f.src, g.dst, key)

    return FiniteCategory(objects, hom_map, id_map, compose_fn)


def restrict_category(
    cat: FiniteCategory,
    objects: Sequence[str],
    morphisms: Iterable[Morphism],
    validate: bool = True,
) -> FiniteCategory:
    """A (not necessarily full) subcategory: the given objects and
    morphisms of the parent, which must contain identities and be closed
    under the parent's composition."""
    objs = tuple(objects)
    keep = set(morphisms)
    for o in objs:
        keep.add(cat.identity(o))
    homs: dict[tuple[str, str], list[Morphism]] = {}
    for m in keep:
        if m.src not in objs or m.dst not in objs:
            raise InputError(f"morphism {m} leaves the chosen object set")
        if m not in cat.hom(m.src, m.dst):
            raise InputError(f"morphism {m} is not in the parent category")
        homs.setdefault((m.src, m.dst), []).append(m)
    if validate:
        for f in keep:
            for g in keep:
                if f.dst == g.src and cat.compose(g, f) not in keep:
                    raise InputError(
                        f"morphism set not closed under composition: {f} then {g}"
                    )
    payloads = {o: cat.structure(o) for o in objs if cat.structure(o) is not None}
    return FiniteCategory(
        objs, homs, {o: cat.identity(o) for o in objs}, cat.compose, payloads,
        assume_mono=cat.assume_mono,
    )


def full_subcategory(cat: FiniteCategory, objects: Sequence[str]) -> FiniteCategory:
    objs = tuple(objects)
    ms = [m for a in objs for b in objs for m in cat.hom(a, b)]
    return restrict_category(cat, objs, ms, validate=False)


def sub_power_category(
    cat: FiniteCategory, guard_limit: int | None = None
) -> FiniteCategory:
    """The power category hosting pool-relative degrees as big degrees.

    Objects: one singleton subcategory per object of `cat` (kept under the
    same id) plus the whole of `cat` as the object `WHOLE`.  A morphism
    into a subcategory is a family assigning every source object a
    `cat`-morphism into some object of the target subcategory; composition
    is componentwise through the component's codomain.

    Only the singletons and the whole category appear as objects: the
    degree computations read nothing else, and the full power construction
    is doubly exponential.
    """
    base = cat.objects
    if WHOLE in base:
        raise InputError(f"object id {WHOLE!r} is reserved for the power construction")
    total = 1
    for b in base:
        total *= sum(len(cat.hom(b, d)) for d in base)
    check_guard(total, "families in hom(whole, whole)", guard_limit)

    members = {o: (o,) for o in base}
    members[WHOLE] = base
    objects = list(base) + [WHOLE]

    def family_key(components: Mapping[str, Morphism]) -> tuple:
        return tuple(components[o].triple() for o in sorted(components, key=cat.object_index))

    def families(src: str, dst: str) -> list[Morphism]:
        src_objs = members[src]
        per_source = []
        for a in src_objs:
            choices = [m for d in members[dst] for m in cat.hom(a, d)]
            per_source.append(choices)
        out = []
        for combo in itertools.product(*per_source):
            comp = dict(zip(src_objs, combo))
            out.append(Morphism(src, dst, family_key(comp)))
        return out

    homs = {}
    for x in objects:
        for y in objects:
            homs[(x, y)] = families(x, y)

    identities = {}
    for x in objects:
        comp = {o: cat.identity(o) for o in members[x]}
        identities[x] = Morphism(x, x, family_key(comp))

    def compose_fn(g: Morphism, f: Morphism) -> Morphism:
        f_comp = {Morphism(*t).src: Morphism(*t) for t in f.key}
        g_comp = {Morphism(*t).src: Morphism(*t) for t in g.key}
        h_comp = {a: cat.compose(g_comp[fa.dst], fa) for a, fa in f_comp.items()}
        return Morphism(
            f.src,
            g.dst,
            tuple(h_comp[o].triple() for o in sorted(h_comp, key=cat.object_index)),
        )

    return FiniteCategory(objects, homs, identities, compose_fn)


def family_components(cat: FiniteCategory, family: Morphism) -> dict[str, Morphism]:
    """Decode a power-category morphism into its components, keyed by
    source object."""
    return {t[0]: Morphism(*t) for t in family.key}


# ---------------------------------------------------------------------------
# Laws and predicates

def validate_category(cat: FiniteCategory, guard_limit: int | None = None) -> dict:
    """Check identity and associativity laws; list every violation."""
    report: dict[str, Any] = {
        "identity_violations": [],
        "associativity_violations": [],
    }
    for m in cat.morphisms():
        if cat.compose(cat.identity(m.dst), m) != m:
            report["identity_violations"].append(
                {"law": "left identity", "morphism": _mstr(m)}
            )
        if cat.compose(m, cat.identity(m.src)) != m:
            report["identity_violations"].append(
                {"law": "right identity", "morphism": _mstr(m)}
            )
    mor = list(cat.morphisms())
    out_degree = {o: sum(len(cat.hom(o, b)) for b in cat.objects) for o in cat.objects}
    triples = sum(
        out_degree[g.dst] for f in mor for g in mor if g.src == f.dst
    )
    check_guard(triples, "associativity triples", guard_limit)
    checked = 0
    for f in mor:
        for g in mor:
            if g.src != f.dst:
                continue
            gf = cat.compose(g, f)
            for h in mor:
                if h.src != g.dst:
                    continue
                checked += 1
                if cat.compose(h, gf) != cat.compose(cat.compose(h, g), f):
                    report["associativity_violations"].append(
                        {"f": _mstr(f), "g": _mstr(g), "h": _mstr(h)}
                    )
    report["triples_checked"] = checked
    report["ok"] = not (
        report["identity_violations"] or report["associativity_violations"]
    )
    return report


def _mstr(m: Morphism) -> str:
    return f"{m.src}->{m.dst}:{m.key}"


def predicates(cat: FiniteCategory) -> dict:
    """Decide all-mono, directedness and amalgamation exhaustively, with
    lexicographically least witnesses/counterexamples."""
    out: dict[str, Any] = {}

    mono_counter = None
    for m in cat.morphisms():
        if not cat.is_mono(m):
            for a in cat.objects:
                hs = cat.hom(a, m.src)
                done = False
                for g, h in itertools.combinations(hs, 2):
                    if cat.compose(m, g) == cat.compose(m, h):
                        mono_counter = {"f": _mstr(m), "g": _mstr(g), "h": _mstr(h)}
                        done = True
                        break
                if done:
                    break
            break
    out["all_mono"] = mono_counter is None
    out["all_mono_counterexample"] = mono_counter

    directed_witness: dict[str, str] = {}
    directed_counter = None
    for a in cat.objects:
        for b in cat.objects:
            host = next(
                (c for c in cat.objects if cat.hom(a, c) and cat.hom(b, c)), None
            )
            if host is None:
                directed_counter = {"A": a, "B": b}
                break
            directed_witness[f"{a},{b}"] = host
        if directed_counter:
            break
    out["directed"] = directed_counter is None
    out["directed_witnesses"] = directed_witness if directed_counter is None else None
    out["directed_counterexample"] = directed_counter

    amalg_counter = None
    for a in cat.objects:
        for b in cat.objects:
            for c in cat.objects:
                for f1 in cat.hom(a, b):
                    for g1 in cat.hom(a, c):
                        found = False
                        for d in cat.objects:
                            for f2 in cat.hom(b, d):
                                for g2 in cat.hom(c, d):
                                    if cat.compose(f2, f1) == cat.compose(g2, g1):
                                        found = True
                                        break
                                if found:
                                    break
                            if found:
                                break
                        if not found:
                            amalg_counter = {"f1": _mstr(f1), "g1": _mstr(g1)}
                            break
                    if amalg_counter:
                        break
                if amalg_counter:
                    break
            if amalg_counter:
                break
        if amalg_counter:
            break
    out["amalgamation"] = amalg_counter is None
    out["amalgamation_counterexample"] = amalg_counter
    return out


def is_universal_for(
    cat: FiniteCategory, s: str, objs: Sequence[str]
) -> tuple[bool, dict]:
    """Every object of the subcategory maps into s, by monos only."""
    for d in objs:
        hs = cat.hom(d, s)
        if not hs:
            return False, {"failing_object": d, "reason": "empty hom-set"}
        for f in hs:
            if not cat.is_mono(f):
                return False, {"failing_object": d, "non_mono": _mstr(f)}
    return True, {"objects_checked": len(list(objs))}


def hom_classes(
    cat: FiniteCategory, a: str, b: str
) -> tuple[tuple[Morphism, ...], ...]:
    """Partition hom(a,b) by right-composition with automorphisms of a.
    Classes are sorted by (and represented by) their least member."""
    auts = cat.aut(a)
    remaining = list(cat.hom(a, b))
    classes = []
    seen: set[Morphism] = set()
    for f in remaining:
        if f in seen:
            continue
        orbit = {cat.compose(f, alpha) for alpha in auts}
        seen |= orbit
        classes.append(tuple(sorted(orbit, key=lambda m: m.key)))
    classes.sort(key=lambda cls: cls[0].key)
    return tuple(classes)


def is_locally_finite(
    cat: FiniteCategory, s: str, objs: Sequence[str]
) -> tuple[bool, dict]:
    """Every pair of morphisms from the subcategory into s factors through
    a least subcategory object.

    For e: A -> s and f: B -> s we search (D, r, p, q) with r.p = e and
    r.q = f such that every other factorization (H, r', p', q') absorbs it
    via some connecting s: D -> H with r'.s = r, s.p = p', s.q = q'.
    """
    objs = list(objs)

    def factorizations(a, b, e, f):
        for d in objs:
            for r in cat.hom(d, s):
                for p in cat.hom(a, d):
                    if cat.compose(r, p) != e:
                        continue
                    for q in cat.hom(b, d):
                        if cat.compose(r, q) == f:
                            yield (d, r, p, q)

    pairs_checked = 0
    for a in objs:
        for b in objs:
            for e in cat.hom(a, s):
                for f in cat.hom(b, s):
                    pairs_checked += 1
                    all_facts = list(factorizations(a, b, e, f))
                    witness = None
                    for (d, r, p, q) in all_facts:
                        minimal = True
                        for (h, r2, p2, q2) in all_facts:
                            link = next(
                                (
                                    t
                                    for t in cat.hom(d, h)
                                    if cat.compose(r2, t) == r
                                    and cat.compose(t, p) == p2
                                    and cat.compose(t, q) == q2
                                ),
                                None,
                            )
                            if link is None:
                                minimal = False
                                break
                        if minimal:
                            witness = (d, r, p, q)
                            break
                    if witness is None:
                        return False, {
                            "failing_pair": {"e": _mstr(e), "f": _mstr(f)},
                            "factorizations_found": len(all_facts),
                        }
    return True, {"pairs_checked": pairs_checked}


def is_weakly_homogeneous_pair(
    cat: FiniteCategory, s: str, a: str, b: str
) -> tuple[bool, tuple[Morphism, Morphism] | None]:
    """Search for (f: a -> b, g: s -> s) with g.hom(a,s) inside hom(b,s).f;
    the returned witness is the least such pair."""
    hom_as = cat.hom(a, s)
    if cat.assume_mono and len(hom_as) > len(cat.hom(b, s)):
        # mono g keeps |g.hom(a,s)| = |hom(a,s)|, which cannot fit
        return False, None
    for f in cat.hom(a, b):
        target = frozenset(cat.compose(h, f) for h in cat.hom(b, s))
        for g in cat.hom(s, s):
            if all(cat.compose(g, u) in target for u in hom_as):
                return True, (f, g)
    return False, None


def is_weakly_homogeneous_for(
    cat: FiniteCategory, s: str, objs: Sequence[str]
) -> tuple[bool, dict | None]:
    """The subcategory form: every g: A -> s extends along every f: A -> B
    to some h: B -> s with h.f = g."""
    for a in objs:
        for b in objs:
            for f in cat.hom(a, b):
                for g in cat.hom(a, s):
                    if not any(cat.compose(h, f) == g for h in cat.hom(b, s)):
                        return False, {"f": _mstr(f), "g": _mstr(g)}
    return True, None


# ---------------------------------------------------------------------------
# Binary digraphs, diagrams, cocones

@dataclass(frozen=True)
class BinaryDigraph:
    """Bipartite digraph with all arrows bottom -> top and out-degree
    exactly 2 per bottom vertex (the two targets may coincide)."""

    top: tuple[str, ...]
    bottom: tuple[str, ...]
    arrows: tuple[tuple[str, str, str], ...]  # (bottom, first target, second target)

    def __post_init__(self):
        tops = set(self.top)
        sources = [a[0] for a in self.arrows]
        if len(set(self.top)) != len(self.top) or len(set(self.bottom)) != len(self.bottom):
            raise InputError("duplicate vertex names")
        if set(self.top) & set(self.bottom):
            raise InputError("top and bottom rows overlap")
        if sorted(sources) != sorted(self.bottom):
            raise InputError("every bottom vertex needs exactly one arrow record")
        for s, t1, t2 in self.arrows:
            if t1 not in tops or t2 not in tops:
                raise InputError(f"arrow targets of {s} are not top vertices")


def connected_components(delta: BinaryDigraph) -> tuple[tuple[str, ...], ...]:
    """Partition of the top row into walk-connected classes."""
    parent = {t: t for t in delta.top}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for _, t1, t2 in delta.arrows:
        r1, r2 = find(t1), find(t2)
        if r1 != r2:
            parent[r2] = r1
    groups: dict[str, list[str]] = {}
    for t in delta.top:
        groups.setdefault(find(t), []).append(t)
    return tuple(sorted(tuple(sorted(g)) for g in groups.values()))


@dataclass(frozen=True)
class Diagram:
    """A binary digraph labelled in a category: the bottom row maps to one
    object, the top row to another, and each arrow to a morphism between
    them."""

    shape: BinaryDigraph
    bottom_object: str
    top_object: str
    arrow_morphisms: tuple[tuple[str, Morphism, Morphism], ...]

    def __post_init__(self):
        recorded = {s: (m1, m2) for s, m1, m2 in self.arrow_morphisms}
        if set(recorded) != set(self.shape.bottom):
            raise InputError("arrow morphisms do not match the bottom row")
        for s, t1, t2 in self.shape.arrows:
            m1, m2 = recorded[s]
            for m in (m1, m2):
                if m.src != self.bottom_object or m.dst != self.top_object:
                    raise InputError(
                        f"arrow morphism {m} is not {self.bottom_object} -> {self.top_object}"
                    )

    def morphism_pairs(self) -> dict[str, tuple[Morphism, Morphism]]:
        return {s: (m1, m2) for s, m1, m2 in self.arrow_morphisms}


def has_commuting_cocone(
    cat: FiniteCategory,
    diagram: Diagram,
    tip: str,
    guard_limit: int | None = None,
) -> tuple[bool, dict[str, Morphism] | None]:
    """Exhaustive search for a family (e_t : top_object -> tip) such that
    for every bottom vertex with arrows into t1 and t2, e_t1 after the
    first arrow morphism equals e_t2 after the second."""
    legs = cat.hom(diagram.top_object, tip)
    tops = diagram.shape.top
    if not tops:
        return True, {}
    check_guard(len(legs) ** len(tops), "cocone families", guard_limit)
    pairs = diagram.morphism_pairs()
    targets = {s: (t1, t2) for s, t1, t2 in diagram.shape.arrows}
    for combo in itertools.product(legs, repeat=len(tops)):
        family = dict(zip(tops, combo))
        ok = True
        for s in diagram.shape.bottom:
            t1, t2 = targets[s]
            m1, m2 = pairs[s]
            if cat.compose(family[t1], m1) != cat.compose(family[t2], m2):
                ok = False
                break
        if ok:
            return True, family
    return False, None


# ---------------------------------------------------------------------------
# Reporting

def dump_report(cat: FiniteCategory) -> dict:
    """JSON-ready summary: objects, hom-set sizes, predicate results,
    witnesses as element maps."""
    preds = predicates(cat)
    return {
        "objects": list(cat.objects),
        "hom_sizes": {
            f"{a},{b}": len(cat.hom(a, b))
            for a in cat.objects
            for b in cat.objects
        },
        "automorphism_orders": {o: len(cat.aut(o)) for o in cat.objects},
        "predicates": preds,
    }
