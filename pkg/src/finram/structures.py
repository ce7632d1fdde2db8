"""Finite relational structures, embeddings, and the structure file format.

The universe of a structure of size n is always 0..n-1.  Relations are
stored as explicit sets of ordered tuples (symmetric relations such as
graph edges carry both orientations), constants as distinguished
elements.  An embedding is an injective map that preserves and reflects
every relation tuple-wise and sends constants to constants.

All enumeration contracts are stated against the lexicographic order of
the map viewed as a tuple, so outputs are reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import InputError, ParseError, SignatureMismatch


@dataclass(frozen=True)
class Signature:
    """Relation symbols with arities plus constant symbols.

    Symbol names must be unique across both lists; arities are >= 1.
    """

    relations: tuple[tuple[str, int], ...] = ()
    constants: tuple[str, ...] = ()

    def __post_init__(self):
        rels = tuple(sorted((str(n), int(a)) for n, a in self.relations))
        consts = tuple(sorted(str(c) for c in self.constants))
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "constants", consts)
        names = [n for n, _ in rels] + list(consts)
        if len(set(names)) != len(names):
            raise InputError(f"duplicate symbol names in signature: {names}")
        for n, a in rels:
            if a < 1:
                raise InputError(f"relation {n} has non-positive arity {a}")

    @cached_property
    def arity(self) -> dict[str, int]:
        return dict(self.relations)

    def relation_names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.relations)


@dataclass(frozen=True)
class Structure:
    """A finite structure: universe 0..size-1 with interpreted symbols."""

    signature: Signature
    size: int
    relations: tuple[tuple[str, tuple[tuple[int, ...], ...]], ...]
    constants: tuple[tuple[str, int], ...] = ()

    @staticmethod
    def make(
        signature: Signature,
        size: int,
        relations: Mapping[str, Iterable[Sequence[int]]] | None = None,
        constants: Mapping[str, int] | None = None,
    ) -> "Structure":
        relations = dict(relations or {})
        constants = dict(constants or {})
        rel_field = []
        for name, _ in signature.relations:
            tuples = sorted({tuple(int(x) for x in t) for t in relations.pop(name, ())})
            rel_field.append((name, tuple(tuples)))
        if relations:
            raise InputError(f"undeclared relation symbols: {sorted(relations)}")
        const_field = []
        for name in signature.constants:
            if name not in constants:
                raise InputError(f"constant {name} not assigned")
            const_field.append((name, int(constants.pop(name))))
        if constants:
            raise InputError(f"undeclared constant symbols: {sorted(constants)}")
        return Structure(signature, size, tuple(rel_field), tuple(const_field))

    def __post_init__(self):
        if self.size < 0:
            raise InputError(f"negative size {self.size}")
        arity = self.signature.arity
        seen = set()
        for name, tuples in self.relations:
            if name not in arity:
                raise InputError(f"undeclared relation symbol {name}")
            seen.add(name)
            for t in tuples:
                if len(t) != arity[name]:
                    raise InputError(
                        f"tuple {t} has length {len(t)}, but {name} has arity {arity[name]}"
                    )
                for x in t:
                    if not 0 <= x < self.size:
                        raise InputError(f"element {x} out of range in {name}{t}")
        if seen != set(arity):
            raise InputError("relation interpretations do not match the signature")
        const_names = set()
        for name, v in self.constants:
            const_names.add(name)
            if not 0 <= v < self.size:
                raise InputError(f"constant {name} = {v} out of range")
        if const_names != set(self.signature.constants):
            raise InputError("constant interpretations do not match the signature")

    @cached_property
    def rel(self) -> dict[str, frozenset[tuple[int, ...]]]:
        return {name: frozenset(tuples) for name, tuples in self.relations}

    @cached_property
    def const(self) -> dict[str, int]:
        return dict(self.constants)

    @cached_property
    def _degree(self) -> tuple[int, ...]:
        deg = [0] * self.size
        for _, tuples in self.relations:
            for t in tuples:
                for x in set(t):
                    deg[x] += 1
        return tuple(deg)

    def universe(self) -> range:
        return range(self.size)


@dataclass(frozen=True)
class Embedding:
    """An injective, relation-preserving and -reflecting map between structures."""

    dom: Structure
    cod: Structure
    map: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.map[x]

    def apply(self, t: Sequence[int]) -> tuple[int, ...]:
        return tuple(self.map[x] for x in t)

    @property
    def is_identity(self) -> bool:
        return self.dom == self.cod and self.map == tuple(range(self.dom.size))


def identity_embedding(a: Structure) -> Embedding:
    return Embedding(a, a, tuple(range(a.size)))


def compose(g: Embedding, f: Embedding) -> Embedding:
    """g after f, i.e. (g . f)(x) = g(f(x))."""
    if f.cod != g.dom:
        raise InputError("embeddings not composable: codomain/domain mismatch")
    return Embedding(f.dom, g.cod, tuple(g.map[x] for x in f.map))


def is_embedding(map_: Sequence[int], a: Structure, b: Structure) -> bool:
    """Decide whether the total map 0..|a|-1 -> 0..|b|-1 is an embedding."""
    if a.signature != b.signature:
        raise SignatureMismatch(
            f"signatures differ: {a.signature} vs {b.signature}"
        )
    m = tuple(map_)
    if len(m) != a.size:
        raise InputError(f"map has {len(m)} entries, structure has size {a.size}")
    if any(not 0 <= x < b.size for x in m):
        return False
    if len(set(m)) != len(m):
        return False
    for name, v in a.constants:
        if m[v] != b.const[name]:
            return False
    image = set(m)
    inverse = {x: i for i, x in enumerate(m)}
    for name, tuples in a.relations:
        brel = b.rel[name]
        for t in tuples:
            if tuple(m[x] for x in t) not in brel:
                return False
        for t in b.rel[name]:
            if all(x in image for x in t):
                if tuple(inverse[x] for x in t) not in a.rel[name]:
                    return False
    return True


def enumerate_embeddings(a: Structure, b: Structure) -> list[Embedding]:
    """All embeddings a -> b, sorted lexicographically by map tuple.

    Backtracking assigns domain vertices in order of decreasing relational
    degree (a standard pruning heuristic); the output set and its order do
    not depend on that choice.
    """
    if a.signature != b.signature:
        raise SignatureMismatch(
            f"signatures differ: {a.signature} vs {b.signature}"
        )
    if a.size > b.size:
        return []
    order = sorted(a.universe(), key=lambda v: (-a._degree[v], v))
    pos = {v: i for i, v in enumerate(order)}
    forced = {}
    for name, v in a.constants:
        forced[v] = b.const[name]
    # tuples grouped by the latest-assigned vertex they mention
    tuple_checks: list[list[tuple[str, tuple[int, ...]]]] = [[] for _ in order]
    for name, tuples in a.relations:
        for t in tuples:
            last = max(pos[x] for x in t) if t else 0
            tuple_checks[last].append((name, t))

    out: list[tuple[int, ...]] = []
    assignment: dict[int, int] = {}
    used = [False] * b.size
    reserved = set(forced.values())

    def backtrack(i: int) -> None:
        if i == len(order):
            m = tuple(assignment[v] for v in a.universe())
            if is_embedding(m, a, b):
                out.append(m)
            return
        v = order[i]
        candidates = (
            [forced[v]] if v in forced else
            [c for c in b.universe() if not used[c] and c not in reserved]
        )
        for c in candidates:
            if used[c]:
                continue
            assignment[v] = c
            used[c] = True
            ok = True
            for name, t in tuple_checks[i]:
                if tuple(assignment[x] for x in t) not in b.rel[name]:
                    ok = False
                    break
            if ok:
                backtrack(i + 1)
            used[c] = False
            del assignment[v]

    backtrack(0)
    return [Embedding(a, b, m) for m in sorted(out)]


def automorphism_group(a: Structure) -> list[Embedding]:
    """All automorphisms of a (every self-embedding of a finite structure
    is bijective and its inverse is again an embedding)."""
    return enumerate_embeddings(a, a)


def induced_substructure(a: Structure, subset: Iterable[int]) -> Structure:
    """The substructure induced on the given elements, relabeled to 0..k-1
    preserving numeric order."""
    sub = sorted(set(int(x) for x in subset))
    for x in sub:
        if not 0 <= x < a.size:
            raise InputError(f"element {x} not in the universe")
    relabel = {x: i for i, x in enumerate(sub)}
    keep = set(sub)
    rels = {
        name: [tuple(relabel[x] for x in t) for t in tuples if set(t) <= keep]
        for name, tuples in a.relations
    }
    consts = {}
    for name, v in a.constants:
        if v not in keep:
            raise InputError(f"constant {name} = {v} outside the chosen subset")
        consts[name] = relabel[v]
    return Structure.make(a.signature, len(sub), rels, consts)


def inclusion_embedding(a: Structure, subset: Iterable[int]) -> Embedding:
    sub = sorted(set(int(x) for x in subset))
    return Embedding(induced_substructure(a, sub), a, tuple(sub))


def are_isomorphic(a: Structure, b: Structure) -> tuple[bool, Embedding | None]:
    """Isomorphism test with a witness (a bijective embedding) when true."""
    if a.signature != b.signature:
        raise SignatureMismatch(
            f"signatures differ: {a.signature} vs {b.signature}"
        )
    if a.size != b.size:
        return False, None
    embs = enumerate_embeddings(a, b)
    if not embs:
        return False, None
    return True, embs[0]


def encode_constants(a: Structure) -> tuple[Structure, dict[str, int]]:
    """Strip the constants from a structure, returning the constant-free
    structure together with the renaming table constant -> element.

    Pairing the stripped structure with its table keeps isomorphism types
    that differ only in constants distinguishable; embeddings between
    constant-carrying structures are exactly the table-preserving
    embeddings between the stripped ones (see
    :func:`constant_preserving_embeddings`).
    """
    if not a.signature.constants:
        raise InputError("structure has no constants to encode")
    sig = Signature(a.signature.relations, ())
    stripped = Structure.make(sig, a.size, dict(a.relations), {})
    return stripped, dict(a.constants)


def constant_preserving_embeddings(
    a: Structure,
    table_a: Mapping[str, int],
    b: Structure,
    table_b: Mapping[str, int],
) -> list[Embedding]:
    """Embeddings of the stripped structures that respect the tables."""
    if set(table_a) != set(table_b):
        raise InputError("renaming tables name different constants")
    return [
        e
        for e in enumerate_embeddings(a, b)
        if all(e.map[table_a[c]] == table_b[c] for c in table_a)
    ]


# ---------------------------------------------------------------------------
# Named building blocks

CHAIN_SIG = Signature((("<", 2),))
GRAPH_SIG = Signature((("E", 2),))
TOURNAMENT_SIG = Signature((("->", 2),))
ORDERED_GRAPH_SIG = Signature((("E", 2), ("<", 2)))


def chain(n: int) -> Structure:
    lt = [(i, j) for i in range(n) for j in range(n) if i < j]
    return Structure.make(CHAIN_SIG, n, {"<": lt})


def clique(n: int) -> Structure:
    e = [(i, j) for i in range(n) for j in range(n) if i != j]
    return Structure.make(GRAPH_SIG, n, {"E": e})


def empty_graph(n: int) -> Structure:
    return Structure.make(GRAPH_SIG, n, {"E": []})


def graph_from_edges(n: int, edges: Iterable[tuple[int, int]]) -> Structure:
    e = set()
    for u, v in edges:
        if u == v:
            raise InputError(f"loop ({u},{v}) not allowed in a graph")
        e.add((u, v))
        e.add((v, u))
    return Structure.make(GRAPH_SIG, n, {"E": sorted(e)})


def path_graph(n: int) -> Structure:
    return graph_from_edges(n, [(i, i + 1) for i in range(n - 1)])


def tournament_cycle() -> Structure:
    return Structure.make(TOURNAMENT_SIG, 3, {"->": [(0, 1), (1, 2), (2, 0)]})


def tournament_from_arcs(n: int, arcs: Iterable[tuple[int, int]]) -> Structure:
    a = {tuple(x) for x in arcs}
    for i, j in itertools.combinations(range(n), 2):
        if ((i, j) in a) == ((j, i) in a):
            raise InputError(f"tournament needs exactly one arc between {i} and {j}")
    return Structure.make(TOURNAMENT_SIG, n, {"->": sorted(a)})


def is_linear_order(a: Structure, name: str = "<") -> bool:
    if name not in a.rel:
        return False
    lt = a.rel[name]
    for i in range(a.size):
        if (i, i) in lt:
            return False
        for j in range(a.size):
            if i != j and ((i, j) in lt) == ((j, i) in lt):
                return False
    for i, j, k in itertools.product(range(a.size), repeat=3):
        if (i, j) in lt and (j, k) in lt and (i, k) not in lt:
            return False
    return True


def is_chain(a: Structure) -> bool:
    """A chain: exactly one binary relation interpreting a strict linear order."""
    return (
        a.signature.relations == (("<", 2),)
        and not a.signature.constants
        and is_linear_order(a)
    )


# ---------------------------------------------------------------------------
# Parser and serializer

_PUNCT = set(";:=(),")
_KEYWORDS = {"signature", "universe", "rel", "const"}
_SHORTHANDS = {"chain", "clique", "emptygraph", "tournament-cycle"}


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.i = 0
        self.line = 1
        self.col = 1
        self.tokens: list[tuple[str, int, int]] = []
        self._scan()
        self.pos = 0

    def _scan(self):
        while self.i < len(self.text):
            ch = self.text[self.i]
            if ch == "\n":
                self.i += 1
                self.line += 1
                self.col = 1
            elif ch.isspace():
                self.i += 1
                self.col += 1
            elif ch in _PUNCT:
                self.tokens.append((ch, self.line, self.col))
                self.i += 1
                self.col += 1
            else:
                start, line, col = self.i, self.line, self.col
                while (
                    self.i < len(self.text)
                    and not self.text[self.i].isspace()
                    and self.text[self.i] not in _PUNCT
                ):
                    self.i += 1
                    self.col += 1
                self.tokens.append((self.text[start : self.i], line, col))

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self, expect: str | None = None) -> tuple[str, int, int]:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.line, self.col)
        if expect is not None and tok[0] != expect:
            raise ParseError(f"expected {expect!r}, found {tok[0]!r}", tok[1], tok[2])
        self.pos += 1
        return tok

    def next_nat(self) -> int:
        tok = self.next()
        if not tok[0].isdigit():
            raise ParseError(f"expected a number, found {tok[0]!r}", tok[1], tok[2])
        return int(tok[0])

    def next_name(self) -> tuple[str, int, int]:
        tok = self.next()
        if tok[0] in _KEYWORDS or tok[0].isdigit() or tok[0] in _PUNCT:
            raise ParseError(f"expected a symbol name, found {tok[0]!r}", tok[1], tok[2])
        return tok


def _parse_shorthand(tokens: list[str]) -> Structure | None:
    if len(tokens) != 2 or tokens[0] not in _SHORTHANDS:
        return None
    kind, arg = tokens
    if not arg.isdigit():
        raise InputError(f"shorthand {kind!r} needs a numeric size, got {arg!r}")
    n = int(arg)
    if kind == "chain":
        return chain(n)
    if kind == "clique":
        return clique(n)
    if kind == "emptygraph":
        return empty_graph(n)
    if n != 3:
        raise InputError("tournament-cycle is only defined for size 3")
    return tournament_cycle()


def parse_structure(text: str) -> Structure:
    """Parse a structure file (or one of the shorthands chain N, clique N,
    emptygraph N, tournament-cycle 3)."""
    words = text.split()
    if words and words[0] in _SHORTHANDS:
        s = _parse_shorthand(words)
        if s is not None:
            return s
    tz = _Tokenizer(text)
    tz.next("signature")
    rels: list[tuple[str, int]] = []
    consts: list[str] = []
    while True:
        tok = tz.peek()
        if tok is None:
            raise ParseError("expected 'universe'", tz.line, tz.col)
        if tok[0] == "universe":
            tz.next()
            break
        if tok[0] == "rel":
            tz.next()
            name = tz.next_name()[0]
            arity = tz.next_nat()
            tz.next(";")
            rels.append((name, arity))
        elif tok[0] == "const":
            tz.next()
            name = tz.next_name()[0]
            tz.next(";")
            consts.append(name)
        else:
            raise ParseError(
                f"expected 'rel', 'const' or 'universe', found {tok[0]!r}",
                tok[1], tok[2],
            )
    try:
        sig = Signature(tuple(rels), tuple(consts))
    except InputError as e:
        raise ParseError(str(e), tz.line, tz.col) from None
    size = tz.next_nat()
    arity = sig.arity
    rel_interp: dict[str, list[tuple[int, ...]]] = {}
    const_interp: dict[str, int] = {}
    while tz.peek() is not None:
        name_tok = tz.next_name()
        name = name_tok[0]
        sep = tz.next()
        if sep[0] == ":":
            if name not in arity:
                raise ParseError(f"unknown relation symbol {name!r}", *name_tok[1:])
            if name in rel_interp:
                raise ParseError(f"duplicate block for relation {name!r}", *name_tok[1:])
            tuples: list[tuple[int, ...]] = []
            while True:
                tok = tz.peek()
                if tok is None:
                    raise ParseError("expected ';'", tz.line, tz.col)
                if tok[0] == ";":
                    tz.next()
                    break
                open_tok = tz.next("(")
                entries = []
                while True:
                    entries.append(tz.next_nat())
                    tok2 = tz.next()
                    if tok2[0] == ")":
                        break
                    if tok2[0] != ",":
                        raise ParseError(
                            f"expected ',' or ')', found {tok2[0]!r}", tok2[1], tok2[2]
                        )
                if len(entries) != arity[name]:
                    raise ParseError(
                        f"tuple of length {len(entries)} for {name!r} of arity {arity[name]}",
                        open_tok[1], open_tok[2],
                    )
                for x in entries:
                    if x >= size:
                        raise ParseError(
                            f"element {x} out of range for universe of size {size}",
                            open_tok[1], open_tok[2],
                        )
                tuples.append(tuple(entries))
            rel_interp[name] = tuples
        elif sep[0] == "=":
            if name not in sig.constants:
                raise ParseError(f"unknown constant symbol {name!r}", *name_tok[1:])
            if name in const_interp:
                raise ParseError(f"duplicate assignment for constant {name!r}", *name_tok[1:])
            v = tz.next_nat()
            if v >= size:
                raise ParseError(
                    f"constant {name} = {v} out of range for universe of size {size}",
                    *name_tok[1:],
                )
            const_interp[name] = v
            tz.next(";")
        else:
            raise ParseError(f"expected ':' or '=', found {sep[0]!r}", sep[1], sep[2])
    try:
        return Structure.make(sig, size, rel_interp, const_interp)
    except InputError as e:
        raise ParseError(str(e), tz.line, tz.col) from None


def serialize_structure(a: Structure) -> str:
    """Canonical text form: relations sorted by name, tuples lexicographic.
    Round-trips byte-stably through :func:`parse_structure`."""
    head = ["signature"]
    for name, arity in a.signature.relations:
        head.append(f"rel {name} {arity} ;")
    for name in a.signature.constants:
        head.append(f"const {name} ;")
    lines = [" ".join(head), f"universe {a.size}"]
    for name, tuples in a.relations:
        parts = [name, ":"]
        parts.extend("(" + ",".join(str(x) for x in t) + ")" for t in tuples)
        parts.append(";")
        lines.append(" ".join(parts))
    for name, v in a.constants:
        lines.append(f"{name} = {v} ;")
    return "\n".join(lines) + "\n"
