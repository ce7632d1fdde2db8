"""Quantifier-free formulas over a relational signature, and reducts.

The AST has relational atoms, equality atoms, negation, conjunction,
disjunction, and a parity connective (true iff an odd number of its
members hold).  There are no quantifiers anywhere in the grammar, which
keeps the embedding-transport property sound by construction.

The parity connective accepts arbitrary quantifier-free subformulas, not
just atoms.  The edge-parity predicates (rho_n) need guarded members so
that assignments with repeated entries are evaluated on the induced
subgraph of the *set* of entries; see :func:`builtin`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .errors import InputError, ParseError
from .structures import (
    CHAIN_SIG,
    GRAPH_SIG,
    TOURNAMENT_SIG,
    Embedding,
    Signature,
    Structure,
    is_embedding,
)


class Formula:
    """Base class; nodes are immutable and hashable."""

    def free_arity(self) -> int:
        """1 + largest variable index used (0 for closed... never: atoms
        always mention variables, so this is the minimal arity that
        accommodates the formula)."""
        raise NotImplementedError


@dataclass(frozen=True)
class Atom(Formula):
    name: str
    vars: tuple[int, ...]

    def free_arity(self) -> int:
        return max(self.vars) + 1


@dataclass(frozen=True)
class Eq(Formula):
    left: int
    right: int

    def free_arity(self) -> int:
        return max(self.left, self.right) + 1


@dataclass(frozen=True)
class Not(Formula):
    inner: Formula

    def free_arity(self) -> int:
        return self.inner.free_arity()


@dataclass(frozen=True)
class And(Formula):
    parts: tuple[Formula, ...]

    def free_arity(self) -> int:
        return max(p.free_arity() for p in self.parts)


@dataclass(frozen=True)
class Or(Formula):
    parts: tuple[Formula, ...]

    def free_arity(self) -> int:
        return max(p.free_arity() for p in self.parts)


@dataclass(frozen=True)
class Parity(Formula):
    parts: tuple[Formula, ...]

    def free_arity(self) -> int:
        return max(p.free_arity() for p in self.parts)


def conj(*parts: Formula) -> Formula:
    return parts[0] if len(parts) == 1 else And(tuple(parts))


def disj(*parts: Formula) -> Formula:
    return parts[0] if len(parts) == 1 else Or(tuple(parts))


def _check_formula(phi: Formula, signature: Signature, arity: int) -> None:
    if isinstance(phi, Atom):
        if phi.name not in signature.arity:
            raise InputError(f"unknown relation symbol {phi.name!r}")
        want = signature.arity[phi.name]
        if len(phi.vars) != want:
            raise InputError(
                f"atom {phi.name} has {len(phi.vars)} arguments, arity is {want}"
            )
        for v in phi.vars:
            if not 0 <= v < arity:
                raise InputError(f"variable x{v} out of range for arity {arity}")
    elif isinstance(phi, Eq):
        for v in (phi.left, phi.right):
            if not 0 <= v < arity:
                raise InputError(f"variable x{v} out of range for arity {arity}")
    elif isinstance(phi, Not):
        _check_formula(phi.inner, signature, arity)
    elif isinstance(phi, (And, Or, Parity)):
        if not phi.parts:
            raise InputError("empty connective")
        for p in phi.parts:
            _check_formula(p, signature, arity)
    else:
        raise InputError(f"not a formula node: {phi!r}")


def evaluate(phi: Formula, a: Structure, assignment: Sequence[int]) -> bool:
    """Quantifier-free satisfaction; parity counts satisfied members mod 2."""
    point = tuple(int(x) for x in assignment)
    for x in point:
        if not 0 <= x < a.size:
            raise InputError(f"assignment element {x} out of range")
    return _eval(phi, a, point)


def _eval(phi: Formula, a: Structure, point: tuple[int, ...]) -> bool:
    if isinstance(phi, Atom):
        return tuple(point[v] for v in phi.vars) in a.rel[phi.name]
    if isinstance(phi, Eq):
        return point[phi.left] == point[phi.right]
    if isinstance(phi, Not):
        return not _eval(phi.inner, a, point)
    if isinstance(phi, And):
        return all(_eval(p, a, point) for p in phi.parts)
    if isinstance(phi, Or):
        return any(_eval(p, a, point) for p in phi.parts)
    if isinstance(phi, Parity):
        return sum(_eval(p, a, point) for p in phi.parts) % 2 == 1
    raise InputError(f"not a formula node: {phi!r}")


# ---------------------------------------------------------------------------
# Grammar:  or-level  := and-level ('|' and-level)*
#           and-level := unary ('&' unary)*
#           unary     := '!' unary | primary
#           primary   := '(' formula ')' | 'parity' '[' formula {',' formula} ']'
#                      | NAME '(' var {',' var} ')' | var '=' var | var NAME var

_FPUNCT = set("()[],!&|=")


def _ftokens(text: str) -> list[tuple[str, int, int]]:
    toks = []
    line, col, i = 1, 1, 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch.isspace():
            col += 1
            i += 1
        elif ch in _FPUNCT:
            toks.append((ch, line, col))
            col += 1
            i += 1
        else:
            start, l0, c0 = i, line, col
            while i < len(text) and not text[i].isspace() and text[i] not in _FPUNCT:
                i += 1
                col += 1
            toks.append((text[start:i], l0, c0))
    return toks


def _is_var(tok: str) -> bool:
    return len(tok) > 1 and tok[0] == "x" and tok[1:].isdigit()


class _FParser:
    def __init__(self, text: str):
        self.toks = _ftokens(text)
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self, expect: str | None = None):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of formula", 1, 1)
        if expect is not None and tok[0] != expect:
            raise ParseError(f"expected {expect!r}, found {tok[0]!r}", tok[1], tok[2])
        self.pos += 1
        return tok

    def parse(self) -> Formula:
        phi = self.or_level()
        tok = self.peek()
        if tok is not None:
            raise ParseError(f"unexpected token {tok[0]!r}", tok[1], tok[2])
        return phi

    def or_level(self) -> Formula:
        parts = [self.and_level()]
        while self.peek() is not None and self.peek()[0] == "|":
            self.take()
            parts.append(self.and_level())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def and_level(self) -> Formula:
        parts = [self.unary()]
        while self.peek() is not None and self.peek()[0] == "&":
            self.take()
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self) -> Formula:
        tok = self.peek()
        if tok is not None and tok[0] == "!":
            self.take()
            return Not(self.unary())
        return self.primary()

    def primary(self) -> Formula:
        tok = self.take()
        if tok[0] == "(":
            phi = self.or_level()
            self.take(")")
            return phi
        if tok[0] == "parity":
            self.take("[")
            parts = [self.or_level()]
            while self.peek() is not None and self.peek()[0] == ",":
                self.take()
                parts.append(self.or_level())
            self.take("]")
            return Parity(tuple(parts))
        if _is_var(tok[0]):
            left = int(tok[0][1:])
            op = self.take()
            if op[0] == "=":
                right = self.take()
                if not _is_var(right[0]):
                    raise ParseError(
                        f"expected a variable, found {right[0]!r}", right[1], right[2]
                    )
                return Eq(left, int(right[0][1:]))
            # infix sugar: xI NAME xJ
            if op[0] in _FPUNCT:
                raise ParseError(f"expected a relation symbol, found {op[0]!r}", op[1], op[2])
            right = self.take()
            if not _is_var(right[0]):
                raise ParseError(
                    f"expected a variable, found {right[0]!r}", right[1], right[2]
                )
            return Atom(op[0], (left, int(right[0][1:])))
        # prefix atom: NAME ( vars )
        name = tok[0]
        if name in _FPUNCT or name == "parity":
            raise ParseError(f"unexpected token {name!r}", tok[1], tok[2])
        self.take("(")
        vars_ = []
        while True:
            v = self.take()
            if not _is_var(v[0]):
                raise ParseError(f"expected a variable, found {v[0]!r}", v[1], v[2])
            vars_.append(int(v[0][1:]))
            nxt = self.take()
            if nxt[0] == ")":
                break
            if nxt[0] != ",":
                raise ParseError(f"expected ',' or ')', found {nxt[0]!r}", nxt[1], nxt[2])
        return Atom(name, tuple(vars_))


def parse_formula(text: str, signature: Signature, arity: int) -> Formula:
    phi = _FParser(text).parse()
    _check_formula(phi, signature, arity)
    return phi


def format_formula(phi: Formula) -> str:
    """Pretty-printer; parse_formula(format_formula(phi), ...) == phi."""
    return _fmt(phi, 0)


def _fmt(phi: Formula, level: int) -> str:
    # level: 0 = or-context, 1 = and-context, 2 = unary-context
    if isinstance(phi, Atom):
        if len(phi.vars) == 2 and not phi.name[0].isalnum():
            return f"x{phi.vars[0]} {phi.name} x{phi.vars[1]}"
        return f"{phi.name}({','.join('x%d' % v for v in phi.vars)})"
    if isinstance(phi, Eq):
        return f"x{phi.left} = x{phi.right}"
    if isinstance(phi, Not):
        return "!" + _fmt(phi.inner, 2)
    if isinstance(phi, Parity):
        return "parity[" + ", ".join(_fmt(p, 0) for p in phi.parts) + "]"
    if isinstance(phi, And):
        s = " & ".join(_fmt(p, 2) for p in phi.parts)
        return f"({s})" if level >= 2 else s
    if isinstance(phi, Or):
        s = " | ".join(_fmt(p, 1) for p in phi.parts)
        return f"({s})" if level >= 1 else s
    raise InputError(f"not a formula node: {phi!r}")


# ---------------------------------------------------------------------------
# Reduct specifications

@dataclass(frozen=True)
class ReductSpec:
    """A family of defining formulas, one per new relation symbol."""

    source: Signature
    target: Signature
    formulas: tuple[tuple[str, Formula], ...]

    def __post_init__(self):
        target_arity = self.target.arity
        names = [n for n, _ in self.formulas]
        if sorted(names) != sorted(target_arity):
            raise InputError("formulas do not match the target signature")
        clash = set(self.source.arity) & set(target_arity)
        if clash:
            raise InputError(f"source/target symbol names overlap: {sorted(clash)}")
        for name, phi in self.formulas:
            _check_formula(phi, self.source, target_arity[name])

    @staticmethod
    def make(source: Signature, lines: Sequence[tuple[str, int, Formula]]) -> "ReductSpec":
        target = Signature(tuple((n, a) for n, a, _ in lines), ())
        return ReductSpec(source, target, tuple((n, phi) for n, _, phi in lines))


def apply_reduct(spec: ReductSpec, a: Structure) -> Structure:
    """Interpret each target symbol as the set of tuples satisfying its
    defining formula; same universe."""
    if a.signature != spec.source:
        raise InputError("structure signature differs from the reduct source")
    rels = {}
    for name, phi in spec.formulas:
        r = spec.target.arity[name]
        rels[name] = [
            t for t in itertools.product(range(a.size), repeat=r)
            if _eval(phi, a, t)
        ]
    return Structure.make(spec.target, a.size, rels, {})


def check_embedding_transport(
    spec: ReductSpec, a_star: Structure, b_star: Structure, f: Embedding
) -> bool:
    """Whether an embedding of the source structures is also an embedding
    of their reducts.  For quantifier-free defining formulas this is always
    true, so a False return indicates a bug in the evaluator."""
    if not is_embedding(f.map, a_star, b_star):
        raise InputError("map is not an embedding of the source structures")
    return is_embedding(f.map, apply_reduct(spec, a_star), apply_reduct(spec, b_star))


def parse_reduct_spec(text: str, source: Signature) -> ReductSpec:
    """Reduct files: one 'NAME/ARITY := formula' line per target symbol.
    Blank lines and lines starting with '#' are ignored."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ":=" not in line:
            raise ParseError("expected 'NAME/ARITY := formula'", lineno, 1)
        head, body = line.split(":=", 1)
        head = head.strip()
        if "/" not in head:
            raise ParseError("expected 'NAME/ARITY' before ':='", lineno, 1)
        name, arity_text = head.rsplit("/", 1)
        name = name.strip()
        if not arity_text.strip().isdigit():
            raise ParseError(f"bad arity {arity_text.strip()!r}", lineno, 1)
        arity = int(arity_text)
        phi = parse_formula(body, source, arity)
        lines.append((name, arity, phi))
    if not lines:
        raise InputError("reduct file defines no relations")
    return ReductSpec.make(source, lines)


# ---------------------------------------------------------------------------
# The named reduct formulas

def _lt(i: int, j: int) -> Formula:
    return Atom("<", (i, j))


def _arc(i: int, j: int) -> Formula:
    return Atom("->", (i, j))


def _cyc3(x: int, y: int, z: int) -> Formula:
    # x < y < z  or  y < z < x  or  z < x < y
    return disj(
        conj(_lt(x, y), _lt(y, z)),
        conj(_lt(y, z), _lt(z, x)),
        conj(_lt(z, x), _lt(x, y)),
    )


def _tc(x: int, y: int, z: int) -> Formula:
    # directed 3-cycle through x, y, z
    return conj(_arc(x, y), _arc(y, z), _arc(z, x))


def _td(x: int, y: int, z: int) -> Formula:
    # transitive triple with source x and sink z
    return conj(_arc(x, y), _arc(y, z), _arc(x, z))


def _pair_guard(pairs: list[tuple[int, int]], idx: int, ordered: bool) -> Formula | None:
    """Conjunction saying that pair #idx is the first occurrence of its
    element pair among `pairs` (as an ordered pair, or as an unordered set)."""
    i, j = pairs[idx]
    guards = []
    for i2, j2 in pairs[:idx]:
        same = conj(Eq(i2, i), Eq(j2, j))
        if not ordered:
            same = disj(same, conj(Eq(i2, j), Eq(j2, i)))
        guards.append(Not(same))
    return conj(*guards) if guards else None


def _rho(n: int) -> Formula:
    """Odd number of undirected edges in the subgraph induced by the *set*
    of entries.  Each unordered element pair is counted once: the parity
    member for index pair (i,j) is guarded to fire only on the first
    occurrence of that element pair, and only when the entries differ."""
    pairs = list(itertools.combinations(range(n), 2))
    members = []
    for idx, (i, j) in enumerate(pairs):
        part = [Atom("E", (i, j)), Not(Eq(i, j))]
        guard = _pair_guard(pairs, idx, ordered=False)
        if guard is not None:
            part.append(guard)
        members.append(conj(*part))
    return Parity(tuple(members))


def _sep_prime() -> Formula:
    """Even number of arcs from the set {x0,x1} into the set {x2,x3};
    ordered element pairs are counted once via first-occurrence guards."""
    pairs = [(0, 2), (0, 3), (1, 2), (1, 3)]
    members = []
    for idx, (i, j) in enumerate(pairs):
        part = [Atom("->", (i, j))]
        guard = _pair_guard(pairs, idx, ordered=True)
        if guard is not None:
            part.append(guard)
        members.append(conj(*part))
    return Not(Parity(tuple(members)))


@dataclass(frozen=True)
class BuiltinReduct:
    name: str
    arity: int
    source: Signature
    formula: Formula


def builtin(name: str) -> BuiltinReduct:
    """The named reduct formulas: Betw, Cyc, Sep over a linear order;
    rho_n over graphs; Betw', Cyc', Sep' over tournaments."""
    key = name.strip()
    if key == "Betw":
        phi = disj(conj(_lt(0, 1), _lt(1, 2)), conj(_lt(2, 1), _lt(1, 0)))
        return BuiltinReduct("Betw", 3, CHAIN_SIG, phi)
    if key == "Cyc":
        return BuiltinReduct("Cyc", 3, CHAIN_SIG, _cyc3(0, 1, 2))
    if key == "Sep":
        phi = disj(
            conj(_cyc3(0, 1, 2), _cyc3(0, 3, 1)),
            conj(_cyc3(0, 2, 1), _cyc3(0, 1, 3)),
        )
        return BuiltinReduct("Sep", 4, CHAIN_SIG, phi)
    if key.startswith("rho_"):
        tail = key[4:]
        if not tail.isdigit() or int(tail) < 2:
            raise InputError(f"bad edge-parity arity in {name!r}")
        n = int(tail)
        return BuiltinReduct(key, n, GRAPH_SIG, _rho(n))
    if key == "Betw'":
        phi = disj(_tc(0, 1, 2), _tc(2, 1, 0))
        return BuiltinReduct("Betw'", 3, TOURNAMENT_SIG, phi)
    if key == "Cyc'":
        phi = disj(_tc(0, 1, 2), _td(0, 2, 1), _td(1, 0, 2), _td(2, 1, 0))
        return BuiltinReduct("Cyc'", 3, TOURNAMENT_SIG, phi)
    if key == "Sep'":
        return BuiltinReduct("Sep'", 4, TOURNAMENT_SIG, _sep_prime())
    raise InputError(f"unknown builtin reduct {name!r}")


def builtin_reduct_spec(names: Sequence[str]) -> ReductSpec:
    """A ReductSpec combining several builtins over one source signature."""
    if not names:
        raise InputError("no builtin names given")
    parts = [builtin(n) for n in names]
    sources = {p.source for p in parts}
    if len(sources) > 1:
        raise InputError("builtins mix different source signatures")
    return ReductSpec.make(parts[0].source, [(p.name, p.arity, p.formula) for p in parts])


def trivial_reduct_spec(source: Signature) -> ReductSpec:
    """The empty family: the reduct is the bare universe."""
    return ReductSpec(source, Signature((), ()), ())
