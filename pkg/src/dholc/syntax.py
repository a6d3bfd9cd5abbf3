"""Abstract syntax for DHOL/HOL terms, types, declarations and theories.

Terms and types are immutable trees.  Types embed terms (arguments of applied
base types), so substitution, free variables and alpha-equivalence are defined
mutually on both.  Derived connectives (negation, truth, conjunction,
disjunction, existentials, disequality) are construction-time sugar: the trees
only ever store the core nodes.

Source positions are carried on every node for diagnostics but are excluded
from equality and hashing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Union


@dataclass(frozen=True, slots=True)
class Pos:
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


class Term:
    """Base class of the term union."""

    __slots__ = ()


class Type:
    """Base class of the type union."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Var(Term):
    name: str
    pos: Optional[Pos] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Lambda(Term):
    bound: str
    annot: Type
    body: Term
    pos: Optional[Pos] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class App(Term):
    fun: Term
    arg: Term
    pos: Optional[Pos] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Falsum(Term):
    pos: Optional[Pos] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Implies(Term):
    lhs: Term
    rhs: Term
    pos: Optional[Pos] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Eq(Term):
    # ty is None between parsing and kernel elaboration; erasure requires it.
    ty: Optional[Type]
    lhs: Term
    rhs: Term
    pos: Optional[Pos] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Forall(Term):
    bound: str
    annot: Type
    body: Term
    pos: Optional[Pos] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Choice(Term):
    bound: str
    annot: Type
    body: Term
    pos: Optional[Pos] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Bool(Type):
    pos: Optional[Pos] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Base(Type):
    name: str
    args: tuple[Term, ...] = ()
    pos: Optional[Pos] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Pi(Type):
    bound: str
    domain: Type
    codomain: Type
    pos: Optional[Pos] = field(default=None, compare=False, repr=False)


BOOL = Bool()
FALSE = Falsum()


# ---------------------------------------------------------------------------
# Declarations / theories / contexts


@dataclass(frozen=True, slots=True)
class BaseTypeDecl:
    name: str
    telescope: tuple[tuple[str, Type], ...] = ()
    pos: Optional[Pos] = field(default=None, compare=False, repr=False)

    @property
    def arity(self) -> int:
        return len(self.telescope)


@dataclass(frozen=True, slots=True)
class ConstDecl:
    name: str
    ty: Type
    pos: Optional[Pos] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class AxiomDecl:
    label: str
    term: Term
    pos: Optional[Pos] = field(default=None, compare=False, repr=False)


Declaration = Union[BaseTypeDecl, ConstDecl, AxiomDecl]


@dataclass(frozen=True, slots=True)
class Theory:
    decls: tuple[Declaration, ...] = ()

    def __iter__(self) -> Iterator[Declaration]:
        return iter(self.decls)

    def __len__(self) -> int:
        return len(self.decls)

    def extended(self, *decls: Declaration) -> "Theory":
        return Theory(self.decls + decls)

    def base_type(self, name: str) -> Optional[BaseTypeDecl]:
        for d in self.decls:
            if isinstance(d, BaseTypeDecl) and d.name == name:
                return d
        return None

    def const(self, name: str) -> Optional[ConstDecl]:
        for d in self.decls:
            if isinstance(d, ConstDecl) and d.name == name:
                return d
        return None


@dataclass(frozen=True, slots=True)
class Context:
    """Like a theory but may not declare base types."""

    decls: tuple[Declaration, ...] = ()

    def __post_init__(self):
        for d in self.decls:
            if isinstance(d, BaseTypeDecl):
                raise ValueError("contexts may not declare base types")

    def __iter__(self) -> Iterator[Declaration]:
        return iter(self.decls)

    def __len__(self) -> int:
        return len(self.decls)

    def extended(self, *decls: Declaration) -> "Context":
        return Context(self.decls + decls)

    def const(self, name: str) -> Optional[ConstDecl]:
        for d in self.decls:
            if isinstance(d, ConstDecl) and d.name == name:
                return d
        return None


EMPTY_THEORY = Theory()
EMPTY_CONTEXT = Context()


# ---------------------------------------------------------------------------
# Derived connectives (sugar), expanded at construction


def neg(t: Term) -> Term:
    return Implies(t, FALSE)


def top() -> Term:
    return neg(FALSE)


def conj(a: Term, b: Term) -> Term:
    return neg(Implies(a, neg(b)))


def disj(a: Term, b: Term) -> Term:
    return Implies(neg(a), b)


def exists(bound: str, annot: Type, body: Term) -> Term:
    return neg(Forall(bound, annot, neg(body)))


def neq(ty: Optional[Type], lhs: Term, rhs: Term) -> Term:
    return neg(Eq(ty, lhs, rhs))


def apply(fun: Term, *args: Term) -> Term:
    for a in args:
        fun = App(fun, a)
    return fun


def arrow(domain: Type, codomain: Type, bound: str = "_") -> Pi:
    """Non-dependent function type: Pi whose bound name is unused."""
    return Pi(bound, domain, codomain)


# ---------------------------------------------------------------------------
# Free variables


def free_vars(t: Term | Type) -> tuple[str, ...]:
    """Free variables in first-occurrence order, including those inside
    embedded type annotations and base-type arguments."""
    out: dict[str, None] = {}
    _free_vars(t, frozenset(), out)
    return tuple(out)


def _free_vars(t: Term | Type, bound: frozenset[str], out: dict[str, None]) -> None:
    match t:
        case Var(name=n):
            if n not in bound:
                out.setdefault(n)
        case Lambda(bound=x, annot=a, body=b) | Forall(bound=x, annot=a, body=b) | Choice(
            bound=x, annot=a, body=b
        ):
            _free_vars(a, bound, out)
            _free_vars(b, bound | {x}, out)
        case App(fun=f, arg=a):
            _free_vars(f, bound, out)
            _free_vars(a, bound, out)
        case Falsum():
            pass
        case Implies(lhs=l, rhs=r):
            _free_vars(l, bound, out)
            _free_vars(r, bound, out)
        case Eq(ty=ty, lhs=l, rhs=r):
            if ty is not None:
                _free_vars(ty, bound, out)
            _free_vars(l, bound, out)
            _free_vars(r, bound, out)
        case Bool():
            pass
        case Base(args=args):
            for a in args:
                _free_vars(a, bound, out)
        case Pi(bound=x, domain=d, codomain=c):
            _free_vars(d, bound, out)
            _free_vars(c, bound | {x}, out)
        case _:
            raise TypeError(f"not a term or type: {t!r}")


def fresh_name(base: str, avoid) -> str:
    """Deterministic freshening: base itself if free, else base_1, base_2, ..."""
    if base not in avoid:
        return base
    k = 1
    while f"{base}_{k}" in avoid:
        k += 1
    return f"{base}_{k}"


# ---------------------------------------------------------------------------
# Substitution (capture-avoiding, simultaneous)


def subst_many(t: Term, mapping: dict[str, Term]) -> Term:
    mapping = {x: u for x, u in mapping.items() if not (isinstance(u, Var) and u.name == x)}
    if not mapping:
        return t
    return _subst(t, mapping)


def subst(t: Term, x: str, u: Term) -> Term:
    """Capture-avoiding substitution of u for free x, total."""
    return subst_many(t, {x: u})


def subst_type(A: Type, x: str, u: Term) -> Type:
    return subst_type_many(A, {x: u})


def subst_type_many(A: Type, mapping: dict[str, Term]) -> Type:
    mapping = {x: u for x, u in mapping.items() if not (isinstance(u, Var) and u.name == x)}
    if not mapping:
        return A
    return _subst(A, mapping)


def _subst(t, mapping: dict[str, Term]):
    match t:
        case Var(name=n):
            return mapping.get(n, t)
        case Lambda() | Forall() | Choice():
            annot = _subst(t.annot, mapping)
            x, b = _subst_binder(t.bound, t.body, mapping)
            return type(t)(x, annot, b, pos=t.pos)
        case App(fun=f, arg=a):
            return App(_subst(f, mapping), _subst(a, mapping), pos=t.pos)
        case Falsum():
            return t
        case Implies(lhs=l, rhs=r):
            return Implies(_subst(l, mapping), _subst(r, mapping), pos=t.pos)
        case Eq(ty=ty, lhs=l, rhs=r):
            nty = _subst(ty, mapping) if ty is not None else None
            return Eq(nty, _subst(l, mapping), _subst(r, mapping), pos=t.pos)
        case Bool():
            return t
        case Base(name=n, args=args):
            return Base(n, tuple(_subst(a, mapping) for a in args), pos=t.pos)
        case Pi(bound=x, domain=d, codomain=c):
            nd = _subst(d, mapping)
            x2, c2 = _subst_binder(x, c, mapping)
            return Pi(x2, nd, c2, pos=t.pos)
        case _:
            raise TypeError(f"not a term or type: {t!r}")


def _subst_binder(x: str, body, mapping: dict[str, Term]):
    body_fv = set(free_vars(body))
    inner = {y: u for y, u in mapping.items() if y != x and y in body_fv}
    if not inner:
        return x, body
    # Rename the binder only when it would capture a free variable of an image.
    if any(x in free_vars(u) for u in inner.values()):
        avoid = body_fv | {x}
        for u in inner.values():
            avoid.update(free_vars(u))
        x2 = fresh_name(x, avoid)
        inner[x] = Var(x2)
        return x2, _subst(body, inner)
    return x, _subst(body, inner)


# ---------------------------------------------------------------------------
# Alpha-equivalence


def alpha_eq(t: Term | None, u: Term | None) -> bool:
    """Equality up to consistent renaming of bound variables."""
    if t is None or u is None:
        return t is u
    return _alpha(t, u, {}, {}, 0)


def alpha_eq_type(A: Type | None, B: Type | None) -> bool:
    if A is None or B is None:
        return A is B
    return _alpha(A, B, {}, {}, 0)


def _alpha(t, u, lm: dict, rm: dict, depth: int) -> bool:
    if type(t) is not type(u):
        return False
    match t:
        case Var(name=n):
            return lm.get(n, ("f", n)) == rm.get(u.name, ("f", u.name))
        case Lambda() | Forall() | Choice():
            return _alpha(t.annot, u.annot, lm, rm, depth) and _alpha(
                t.body, u.body, {**lm, t.bound: depth}, {**rm, u.bound: depth}, depth + 1
            )
        case App():
            return _alpha(t.fun, u.fun, lm, rm, depth) and _alpha(t.arg, u.arg, lm, rm, depth)
        case Falsum():
            return True
        case Implies():
            return _alpha(t.lhs, u.lhs, lm, rm, depth) and _alpha(t.rhs, u.rhs, lm, rm, depth)
        case Eq():
            if (t.ty is None) != (u.ty is None):
                return False
            if t.ty is not None and not _alpha(t.ty, u.ty, lm, rm, depth):
                return False
            return _alpha(t.lhs, u.lhs, lm, rm, depth) and _alpha(t.rhs, u.rhs, lm, rm, depth)
        case Bool():
            return True
        case Base():
            return (
                t.name == u.name
                and len(t.args) == len(u.args)
                and all(_alpha(a, b, lm, rm, depth) for a, b in zip(t.args, u.args))
            )
        case Pi():
            return _alpha(t.domain, u.domain, lm, rm, depth) and _alpha(
                t.codomain, u.codomain, {**lm, t.bound: depth}, {**rm, u.bound: depth}, depth + 1
            )
        case _:
            raise TypeError(f"not a term or type: {t!r}")


def alpha_key(t: Term | Type) -> str:
    """Canonical string key: equal iff alpha-equivalent.  Bound variables are
    numbered in traversal order, so the key is stable across renamings."""
    parts: list[str] = []
    _alpha_key(t, {}, 0, parts)
    return "".join(parts)


def _alpha_key(t, env: dict[str, int], depth: int, parts: list[str]) -> None:
    match t:
        case Var(name=n):
            parts.append(f"b{env[n]};" if n in env else f"v{n};")
        case Lambda() | Forall() | Choice():
            parts.append({Lambda: "L(", Forall: "A(", Choice: "E("}[type(t)])
            _alpha_key(t.annot, env, depth, parts)
            _alpha_key(t.body, {**env, t.bound: depth}, depth + 1, parts)
            parts.append(")")
        case App():
            parts.append("@(")
            _alpha_key(t.fun, env, depth, parts)
            _alpha_key(t.arg, env, depth, parts)
            parts.append(")")
        case Falsum():
            parts.append("F;")
        case Implies():
            parts.append("I(")
            _alpha_key(t.lhs, env, depth, parts)
            _alpha_key(t.rhs, env, depth, parts)
            parts.append(")")
        case Eq():
            parts.append("=(")
            if t.ty is not None:
                _alpha_key(t.ty, env, depth, parts)
            else:
                parts.append("?;")
            _alpha_key(t.lhs, env, depth, parts)
            _alpha_key(t.rhs, env, depth, parts)
            parts.append(")")
        case Bool():
            parts.append("o;")
        case Base():
            parts.append(f"B{t.name}(")
            for a in t.args:
                _alpha_key(a, env, depth, parts)
            parts.append(")")
        case Pi():
            parts.append("P(")
            _alpha_key(t.domain, env, depth, parts)
            _alpha_key(t.codomain, {**env, t.bound: depth}, depth + 1, parts)
            parts.append(")")
        case _:
            raise TypeError(f"not a term or type: {t!r}")


# ---------------------------------------------------------------------------
# Structural helpers


def strip_eq_types(t: Term) -> Term:
    """Drop the type annotations of equality nodes (the parser's view; the
    kernel restores them during elaboration)."""
    match t:
        case Var() | Falsum():
            return t
        case Lambda() | Forall() | Choice():
            return type(t)(t.bound, _strip_eq_types_ty(t.annot), strip_eq_types(t.body))
        case App(fun=f, arg=a):
            return App(strip_eq_types(f), strip_eq_types(a))
        case Implies(lhs=l, rhs=r):
            return Implies(strip_eq_types(l), strip_eq_types(r))
        case Eq(lhs=l, rhs=r):
            return Eq(None, strip_eq_types(l), strip_eq_types(r))
        case _:
            raise TypeError(f"not a term: {t!r}")


def _strip_eq_types_ty(A: Type) -> Type:
    match A:
        case Bool():
            return A
        case Base(name=n, args=args):
            return Base(n, tuple(strip_eq_types(a) for a in args))
        case Pi(bound=x, domain=d, codomain=c):
            return Pi(x, _strip_eq_types_ty(d), _strip_eq_types_ty(c))
        case _:
            raise TypeError(f"not a type: {A!r}")


def is_simple_type(A: Type) -> bool:
    """Bool, an unapplied base type, or a Pi over simple types whose bound
    variable does not occur in the codomain."""
    match A:
        case Bool():
            return True
        case Base(args=args):
            return not args
        case Pi(bound=x, domain=d, codomain=c):
            return is_simple_type(d) and is_simple_type(c) and x not in free_vars(c)
        case _:
            return False


def spine(t: Term) -> tuple[Term, list[Term]]:
    """Split nested applications into head and argument list."""
    args: list[Term] = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def subterms(t: Term) -> Iterator[Term]:
    """All subterms, pre-order, including terms embedded in type annotations."""
    yield t
    match t:
        case Lambda() | Forall() | Choice():
            yield from _type_subterms(t.annot)
            yield from subterms(t.body)
        case App():
            yield from subterms(t.fun)
            yield from subterms(t.arg)
        case Implies():
            yield from subterms(t.lhs)
            yield from subterms(t.rhs)
        case Eq():
            if t.ty is not None:
                yield from _type_subterms(t.ty)
            yield from subterms(t.lhs)
            yield from subterms(t.rhs)
        case _:
            pass


def _type_subterms(A: Type) -> Iterator[Term]:
    match A:
        case Base(args=args):
            for a in args:
                yield from subterms(a)
        case Pi(domain=d, codomain=c):
            yield from _type_subterms(d)
            yield from _type_subterms(c)
        case _:
            pass


# ---------------------------------------------------------------------------
# Printing (surface syntax; inverse of dholc.parser)

_PREC_IMPL = 1
_PREC_OR = 2
_PREC_AND = 3
_PREC_NEG = 4
_PREC_CMP = 5
_PREC_APP = 6
_PREC_ATOM = 7


def print_term(t: Term) -> str:
    return _pt(t, 0)


def _wrap(s: str, prec: int, at: int) -> str:
    return f"({s})" if prec < at else s


def _as_numeral(t: Term) -> Optional[int]:
    n = 0
    while True:
        match t:
            case Var(name="0"):
                return n
            case App(fun=Var(name="s"), arg=a):
                n += 1
                t = a
            case _:
                return None


def _pt(t: Term, at: int) -> str:
    num = _as_numeral(t)
    if num is not None:
        return str(num)
    match t:
        case Var(name=n):
            return n
        case Falsum():
            return "$false"
        case Implies(lhs=Falsum(), rhs=Falsum()):
            return "$true"
        case Implies(lhs=Forall(bound=x, annot=a, body=Implies(lhs=b, rhs=Falsum())), rhs=Falsum()):
            return _wrap(f"? {x} : {print_type(a)} . {_pt(b, 0)}", 0, at)
        case Implies(lhs=Implies(lhs=a, rhs=Implies(lhs=b, rhs=Falsum())), rhs=Falsum()):
            return _wrap(f"{_pt(a, _PREC_AND + 1)} & {_pt(b, _PREC_AND)}", _PREC_AND, at)
        case Implies(lhs=Eq(ty=_, lhs=l, rhs=r), rhs=Falsum()):
            return _wrap(f"{_pt(l, _PREC_CMP + 1)} != {_pt(r, _PREC_CMP + 1)}", _PREC_CMP, at)
        case Implies(lhs=a, rhs=Falsum()):
            return _wrap(f"~ {_pt(a, _PREC_NEG)}", _PREC_NEG, at)
        case Implies(lhs=Implies(lhs=a, rhs=Falsum()), rhs=b):
            return _wrap(f"{_pt(a, _PREC_OR + 1)} | {_pt(b, _PREC_OR)}", _PREC_OR, at)
        case Implies(lhs=a, rhs=b):
            return _wrap(f"{_pt(a, _PREC_IMPL + 1)} => {_pt(b, _PREC_IMPL)}", _PREC_IMPL, at)
        case Eq(lhs=l, rhs=r):
            return _wrap(f"{_pt(l, _PREC_CMP + 1)} = {_pt(r, _PREC_CMP + 1)}", _PREC_CMP, at)
        case App():
            head, args = spine(t)
            parts = [_pt(head, _PREC_APP + 1)] + [_pt(a, _PREC_APP + 1) for a in args]
            return _wrap(" ".join(parts), _PREC_APP, at)
        case Lambda(bound=x, annot=a, body=b):
            return _wrap(f"^ {x} : {print_type(a)} . {_pt(b, 0)}", 0, at)
        case Forall(bound=x, annot=a, body=b):
            return _wrap(f"! {x} : {print_type(a)} . {_pt(b, 0)}", 0, at)
        case Choice(bound=x, annot=a, body=b):
            return _wrap(f"eps {x} : {print_type(a)} . {_pt(b, 0)}", 0, at)
        case _:
            raise TypeError(f"not a term: {t!r}")


def print_type(A: Type) -> str:
    match A:
        case Bool():
            return "$o"
        case Base(name=n, args=args):
            if not args:
                return n
            return " ".join([n] + [_pt(a, _PREC_APP + 1) for a in args])
        case Pi(bound=x, domain=d, codomain=c):
            dom = print_type(d)
            if isinstance(d, Pi):
                dom = f"({dom})"
            if x not in free_vars(c):
                return f"{dom} > {print_type(c)}"
            return f"pi {x} : {print_type(d)} . {print_type(c)}"
        case _:
            raise TypeError(f"not a type: {A!r}")


def print_declaration(d: Declaration) -> str:
    match d:
        case BaseTypeDecl(name=n, telescope=tele):
            parts = "".join(f"pi {x} : {print_type(a)} . " for x, a in tele)
            return f"type {n} : {parts}tp"
        case ConstDecl(name=n, ty=ty):
            return f"const {n} : {print_type(ty)}"
        case AxiomDecl(label=l, term=t):
            return f"axiom {l} : {print_term(t)}"
        case _:
            raise TypeError(f"not a declaration: {d!r}")


def print_theory(thy: Theory, conjecture: Optional[Term] = None) -> str:
    lines = [print_declaration(d) for d in thy]
    if conjecture is not None:
        lines.append(f"conjecture : {print_term(conjecture)}")
    return "\n".join(lines) + "\n"
