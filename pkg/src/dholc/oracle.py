"""Finite-model evaluation and exhaustive countermodel search for simply
typed HOL with choice.

Semantics: full function spaces over finite carriers.  Every value is encoded
as an integer index into the canonical enumeration of its type — booleans are
0/1, base-type elements are 0..n-1, and a function is the positional encoding
of its table in base |codomain| (application is digit extraction, equality is
index equality, abstraction accumulates digits).  Choice picks the first
element in canonical order satisfying the body, else the first element of the
carrier; carriers are nonempty, so this is total, and it validates the HOL
choice rule by construction: whenever a witness exists, the chosen element is
one.

Terms are compiled once into a flat instruction array and interpreted by one
of two backends: a compiled Cython core when available, else a pure-Python
twin with identical semantics (set DHOLC_EVAL_BACKEND=pure|compiled to force
one).  benchmarks/bench_eval.py compares the two.
"""

from __future__ import annotations

import os
import time
from array import array
from dataclasses import dataclass, field
from typing import Optional

from .syntax import (
    App,
    AxiomDecl,
    Base,
    BaseTypeDecl,
    BOOL,
    Bool,
    Choice,
    ConstDecl,
    Eq,
    Falsum,
    Forall,
    Implies,
    Lambda,
    Pi,
    Term,
    Theory,
    Type,
    free_vars,
    is_simple_type,
    Var,
)

from . import _evalpure

try:
    from . import _evalcore
except ImportError:  # extension not built; the pure twin carries the load
    _evalcore = None

_FORCED = os.environ.get("DHOLC_EVAL_BACKEND")
# The compiled core works on 64-bit integers; beyond this the pure backend
# (arbitrary precision) takes over transparently.
_COMPILED_CARD_LIMIT = 1 << 62


class OracleError(Exception):
    pass


def active_backend() -> str:
    if _FORCED == "pure":
        return "pure"
    if _FORCED == "compiled":
        if _evalcore is None:
            raise OracleError("DHOLC_EVAL_BACKEND=compiled but dholc._evalcore is not built")
        return "compiled"
    return "compiled" if _evalcore is not None else "pure"


# ---------------------------------------------------------------------------
# Budgets / models


@dataclass(frozen=True)
class SearchBudget:
    max_size: int = 3  # max carrier size per base type (Bool is fixed at 2)
    max_models: int = 2_000_000  # cap on the interpretation-space product
    max_seconds: float = 30.0

    def __post_init__(self):
        if self.max_size < 1:
            raise ValueError("max carrier size must be at least 1")


@dataclass
class FiniteModel:
    sizes: dict[str, int]
    consts: dict[str, int]
    types: dict[str, Type]

    def card(self, ty: Type) -> int:
        return type_card(ty, self.sizes)

    def decode(self, name: str):
        return decode_value(self.types[name], self.consts[name], self.sizes)

    def describe(self) -> str:
        lines = [f"|{a}| = {n}" for a, n in self.sizes.items()]
        for name in self.consts:
            lines.append(f"{name} = {_show_value(self.types[name], self.decode(name))}")
        return "\n".join(lines)

    def to_json_dict(self) -> dict:
        return {
            "sizes": dict(self.sizes),
            "constants": {n: self.decode(n) for n in self.consts},
        }


def type_card(ty: Type, sizes: dict[str, int]) -> int:
    match ty:
        case Bool():
            return 2
        case Base(name=n, args=args):
            if args:
                raise OracleError(f"dependent base type {n!r} reached the oracle")
            if n not in sizes:
                raise OracleError(f"no carrier size for base type {n!r}")
            return sizes[n]
        case Pi(domain=d, codomain=c):
            return type_card(c, sizes) ** type_card(d, sizes)
        case _:
            raise OracleError(f"not a type: {ty!r}")


def decode_value(ty: Type, val: int, sizes: dict[str, int]):
    match ty:
        case Bool():
            return bool(val)
        case Base():
            return val
        case Pi(domain=d, codomain=c):
            cc = type_card(c, sizes)
            return [
                decode_value(c, (val // cc**i) % cc, sizes)
                for i in range(type_card(d, sizes))
            ]
        case _:
            raise OracleError(f"not a type: {ty!r}")


def _show_value(ty: Type, decoded) -> str:
    if isinstance(decoded, list):
        return "[" + ", ".join(_show_value(ty.codomain, x) for x in decoded) + "]"
    return str(decoded)


# ---------------------------------------------------------------------------
# Compilation to the instruction array

OP_VAR, OP_FALSE, OP_IMPL, OP_EQ, OP_FORALL, OP_LAMBDA, OP_APP, OP_CHOICE = range(8)


class Compiler:
    """Compiles terms into one shared flat node array.  Slots 0..n-1 hold the
    values of the named symbols (constants first, then extra assignment
    variables); binder slots are allocated after them."""

    def __init__(self, sizes: dict[str, int], symbols: dict[str, Type]):
        self.sizes = sizes
        self.symbol_types = dict(symbols)
        self.slot_of = {name: i for i, name in enumerate(symbols)}
        self.next_slot = len(symbols)
        self.nodes: list[int] = []
        self.max_card = 2

    def _emit(self, op: int, a: int = 0, b: int = 0, c: int = 0, d: int = 0) -> int:
        idx = len(self.nodes) // 5
        self.nodes.extend((op, a, b, c, d))
        return idx

    def _card(self, ty: Type) -> int:
        n = type_card(ty, self.sizes)
        self.max_card = max(self.max_card, n)
        return n

    def compile(self, t: Term) -> tuple[int, Type]:
        """Returns (root node index, simple type of the term)."""
        return self._go(t, {})

    def _go(self, t: Term, benv: dict[str, tuple[int, Type]]) -> tuple[int, Type]:
        match t:
            case Var(name=n):
                if n in benv:
                    slot, ty = benv[n]
                    return self._emit(OP_VAR, slot), ty
                if n in self.slot_of:
                    return self._emit(OP_VAR, self.slot_of[n]), self.symbol_types[n]
                raise OracleError(f"unbound symbol {n!r} in oracle term")
            case Falsum():
                return self._emit(OP_FALSE), BOOL
            case Implies(lhs=l, rhs=r):
                li, lt = self._go(l, benv)
                ri, rt = self._go(r, benv)
                if not isinstance(lt, Bool) or not isinstance(rt, Bool):
                    raise OracleError("ill-typed implication reached the oracle")
                return self._emit(OP_IMPL, li, ri), BOOL
            case Eq(lhs=l, rhs=r):
                li, _ = self._go(l, benv)
                ri, _ = self._go(r, benv)
                return self._emit(OP_EQ, li, ri), BOOL
            case Forall(bound=x, annot=a, body=b):
                slot = self.next_slot
                self.next_slot += 1
                bi, bt = self._go(b, {**benv, x: (slot, a)})
                if not isinstance(bt, Bool):
                    raise OracleError("ill-typed quantifier body reached the oracle")
                return self._emit(OP_FORALL, bi, slot, self._card(a)), BOOL
            case Choice(bound=x, annot=a, body=b):
                slot = self.next_slot
                self.next_slot += 1
                bi, bt = self._go(b, {**benv, x: (slot, a)})
                if not isinstance(bt, Bool):
                    raise OracleError("ill-typed choice body reached the oracle")
                return self._emit(OP_CHOICE, bi, slot, self._card(a)), a
            case Lambda(bound=x, annot=a, body=b):
                slot = self.next_slot
                self.next_slot += 1
                bi, bt = self._go(b, {**benv, x: (slot, a)})
                ty = Pi(x, a, bt)
                self._card(ty)
                return (
                    self._emit(OP_LAMBDA, bi, slot, self._card(a), self._card(bt)),
                    ty,
                )
            case App(fun=f, arg=u):
                fi, ft = self._go(f, benv)
                ui, _ = self._go(u, benv)
                if not isinstance(ft, Pi):
                    raise OracleError("application of a non-function reached the oracle")
                return self._emit(OP_APP, fi, ui, self._card(ft.codomain)), ft.codomain
            case _:
                raise OracleError(f"not a term: {t!r}")

    def referenced_symbol_slots(self, root: int) -> set[int]:
        """Symbol slots (below the binder range) read by the program at root."""
        nsym = len(self.slot_of)
        seen: set[int] = set()
        stack = [root]
        visited = set()
        while stack:
            i = stack.pop()
            if i in visited:
                continue
            visited.add(i)
            op, a, b, c, d = self.nodes[i * 5 : i * 5 + 5]
            if op == OP_VAR:
                if a < nsym:
                    seen.add(a)
            elif op in (OP_IMPL, OP_EQ, OP_APP):
                stack.append(a)
                stack.append(b)
            elif op in (OP_FORALL, OP_LAMBDA, OP_CHOICE):
                stack.append(a)
        return seen


class CompiledTerms:
    """A node array plus an environment, runnable on either backend."""

    def __init__(self, compiler: Compiler):
        self.nodes_list = compiler.nodes
        self.nslots = compiler.next_slot
        self.use_compiled = (
            active_backend() == "compiled" and compiler.max_card < _COMPILED_CARD_LIMIT
        )
        if self.use_compiled:
            self.nodes = array("q", compiler.nodes)
            self.env = array("q", [0] * max(self.nslots, 1))
        else:
            self.nodes = compiler.nodes
            self.env = [0] * max(self.nslots, 1)

    def set_slot(self, slot: int, value: int) -> None:
        self.env[slot] = value

    def run(self, root: int) -> int:
        if self.use_compiled:
            return _evalcore.run(self.nodes, root, self.env)
        return _evalpure.run(self.nodes, root, self.env)


# ---------------------------------------------------------------------------
# Public evaluation


def eval_term(model: FiniteModel, env: dict[str, tuple[Type, int]], t: Term) -> int:
    """Evaluate ``t`` in ``model`` under ``env`` (name -> (type, value)).
    Returns the integer encoding; for booleans 0/1."""
    symbols = dict(model.types)
    for n, (ty, _) in env.items():
        symbols[n] = ty
    comp = Compiler(model.sizes, symbols)
    root, _ = comp.compile(t)
    ct = CompiledTerms(comp)
    for n, v in model.consts.items():
        ct.set_slot(comp.slot_of[n], v)
    for n, (_, v) in env.items():
        ct.set_slot(comp.slot_of[n], v)
    return ct.run(root)


# ---------------------------------------------------------------------------
# Countermodel search


@dataclass
class SearchResult:
    status: str  # "countermodel" | "none" | "exhausted"
    model: Optional[FiniteModel] = None
    assignment: dict[str, int] = field(default_factory=dict)
    detail: str = ""

    @property
    def found(self) -> bool:
        return self.status == "countermodel"


class _OutOfTime(Exception):
    pass


def _size_tuples(nbases: int, max_size: int):
    if nbases == 0:
        yield ()
        return
    tuples = []

    def rec(prefix):
        if len(prefix) == nbases:
            tuples.append(tuple(prefix))
            return
        for s in range(1, max_size + 1):
            rec(prefix + [s])

    rec([])
    tuples.sort(key=lambda t: (sum(t), t))
    yield from tuples


def countermodel(
    thy: Theory,
    conjecture: Term,
    budget: SearchBudget = SearchBudget(),
    assignment_names: frozenset[str] = frozenset(),
) -> SearchResult:
    """Exhaustive search for a model of all axioms falsifying the conjecture,
    up to the budget.  Deterministic enumeration: carrier sizes ordered by
    (total, lexicographic), interpretations in canonical integer order,
    constants in declaration order with axioms checked as soon as all their
    symbols are assigned.  Budget exhaustion is reported distinctly from an
    exhaustive "none up to bound"."""
    bases = [d.name for d in thy if isinstance(d, BaseTypeDecl)]
    for d in thy:
        if isinstance(d, BaseTypeDecl) and d.telescope:
            raise OracleError(f"dependent base type {d.name!r} reached the oracle")
    consts = [(d.name, d.ty) for d in thy if isinstance(d, ConstDecl)]
    if len({n for n, _ in consts}) != len(consts):
        raise OracleError("duplicate constant name in the oracle signature")
    for _, ty in consts:
        if not is_simple_type(ty):
            raise OracleError("non-simple constant type reached the oracle")
    axioms = [d.term for d in thy if isinstance(d, AxiomDecl)]
    known = {n for n, _ in consts}
    for t in axioms + [conjecture]:
        for v in free_vars(t):
            if v not in known:
                raise OracleError(f"free symbol {v!r} not declared for the oracle")

    deadline = time.monotonic() + budget.max_seconds
    exhausted_any = False
    detail = ""

    for size_tuple in _size_tuples(len(bases), budget.max_size):
        sizes = dict(zip(bases, size_tuple))
        space = 1
        for _, ty in consts:
            space *= type_card(ty, sizes)
            if space > budget.max_models:
                break
        if space > budget.max_models:
            exhausted_any = True
            detail = f"interpretation space exceeds {budget.max_models} at sizes {size_tuple}"
            continue

        comp = Compiler(sizes, {n: ty for n, ty in consts})
        axiom_roots = [comp.compile(a)[0] for a in axioms]
        conj_root, _ = comp.compile(conjecture)
        ct = CompiledTerms(comp)

        # An axiom is checked right after the highest-indexed constant it
        # mentions has been assigned.
        scheduled: dict[int, list[int]] = {i: [] for i in range(len(consts))}
        upfront: list[int] = []
        for root in axiom_roots:
            slots = comp.referenced_symbol_slots(root)
            if slots:
                scheduled[max(slots)].append(root)
            else:
                upfront.append(root)

        cards = [type_card(ty, sizes) for _, ty in consts]
        steps = 0

        def dfs(i: int) -> bool:
            nonlocal steps
            steps += 1
            if steps % 1024 == 0 and time.monotonic() > deadline:
                raise _OutOfTime
            if i == len(consts):
                return ct.run(conj_root) == 0
            for v in range(cards[i]):
                ct.set_slot(i, v)
                if all(ct.run(r) != 0 for r in scheduled[i]):
                    if dfs(i + 1):
                        return True
            return False

        try:
            if all(ct.run(r) != 0 for r in upfront):
                if dfs(0):
                    values = {n: ct.env[comp.slot_of[n]] for n, _ in consts}
                    model = FiniteModel(
                        sizes=sizes,
                        consts={n: int(v) for n, v in values.items()},
                        types={n: ty for n, ty in consts},
                    )
                    assignment = {
                        n: model.consts[n] for n in model.consts if n in assignment_names
                    }
                    return SearchResult("countermodel", model, assignment)
        except _OutOfTime:
            return SearchResult(
                "exhausted", detail=f"wall-time budget exceeded at sizes {size_tuple}"
            )

    if exhausted_any:
        return SearchResult("exhausted", detail=detail)
    return SearchResult("none", detail=f"exhaustive up to carrier size {budget.max_size}")


def merge_context(thy: Theory, ctx) -> Theory:
    """Contexts and theories coincide for the oracle: context variables become
    constants to solve for, assumptions become axioms."""
    return Theory(tuple(thy.decls) + tuple(ctx.decls))


def restrict_signature(thy: Theory, terms: list[Term]) -> Theory:
    """Drop axioms and constants irrelevant to ``terms``.

    The truth value of a formula depends only on the symbols it mentions, so
    validity checking over the restricted signature is equivalent and the
    interpretation space collapses.  Base types referenced by the kept
    constants' types or by binder annotations are retained."""
    wanted = set()
    for t in terms:
        wanted.update(free_vars(t))
    consts = [d for d in thy if isinstance(d, ConstDecl) and d.name in wanted]
    bases: set[str] = set()

    def collect_bases(ty: Type) -> None:
        match ty:
            case Base(name=n):
                bases.add(n)
            case Pi(domain=d, codomain=c):
                collect_bases(d)
                collect_bases(c)
            case _:
                pass

    for d in consts:
        collect_bases(d.ty)
    for t in terms:
        for sub in _annotations(t):
            collect_bases(sub)
    base_decls = [d for d in thy if isinstance(d, BaseTypeDecl) and d.name in bases]
    return Theory(tuple(base_decls) + tuple(consts))


def _annotations(t: Term):
    match t:
        case Lambda(annot=a, body=b) | Forall(annot=a, body=b) | Choice(annot=a, body=b):
            yield a
            yield from _annotations(b)
        case App(fun=f, arg=a):
            yield from _annotations(f)
            yield from _annotations(a)
        case Implies(lhs=l, rhs=r):
            yield from _annotations(l)
            yield from _annotations(r)
        case Eq(ty=ty, lhs=l, rhs=r):
            if ty is not None:
                yield ty
            yield from _annotations(l)
            yield from _annotations(r)
        case _:
            return
