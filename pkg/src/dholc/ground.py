"""A small, deliberately incomplete but *sound* ground prover for erased HOL
obligations.

The obligation's axioms, assumptions and negated conjecture are abstracted to
propositional formulas over alpha-normalized atoms.  Three families of valid
clauses connect the atoms:

* universal atoms are instantiated with a fixed universe consisting of the
  obligation's context variables plus base-typed theory constants — never
  compound terms and never function constants, which keeps the prover weak
  enough to leave genuinely search-hard obligations open;
* every choice subterm contributes the HOL choice rule as a clause
  (if a witness exists, the chosen element is one);
* equality atoms get reflexivity (alpha-equal sides) and symmetry links.

Everything asserted is HOL_ε-valid, so an UNSAT answer is a real proof.
Classical double negations are collapsed at formula positions so that
differently sugared statements of the same fact meet in the same atom.
"""

from __future__ import annotations

from dataclasses import dataclass

from .erasure import beta_normalize
from .syntax import (
    AxiomDecl,
    Base,
    Bool,
    Choice,
    ConstDecl,
    Context,
    Eq,
    Falsum,
    Forall,
    Implies,
    Term,
    Theory,
    Type,
    Var,
    alpha_eq,
    alpha_eq_type,
    alpha_key,
    neg,
    subst,
    subterms,
)

MAX_FORMULAS = 600
MAX_ATOMS = 800
MAX_DPLL_NODES = 50_000


def dn_normalize(t: Term) -> Term:
    """Collapse ((p => false) => false) to p along the connective spine and
    under quantifiers.  Atom-internal structure is left alone."""
    match t:
        case Implies(lhs=a, rhs=b):
            a2 = dn_normalize(a)
            b2 = dn_normalize(b)
            if isinstance(b2, Falsum) and isinstance(a2, Implies) and isinstance(a2.rhs, Falsum):
                return a2.lhs
            return Implies(a2, b2)
        case Forall(bound=x, annot=a, body=b):
            return Forall(x, a, dn_normalize(b))
        case _:
            return t


PF_FALSE = ("false",)


@dataclass
class _Atoms:
    by_key: dict[str, int]
    terms: list[Term]

    def register(self, t: Term) -> int:
        key = alpha_key(t)
        if key in self.by_key:
            return self.by_key[key]
        idx = len(self.terms)
        self.by_key[key] = idx
        self.terms.append(t)
        return idx


def _abstract(t: Term, atoms: _Atoms):
    match t:
        case Falsum():
            return PF_FALSE
        case Implies(lhs=a, rhs=b):
            return ("impl", _abstract(a, atoms), _abstract(b, atoms))
        case _:
            return ("atom", atoms.register(t))


def _universe(thy: Theory, ctx: Context) -> list[tuple[str, Type]]:
    out: list[tuple[str, Type]] = []
    for d in thy:
        if isinstance(d, ConstDecl) and isinstance(d.ty, (Base, Bool)):
            out.append((d.name, d.ty))
    for d in ctx:
        if isinstance(d, ConstDecl):
            out.append((d.name, d.ty))
    return out


def prove_ground(thy: Theory, ctx: Context, conjecture: Term) -> bool:
    """True iff the negated conjecture plus axioms/assumptions is found
    propositionally unsatisfiable; a sound, incomplete HOL_ε proof."""
    assumptions = [d.term for d in thy if isinstance(d, AxiomDecl)]
    assumptions += [d.term for d in ctx if isinstance(d, AxiomDecl)]
    universe = _universe(thy, ctx)

    atoms = _Atoms({}, [])
    formulas = []
    for t in assumptions + [neg(conjecture)]:
        if len(formulas) >= MAX_FORMULAS:
            break
        formulas.append(_abstract(dn_normalize(beta_normalize(t)), atoms))

    # Saturate: instantiate universal atoms over the universe, add the choice
    # schema for every choice subterm.  The universe never grows, so this
    # terminates quickly; caps guard the pathological cases.
    done_forall: set[int] = set()
    done_choice: set[str] = set()
    changed = True
    while changed and len(formulas) < MAX_FORMULAS and len(atoms.terms) < MAX_ATOMS:
        changed = False
        for idx in range(len(atoms.terms)):
            a_term = atoms.terms[idx]
            if isinstance(a_term, Forall) and idx not in done_forall:
                done_forall.add(idx)
                changed = True
                for name, ty in universe:
                    if not alpha_eq_type(ty, a_term.annot):
                        continue
                    inst = dn_normalize(beta_normalize(subst(a_term.body, a_term.bound, Var(name))))
                    formulas.append(("impl", ("atom", idx), _abstract(inst, atoms)))
                    if len(formulas) >= MAX_FORMULAS:
                        break
            for sub in subterms(a_term):
                if isinstance(sub, Choice):
                    key = alpha_key(sub)
                    if key in done_choice:
                        continue
                    done_choice.add(key)
                    changed = True
                    witness = neg(Forall(sub.bound, sub.annot, neg(sub.body)))
                    conclusion = subst(sub.body, sub.bound, sub)
                    schema = Implies(witness, conclusion)
                    formulas.append(_abstract(dn_normalize(beta_normalize(schema)), atoms))
                    if len(formulas) >= MAX_FORMULAS:
                        break
            if len(formulas) >= MAX_FORMULAS:
                break

    # Equality atoms: reflexivity and symmetry only (no congruence).
    eq_keys: dict[str, int] = {}
    for idx, t in enumerate(atoms.terms):
        if isinstance(t, Eq):
            eq_keys[alpha_key(t)] = idx
    for idx, t in enumerate(atoms.terms):
        if isinstance(t, Eq):
            if alpha_eq(t.lhs, t.rhs):
                formulas.append(("atom", idx))
            flipped = alpha_key(Eq(t.ty, t.rhs, t.lhs))
            other = eq_keys.get(flipped)
            if other is not None and other != idx:
                formulas.append(("impl", ("atom", idx), ("atom", other)))

    return _unsat(formulas, len(atoms.terms))


# ---------------------------------------------------------------------------
# Tseitin + DPLL


def _unsat(formulas, natoms: int) -> bool:
    clauses: list[list[int]] = []
    nvars = natoms + 1  # var 0 unused; atoms are 1..natoms
    false_var = natoms + 1
    nvars = false_var
    clauses.append([-false_var])

    def fresh() -> int:
        nonlocal nvars
        nvars += 1
        return nvars

    def encode(pf) -> int:
        if pf == PF_FALSE:
            return false_var
        if pf[0] == "atom":
            return pf[1] + 1
        _, l, r = pf
        lv = encode(l)
        rv = encode(r)
        v = fresh()
        clauses.append([-v, -lv, rv])
        clauses.append([v, lv])
        clauses.append([v, -rv])
        return v

    for pf in formulas:
        clauses.append([encode(pf)])

    return not _dpll_sat(clauses, nvars)


def _dpll_sat(clauses: list[list[int]], nvars: int) -> bool:
    assign: dict[int, bool] = {}
    nodes = 0

    def value(lit: int):
        v = assign.get(abs(lit))
        if v is None:
            return None
        return v if lit > 0 else not v

    def propagate(trail: list[int]) -> bool:
        while True:
            unit = None
            for cl in clauses:
                unassigned = None
                satisfied = False
                count = 0
                for lit in cl:
                    val = value(lit)
                    if val is True:
                        satisfied = True
                        break
                    if val is None:
                        unassigned = lit
                        count += 1
                if satisfied:
                    continue
                if count == 0:
                    return False
                if count == 1:
                    unit = unassigned
                    break
            if unit is None:
                return True
            assign[abs(unit)] = unit > 0
            trail.append(abs(unit))

    def solve() -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > MAX_DPLL_NODES:
            # give up: treat as satisfiable, i.e. "not proved" (sound side)
            return True
        trail: list[int] = []
        if not propagate(trail):
            for v in trail:
                del assign[v]
            return False
        var = None
        for v in range(1, nvars + 1):
            if v not in assign:
                var = v
                break
        if var is None:
            return True
        for val in (True, False):
            assign[var] = val
            if solve():
                return True
            del assign[var]
        for v in trail:
            del assign[v]
        return False

    return solve()
