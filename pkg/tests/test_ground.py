"""Unit tests for the sound ground prover: what it must prove, and just as
importantly what it must leave open (its instantiation universe excludes
compound terms and function constants by design)."""

from dholc.ground import dn_normalize, prove_ground
from dholc.syntax import (
    App,
    AxiomDecl,
    Base,
    BaseTypeDecl,
    BOOL,
    Choice,
    ConstDecl,
    Context,
    Eq,
    FALSE,
    Forall,
    Implies,
    Pi,
    Theory,
    Var,
    alpha_eq,
    apply,
    conj,
    exists,
    neg,
    top,
)

A = Base("a")


def test_dn_normalize_collapses_double_negation():
    p = App(Var("p"), Var("c"))
    assert dn_normalize(neg(neg(p))) == p
    q = Forall("x", A, neg(neg(p)))
    assert dn_normalize(q) == Forall("x", A, p)


def _thy(*decls):
    return Theory(tuple(decls))


P = Pi("_", A, BOOL)


def test_modus_ponens_with_context_variable():
    thy = _thy(BaseTypeDecl("a"), ConstDecl("p", P))
    ctx = Context(
        (
            ConstDecl("x", A),
            AxiomDecl("h", App(Var("p"), Var("x"))),
            AxiomDecl("all", Forall("y", A, Implies(App(Var("p"), Var("y")), FALSE))),
        )
    )
    assert prove_ground(thy, ctx, FALSE)


def test_instantiation_with_base_typed_theory_constant():
    thy = _thy(
        BaseTypeDecl("a"),
        ConstDecl("p", P),
        ConstDecl("c", A),
        AxiomDecl("pc", App(Var("p"), Var("c"))),
    )
    goal = exists("y", A, App(Var("p"), Var("y")))
    assert prove_ground(thy, Context(), goal)


def test_compound_witnesses_are_out_of_reach():
    # p (f c) is provable with the instance y := f c, but f c is compound and
    # the universe only carries variables and base-typed constants
    thy = _thy(
        BaseTypeDecl("a"),
        ConstDecl("p", P),
        ConstDecl("f", Pi("_", A, A)),
        ConstDecl("c", A),
        AxiomDecl("pfc", App(Var("p"), App(Var("f"), Var("c")))),
    )
    goal = exists("y", A, App(Var("p"), Var("y")))
    assert not prove_ground(thy, Context(), goal)


def test_conjecture_alpha_equal_to_axiom():
    thy = _thy(
        BaseTypeDecl("a"),
        ConstDecl("p", P),
        AxiomDecl("w", exists("x", A, App(Var("p"), Var("x")))),
    )
    goal = exists("z", A, App(Var("p"), Var("z")))
    assert prove_ground(thy, Context(), goal)


def test_choice_schema():
    thy = _thy(
        BaseTypeDecl("a"),
        ConstDecl("p", P),
        AxiomDecl("w", exists("x", A, App(Var("p"), Var("x")))),
    )
    eps = Choice("x", A, App(Var("p"), Var("x")))
    goal = App(Var("p"), eps)
    assert prove_ground(thy, Context(), goal)


def test_choice_schema_needs_the_witness():
    thy = _thy(BaseTypeDecl("a"), ConstDecl("p", P))
    eps = Choice("x", A, App(Var("p"), Var("x")))
    assert not prove_ground(thy, Context(), App(Var("p"), eps))


def test_equality_reflexivity_and_symmetry():
    thy = _thy(BaseTypeDecl("a"), ConstDecl("c", A), ConstDecl("d", A))
    assert prove_ground(thy, Context(), Eq(A, Var("c"), Var("c")))
    sym_thy = thy.extended(AxiomDecl("cd", Eq(A, Var("c"), Var("d"))))
    assert prove_ground(sym_thy, Context(), Eq(A, Var("d"), Var("c")))
    # no congruence: c = d does not propagate through applications
    cong_thy = sym_thy.extended(
        ConstDecl("p", P), AxiomDecl("pc", App(Var("p"), Var("c")))
    )
    assert not prove_ground(cong_thy, Context(), App(Var("p"), Var("d")))


def test_soundness_spot_check():
    # an invalid goal over a satisfiable theory must stay open
    thy = _thy(BaseTypeDecl("a"), ConstDecl("p", P), ConstDecl("c", A))
    assert not prove_ground(thy, Context(), App(Var("p"), Var("c")))
    assert not prove_ground(thy, Context(), FALSE)


def test_monotone_under_extra_axioms():
    thy = _thy(
        BaseTypeDecl("a"),
        ConstDecl("p", P),
        ConstDecl("c", A),
        AxiomDecl("pc", App(Var("p"), Var("c"))),
    )
    goal = exists("y", A, App(Var("p"), Var("y")))
    assert prove_ground(thy, Context(), goal)
    bigger = thy.extended(
        AxiomDecl("extra1", top()),
        AxiomDecl("extra2", Forall("y", A, Implies(FALSE, App(Var("p"), Var("y"))))),
    )
    assert prove_ground(bigger, Context(), goal)
