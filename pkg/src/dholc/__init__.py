"""dholc: a kernel and HOL compiler for dependently-typed higher-order logic
with an indefinite choice operator."""

__version__ = "0.1.0"

from .syntax import (  # noqa: F401
    App,
    AxiomDecl,
    Base,
    BaseTypeDecl,
    Bool,
    Choice,
    ConstDecl,
    Context,
    Eq,
    Falsum,
    Forall,
    Implies,
    Lambda,
    Pi,
    Term,
    Theory,
    Type,
    Var,
    alpha_eq,
    free_vars,
    subst,
)
from .parser import ParseError, parse_theory  # noqa: F401
from .erasure import ErasureVariant, erase_term, erase_theory, erase_type, per  # noqa: F401
from .kernel import (  # noqa: F401
    CheckReport,
    KernelError,
    Mode,
    Obligation,
    ObligationKind,
    check_theory,
    infer_type,
    type_equal,
)
from .oracle import FiniteModel, SearchBudget, countermodel, eval_term  # noqa: F401
from .prover import ProverConfig, SzsStatus, discharge, run_atp  # noqa: F401
from .corpus import CorpusEntry, gen_all, gen_problem, write_corpus  # noqa: F401
from .thf import ThfProblem, emit_thf, parse_thf  # noqa: F401
