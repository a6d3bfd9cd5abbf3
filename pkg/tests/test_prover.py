import stat
import textwrap

from dholc.erasure import ErasureVariant, erase_theory
from dholc.kernel import Mode, ObligationKind, check_theory
from dholc.oracle import SearchBudget
from dholc.parser import parse_term, parse_theory
from dholc.prover import ProverConfig, discharge, discharge_one, run_atp
from dholc.syntax import Context, FALSE, Theory, top
from dholc.thf import emit_thf


def _fake_prover(tmp_path, name, script_body):
    path = tmp_path / name
    path.write_text("#!/bin/sh\n" + textwrap.dedent(script_body))
    path.chmod(path.stat().st_mode | stat.S_IEXEC)
    return str(path)


def _trivial_problem():
    er = erase_theory(Theory(), Context(), ErasureVariant.STRONG)
    return emit_thf(er, "trivial", conjecture=top())


def test_run_atp_theorem(tmp_path):
    cmd = _fake_prover(tmp_path, "ok.sh", "echo 'SZS status Theorem for problem'\n")
    status = run_atp(_trivial_problem(), ProverConfig(command=cmd, time_limit=5))
    assert status.kind == "Theorem"


def test_run_atp_missing_szs_line(tmp_path):
    cmd = _fake_prover(tmp_path, "mute.sh", "echo 'no status here'\n")
    status = run_atp(_trivial_problem(), ProverConfig(command=cmd, time_limit=5))
    assert status.kind == "GaveUp"
    assert "no status here" in status.detail


def test_run_atp_spawn_failure():
    status = run_atp(
        _trivial_problem(), ProverConfig(command="/nonexistent/prover {file}", time_limit=5)
    )
    assert status.kind == "Error"
    assert "spawn" in status.detail


def test_run_atp_timeout(tmp_path):
    cmd = _fake_prover(tmp_path, "slow.sh", "sleep 5\n")
    status = run_atp(_trivial_problem(), ProverConfig(command=cmd, time_limit=0.3))
    assert status.kind == "Timeout"


def test_run_atp_file_placeholder(tmp_path):
    cmd = _fake_prover(
        tmp_path,
        "cat.sh",
        'grep -q conjecture "$1" && echo "SZS status Theorem" || echo "SZS status Error"\n',
    )
    status = run_atp(_trivial_problem(), ProverConfig(command=cmd + " {file}", time_limit=5))
    assert status.kind == "Theorem"


# ---------------------------------------------------------------------------
# discharge


def test_discharge_empty_batch():
    report = discharge([])
    assert report.all_discharged and report.verdicts == []


COUNTEREXAMPLE_SRC = """\
type a : pi x : $o . tp
const c : a $false
"""


def test_weak_inhabitation_discharged_by_witness_constant():
    thy, _ = parse_theory(COUNTEREXAMPLE_SRC)
    t = parse_term("eps x : a $false . $true", thy)
    from dholc.kernel import infer_type

    _, obs = infer_type(thy, Context(), t, Mode.WEAK_EPSILON)
    assert [o.kind for o in obs] == [ObligationKind.TYPE_INHABITED]
    v = discharge_one(obs[0])
    assert v.discharged  # c witnesses the inhabitation


def test_strong_witness_on_singleton_not_discharged_weak_is():
    src = "type nat : tp\nconst 0 : nat\nconst s : nat > nat\ntype fin : pi n : nat . tp\n"
    thy, _ = parse_theory(src)
    t = parse_term("^ x : fin 1 . eps y : fin 1 . ~(x = y)", thy)
    from dholc.kernel import infer_type

    _, strong = infer_type(thy, Context(), t, Mode.STRONG_EPSILON)
    _, weak = infer_type(thy, Context(), t, Mode.WEAK_EPSILON)
    assert not discharge_one(strong[0]).discharged
    assert discharge_one(weak[0]).discharged


def test_naive_reflexivity_refuted_with_countermodel():
    from dholc.kernel import Obligation, Origin
    from dholc.syntax import Base, Choice, Var, apply, conj

    thy, _ = parse_theory(COUNTEREXAMPLE_SRC)
    rep = check_theory(thy, None, Mode.STRONG_EPSILON)
    hol = erase_theory(rep.theory_elaborated, Context(), ErasureVariant.STRONG).hol_theory
    naive = Choice("x", Base("a"), top())
    ob = Obligation(
        id="ob001",
        kind=ObligationKind.CONJECTURE,
        hol_theory=hol,
        hol_context=Context(),
        conjecture=apply(Var("a*"), FALSE, naive, naive),
        origin=Origin(rule="conjecture", subject="naive"),
    )
    v = discharge_one(ob, budget=SearchBudget(max_size=2, max_models=100_000, max_seconds=10))
    assert v.status == "refuted-countermodel"
    assert v.counter_model is not None and v.counter_model.model.sizes == {"a": 2}


def test_batch_preserves_order_and_ids():
    from dholc.corpus import gen_problem

    e = gen_problem("choice_def1")
    rep = check_theory(e.theory, e.conjecture, Mode.STRONG_EPSILON)
    report = discharge(rep.obligations, jobs=2)
    assert [v.obligation_id for v in report.verdicts] == [o.id for o in rep.obligations]


def test_atp_integration_in_discharge(tmp_path):
    cmd = _fake_prover(tmp_path, "yes.sh", "echo 'SZS status Theorem'\n")
    src = "type u : tp\nconst d : u\nconst h : u > $o\n"
    thy, _ = parse_theory(src)
    rep = check_theory(thy, parse_term("h d", thy), Mode.STRONG_EPSILON)
    ob = rep.conjecture_obligation
    # the oracle refutes this outright (h d has a countermodel) ...
    assert discharge_one(ob).status == "refuted-countermodel"
    # ... with the oracle off, the configured prover's verdict is taken
    v = discharge_one(ob, cfg=ProverConfig(command=cmd, time_limit=5), oracle_fallback=False)
    assert v.status == "discharged-atp"


def test_sound_proofs_cross_validated_by_oracle():
    # whatever the bundled machinery proves must have no countermodel: the
    # search may exhaust its budget, but it must never find one
    from dholc.corpus import gen_all
    from dholc.oracle import countermodel, merge_context

    checked = 0
    for e in gen_all():
        for mode in (Mode.STRONG_EPSILON, Mode.WEAK_EPSILON):
            rep = check_theory(e.theory, e.conjecture, mode)
            for ob, verdict in zip(rep.obligations, discharge(rep.obligations).verdicts):
                if not verdict.discharged:
                    continue
                merged = merge_context(ob.hol_theory, ob.hol_context)
                r = countermodel(
                    merged, ob.conjecture, SearchBudget(max_size=2, max_models=50_000, max_seconds=5)
                )
                assert r.status != "countermodel", (e.name, mode.value, ob.id)
                checked += 1
    assert checked > 10


def test_report_formats():
    from dholc.corpus import gen_problem

    e = gen_problem("choice_def1")
    rep = check_theory(e.theory, e.conjecture, Mode.STRONG_EPSILON)
    report = discharge(rep.obligations)
    text = report.to_text()
    assert "overall:" in text
    js = report.to_json_dict()
    assert list(js) == [o.id for o in rep.obligations]
    for entry in js.values():
        assert set(entry) == {"kind", "status", "method", "time"}
