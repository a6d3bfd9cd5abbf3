"""Benchmark: compiled evaluator core vs the pure-Python twin.

The workload is the oracle's hot loop — exhaustive countermodel search over
finite models — on two representative problems: the guarded-choice
reflexivity sweep at carrier size 3, and a strong-to-weak obligation
implication validity sweep for a finite-set problem.

Backend selection happens at import time, so each measurement runs in a child
process with DHOLC_EVAL_BACKEND pinned.  Usage: python benchmarks/bench_eval.py
"""

import json
import os
import subprocess
import sys
import time


def workload() -> dict:
    from dholc.corpus import gen_problem
    from dholc.erasure import ErasureVariant, erase_theory
    from dholc.kernel import Mode, ObligationKind, check_theory
    from dholc.oracle import SearchBudget, countermodel, restrict_signature
    from dholc.parser import parse_theory
    from dholc.syntax import (
        Base,
        BaseTypeDecl,
        Choice,
        ConstDecl,
        Context,
        FALSE,
        Implies,
        Theory,
        Var,
        apply,
        conj,
        top,
    )

    timings = {}

    # guarded-choice reflexivity: exhaustive "none up to size 3"
    thy, _ = parse_theory("type a : pi x : $o . tp\nconst c : a $false\n")
    rep = check_theory(thy, None, Mode.STRONG_EPSILON)
    hol = erase_theory(rep.theory_elaborated, Context(), ErasureVariant.STRONG).hol_theory
    guard = apply(Var("a*"), FALSE, Var("x"), Var("x"))
    guarded = Choice("x", Base("a"), conj(guard, top()))
    conjecture = apply(Var("a*"), FALSE, guarded, guarded)
    t0 = time.perf_counter()
    r = countermodel(hol, conjecture, SearchBudget(max_size=3, max_seconds=600))
    assert r.status == "none"
    timings["guarded_reflexivity_size3"] = time.perf_counter() - t0

    # implication validity sweep for one finite-set problem
    entry = gen_problem("no_fp_fin5_reg")
    strong = check_theory(entry.theory, entry.conjecture, Mode.STRONG_EPSILON)
    weak = check_theory(entry.theory, entry.conjecture, Mode.WEAK_EPSILON)
    s = [o for o in strong.obligations if o.kind is ObligationKind.CHOICE_WITNESS][0]
    w = [o for o in weak.obligations if o.kind is ObligationKind.TYPE_INHABITED][0]
    decls, seen = [], set()
    for d in tuple(s.hol_theory) + tuple(s.hol_context) + tuple(w.hol_theory) + tuple(w.hol_context):
        if isinstance(d, (BaseTypeDecl, ConstDecl)) and d.name not in seen:
            seen.add(d.name)
            decls.append(d)
    implication = Implies(s.conjecture, w.conjecture)
    sig = restrict_signature(Theory(tuple(decls)), [implication])
    t0 = time.perf_counter()
    r = countermodel(sig, implication, SearchBudget(max_size=2, max_models=5_000_000, max_seconds=600))
    assert r.status == "none"
    timings["mode_implication_size2"] = time.perf_counter() - t0

    return timings


def main() -> int:
    if "--worker" in sys.argv:
        from dholc.oracle import active_backend

        print(json.dumps({"backend": active_backend(), "timings": workload()}))
        return 0

    results = {}
    for backend in ("pure", "compiled"):
        env = dict(os.environ, DHOLC_EVAL_BACKEND=backend)
        proc = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--worker"],
            env=env,
            capture_output=True,
            text=True,
        )
        if proc.returncode != 0:
            if backend == "compiled":
                print("compiled backend unavailable (extension not built); skipping")
                continue
            print(proc.stderr, file=sys.stderr)
            return 1
        results[backend] = json.loads(proc.stdout.splitlines()[-1])

    names = sorted({n for r in results.values() for n in r["timings"]})
    width = max(len(n) for n in names) + 2
    print(f"{'workload':<{width}}" + "".join(f"{b:>12}" for b in results))
    for name in names:
        row = f"{name:<{width}}"
        for b in results:
            row += f"{results[b]['timings'][name]:>11.3f}s"
        print(row)
    if {"pure", "compiled"} <= results.keys():
        for name in names:
            speedup = results["pure"]["timings"][name] / results["compiled"]["timings"][name]
            print(f"{name}: compiled is {speedup:.1f}x faster")
    return 0


if __name__ == "__main__":
    sys.exit(main())
