"""Pure-Python twin of the compiled evaluator core (dholc._evalcore).

Keep the two interpreters in lock-step: same opcodes, same node layout
(5 ints per node), same semantics.  This one works on plain lists and
arbitrary-precision integers, so it has no cardinality limit.
"""

from __future__ import annotations

OP_VAR, OP_FALSE, OP_IMPL, OP_EQ, OP_FORALL, OP_LAMBDA, OP_APP, OP_CHOICE = range(8)


def run(nodes, root, env):
    return _eval(nodes, root, env)


def _eval(nodes, idx, env):
    base = idx * 5
    op = nodes[base]
    a = nodes[base + 1]
    b = nodes[base + 2]
    c = nodes[base + 3]
    if op == OP_VAR:
        return env[a]
    if op == OP_FALSE:
        return 0
    if op == OP_IMPL:
        if _eval(nodes, a, env) == 0:
            return 1
        return _eval(nodes, b, env)
    if op == OP_EQ:
        return 1 if _eval(nodes, a, env) == _eval(nodes, b, env) else 0
    if op == OP_FORALL:
        for v in range(c):
            env[b] = v
            if _eval(nodes, a, env) == 0:
                return 0
        return 1
    if op == OP_LAMBDA:
        d = nodes[base + 4]
        acc = 0
        pw = 1
        for v in range(c):
            env[b] = v
            acc += _eval(nodes, a, env) * pw
            pw *= d
        return acc
    if op == OP_APP:
        f = _eval(nodes, a, env)
        x = _eval(nodes, b, env)
        for _ in range(x):
            f //= c
        return f % c
    if op == OP_CHOICE:
        for v in range(c):
            env[b] = v
            if _eval(nodes, a, env) != 0:
                return v
        return 0
    raise ValueError(f"bad opcode {op}")
