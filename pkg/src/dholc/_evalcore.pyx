# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled evaluator core; pure-Python twin in dholc._evalpure.

Same opcodes, same 5-int node layout, same semantics.  Values are 64-bit here,
so the caller only selects this backend when every type cardinality fits."""

OP_VAR = 0
OP_FALSE = 1
OP_IMPL = 2
OP_EQ = 3
OP_FORALL = 4
OP_LAMBDA = 5
OP_APP = 6
OP_CHOICE = 7


def run(long long[:] nodes, long long root, long long[:] env):
    return _eval(nodes, root, env)


cdef long long _eval(long long[:] nodes, long long idx, long long[:] env):
    cdef long long base = idx * 5
    cdef long long op = nodes[base]
    cdef long long a = nodes[base + 1]
    cdef long long b = nodes[base + 2]
    cdef long long c = nodes[base + 3]
    cdef long long d, v, acc, pw, f, x
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
        for v in range(x):
            f //= c
        return f % c
    if op == OP_CHOICE:
        for v in range(c):
            env[b] = v
            if _eval(nodes, a, env) != 0:
                return v
        return 0
    raise ValueError("bad opcode")
