"""Exact reference values, computed independently of the feq package.

Solves the d'Alembert system as polynomial equations in the unknown values
f(g) with sympy, using only hand-written multiplication rules (no Cayley
tables from feq).  The printed values are frozen into the test suite.

Run: python3 oracles/derive_values.py
"""

import itertools

import sympy as sp


def z_mul(n):
    return lambda a, b: (a + b) % n, lambda a: (-a) % n, list(range(n))


def s3():
    perms = sorted(itertools.permutations(range(3)))

    def mul(a, b):  # composition a o b
        return tuple(a[b[i]] for i in range(3))

    def inv(a):
        out = [0] * 3
        for i, v in enumerate(a):
            out[v] = i
        return tuple(out)

    return mul, inv, perms


def dalembert_solutions(mul, inv, elems, K, mu):
    """All f with avg_k f(x k y k^-1) + mu(y) avg_k f(x k y^-1 k^-1) = 2 f(x) f(y)."""
    idx = {g: i for i, g in enumerate(elems)}
    f = sp.symbols(f"f0:{len(elems)}")
    eqs = set()
    for x in elems:
        for y in elems:
            lhs = 0
            for k in K:
                a = mul(mul(mul(x, k), y), inv(k))
                b = mul(mul(mul(x, k), inv(y)), inv(k))
                lhs += f[idx[a]] + mu[idx[y]] * f[idx[b]]
            eqs.add(sp.expand(lhs / len(K) - 2 * f[idx[x]] * f[idx[y]]))
    sols = sp.solve(list(eqs), f, dict=True)
    out = []
    for s in sols:
        vec = [sp.nsimplify(sp.simplify(s.get(v, v))) for v in f]
        if any(v.free_symbols for v in vec):
            raise RuntimeError("non-isolated solution")
        out.append(vec)
    return out


def report(name, sols):
    print(name)
    for s in sorted(sols, key=lambda v: [(-complex(z).real, -complex(z).imag) for z in v]):
        print("   ", [sp.nsimplify(z) for z in s])


if __name__ == "__main__":
    I = sp.I
    mul, inv, el = z_mul(4)
    report("Z4, K={e}, mu=1", dalembert_solutions(mul, inv, el, [0], [1] * 4))
    report("Z4, K={e}, mu=i^x", dalembert_solutions(mul, inv, el, [0], [I**x for x in el]))
    mul, inv, el = z_mul(6)
    report("Z6, K={e}, mu=1", dalembert_solutions(mul, inv, el, [0], [1] * 6))
    mul, inv, el = s3()
    sign = [sp.Integer(sp.combinatorics.Permutation(list(p)).signature()) for p in el]
    report("S3 (lex one-line order), K=S3, mu=1", dalembert_solutions(mul, inv, el, el, [1] * 6))
    report("S3, K=S3, mu=sign", dalembert_solutions(mul, inv, el, el, sign))
    K = [el[0], el[1]]  # identity and the transposition fixing the first point
    report("S3, K={e,(23)}, mu=1", dalembert_solutions(mul, inv, el, K, [1] * 6))
