"""Independent symbolic backward induction used to freeze expected values.

Solves the quantity subgame by literally maximizing each manager's objective
(sympy solve of the first-order condition) from the last stage backwards,
then the owners' stage-0 problem by solving all owners' first-order
conditions simultaneously with a_1 fixed at 0.
"""
import sys
import sympy as sp


def subgame(n, a, c, rates):
    q = sp.symbols(f"q1:{n + 1}")
    responses = {}
    for i in range(n, 0, -1):
        subs = {}
        # successors respond to predecessors (already expressed via q_1..q_i)
        total = sum(q[:i])
        for k in range(i + 1, n + 1):
            total += responses[k]
        objective = (a - total - c + rates[i - 1]) * q[i - 1]
        best = sp.solve(sp.diff(objective, q[i - 1]), q[i - 1])[0]
        responses[i] = sp.simplify(best)
        for k in range(i + 1, n + 1):
            responses[k] = sp.simplify(responses[k].subs(q[i - 1], best))
    values = [sp.nsimplify(responses[i]) for i in range(1, n + 1)]
    price = a - sum(values)
    return values, price


def delegation(n, a, c):
    rates = [sp.Integer(0)] + list(sp.symbols(f"a2:{n + 1}"))
    qs, price = subgame(n, a, c, rates)
    eqs = [sp.diff((price - c) * qs[i - 1], rates[i - 1]) for i in range(2, n + 1)]
    sol = sp.solve(eqs, rates[1:], dict=True)[0]
    fixed = [sp.Integer(0)] + [sol[r] for r in rates[1:]]
    qv, pv = subgame(n, a, c, fixed)
    return fixed, qv, pv, [(pv - c) * x for x in qv]


if __name__ == "__main__":
    for n, a, c in [(2, 1, 0), (3, 1, 0), (4, 1, 0), (2, 5, 1), (3, 11, 1)]:
        r, q, p, u = delegation(n, sp.Integer(a), sp.Integer(c))
        print(f"n={n} a={a} c={c}: rates={r} q={q} P={p} u={u}")
    print("subgame n=3 (0,1/9,1/3):", subgame(3, 1, 0, [0, sp.Rational(1, 9), sp.Rational(1, 3)]))
    print("subgame n=2 (0,1/3):", subgame(2, 1, 0, [0, sp.Rational(1, 3)]))
    print("subgame n=4 (1/7,0,2/5,1/3):", subgame(4, 1, 0, [sp.Rational(1, 7), 0, sp.Rational(2, 5), sp.Rational(1, 3)]))
