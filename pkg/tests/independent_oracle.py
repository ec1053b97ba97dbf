"""Stand-alone Bergman references for the tests, sharing no code with the package.

Values in Q(phi) are integer pairs (a, b) = a + b*phi with phi^2 = phi + 1.
"""

from __future__ import annotations


def qmul(x, y):
    a, b = x
    c, d = y
    return (a * c + b * d, a * d + b * c + b * d)


def qadd(x, y):
    return (x[0] + y[0], x[1] + y[1])


def phi_power(n: int):
    r = (1, 0)
    base = (0, 1) if n >= 0 else (-1, 1)  # 1/phi = phi - 1
    for _ in range(abs(n)):
        r = qmul(r, base)
    return r


def value(cells: dict[int, int]):
    v = (0, 0)
    for i, c in cells.items():
        p = phi_power(i)
        v = qadd(v, (c * p[0], c * p[1]))
    return v


def _moves(S):
    ks = sorted(S)
    out = []
    if not ks:
        return out
    for i in range(ks[0] - 2, ks[-1] + 3):
        if S.get(i - 2, 0) >= 1 and S.get(i - 1, 0) >= 1:
            out.append(("c", i))
    for i in ks:
        if S[i] >= 2:
            out.append(("s", i))
    return out


def _apply(S, m):
    T = dict(S)

    def bump(i, d):
        T[i] = T.get(i, 0) + d
        if T[i] == 0:
            del T[i]

    kind, i = m
    if kind == "c":
        bump(i - 2, -1)
        bump(i - 1, -1)
        bump(i, 1)
    else:
        bump(i, -2)
        bump(i - 2, 1)
        bump(i + 1, 1)
    return T


def game_tree(cells: dict[int, int]):
    """(shortest, longest, set of terminal states as sorted item tuples)."""
    memo = {}

    def go(S):
        key = tuple(sorted(S.items()))
        if key in memo:
            return memo[key]
        ms = _moves(S)
        if not ms:
            r = (0, 0, {key})
        else:
            rs = [go(_apply(S, m)) for m in ms]
            r = (1 + min(x[0] for x in rs), 1 + max(x[1] for x in rs), set().union(*(x[2] for x in rs)))
        memo[key] = r
        return r

    return go(dict(cells))
