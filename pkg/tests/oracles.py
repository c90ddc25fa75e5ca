"""Brute-force reference implementations, written straight from the definitions.

Nothing here touches numpy or the package's search code; functions are plain
``{point: Fraction}`` dicts.
"""

import itertools
from fractions import Fraction


def as_dict(f):
    return dict(zip(itertools.product(*f.domain.values), f.values))


def coord_values(table, i):
    return sorted({p[i] for p in table})


def variance(xs):
    xs = list(xs)
    mean = sum(xs, Fraction(0)) / len(xs)
    return sum((x - mean) ** 2 for x in xs) / len(xs)


def influence(table, i):
    """E_x Var_{y_i} f, i counted from 0, summing over every x (not fibres)."""
    ys = coord_values(table, i)
    total = Fraction(0)
    for x in table:
        total += variance(table[x[:i] + (y,) + x[i + 1:]] for y in ys)
    return total / len(table)


def average_sensitivity(table, n):
    return sum((influence(table, i) for i in range(n)), Fraction(0))


def is_wnc(table, n):
    """Recursive definition: size 1, or some constant hyperplane x_i = a with
    at least two values on coordinate i whose removal leaves a WNC function."""
    if len(table) == 1:
        return True
    for i in range(n):
        vals = coord_values(table, i)
        if len(vals) < 2:
            continue
        for a in vals:
            on = {table[p] for p in table if p[i] == a}
            if len(on) == 1 and is_wnc({p: v for p, v in table.items() if p[i] != a}, n):
                return True
    return False


def proper_segments(k):
    segs = {tuple(range(0, c + 1)) for c in range(k)} | {tuple(range(c, k)) for c in range(k)}
    segs.discard(tuple(range(k)))
    return sorted(segs)


def is_nc(table, ks):
    """Try every order, segment tuple and output tuple (outputs read off from f)."""
    n = len(ks)
    if n == 0 or min(ks) < 2:
        return False
    for order in itertools.permutations(range(n)):
        for segs in itertools.product(*(proper_segments(ks[c]) for c in order)):
            outs = [set() for _ in range(n + 1)]
            for p, v in table.items():
                lvl = next((l for l, c in enumerate(order) if p[c] in segs[l]), n)
                outs[lvl].add(v)
            if all(len(o) == 1 for o in outs) and outs[n - 1] != outs[n]:
                return True
    return False


def is_canalizing_anywhere(table, n):
    for i in range(n):
        vals = coord_values(table, i)
        if len(vals) < 2:
            continue
        for a in vals:
            on = {table[p] for p in table if p[i] == a}
            off = {table[p] for p in table if p[i] != a}
            if len(on) == 1 and off - on:
                return True
    return False
