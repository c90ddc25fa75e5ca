"""Seeded random generation of functions with known structure, and exhaustive censuses.

Randomness comes from numpy's PCG64 bit generator seeded through a
``SeedSequence``; sub-streams are derived with ``SeedSequence.spawn`` so a
batch of samples is reproducible from one 64-bit seed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Literal, Optional, Sequence

import numpy as np

from .canalization import (
    NcDecomposition,
    PeelStep,
    WncCertificate,
    is_canalizing,
    nc_table,
    recognize_nc,
    recognize_wnc,
    segments_of,
    weakly_canalizing_hyperplanes,
)
from .funcspace import MvFunction, ProductDomain

__all__ = [
    "GenSpec",
    "int_range",
    "make_rng",
    "spawn_seeds",
    "random_function",
    "random_wnc",
    "random_nc",
    "census",
    "all_functions",
    "CENSUS_LIMIT",
]

CENSUS_LIMIT = 10**6


def int_range(M: int) -> tuple[Fraction, ...]:
    """Integer codomain ``{0, ..., M}``."""
    return tuple(Fraction(v) for v in range(M + 1))


@dataclass(frozen=True)
class GenSpec:
    ks: tuple[int, ...]
    codomain: tuple[Fraction, ...] = field(default_factory=lambda: int_range(1))
    kind: Literal["uniform", "wnc", "nc"] = "uniform"
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "ks", tuple(int(k) for k in self.ks))
        object.__setattr__(self, "codomain", tuple(Fraction(c) for c in self.codomain))
        if any(k < 1 for k in self.ks):
            raise ValueError("cardinalities must be >= 1")
        if self.kind not in ("uniform", "wnc", "nc"):
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.kind == "nc" and (not self.ks or min(self.ks) < 2):
            raise ValueError("NC generation needs n >= 1 and every k_i >= 2")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @property
    def domain(self) -> ProductDomain:
        return ProductDomain.full(self.ks)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def spawn_seeds(seed: int, count: int) -> list[int]:
    """``count`` independent 64-bit child seeds of ``seed``."""
    children = np.random.SeedSequence(seed).spawn(count)
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in children]


def _pick(rng: np.random.Generator, seq: Sequence):
    return seq[int(rng.integers(len(seq)))]


def _need_codomain(spec: GenSpec, at_least: int = 1) -> None:
    if len(set(spec.codomain)) < at_least:
        raise ValueError(f"codomain needs at least {at_least} distinct value(s)")


def random_function(spec: GenSpec) -> MvFunction:
    _need_codomain(spec)
    rng = make_rng(spec.seed)
    dom = spec.domain
    picks = rng.integers(len(spec.codomain), size=dom.size)
    return MvFunction(dom, tuple(spec.codomain[int(j)] for j in picks))


def random_wnc(spec: GenSpec) -> tuple[MvFunction, WncCertificate]:
    """Random peeling: uniform coordinate among non-singletons, uniform active value, uniform constant."""
    _need_codomain(spec)
    rng = make_rng(spec.seed)
    dom = spec.domain
    n = dom.arity
    table = np.empty(dom.shape, dtype=np.int64)
    active = [list(range(k)) for k in dom.shape]
    steps = []
    while any(len(a) > 1 for a in active):
        ax = _pick(rng, [i for i in range(n) if len(active[i]) > 1])
        a = _pick(rng, active[ax])
        b = int(rng.integers(len(spec.codomain)))
        idx = [np.array(v) for v in active]
        idx[ax] = np.array([a])
        table[np.ix_(*idx)] = b
        active[ax].remove(a)
        steps.append(PeelStep(ax + 1, a, spec.codomain[b]))
    last = int(rng.integers(len(spec.codomain)))
    table[tuple(a[0] for a in active)] = last
    f = MvFunction(dom, tuple(spec.codomain[int(j)] for j in table.ravel()))
    return f, WncCertificate(tuple(steps), spec.codomain[last])


def random_nc(spec: GenSpec) -> tuple[MvFunction, NcDecomposition]:
    _need_codomain(spec, 2)
    if spec.kind != "nc":
        spec = GenSpec(spec.ks, spec.codomain, "nc", spec.seed)
    rng = make_rng(spec.seed)
    n = len(spec.ks)
    order = tuple(int(c) + 1 for c in rng.permutation(n))
    segs = tuple(_pick(rng, segments_of(spec.ks[c - 1])) for c in order)
    outs = [_pick(rng, spec.codomain) for _ in range(n)]
    outs.append(_pick(rng, [c for c in spec.codomain if c != outs[-1]]))
    dec = NcDecomposition(order, segs, tuple(outs))
    return nc_table(spec.domain, dec), dec


def all_functions(domain: ProductDomain, codomain: Iterable) -> Iterator[MvFunction]:
    codomain = tuple(Fraction(c) for c in codomain)
    for vals in itertools.product(codomain, repeat=domain.size):
        yield MvFunction(domain, vals)


def census(domain: ProductDomain, codomain: Sequence, limit: Optional[int] = CENSUS_LIMIT) -> dict[str, int]:
    """Exhaustive classification of every function ``domain -> codomain``."""
    codomain = tuple(dict.fromkeys(Fraction(c) for c in codomain))
    if not codomain:
        raise ValueError("empty codomain")
    total = len(codomain) ** domain.size
    if limit is not None and total > limit:
        raise ValueError(f"census of {total} functions exceeds limit {limit}")
    counts = dict(total=0, weakly_canalizing=0, canalizing=0, nc=0, wnc=0)
    for f in all_functions(domain, codomain):
        hyper = weakly_canalizing_hyperplanes(f)
        counts["total"] += 1
        counts["weakly_canalizing"] += bool(hyper)
        counts["canalizing"] += any(is_canalizing(f, h) is not None for h, _ in hyper)
        counts["nc"] += recognize_nc(f) is not None
        counts["wnc"] += recognize_wnc(f, "exhaustive") is not None
    return counts
