"""Product domains, exact multivalued functions and the ``mvfn`` text format.

Points are tuples of integer labels.  Coordinates are numbered from 1 in every
public signature (``Hyperplane.coord``, influence indices, ...); value labels
start at 0.  Tables are stored in mixed-radix order with the last coordinate
varying fastest, over the active values of each coordinate in ascending order.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Iterator, Optional, Sequence, Union

import numpy as np

__all__ = [
    "ProductDomain",
    "MvFunction",
    "Hyperplane",
    "MvfnParseError",
    "index_of",
    "point_at",
    "evaluate",
    "restrict",
    "slice_constant",
    "parse_mvfn",
    "serialize_mvfn",
    "parse_rational",
]

Point = tuple
Number = Union[int, Fraction]

_RATIONAL = re.compile(r"^-?\d+(?:/\d+)?$")


class MvfnParseError(ValueError):
    """Malformed ``mvfn``/``mvnet``/certificate text."""


def parse_rational(token: str) -> Fraction:
    """Parse an integer or ``p/q`` token; decimals and exponents are rejected."""
    if not _RATIONAL.match(token):
        raise MvfnParseError(f"malformed rational token {token!r}")
    try:
        return Fraction(token)
    except ZeroDivisionError:
        raise MvfnParseError(f"zero denominator in {token!r}") from None


@dataclass(frozen=True)
class ProductDomain:
    """Product of per-coordinate value sets.

    ``ranges[i]`` is the original cardinality k_i of coordinate i+1, so labels
    live in ``{0, ..., k_i - 1}``; ``values[i]`` is the currently active subset.
    Restriction removes labels but never renumbers them.
    """

    ranges: tuple[int, ...]
    values: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.ranges) != len(self.values):
            raise ValueError("ranges and values differ in arity")
        for k, vs in zip(self.ranges, self.values):
            if k < 1:
                raise ValueError(f"cardinality must be >= 1, got {k}")
            if not vs:
                raise ValueError("empty value set")
            if list(vs) != sorted(set(vs)) or vs[0] < 0 or vs[-1] >= k:
                raise ValueError(f"value set {vs} not sorted/unique within range({k})")

    @classmethod
    def full(cls, ks: Iterable[int]) -> "ProductDomain":
        ks = tuple(int(k) for k in ks)
        for k in ks:
            if k < 1:
                raise ValueError(f"cardinality must be >= 1, got {k}")
        return cls(ks, tuple(tuple(range(k)) for k in ks))

    @property
    def arity(self) -> int:
        return len(self.values)

    @property
    def shape(self) -> tuple[int, ...]:
        """Active cardinalities."""
        return tuple(len(vs) for vs in self.values)

    @property
    def size(self) -> int:
        return math.prod(self.shape)

    @property
    def is_full(self) -> bool:
        return all(len(vs) == k for k, vs in zip(self.ranges, self.values))

    @cached_property
    def _positions(self) -> tuple[dict[int, int], ...]:
        return tuple({v: p for p, v in enumerate(vs)} for vs in self.values)

    def contains(self, p: Sequence[int]) -> bool:
        return len(p) == self.arity and all(v in pos for v, pos in zip(p, self._positions))

    def positions(self, p: Sequence[int]) -> tuple[int, ...]:
        """Per-coordinate positions of ``p`` among the active values."""
        if len(p) != self.arity:
            raise ValueError(f"point {tuple(p)} has wrong arity for {self.arity}-ary domain")
        try:
            return tuple(pos[v] for v, pos in zip(p, self._positions))
        except KeyError:
            raise ValueError(f"point {tuple(p)} has an inactive coordinate value") from None

    def points(self) -> Iterator[Point]:
        return itertools.product(*self.values)

    def remove(self, coord: int, value: int) -> "ProductDomain":
        i = _axis(self, coord)
        vs = self.values[i]
        if value not in vs:
            raise ValueError(f"value {value} not active in coordinate {coord}")
        if len(vs) < 2:
            raise ValueError(f"coordinate {coord} is already a singleton")
        new = tuple(v for v in vs if v != value)
        return ProductDomain(self.ranges, self.values[:i] + (new,) + self.values[i + 1:])


@dataclass(frozen=True)
class Hyperplane:
    """The set ``{x | x_coord = value}``; ``coord`` counts from 1."""

    coord: int
    value: int


def _axis(domain: ProductDomain, coord: int) -> int:
    if not 1 <= coord <= domain.arity:
        raise ValueError(f"coordinate {coord} out of range 1..{domain.arity}")
    return coord - 1


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, np.integer)):
        return Fraction(int(v))
    if isinstance(v, str):
        return parse_rational(v)
    raise TypeError(f"values must be int, Fraction or rational strings, got {type(v).__name__}")


@dataclass(frozen=True)
class MvFunction:
    """A real-valued function on a product domain, stored as an exact table."""

    domain: ProductDomain
    values: tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(_as_fraction(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if len(vals) != self.domain.size:
            raise ValueError(f"expected {self.domain.size} values, got {len(vals)}")

    @classmethod
    def from_table(cls, ks: Iterable[int], values: Iterable[Number]) -> "MvFunction":
        return cls(ProductDomain.full(ks), tuple(values))

    @classmethod
    def from_callable(cls, domain: ProductDomain, fn: Callable[..., Number]) -> "MvFunction":
        return cls(domain, tuple(fn(*p) for p in domain.points()))

    @classmethod
    def constant(cls, domain: ProductDomain, c: Number) -> "MvFunction":
        return cls(domain, (c,) * domain.size)

    @property
    def max(self) -> Fraction:
        return max(self.values)

    @property
    def min(self) -> Fraction:
        return min(self.values)

    def __call__(self, *p: int) -> Fraction:
        return evaluate(self, p)

    def items(self) -> Iterator[tuple[Point, Fraction]]:
        return zip(self.domain.points(), self.values)

    def table(self) -> np.ndarray:
        """Values as an object array of Fractions shaped like the domain."""
        arr = np.empty(len(self.values), dtype=object)
        arr[:] = self.values
        return arr.reshape(self.domain.shape)

    @cached_property
    def codes(self) -> tuple[np.ndarray, tuple[Fraction, ...]]:
        """Integer codes of the values (shaped) and the sorted distinct values."""
        distinct = tuple(sorted(set(self.values)))
        lookup = {v: c for c, v in enumerate(distinct)}
        codes = np.fromiter((lookup[v] for v in self.values), dtype=np.int64, count=len(self.values))
        return codes.reshape(self.domain.shape), distinct

    @cached_property
    def scaled(self) -> tuple[np.ndarray, int]:
        """Exact integer table ``w`` and denominator ``d`` with ``f = w / d``.

        The array is int64 when sums of squares over the table cannot overflow,
        otherwise an object array of Python ints.
        """
        d = math.lcm(*(v.denominator for v in self.values))
        ints = [v.numerator * (d // v.denominator) for v in self.values]
        big = max(abs(w) for w in ints)
        safe = big < 2**16 and len(ints) * max(self.domain.shape + (1,)) < 2**26
        arr = np.array(ints, dtype=np.int64 if safe else object)
        return arr.reshape(self.domain.shape), d


def index_of(domain: ProductDomain, p: Sequence[int]) -> int:
    idx = 0
    for pos, n in zip(domain.positions(p), domain.shape):
        idx = idx * n + pos
    return idx


def point_at(domain: ProductDomain, idx: int) -> Point:
    if not 0 <= idx < domain.size:
        raise ValueError(f"index {idx} out of range 0..{domain.size - 1}")
    out = []
    for vs in reversed(domain.values):
        idx, r = divmod(idx, len(vs))
        out.append(vs[r])
    return tuple(reversed(out))


def evaluate(f: MvFunction, p: Sequence[int]) -> Fraction:
    return f.values[index_of(f.domain, p)]


def restrict(f: MvFunction, h: Hyperplane) -> MvFunction:
    """Restriction of ``f`` to ``{x | x_coord != value}``."""
    sub = f.domain.remove(h.coord, h.value)
    i = h.coord - 1
    kept = tuple(v for p, v in f.items() if p[i] != h.value)
    return MvFunction(sub, kept)


def slice_constant(f: MvFunction, h: Hyperplane) -> Optional[Fraction]:
    """Value ``b`` if ``f`` is constant on the hyperplane, else ``None``."""
    i = _axis(f.domain, h.coord)
    if h.value not in f.domain.values[i]:
        raise ValueError(f"value {h.value} not active in coordinate {h.coord}")
    vals = {v for p, v in f.items() if p[i] == h.value}
    return vals.pop() if len(vals) == 1 else None


def parse_mvfn(text: str) -> MvFunction:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or lines[0] != "mvfn 1":
        raise MvfnParseError("missing 'mvfn 1' magic line")
    if len(lines) != 3:
        raise MvfnParseError(f"expected 3 non-comment lines, got {len(lines)}")
    ks = _parse_k_line(lines[1])
    if not lines[2].startswith("f:"):
        raise MvfnParseError("third line must start with 'f:'")
    vals = [parse_rational(t) for t in lines[2][2:].split()]
    domain = ProductDomain.full(ks)
    if len(vals) != domain.size:
        raise MvfnParseError(f"expected {domain.size} values, got {len(vals)}")
    return MvFunction(domain, tuple(vals))


def _parse_k_line(line: str) -> list[int]:
    if not line.startswith("k:"):
        raise MvfnParseError("second line must start with 'k:'")
    toks = line[2:].split()
    if not toks or not all(t.isdigit() for t in toks):
        raise MvfnParseError(f"bad cardinality line {line!r}")
    ks = [int(t) for t in toks]
    if any(k < 1 for k in ks):
        raise MvfnParseError("cardinalities must be >= 1")
    return ks


def serialize_mvfn(f: MvFunction) -> str:
    if not f.domain.is_full:
        raise ValueError("only functions on full (unrestricted) domains can be serialized")
    ks = " ".join(str(k) for k in f.domain.ranges)
    vals = " ".join(str(v) for v in f.values)
    return f"mvfn 1\nk: {ks}\nf: {vals}\n"
