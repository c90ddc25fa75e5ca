"""Canalizing, nested canalizing (NC) and weakly nested canalizing (WNC) structure.

A WNC function can be peeled down to a single point by repeatedly deleting a
hyperplane ``x_i = a`` (with at least two active values left in coordinate i)
on which it is constant.  Certificates record that peel sequence; NC
decompositions record the classical (order, segments, outputs) schema.  Both
are checked by independent verifiers that evaluate the schema pointwise.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Literal, Optional, Sequence

import numpy as np

from .funcspace import (
    Hyperplane,
    MvFunction,
    MvfnParseError,
    ProductDomain,
    parse_rational,
    slice_constant,
)

__all__ = [
    "Segment",
    "NcDecomposition",
    "PeelStep",
    "WncCertificate",
    "WncNormalForm",
    "Classification",
    "segments_of",
    "is_canalizing",
    "weakly_canalizing_hyperplanes",
    "recognize_wnc",
    "verify_wnc_certificate",
    "wnc_normal_form",
    "validate_normal_form",
    "recognize_nc",
    "verify_nc_decomposition",
    "nc_to_wnc",
    "nc_table",
    "classify",
    "format_certificate",
    "parse_certificate",
    "format_nc",
    "parse_nc",
]


@dataclass(frozen=True)
class Segment:
    """``{0..cut}`` (lower) or ``{cut..k-1}`` (upper); always proper and nonempty."""

    k: int
    kind: Literal["lower", "upper"]
    cut: int

    def __post_init__(self):
        if self.kind == "lower":
            ok = 0 <= self.cut <= self.k - 2
        elif self.kind == "upper":
            ok = 1 <= self.cut <= self.k - 1
        else:
            raise ValueError(f"unknown segment kind {self.kind!r}")
        if not ok:
            raise ValueError(f"segment {self.kind} cut={self.cut} is not proper in range({self.k})")

    @classmethod
    def from_bounds(cls, k: int, lo: int, hi: int) -> "Segment":
        if lo == 0:
            return cls(k, "lower", hi)
        if hi == k - 1:
            return cls(k, "upper", lo)
        raise ValueError(f"[{lo}..{hi}] is not a segment of range({k})")

    @property
    def bounds(self) -> tuple[int, int]:
        return (0, self.cut) if self.kind == "lower" else (self.cut, self.k - 1)

    @property
    def members(self) -> tuple[int, ...]:
        lo, hi = self.bounds
        return tuple(range(lo, hi + 1))

    @property
    def complement(self) -> tuple[int, ...]:
        lo, hi = self.bounds
        return tuple(v for v in range(self.k) if not lo <= v <= hi)

    def __contains__(self, v: int) -> bool:
        lo, hi = self.bounds
        return lo <= v <= hi


def segments_of(k: int) -> list[Segment]:
    """Proper nonempty segments of ``range(k)``: lower ones by growing cut, then upper ones by shrinking cut."""
    if k < 2:
        raise ValueError(f"segments need k >= 2, got {k}")
    segs = [Segment(k, "lower", c) for c in range(k - 1)]
    segs += [Segment(k, "upper", c) for c in range(k - 1, 0, -1)]
    seen, out = set(), []
    for s in segs:
        if s.members not in seen:
            seen.add(s.members)
            out.append(s)
    return out


@dataclass(frozen=True)
class NcDecomposition:
    """``order`` lists coordinates (1-based); level ``l`` tests ``x_order[l] in segments[l]``."""

    order: tuple[int, ...]
    segments: tuple[Segment, ...]
    outputs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(self.order))
        object.__setattr__(self, "segments", tuple(self.segments))
        object.__setattr__(self, "outputs", tuple(Fraction(c) for c in self.outputs))

    def structurally_valid(self, domain: ProductDomain) -> bool:
        n = domain.arity
        if n == 0 or sorted(self.order) != list(range(1, n + 1)):
            return False
        if len(self.segments) != n or len(self.outputs) != n + 1:
            return False
        if self.outputs[n - 1] == self.outputs[n]:
            return False
        return all(seg.k == domain.ranges[c - 1] for c, seg in zip(self.order, self.segments))

    def value_at(self, p: Sequence[int]) -> Fraction:
        for c, seg, out in zip(self.order, self.segments, self.outputs):
            if p[c - 1] in seg:
                return out
        return self.outputs[-1]


@dataclass(frozen=True)
class PeelStep:
    coord: int
    value: int
    constant: Fraction

    def __post_init__(self):
        object.__setattr__(self, "constant", Fraction(self.constant))


@dataclass(frozen=True)
class WncCertificate:
    steps: tuple[PeelStep, ...]
    final_value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        object.__setattr__(self, "final_value", Fraction(self.final_value))


@dataclass(frozen=True)
class WncNormalForm:
    """Clause ``r`` reads: if ``x_coords[r] == values[r]`` (and no earlier clause fired) then ``outputs[r]``."""

    coords: tuple[int, ...]
    values: tuple[int, ...]
    outputs: tuple[Fraction, ...]

    @property
    def K(self) -> int:
        return len(self.coords)

    def value_at(self, p: Sequence[int]) -> Optional[Fraction]:
        for c, a, b in zip(self.coords, self.values, self.outputs):
            if p[c - 1] == a:
                return b
        return None


@dataclass(frozen=True)
class Classification:
    weakly_canalizing: bool
    canalizing: bool
    nc: bool
    wnc: bool


# -- peeling on integer-coded tables ---------------------------------------


class _Region:
    """Coded value table on an active sub-box; labels are the active values per axis."""

    __slots__ = ("arr", "labels")

    def __init__(self, arr: np.ndarray, labels: tuple[tuple[int, ...], ...]):
        self.arr = arr
        self.labels = labels

    @classmethod
    def of(cls, f: MvFunction) -> "_Region":
        return cls(f.codes[0], f.domain.values)

    @property
    def key(self) -> tuple[tuple[int, ...], ...]:
        return self.labels

    def constant_hyperplanes(self) -> Iterator[tuple[int, int, int]]:
        """``(axis, label, code)`` for every constant hyperplane on a non-singleton axis."""
        for ax, labs in enumerate(self.labels):
            if len(labs) < 2:
                continue
            for pos, a in enumerate(labs):
                sl = np.take(self.arr, pos, axis=ax)
                lo = sl.min()
                if lo == sl.max():
                    yield ax, a, int(lo)

    def peel(self, ax: int, label: int) -> "_Region":
        pos = self.labels[ax].index(label)
        labs = self.labels[ax][:pos] + self.labels[ax][pos + 1:]
        return _Region(np.delete(self.arr, pos, axis=ax), self.labels[:ax] + (labs,) + self.labels[ax + 1:])


def is_canalizing(f: MvFunction, h: Hyperplane) -> Optional[Fraction]:
    """Canalizing constant of ``f`` on ``h``, requiring ``f`` to differ from it somewhere off ``h``."""
    if len(f.domain.values[h.coord - 1]) < 2:
        raise ValueError(f"coordinate {h.coord} is a singleton")
    b = slice_constant(f, h)
    if b is None:
        return None
    i = h.coord - 1
    if any(p[i] != h.value and v != b for p, v in f.items()):
        return b
    return None


def weakly_canalizing_hyperplanes(f: MvFunction) -> list[tuple[Hyperplane, Fraction]]:
    _, distinct = f.codes
    return [
        (Hyperplane(ax + 1, a), distinct[code])
        for ax, a, code in _Region.of(f).constant_hyperplanes()
    ]


def recognize_wnc(
    f: MvFunction, mode: Literal["greedy", "exhaustive"] = "greedy"
) -> Optional[WncCertificate]:
    """Peel certificate for ``f`` or ``None``.

    Greedy mode always peels the first constant hyperplane in (coordinate,
    value) order.  Exhaustive mode backtracks over every choice, memoising
    sub-boxes already known to fail, and returns the first certificate in the
    same scan order.
    """
    _, distinct = f.codes
    region = _Region.of(f)
    if mode == "greedy":
        steps = []
        while region.arr.size > 1:
            choice = next(region.constant_hyperplanes(), None)
            if choice is None:
                return None
            ax, a, code = choice
            steps.append(PeelStep(ax + 1, a, distinct[code]))
            region = region.peel(ax, a)
        return WncCertificate(tuple(steps), distinct[int(region.arr.flat[0])])
    if mode != "exhaustive":
        raise ValueError(f"unknown mode {mode!r}")

    dead: set = set()

    def search(reg: _Region) -> Optional[list[PeelStep]]:
        if reg.arr.size == 1:
            return []
        if reg.key in dead:
            return None
        for ax, a, code in reg.constant_hyperplanes():
            rest = search(reg.peel(ax, a))
            if rest is not None:
                return [PeelStep(ax + 1, a, distinct[code])] + rest
        dead.add(reg.key)
        return None

    steps = search(region)
    if steps is None:
        return None
    last = region
    for s in steps:
        last = last.peel(s.coord - 1, s.value)
    return WncCertificate(tuple(steps), distinct[int(last.arr.flat[0])])


def verify_wnc_certificate(f: MvFunction, cert: WncCertificate) -> bool:
    """Replays the peel sequence on explicit point sets; independent of the recognizer."""
    n = f.domain.arity
    active = [set(vs) for vs in f.domain.values]
    region = dict(f.items())
    for step in cert.steps:
        if not 1 <= step.coord <= n:
            return False
        i = step.coord - 1
        if step.value not in active[i] or len(active[i]) < 2:
            return False
        on = [p for p in region if p[i] == step.value]
        if any(region[p] != step.constant for p in on):
            return False
        for p in on:
            del region[p]
        active[i].discard(step.value)
    if len(region) != 1:
        return False
    (last,) = region.values()
    return last == cert.final_value


def wnc_normal_form(f: MvFunction, cert: WncCertificate) -> WncNormalForm:
    """Extends a peel sequence to the ``K = sum k_i`` clause characterisation.

    The trailing ``n`` clauses pin the surviving point coordinate by
    coordinate, all with the final value.
    """
    if not verify_wnc_certificate(f, cert):
        raise ValueError("certificate does not verify")
    active = [list(vs) for vs in f.domain.values]
    for s in cert.steps:
        active[s.coord - 1].remove(s.value)
    coords = [s.coord for s in cert.steps] + list(range(1, f.domain.arity + 1))
    values = [s.value for s in cert.steps] + [vs[0] for vs in active]
    outputs = [s.constant for s in cert.steps] + [cert.final_value] * f.domain.arity
    nf = WncNormalForm(tuple(coords), tuple(values), tuple(outputs))
    if not validate_normal_form(f, nf):
        raise AssertionError("normal form does not reproduce f")
    return nf


def validate_normal_form(f: MvFunction, nf: WncNormalForm) -> bool:
    """Each (coord, value) pair occurs exactly once and the clauses reproduce ``f``."""
    pairs = sorted(zip(nf.coords, nf.values))
    expected = sorted((i + 1, a) for i, vs in enumerate(f.domain.values) for a in vs)
    if pairs != expected:
        return False
    return all(nf.value_at(p) == v for p, v in f.items())


def recognize_nc(f: MvFunction, strict: bool = False) -> Optional[NcDecomposition]:
    """NC decomposition by backtracking over (unused coordinate, proper segment).

    Only full domains with every ``k_i >= 2`` can be NC.  With ``strict`` the
    values must also be integers in ``range(max k_i)``, as in the classical
    definition.
    """
    dom = f.domain
    n = dom.arity
    if n == 0 or not dom.is_full or min(dom.shape) < 2:
        return None
    if strict:
        kmax = max(dom.ranges)
        if any(v.denominator != 1 or not 0 <= v < kmax for v in f.values):
            return None
    codes, distinct = f.codes
    segs = [segments_of(k) for k in dom.ranges]
    dead: set = set()

    def search(region: np.ndarray, used: frozenset, path: tuple) -> Optional[list]:
        # region keeps every axis; consumed axes are already cut to their complements
        lo = region.min()
        if lo == region.max():
            # all later outputs would coincide, so c_n == c_{n+1}
            return None
        key = frozenset(path)
        if key in dead:
            return None
        for ax in range(n):
            if ax in used:
                continue
            for seg in segs[ax]:
                inside = np.take(region, seg.members, axis=ax)
                c = inside.min()
                if c != inside.max():
                    continue
                outside = np.take(region, seg.complement, axis=ax)
                if len(used) == n - 1:
                    last = outside.min()
                    if last == outside.max() and last != c:
                        return [(ax, seg, int(c)), int(last)]
                    continue
                rest = search(outside, used | {ax}, path + ((ax, seg),))
                if rest is not None:
                    return [(ax, seg, int(c))] + rest
        dead.add(key)
        return None

    found = search(codes, frozenset(), ())
    if found is None:
        return None
    levels, last = found[:-1], found[-1]
    return NcDecomposition(
        tuple(ax + 1 for ax, _, _ in levels),
        tuple(seg for _, seg, _ in levels),
        tuple(distinct[c] for _, _, c in levels) + (distinct[last],),
    )


def verify_nc_decomposition(f: MvFunction, dec: NcDecomposition) -> bool:
    if not f.domain.is_full or not dec.structurally_valid(f.domain):
        return False
    return all(dec.value_at(p) == v for p, v in f.items())


def nc_table(domain: ProductDomain, dec: NcDecomposition) -> MvFunction:
    """Materialises the function described by an NC schema."""
    if not dec.structurally_valid(domain):
        raise ValueError("decomposition is not structurally valid for this domain")
    return MvFunction(domain, tuple(dec.value_at(p) for p in domain.points()))


def nc_to_wnc(f: MvFunction, dec: NcDecomposition) -> WncCertificate:
    """Peel order of the NC-implies-WNC construction.

    Segment values first, level by level and ascending, each with its level
    output; then complement values in the same coordinate order with the last
    output.  The final remaining value of each coordinate is not a peel (its
    coordinate is a singleton by then) and ends up in the trailing clauses of
    the normal form.
    """
    if not verify_nc_decomposition(f, dec):
        raise ValueError("decomposition does not verify")
    remaining = {c: f.domain.ranges[c - 1] for c in dec.order}
    steps = []
    for c, seg, out in zip(dec.order, dec.segments, dec.outputs):
        for a in seg.members:
            steps.append(PeelStep(c, a, out))
            remaining[c] -= 1
    for c, seg in zip(dec.order, dec.segments):
        for a in seg.complement:
            if remaining[c] < 2:
                break
            steps.append(PeelStep(c, a, dec.outputs[-1]))
            remaining[c] -= 1
    cert = WncCertificate(tuple(steps), dec.outputs[-1])
    if not verify_wnc_certificate(f, cert):
        raise AssertionError("constructed certificate does not verify")
    return cert


def classify(f: MvFunction, mode: Literal["greedy", "exhaustive"] = "greedy") -> Classification:
    hyper = weakly_canalizing_hyperplanes(f)
    canal = any(is_canalizing(f, h) is not None for h, _ in hyper)
    return Classification(
        weakly_canalizing=bool(hyper),
        canalizing=canal,
        nc=recognize_nc(f) is not None,
        wnc=recognize_wnc(f, mode) is not None,
    )


# -- text forms ------------------------------------------------------------


def format_certificate(cert: WncCertificate) -> str:
    lines = [f"peel {s.coord} {s.value} {s.constant}" for s in cert.steps]
    lines.append(f"value {cert.final_value}")
    return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> WncCertificate:
    steps, final = [], None
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        toks = ln.split()
        if final is not None:
            raise MvfnParseError("lines after 'value'")
        if toks[0] == "peel" and len(toks) == 4:
            if not (toks[1].isdigit() and toks[2].isdigit()):
                raise MvfnParseError(f"bad peel line {ln!r}")
            steps.append(PeelStep(int(toks[1]), int(toks[2]), parse_rational(toks[3])))
        elif toks[0] == "value" and len(toks) == 2:
            final = parse_rational(toks[1])
        else:
            raise MvfnParseError(f"bad certificate line {ln!r}")
    if final is None:
        raise MvfnParseError("missing 'value' line")
    return WncCertificate(tuple(steps), final)


def format_nc(dec: NcDecomposition) -> str:
    sigma = ",".join(str(c) for c in dec.order)
    segs = " ".join(
        f"A_{j}=[{s.bounds[0]}..{s.bounds[1]}]" for j, s in enumerate(dec.segments, start=1)
    )
    outs = ",".join(str(c) for c in dec.outputs)
    return f"nc sigma={sigma} {segs} c={outs}\n"


_NC_SEG = re.compile(r"^A_(\d+)=\[(\d+)\.\.(\d+)\]$")


def parse_nc(text: str, domain: ProductDomain) -> NcDecomposition:
    """Parse ``format_nc`` output; segment cardinalities are taken from ``domain``."""
    toks = text.split()
    if len(toks) < 3 or toks[0] != "nc" or not toks[1].startswith("sigma=") or not toks[-1].startswith("c="):
        raise MvfnParseError(f"bad nc line {text.strip()!r}")
    try:
        order = tuple(int(t) for t in toks[1][6:].split(","))
    except ValueError:
        raise MvfnParseError("bad sigma") from None
    outputs = tuple(parse_rational(t) for t in toks[-1][2:].split(","))
    seg_toks = toks[2:-1]
    if len(seg_toks) != len(order):
        raise MvfnParseError("segment count does not match sigma")
    segs = []
    for j, (tok, c) in enumerate(zip(seg_toks, order), start=1):
        m = _NC_SEG.match(tok)
        if not m or int(m.group(1)) != j:
            raise MvfnParseError(f"bad segment token {tok!r}")
        if not 1 <= c <= domain.arity:
            raise MvfnParseError(f"coordinate {c} out of range")
        try:
            segs.append(Segment.from_bounds(domain.ranges[c - 1], int(m.group(2)), int(m.group(3))))
        except ValueError as e:
            raise MvfnParseError(str(e)) from None
    return NcDecomposition(order, tuple(segs), outputs)
