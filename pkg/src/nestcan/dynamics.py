"""Asynchronous state transition graphs of multivalued networks.

Updates follow unit-step semantics: from state x, gene g moves one level
toward its target ``f_g(x)``, and only one gene changes per transition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .canalization import Classification, classify
from .funcspace import (
    MvFunction,
    MvfnParseError,
    ProductDomain,
    evaluate,
    index_of,
    parse_rational,
)

__all__ = [
    "Network",
    "Stg",
    "build_stg",
    "stg_equal",
    "classify_rules",
    "export_dot",
    "parse_mvnet",
    "serialize_mvnet",
    "phage_lambda",
]


@dataclass(frozen=True)
class Network:
    names: tuple[str, ...]
    levels: tuple[int, ...]
    rules: tuple[MvFunction, ...]

    def __post_init__(self):
        if not (len(self.names) == len(self.levels) == len(self.rules)):
            raise ValueError("names, levels and rules differ in length")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate gene names")
        dom = ProductDomain.full(self.levels)
        for name, k, f in zip(self.names, self.levels, self.rules):
            if f.domain != dom:
                raise ValueError(f"rule of {name} is not defined on the network state space")
            if any(v.denominator != 1 or not 0 <= v < k for v in f.values):
                raise ValueError(f"rule of {name} leaves levels 0..{k - 1}")

    @property
    def domain(self) -> ProductDomain:
        return ProductDomain.full(self.levels)


@dataclass(frozen=True)
class Stg:
    """Edges are ``(source, target)`` state pairs in (source index, gene) order."""

    domain: ProductDomain
    edges: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]

    @property
    def sinks(self) -> list[tuple[int, ...]]:
        sources = {s for s, _ in self.edges}
        return [x for x in self.domain.points() if x not in sources]


def build_stg(net: Network) -> Stg:
    edges = []
    for x in net.domain.points():
        for g, f in enumerate(net.rules):
            target = evaluate(f, x)
            if target != x[g]:
                step = 1 if target > x[g] else -1
                y = x[:g] + (x[g] + step,) + x[g + 1:]
                edges.append((x, y))
    return Stg(net.domain, tuple(edges))


def stg_equal(a: Stg, b: Stg) -> bool:
    if a.domain != b.domain:
        raise ValueError("state spaces differ")
    return set(a.edges) == set(b.edges)


def classify_rules(net: Network) -> dict[str, Classification]:
    return {name: classify(f, "exhaustive") for name, f in zip(net.names, net.rules)}


def _state_label(x: Sequence[int]) -> str:
    return "(" + ",".join(str(v) for v in x) + ")"


def export_dot(stg: Stg) -> str:
    dom = stg.domain
    lines = ["digraph stg {"]
    for x in dom.points():
        lines.append(f'  "{_state_label(x)}";')
    ordered = sorted(
        stg.edges,
        key=lambda e: (index_of(dom, e[0]), next(g for g in range(dom.arity) if e[0][g] != e[1][g])),
    )
    for x, y in ordered:
        lines.append(f'  "{_state_label(x)}" -> "{_state_label(y)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def parse_mvnet(text: str) -> Network:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or lines[0] != "mvnet 1":
        raise MvfnParseError("missing 'mvnet 1' magic line")
    if len(lines) < 2 or not lines[1].startswith("genes:"):
        raise MvfnParseError("second line must start with 'genes:'")
    names, levels = [], []
    for tok in lines[1][6:].split():
        name, sep, k = tok.rpartition(":")
        if not sep or not name or not k.isdigit() or int(k) < 1:
            raise MvfnParseError(f"bad gene token {tok!r}")
        names.append(name)
        levels.append(int(k))
    if not names:
        raise MvfnParseError("no genes declared")
    rule_lines = lines[2:]
    if len(rule_lines) != len(names):
        raise MvfnParseError(f"expected {len(names)} rule lines, got {len(rule_lines)}")
    dom = ProductDomain.full(levels)
    rules = []
    for ln in rule_lines:
        if not ln.startswith("f:"):
            raise MvfnParseError("rule lines must start with 'f:'")
        vals = [parse_rational(t) for t in ln[2:].split()]
        if len(vals) != dom.size:
            raise MvfnParseError(f"expected {dom.size} values, got {len(vals)}")
        rules.append(MvFunction(dom, tuple(vals)))
    try:
        return Network(tuple(names), tuple(levels), tuple(rules))
    except ValueError as e:
        raise MvfnParseError(str(e)) from None


def serialize_mvnet(net: Network) -> str:
    genes = " ".join(f"{n}:{k}" for n, k in zip(net.names, net.levels))
    rules = "".join("f: " + " ".join(str(v) for v in f.values) + "\n" for f in net.rules)
    return f"mvnet 1\ngenes: {genes}\n{rules}"


def phage_lambda(variant: int = 1) -> Network:
    """Two-gene CI/Cro model; ``variant`` selects the Cro rule (1 or 2)."""
    ks = (2, 3)
    f_ci = MvFunction.from_table(ks, [1, 0, 0, 1, 0, 0])
    cro = {1: [2, 2, 1, 0, 0, 0], 2: [2, 2, 1, 0, 0, 1]}
    if variant not in cro:
        raise ValueError("variant must be 1 or 2")
    return Network(("CI", "Cro"), ks, (f_ci, MvFunction.from_table(ks, cro[variant])))
