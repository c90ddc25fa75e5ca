"""Command-line entry point: ``nestcan <subcommand> ...``.

Exit codes: 0 success, 1 ``dynamics --compare`` inequality or a falsified
bound, 2 parse errors, 3 precondition violations.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import canalization as can
from . import dynamics as dyn
from . import generators as gen
from . import sensitivity as sens
from . import spectral as spec
from .funcspace import (
    Hyperplane,
    MvFunction,
    MvfnParseError,
    ProductDomain,
    parse_mvfn,
    parse_rational,
    point_at,
    restrict,
    serialize_mvfn,
)


def fmt(x: Fraction) -> str:
    """Exact form followed by a 12-significant-digit decimal."""
    return f"{x} (~{float(x):.12g})"


def _yn(b: Optional[bool]) -> str:
    return "n/a" if b is None else ("yes" if b else "no")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise MvfnParseError(f"cannot read {path}: {e.strerror}") from None


def _load(args) -> MvFunction:
    f = parse_mvfn(_read(args.file))
    for tok in getattr(args, "restrict", None) or []:
        coord, sep, value = tok.partition("=")
        if not sep or not coord.isdigit() or not value.isdigit():
            raise MvfnParseError(f"bad --restrict token {tok!r}, expected COORD=VALUE")
        f = restrict(f, Hyperplane(int(coord), int(value)))
    return f


def _codomain(args) -> tuple[Fraction, ...]:
    if args.values:
        return tuple(parse_rational(t) for t in args.values)
    return gen.int_range(args.max)


def _emit(args, text_lines: list[str], doc: dict) -> None:
    if args.json:
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        for ln in text_lines:
            print(ln)


def cmd_classify(args) -> int:
    f = _load(args)
    wnc = can.recognize_wnc(f, args.mode)
    nc = can.recognize_nc(f, strict=args.strict)
    cls = can.classify(f, args.mode)
    lines = [
        f"weakly_canalizing: {_yn(cls.weakly_canalizing)}",
        f"canalizing: {_yn(cls.canalizing)}",
        f"nc: {_yn(nc is not None)}",
        f"wnc: {_yn(wnc is not None)}",
    ]
    doc = {
        "weakly_canalizing": cls.weakly_canalizing,
        "canalizing": cls.canalizing,
        "nc": nc is not None,
        "wnc": wnc is not None,
    }
    if args.certificate:
        if wnc is not None:
            assert can.verify_wnc_certificate(f, wnc)
            lines += ["# wnc certificate", can.format_certificate(wnc).rstrip("\n")]
            doc["wnc_certificate"] = can.format_certificate(wnc)
        if nc is not None:
            assert can.verify_nc_decomposition(f, nc)
            derived = can.nc_to_wnc(f, nc)
            lines += ["# nc decomposition", can.format_nc(nc).rstrip("\n")]
            lines += ["# certificate derived from nc", can.format_certificate(derived).rstrip("\n")]
            doc["nc_decomposition"] = can.format_nc(nc)
            doc["nc_derived_certificate"] = can.format_certificate(derived)
    if args.normal_form and wnc is not None:
        nf = can.wnc_normal_form(f, wnc)
        lines.append(f"# normal form K={nf.K}")
        lines += [f"clause x_{c} = {a} -> {b}" for c, a, b in zip(nf.coords, nf.values, nf.outputs)]
        doc["normal_form"] = [[c, a, str(b)] for c, a, b in zip(nf.coords, nf.values, nf.outputs)]
    _emit(args, lines, doc)
    return 0


def cmd_sensitivity(args) -> int:
    f = _load(args)
    infl = sens.influences(f)
    total = sens.average_sensitivity(f)
    lines = [f"Inf_{i} = {fmt(v)}" for i, v in enumerate(infl, start=1)]
    lines.append(f"AS = {fmt(total)}")
    doc = {"influences": [str(v) for v in infl], "average_sensitivity": str(total)}
    if args.boundary:
        fr = [sens.boundary_edge_fraction(f, i) for i in range(1, f.domain.arity + 1)]
        lines += [f"Edge_{i} = {fmt(v)}" for i, v in enumerate(fr, start=1)]
        doc["boundary_edge_fractions"] = [str(v) for v in fr]
    if args.spectral:
        basis = spec.build_fourier_basis(f.domain, args.basis, args.seed)
        spectrum = spec.fourier_transform(f, basis)
        lines.insert(0, f"# basis={args.basis} seed={args.seed}")
        rows = []
        for i in range(1, f.domain.arity + 1):
            lap = spec.laplacian_influence(f, i)
            sp = spec.influence_spectral(f, basis, i, spectrum)
            lines.append(f"Inf_{i} laplacian = {fmt(lap)} spectral = {sp:.17g}")
            rows.append({"laplacian": str(lap), "spectral": sp})
        doc["spectral"] = rows
        doc["basis"] = {"kind": args.basis, "seed": args.seed}
    _emit(args, lines, doc)
    return 0


def _report_lines(rep: sens.SensitivityReport) -> list[str]:
    lines = [f"Inf_{i} = {fmt(v)}" for i, v in enumerate(rep.influences, start=1)]
    lines += [
        f"AS = {fmt(rep.average_sensitivity)}",
        f"M = {fmt(rep.M)}",
        f"m = {fmt(rep.m)}",
        f"kappa = {fmt(rep.kappa)}",
        f"wnc_bound = {'n/a' if rep.wnc_bound is None else fmt(rep.wnc_bound)}",
        f"generic_bound = {'n/a' if rep.generic_bound is None else fmt(rep.generic_bound)}",
        f"is_wnc = {_yn(rep.is_wnc)}",
        f"bound_holds = {_yn(rep.bound_holds)}",
        f"ratio = {'n/a' if rep.ratio is None else fmt(rep.ratio)}",
    ]
    if rep.wnc_bound is None:
        verdict = "not-applicable"
    elif not rep.is_wnc:
        verdict = "not-wnc"
    else:
        verdict = "ok" if rep.bound_holds else "VIOLATED"
    bound = "n/a" if rep.wnc_bound is None else str(rep.wnc_bound)
    lines.append(f"AS={rep.average_sensitivity} bound={bound} {verdict}")
    return lines


def cmd_bound(args) -> int:
    f = _load(args)
    rep = sens.check_theorem(f, args.mode)
    _emit(args, _report_lines(rep), rep.to_dict())
    return 1 if rep.falsified else 0


def cmd_spectrum(args) -> int:
    f = _load(args)
    basis = spec.build_fourier_basis(f.domain, args.basis, args.seed)
    spectrum = spec.fourier_transform(f, basis)
    lines = [f"# basis={args.basis} seed={args.seed}"]
    rows = []
    alphas = ProductDomain.full(basis.shape)
    for idx, c in enumerate(spectrum.coefficients.ravel()):
        alpha = point_at(alphas, idx)
        a = ",".join(str(v) for v in alpha)
        lines.append(f"alpha=({a}) coeff={c:.17g}")
        rows.append({"alpha": list(alpha), "coeff": float(c)})
    doc = {"basis": {"kind": args.basis, "seed": args.seed}, "coefficients": rows}
    if args.check:
        back = spec.inverse_transform(spectrum, basis)
        err = max(abs(float(a - b)) for a, b in zip(back.values, f.values))
        lines.append(f"# roundtrip max error {err:.3g}")
        lines.append(f"# orthonormality error {basis.orthonormality_error():.3g}")
        for i in range(1, f.domain.arity + 1):
            exact = spec.conditional_expectation(f, i)
            approx = spec.conditional_expectation_spectral(f, basis, i).ravel()
            e = max(abs(float(a) - b) for a, b in zip(exact.values, approx))
            lines.append(f"# E_{i} exact vs spectral max error {e:.3g}")
        doc["roundtrip_error"] = err
    _emit(args, lines, doc)
    return 0


def cmd_gen(args) -> int:
    codomain = _codomain(args)
    seeds = gen.spawn_seeds(args.seed, args.count)
    out = Path(args.out) if args.out else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
    lines = [f"# gen kind={args.kind} k={' '.join(map(str, args.k))} seed={args.seed} count={args.count}"]
    docs = []
    for j, s in enumerate(seeds):
        gs = gen.GenSpec(tuple(args.k), codomain, args.kind, s)
        sidecar, ext = None, None
        if args.kind == "uniform":
            f = gen.random_function(gs)
        elif args.kind == "wnc":
            f, cert = gen.random_wnc(gs)
            sidecar, ext = can.format_certificate(cert), "cert"
        else:
            f, dec = gen.random_nc(gs)
            sidecar, ext = can.format_nc(dec), "nc"
        body = serialize_mvfn(f)
        header = f"# sample {j} seed={s}\n"
        docs.append({"index": j, "seed": s, "mvfn": body, "sidecar": sidecar})
        if out is None:
            lines.append(header + body.rstrip("\n"))
            if sidecar:
                lines.append(f"# {ext}\n" + sidecar.rstrip("\n"))
        else:
            path = out / f"f_{j:04d}.mvfn"
            path.write_text(header + body, encoding="utf-8")
            lines.append(str(path))
            if sidecar:
                side = out / f"f_{j:04d}.{ext}"
                side.write_text(sidecar, encoding="utf-8")
                lines.append(str(side))
    _emit(args, lines, {"kind": args.kind, "seed": args.seed, "samples": docs})
    return 0


def cmd_census(args) -> int:
    counts = gen.census(ProductDomain.full(args.k), _codomain(args))
    _emit(args, [f"{name}: {c}" for name, c in counts.items()], counts)
    return 0


def _load_net(path: str) -> dyn.Network:
    return dyn.parse_mvnet(_read(path))


def cmd_dynamics(args) -> int:
    if args.compare:
        a, b = (dyn.build_stg(_load_net(p)) for p in args.compare)
        eq = dyn.stg_equal(a, b)
        _emit(args, ["equal" if eq else "different"], {"equal": eq})
        return 0 if eq else 1
    if not args.net:
        raise ValueError("dynamics needs a network file or --compare A B")
    net = _load_net(args.net)
    stg = dyn.build_stg(net)
    lines = [f"# states {stg.domain.size} edges {len(stg.edges)}"]
    lines += [f"{dyn._state_label(x)} -> {dyn._state_label(y)}" for x, y in stg.edges]
    lines += [f"sink {dyn._state_label(x)}" for x in stg.sinks]
    doc = {
        "states": stg.domain.size,
        "edges": [[list(x), list(y)] for x, y in stg.edges],
        "sinks": [list(x) for x in stg.sinks],
    }
    if args.classify:
        rules = dyn.classify_rules(net)
        for name, c in rules.items():
            lines.append(
                f"rule {name}: weakly_canalizing={_yn(c.weakly_canalizing)} "
                f"canalizing={_yn(c.canalizing)} nc={_yn(c.nc)} wnc={_yn(c.wnc)}"
            )
        doc["rules"] = {name: vars(c) for name, c in rules.items()}
    if args.dot:
        Path(args.dot).write_text(dyn.export_dot(stg), encoding="utf-8")
    _emit(args, lines, doc)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nestcan", description="Nested canalizing multivalued function toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def with_file(sp):
        sp.add_argument("file", help="mvfn file")
        sp.add_argument("--restrict", action="append", metavar="COORD=VALUE",
                        help="restrict to x_COORD != VALUE before analysis (repeatable)")
        sp.add_argument("--json", action="store_true")
        return sp

    def with_basis(sp):
        sp.add_argument("--basis", choices=["standard", "random"], default="standard")
        sp.add_argument("--seed", type=int, default=0)

    def with_codomain(sp):
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--max", type=int, default=1, help="integer codomain 0..MAX")
        g.add_argument("--values", nargs="+", help="explicit codomain values (integers or p/q)")

    sp = with_file(sub.add_parser("classify", help="canalization verdicts"))
    sp.add_argument("--mode", choices=["greedy", "exhaustive"], default="greedy")
    sp.add_argument("--strict", action="store_true", help="classical NC codomain check")
    sp.add_argument("--certificate", action="store_true")
    sp.add_argument("--normal-form", action="store_true")
    sp.set_defaults(func=cmd_classify)

    sp = with_file(sub.add_parser("sensitivity", help="exact influences and AS"))
    sp.add_argument("--boundary", action="store_true", help="Boolean boundary-edge fractions")
    sp.add_argument("--spectral", action="store_true", help="also <f, L_i f> and spectral influences")
    with_basis(sp)
    sp.set_defaults(func=cmd_sensitivity)

    sp = with_file(sub.add_parser("bound", help="check AS <= M^2/(4(1-kappa))"))
    sp.add_argument("--mode", choices=["greedy", "exhaustive"], default="greedy")
    sp.set_defaults(func=cmd_bound)

    sp = with_file(sub.add_parser("spectrum", help="Fourier coefficients"))
    with_basis(sp)
    sp.add_argument("--check", action="store_true", help="report roundtrip and E_i errors")
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("gen", help="generate random functions")
    sp.add_argument("--k", type=int, nargs="+", required=True)
    sp.add_argument("--kind", choices=["uniform", "wnc", "nc"], default="wnc")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=1)
    sp.add_argument("--out", help="output directory (default: stdout)")
    sp.add_argument("--json", action="store_true")
    with_codomain(sp)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("census", help="exhaustive classification counts")
    sp.add_argument("--k", type=int, nargs="+", required=True)
    sp.add_argument("--json", action="store_true")
    with_codomain(sp)
    sp.set_defaults(func=cmd_census)

    sp = sub.add_parser("dynamics", help="asynchronous state transition graph")
    sp.add_argument("net", nargs="?", help="mvnet file")
    sp.add_argument("--dot", help="write DOT graph here")
    sp.add_argument("--compare", nargs=2, metavar=("A", "B"))
    sp.add_argument("--classify", action="store_true", help="classify each rule")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_dynamics)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MvfnParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
