"""Command-line front end: ``pmodlab <command> ...``.

Every command builds a RunReport ``{command, inputs, results, checks, seed,
elapsed_ms}``.  With ``--json`` the report is printed as JSON, otherwise as
plain text.  Exit codes: 0 success, 1 some check failed, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np

from . import artin_schreier as AS
from .cohomology import (
    chain_of_isos_check, cohomology_dim, extension_group, bar_cohomology_2,
)
from .decomp import (
    BookkeepingError, PresentationError, indecomposable, verify_presentation, verify_theorem1,
)
from .diagram import MAX_DIAGRAM_P, build_diagram, to_svg, to_text
from .gmodule import (
    ModuleError, fixed_submodule, free_module, head, invariant_profile, trivial_module,
)
from .heller import has_free_summand, minimal_resolution, omega, omega_dimension_formula
from .pgroup import GroupError, PGroup, load_group, parse_group_spec

OMEGA_GUARD = 4
STANDARD_GROUPS = ("C2", "C4", "C8", "C2xC2", "C2xC2xC2", "C3", "C9", "C3xC3", "C5xC5")


class UsageError(Exception):
    """Bad input: exit code 2."""


@dataclass
class Check:
    name: str
    status: str             # pass | fail | skipped
    detail: str = ""


@dataclass
class RunReport:
    command: str
    inputs: dict
    results: dict = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    seed: int = 0
    elapsed_ms: float = 0.0

    def check(self, name: str, ok: bool, detail: Any = "") -> bool:
        self.checks.append(Check(name, "pass" if ok else "fail", str(detail)))
        return ok

    def skip(self, name: str, detail: str) -> None:
        self.checks.append(Check(name, "skipped", detail))

    @property
    def failed(self) -> bool:
        return any(c.status == "fail" for c in self.checks)

    def to_json(self) -> dict:
        return asdict(self)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def _group(spec: str) -> PGroup:
    try:
        return load_group(spec)
    except (GroupError, OSError, json.JSONDecodeError, KeyError) as exc:
        raise UsageError(f"cannot load group {spec!r}: {exc}") from exc


# ---------------------------------------------------------------------------
# commands


def cmd_group_info(args, rep: RunReport) -> Optional[str]:
    G = _group(args.group)
    phi, rank = G.frattini_subgroup()
    rep.results.update(
        name=G.name, p=G.p, order=G.order, d=rank, frattini_order=len(phi),
        exponent=G.exponent, abelian=G.is_abelian(), generators=list(G.generators),
        order_profile=G.order_profile(),
    )
    rep.check("generators are minimal", len(G.generators) == rank,
              f"|generators| = {len(G.generators)}, d = {rank}")
    rep.check("d(G) <= log_p |G|", rank <= G.log_order)
    return None


def cmd_omega(args, rep: RunReport) -> Optional[str]:
    G = _group(args.group)
    if abs(args.n) > OMEGA_GUARD and not args.force:
        raise UsageError(f"|n| = {abs(args.n)} exceeds guard {OMEGA_GUARD} (use --force)")
    M = omega(trivial_module(G), args.n)
    rep.results.update(group=G.name, n=args.n, dim=M.dim, head_dim=head(M).dim,
                       fixed_dim=fixed_submodule(M).dim, free_summand=has_free_summand(M))
    if abs(args.n) == 2:
        rep.check("dim = (d-1)|G| + 1", M.dim == omega_dimension_formula(G),
                  f"{M.dim} vs {omega_dimension_formula(G)}")
    rep.check("no free summand", not has_free_summand(M))
    if args.dump_module:
        rep.results["module"] = M.to_json()
    return None


def _need_group(args) -> PGroup:
    if args.group is None:
        raise UsageError(f"verify {args.what} needs a group spec")
    return _group(args.group)


def _verify_theorem1(args, rep: RunReport) -> None:
    G = _need_group(args)
    d = G.minimal_generator_count()
    ns = [args.jf_dim] if args.jf_dim is not None else list(range(d, d + 4))
    rows = []
    for n in ns:
        try:
            r = verify_theorem1(G, n)
        except BookkeepingError as exc:
            raise UsageError(str(exc)) from exc
        rows.append(dict(n=n, d=r.d, dim_J_K=r.dim_J_K, dim_X=r.dim_X, free_rank=r.free_rank,
                         consistent=r.consistent))
        rep.check(f"n={n}: dim X + |G| free_rank = |G|(n-1)+1",
                  r.dim_X + G.order * r.free_rank == r.dim_J_K, f"{r.dim_X} + {G.order}*{r.free_rank}")
        rep.check(f"n={n}: dim X = (d-1)|G|+1", r.dim_X == omega_dimension_formula(G))
        rep.check(f"n={n}: Omega^-2 has no free summand", not r.X_has_free_summand)
        rep.check(f"n={n}: fixed dim of free part = n - d", r.fixed_dim_Y == n - d)
        rep.check(f"n={n}: consistent", r.consistent)
    rep.results.update(group=G.name, reports=rows)


def _verify_presentation(args, rep: RunReport) -> None:
    if args.p not in (2, 3, 5) and not args.force:
        raise UsageError(f"p = {args.p} outside the default guard {{2, 3, 5}} (use --force)")
    try:
        pres = verify_presentation(args.p, force=args.force)
    except PresentationError as exc:
        rep.check("presentation", False, exc)
        return
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    for name, ok in pres.checks.items():
        rep.check(name, ok)
    target = omega(trivial_module(pres.group), 2)
    rep.check("invariant profile matches Omega^2(F_p)",
              invariant_profile(pres.module) == invariant_profile(target))
    rep.results.update(p=args.p, basis_size=pres.basis_size, labels=[n for n, _ in pres.basis])


def _verify_cohomology(args, rep: RunReport) -> None:
    G = _need_group(args)
    if G.order > 27 and not args.force:
        raise UsageError(f"|G| = {G.order} too large for the cohomology check (use --force)")
    chain = chain_of_isos_check(G)
    res = minimal_resolution(G, 3)
    free = free_module(G, 1)
    h1 = cohomology_dim(G, free, 1, res).dimension
    h2 = cohomology_dim(G, free, 2, res).dimension
    rep.results.update(group=G.name, chain=chain, H1_free=h1, H2_free=h2,
                       resolution_ranks=list(res.ranks))
    rep.check("H^1(G, free) = 0", h1 == 0)
    rep.check("H^2(G, free) = 0", h2 == 0)
    for key in ("H0(G,Fp)", "H1(G,Omega1)", "H2(G,Omega2)"):
        rep.check(f"{key} = 1", chain[key] == 1, chain[key])
    if "H2(G,Omega2) bar" in chain:
        rep.check("bar route agrees", chain["H2(G,Omega2) bar"] == chain["H2(G,Omega2)"])
    else:
        rep.skip("bar route agrees", "bar complex over the column guard")


def _verify_selftest(args, rep: RunReport) -> None:
    for spec in STANDARD_GROUPS:
        G = parse_group_spec(spec)
        dim = omega(trivial_module(G), 2).dim
        rep.check(f"{spec}: dim Omega^2 = (d-1)|G|+1", dim == omega_dimension_formula(G), dim)
        d = G.minimal_generator_count()
        rep.check(f"{spec}: bookkeeping n=d..d+3",
                  all(verify_theorem1(G, n).consistent for n in range(d, d + 4)))
    for p in (2, 3):
        pres = verify_presentation(p)
        rep.check(f"presentation p={p}", all(pres.checks.values()), pres.basis_size)
    G = parse_group_spec("C2xC2")
    rep.check("C2xC2: cohomology chain", chain_of_isos_check(G)["ok"])
    for n in (1, 2, -1, -2):
        r = indecomposable(omega(trivial_module(G), n), seed=args.seed)
        rep.check(f"C2xC2: Omega^{n} indecomposable", r.certificate == "indecomposable_certified",
                  r.certificate)
    for p, m in ((2, 1), (2, 2), (3, 1)):
        c = AS.verify_theorem1_concrete(p, m, seed=args.seed)
        rep.check(f"Artin-Schreier ({p},{m})", c.theorem1 == "pass")


def cmd_verify(args, rep: RunReport) -> Optional[str]:
    {"theorem1": _verify_theorem1, "presentation": _verify_presentation,
     "cohomology": _verify_cohomology, "selftest": _verify_selftest}[args.what](args, rep)
    return None


def cmd_diagram(args, rep: RunReport) -> Optional[str]:
    G = _group(args.group)
    exps = G.order_profile()
    is_cpcp = G.order == G.p ** 2 and len(G.generators) == 2
    if not is_cpcp:
        raise UsageError(f"{args.group!r} is not C_p x C_p (orders {sorted(exps)})")
    if G.p > MAX_DIAGRAM_P:
        raise UsageError(f"diagram guard: p <= {MAX_DIAGRAM_P}")
    d = build_diagram(G.p, args.which)
    doc = to_svg(d) if args.format == "svg" else to_text(d)
    rep.results.update(p=G.p, which=args.which, format=args.format,
                       boxes=len(d.boxes), edges=len(d.edges))
    rep.check("box count = p^2 + 1", len(d.boxes) == G.p ** 2 + 1)
    steps = {1: -1, 2: 1}
    pos = {b.name: (b.x, b.y) for b in d.boxes}
    sign = 1 if args.which == "omega2" else -1
    geometric = all(
        pos[e.dst][0] - pos[e.src][0] == sign * steps[e.gen] and pos[e.dst][1] - pos[e.src][1] == sign
        for e in d.edges
    )
    rep.check("edges point southwest (s1) and southeast (s2)" if sign > 0
              else "edges reversed for the dual", geometric)
    return doc


def cmd_extension(args, rep: RunReport) -> Optional[str]:
    G = _group(args.group)
    M = omega(trivial_module(G), 2)
    if args.cocycle == "zero":
        f = "zero"
    else:
        reps = bar_cohomology_2(G, M, force=args.force).cocycle_basis
        if not reps:
            raise UsageError("H^2(G, Omega^2) has no nonzero class")
        f = reps[0]
    try:
        ext = extension_group(G, M, f, force=args.force)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    E = ext.result
    rep.results.update(order=E.order, d=E.minimal_generator_count(), cocycle=args.cocycle,
                       order_profile=E.order_profile())
    rep.check("kernel is normal", ext.kernel_is_normal())
    rep.check("quotient is G", ext.quotient_matches_base())
    rep.check("kernel is the additive group of M", ext.kernel_is_module_group())
    return json.dumps(E.to_json())


def cmd_artin_schreier(args, rep: RunReport) -> Optional[str]:
    if not AS.tower_guard(args.p, args.m) and not args.force:
        raise UsageError(f"tower guard exceeded: {args.p}^({args.p}^{args.m}) > 2^20")
    try:
        t = AS.build_tower(args.p, args.m, force=args.force)
    except ValueError as exc:           # FieldError, or p not prime
        raise UsageError(str(exc)) from exc
    J = AS.j_module(t)
    conc = AS.verify_theorem1_concrete(args.p, args.m, force=args.force, seed=args.seed)
    rep.results.update(conc.to_json())
    rep.results["modulus"] = list(t.K.modulus)
    rep.check("dim J(K) = |G|(n-1)+1 = 1", conc.dimJK == 1)
    rep.check("ker wp = F_p", conc.wp_kernel_dim == 1)
    rep.check("J(K) iso Omega^-2(F_p)", conc.iso_status == "iso", conc.iso_status)
    rep.check("[F] = 0", conc.F_classes_dim == 0)
    rep.check("trace map K -> F_p has rank 1", conc.trace_rank == 1)
    rep.check("theorem1", conc.theorem1 == "pass")
    ne = AS.norm_equation_applicability(args.p)
    if ne["applicable"]:
        rep.check("norm equation for [e]_L", False, "applicable case is not implemented")
    else:
        rep.skip("norm equation for [e]_L", ne["reason"])
    if args.check_trace:
        sw = AS.trace_sweep(t, J)
        rep.results["trace_sweep"] = asdict(sw)
        rep.check("Tr(-e theta^(p-1)) = e for all valid (a, e)", sw.failures == 0,
                  f"{sw.valid_a} valid a, {sw.pairs} pairs, e in {sw.e_range}")
        rep.check("x^p - x - a irreducible iff [a] != 0", sw.validity_matches_wp)
    if args.check_pairing:
        ps = AS.pairing_sweep(t, J)
        rep.results["pairing_sweep"] = asdict(ps)
        rep.check("pairing nondegenerate", ps.nondegenerate, f"{ps.nonzero_classes} classes")
        rep.check("pairing linear in tau", ps.linear_in_tau)
        rep.check("pairing depends only on the class", ps.class_function)
    return None


# ---------------------------------------------------------------------------
# parser


def _common(sub: bool) -> argparse.ArgumentParser:
    d = argparse.SUPPRESS if sub else None
    c = argparse.ArgumentParser(add_help=False)
    c.add_argument("--json", action="store_true", default=d if sub else False,
                   help="print the report as JSON")
    c.add_argument("--seed", type=int, default=d if sub else 0, help="random seed (recorded)")
    c.add_argument("--force", action="store_true", default=d if sub else False,
                   help="override size guards (may be slow, never incorrect)")
    c.add_argument("--out", type=Path, default=d, help="write the document or report here")
    return c


def build_parser() -> argparse.ArgumentParser:
    common = _common(sub=True)
    ap = argparse.ArgumentParser(prog="pmodlab", parents=[_common(sub=False)],
                                 description="Heller shifts, cohomology and Artin-Schreier checks for p-groups")
    sp = ap.add_subparsers(dest="command", required=True)

    g = sp.add_parser("group-info", parents=[common], help="order, d(G), Frattini subgroup")
    g.add_argument("group", help='spec such as "C2xC2" or a group JSON file')
    g.set_defaults(fn=cmd_group_info)

    o = sp.add_parser("omega", parents=[common], help="Heller shift of the trivial module")
    o.add_argument("group")
    o.add_argument("n", type=int)
    o.add_argument("--dump-module", action="store_true")
    o.set_defaults(fn=cmd_omega)

    v = sp.add_parser("verify", parents=[common], help="run a verifier")
    v.add_argument("what", choices=["theorem1", "presentation", "cohomology", "selftest"])
    v.add_argument("group", nargs="?", default=None, help="group spec (theorem1, cohomology)")
    v.add_argument("--jf-dim", type=int, default=None, help="dim J(F) (default: d..d+3)")
    v.add_argument("--p", type=int, default=2, help="prime for the presentation check")
    v.set_defaults(fn=cmd_verify)

    d = sp.add_parser("diagram", parents=[common], help="box diagram for C_p x C_p")
    d.add_argument("group", help='"CpxCp"')
    d.add_argument("--which", choices=["omega2", "omega_minus_2"], default="omega2")
    d.add_argument("--format", choices=["text", "svg"], default="text")
    d.set_defaults(fn=cmd_diagram)

    e = sp.add_parser("extension", parents=[common],
                      help="extension of G by Omega^2(F_p); writes the group JSON")
    e.add_argument("group")
    e.add_argument("--cocycle", choices=["zero", "nonzero"], default="zero")
    e.set_defaults(fn=cmd_extension)

    a = sp.add_parser("artin-schreier", parents=[common], help="J(K) for F_p in F_p^(p^m)")
    a.add_argument("--p", type=int, required=True)
    a.add_argument("--m", type=int, default=1)
    a.add_argument("--check-trace", action="store_true")
    a.add_argument("--check-pairing", action="store_true")
    a.set_defaults(fn=cmd_artin_schreier)
    return ap


def _print_text(rep: RunReport, stream) -> None:
    print(f"{rep.command}  {json.dumps(rep.inputs)}", file=stream)
    for k, v in rep.results.items():
        if k == "module":
            continue
        print(f"  {k}: {json.dumps(_jsonable(v))}", file=stream)
    for c in rep.checks:
        tail = f"  ({c.detail})" if c.detail else ""
        print(f"  [{c.status}] {c.name}{tail}", file=stream)
    print(f"  seed={rep.seed} elapsed_ms={rep.elapsed_ms:.1f}", file=stream)


def main(argv: Optional[list[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 2
    out = getattr(args, "out", None)
    inputs = {k: (str(v) if isinstance(v, Path) else v) for k, v in vars(args).items()
              if k not in ("fn", "json", "out", "seed", "force", "command")}
    rep = RunReport(args.command, inputs, seed=args.seed)
    np.random.seed(args.seed)
    t0 = time.perf_counter()
    try:
        doc = args.fn(args, rep)
    except UsageError as exc:
        print(f"pmodlab: error: {exc}", file=sys.stderr)
        return 2
    except (GroupError, ModuleError) as exc:
        print(f"pmodlab: error: {exc}", file=sys.stderr)
        return 2
    rep.elapsed_ms = (time.perf_counter() - t0) * 1e3
    rep.results = _jsonable(rep.results)
    if doc is not None and out is not None:
        out.write_text(doc)
        rep.results["written"] = str(out)
    if args.json:
        if doc is not None and out is None:
            rep.results["document"] = doc
        text = json.dumps(rep.to_json(), indent=2)
        if doc is None and out is not None:
            out.write_text(text + "\n")
        print(text)
    elif doc is not None and out is None:
        sys.stdout.write(doc)
        _print_text(rep, sys.stderr)
    else:
        if out is not None and doc is None:
            out.write_text(json.dumps(rep.to_json(), indent=2) + "\n")
        _print_text(rep, sys.stdout)
    return 1 if rep.failed else 0


if __name__ == "__main__":
    sys.exit(main())
