"""Command-line front end.

Exit codes: 0 success (or all checks passed), 1 usage/spec error or a failed
check, 2 cost-guard refusal.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Sequence

from . import analysis as an
from . import evaluate as ev
from .freealg import ParseError, capelli, capelli_deleted_set, capelli_star, parse_poly, render
from .linalg import DEFAULT_PRIME, PRIME_ENV_VAR, SECOND_PRIME, GF
from .staralg import AlgebraError, StarAlgebra, UTSpec, from_spec, mk_exchange, mk_symplectic, mk_transpose
from .tideal import compare_with_algebra, gamma_gens, spanning_vanish

EXIT_OK, EXIT_FAIL, EXIT_REFUSED = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    specs: list[str] = field(default_factory=list)
    n: int | None = None
    n_max: int | None = None
    primes: tuple[int, int] = (DEFAULT_PRIME, SECOND_PRIME)
    budget: int = ev.DEFAULT_BUDGET
    fmt: str = "text"
    out: str | None = None

    def __post_init__(self):
        for p in self.primes:
            GF(p)  # validates
        if self.primes[0] == self.primes[1]:
            raise UsageError("--prime and --prime2 must differ")
        for v in (self.n, self.n_max):
            if v is not None and v < 1:
                raise UsageError("n must be at least 1")


def _load_spec_data(text: str) -> dict:
    """A spec is a path to a JSON file or an inline JSON object."""
    if text.lstrip().startswith("{"):
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise AlgebraError(f"inline spec is not valid JSON ({exc})") from exc
    try:
        with open(text) as fh:
            return json.load(fh)
    except OSError as exc:
        raise AlgebraError(f"cannot read spec {text}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise AlgebraError(f"{text}: not valid JSON ({exc})") from exc


def load_algebra(text: str) -> StarAlgebra:
    return from_spec(_load_spec_data(text))


def _resolve_primes(args) -> tuple[int, int]:
    first = args.prime
    if first is None and os.environ.get(PRIME_ENV_VAR):
        try:
            first = int(os.environ[PRIME_ENV_VAR])
        except ValueError as exc:
            raise UsageError(f"{PRIME_ENV_VAR} must be an integer") from exc
    first = DEFAULT_PRIME if first is None else first
    second = args.prime2
    if second is None:
        second = SECOND_PRIME if first != SECOND_PRIME else DEFAULT_PRIME
    return first, second


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


# -- commands -------------------------------------------------------------------

def cmd_codim(cfg: RunConfig, gammas: Sequence[tuple[int, int]] = ()) -> int:
    n_max = cfg.n_max or cfg.n or 4
    targets = []
    for s in cfg.specs:
        a = load_algebra(s)
        targets.append(an.Target(a.name, algebra=a))
    for M1, L1 in gammas:
        targets.append(an.Target(f"Gamma*_{{{M1},{L1}}}", gens=gamma_gens(M1, L1)))
    if not targets:
        raise UsageError("codim needs at least one algebra spec or --gamma")
    table = an.codim_table(targets, n_max, budget=cfg.budget, primes=cfg.primes)
    _emit(cfg, table.to_csv() if cfg.fmt == "csv" else table.render())
    if table.notes:
        for (label, n), note in table.notes.items():
            print(f"refused: {label} n={n}: {note}", file=sys.stderr)
        return EXIT_REFUSED
    return EXIT_OK


def cmd_identity(cfg: RunConfig, poly_text: str) -> int:
    a = load_algebra(cfg.specs[0])
    f = parse_poly(poly_text)
    if ev.is_star_identity(a, f, budget=cfg.budget):
        lines = ["true"]
    else:
        witness, _ = ev.search_nonvanishing(a, f, budget=cfg.budget)
        lines = ["false", f"witness: {witness.describe(a)}", f"value: {a.format_element(witness.result)}"]
    if cfg.fmt == "csv":
        lines = ["polynomial,algebra,identity", f"\"{render(f)}\",\"{a.name}\",{lines[0]}"]
    _emit(cfg, "\n".join(lines))
    return EXIT_OK


def cmd_capelli(cfg: RunConfig, m: int, kind: str, deleted: bool) -> int:
    if m < 1:
        raise UsageError("m must be at least 1")
    if deleted:
        if kind in ("x", "general"):
            raise UsageError("--deleted applies to the symmetric or skew *-Capelli polynomial")
        polys = capelli_deleted_set(m, kind)
    elif kind in ("x", "general"):
        polys = [capelli(m)]
    else:
        polys = [capelli_star(m, kind)]
    _emit(cfg, "\n".join(render(p) for p in polys))
    return EXIT_OK


DEFAULT_UT = [UTSpec.of(("transpose", 1)), UTSpec.of(("exchange", 1)),
              UTSpec.of(("transpose", 1), ("transpose", 1)), UTSpec.of(("symplectic", 1))]


def _simple_defaults() -> list[StarAlgebra]:
    return [mk_transpose(2), mk_symplectic(1), mk_exchange(1)]


def _direct_sum_defaults() -> list[tuple[StarAlgebra, StarAlgebra]]:
    from .staralg import mk_UT_star, tensor_nilpotent

    f = mk_transpose(1)
    return [(tensor_nilpotent(f, 1, 3, "negate"), mk_exchange(1)), (f, mk_exchange(1)), (mk_transpose(2), f),
            (mk_symplectic(1), mk_exchange(1)), (tensor_nilpotent(f, 1, 2), mk_UT_star(UTSpec.of(("transpose", 1), ("transpose", 1))))]


def _ut_spec_of(data: dict) -> UTSpec:
    from .staralg import _component_from_dict

    if data.get("kind") != "ut_star":
        raise UsageError("thresholds needs ut_star specs")
    return UTSpec(tuple(_component_from_dict(c) for c in data["components"]))


def cmd_verify(cfg: RunConfig, suite: str, gamma: tuple[int, int] = (4, 2), m_max: int = 6) -> int:
    lines: list[str] = []
    ok = True
    if suite == "thresholds":
        specs = [_ut_spec_of(_load_spec_data(s)) for s in cfg.specs] or DEFAULT_UT
        rng = range(1, m_max + 1)
        for spec in specs:
            rep = an.verify_capelli_thresholds(spec, rng, rng, budget=cfg.budget)
            lines.append(rep.render())
            lines.append(f"  {'PASS' if rep.ok else 'FAIL'}")
            ok &= rep.ok
    elif suite == "simple-witnesses":
        algs = [load_algebra(s) for s in cfg.specs] or _simple_defaults()
        for a in algs:
            w = an.verify_simple_nonidentity(a)
            lines.append(f"{a.name}: Cap*_{w.M}[Y,X] witness: {w.sym.describe(a) if w.sym else 'none'}")
            if w.skew_skipped:
                lines.append(f"{a.name}: no skew part, skew check skipped")
            else:
                lines.append(f"{a.name}: Cap*_{w.L}[Z,X] witness: {w.skew.describe(a) if w.skew else 'none'}")
            lines.append(f"  {'PASS' if w.ok else 'FAIL'}")
            ok &= w.ok
    elif suite == "direct-sum":
        if len(cfg.specs) % 2:
            raise UsageError("direct-sum takes algebra specs in pairs")
        loaded = [load_algebra(s) for s in cfg.specs]
        pairs = list(zip(loaded[::2], loaded[1::2])) or _direct_sum_defaults()
        n_max = cfg.n_max or cfg.n or 4
        for a, b in pairs:
            rep = an.verify_direct_sum_bounds(a, b, n_max, budget=cfg.budget, primes=cfg.primes)
            lines.append(f"{a.name} | {b.name}")
            for n, x, y, s in rep.rows:
                lines.append(f"  n={n}: max({x},{y}) <= {s} <= {x + y}")
            lines.append(f"  {'PASS' if rep.ok else 'FAIL'}")
            ok &= rep.ok
    elif suite == "tideal-containment":
        algs = [load_algebra(s) for s in cfg.specs] or [mk_transpose(2)]
        g = gamma_gens(*gamma)
        n_max = cfg.n_max or cfg.n or 4
        for a in algs:
            for n in range(1, n_max + 1):
                vanish, count = spanning_vanish(g, a, n)
                cmp = compare_with_algebra(g, a, n, prime=cfg.primes[0], budget=cfg.budget)
                lines.append(f"Gamma*_{{{gamma[0]},{gamma[1]}}} vs {a.name} n={n}: {count} spanning elements "
                             f"vanish={vanish}; codims ideal={cmp.codims[0]} algebra={cmp.codims[1]} "
                             f"equal={cmp.equal}")
                ok &= vanish and cmp.ideal_inside_Id
        lines.append("PASS" if ok else "FAIL")
    elif suite == "exponents":
        for name, good in an.exponent_identities().items():
            lines.append(f"{name}: {'ok' if good else 'FAIL'}")
            ok &= good
        for spec in an.DESK_UT_SPECS:
            a, w = an.wedderburn_ut(spec)
            s = an.star_exponent_structural(a, w)
            good = s == an.star_exponent_ut(spec) == spec.total_dim
            lines.append(f"UT*{spec}: formula={an.star_exponent_ut(spec)} structural={s} {'ok' if good else 'FAIL'}")
            ok &= good
        lines.append("PASS" if ok else "FAIL")
    else:
        raise UsageError(f"unknown suite {suite!r}")
    _emit(cfg, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_exponent(cfg: RunConfig) -> int:
    lines = []
    for s in cfg.specs:
        data = _load_spec_data(s)
        a, w = an.wedderburn_from_spec(data)
        structural = an.star_exponent_structural(a, w)
        line = f"{a.name}: exp* = {structural}"
        if a.simple is not None:
            line += f" (dim A = {an.star_exponent_simple(a)})"
        elif data.get("kind") == "ut_star":
            line += f" (sum of component dims = {an.star_exponent_ut(_ut_spec_of(data))})"
        lines.append(line)
    if cfg.fmt == "csv":
        lines = ["algebra,exponent"] + [f"\"{l.split(': exp* = ')[0]}\",{l.split(' = ')[1].split()[0]}"
                                         for l in lines]
    _emit(cfg, "\n".join(lines))
    return EXIT_OK


# -- argument parsing ----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int)
    common.add_argument("--n-max", type=int)
    common.add_argument("--prime", type=int, help=f"first prime (default: ${PRIME_ENV_VAR} or 2^31-1)")
    common.add_argument("--prime2", type=int, help="second prime for cross-checks")
    common.add_argument("--budget", type=int, default=ev.DEFAULT_BUDGET, help="cost guard (elementary operations)")
    common.add_argument("--format", choices=("text", "csv"), default="text")
    common.add_argument("--out", help="write the report here instead of stdout")

    p = argparse.ArgumentParser(prog="starpi", description="Exact computations with *-polynomial identities.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("codim", parents=[common], help="*-codimension table")
    c.add_argument("specs", nargs="*", help="algebra spec files or inline JSON")
    c.add_argument("--gamma", nargs=2, type=int, action="append", metavar=("M1", "L1"), default=[],
                   help="add the T-*-ideal generated by Cap+_M1 and Cap-_L1")

    i = sub.add_parser("identity", parents=[common], help="is a polynomial a *-identity?")
    i.add_argument("spec")
    i.add_argument("polynomial")

    k = sub.add_parser("capelli", parents=[common], help="print Capelli polynomials")
    k.add_argument("m", type=int)
    k.add_argument("--kind", default="y", choices=("y", "z", "x", "sym", "skew", "general"))
    k.add_argument("--deleted", action="store_true", help="print the deleted set Cap^+/-_m")

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=("thresholds", "simple-witnesses", "direct-sum", "tideal-containment",
                                     "exponents"))
    v.add_argument("specs", nargs="*")
    v.add_argument("--gamma", nargs=2, type=int, default=(4, 2), metavar=("M1", "L1"))
    v.add_argument("--m-max", type=int, default=6, help="largest M and L scanned by thresholds")

    e = sub.add_parser("exponent", parents=[common], help="*-exponent from the natural decomposition")
    e.add_argument("specs", nargs="+")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_FAIL
    try:
        specs = getattr(args, "specs", None) or ([args.spec] if hasattr(args, "spec") else [])
        cfg = RunConfig(args.command, list(specs), args.n, args.n_max, _resolve_primes(args), args.budget,
                        args.format, args.out)
        if args.command == "codim":
            return cmd_codim(cfg, [tuple(g) for g in args.gamma])
        if args.command == "identity":
            return cmd_identity(cfg, args.polynomial)
        if args.command == "capelli":
            return cmd_capelli(cfg, args.m, args.kind, args.deleted)
        if args.command == "verify":
            return cmd_verify(cfg, args.suite, tuple(args.gamma), args.m_max)
        return cmd_exponent(cfg)
    except ev.CostGuardExceeded as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except (UsageError, AlgebraError, ParseError, ev.KindViolation, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
