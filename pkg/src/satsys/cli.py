"""Command-line front end.

Subcommands wire the library into one pipeline: build a lattice, derive a
formal context, count or enumerate its concepts, cross-check against a
brute-force oracle, and report subspace-counting statistics.

Exit codes are stable: 0 success, 1 usage, 2 precondition violated
(non-modular input, oracle cap exceeded, malformed lattice or context data),
3 verification mismatch, 4 I/O failure (including unusable checkpoints).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .arrows import ArrowSet, ArrowSetError, SaturatedCover, from_saturated_cover
from .builders import chain, load_lattice, subspace_lattice
from .context import (
    ContextError,
    FormalContext,
    density,
    export_cxt,
    export_fimi,
    export_pbm,
    import_cxt,
    sat_context,
    tr_context,
)
from .fca import CheckpointError, count_concepts, iter_concepts
from .lattice import FiniteLattice, LatticeError, ModularityError, _bits
from .oracle import (
    CLOSURE_ATTR_CAP,
    SAT_COVER_CAP,
    TRANSFER_PAIR_CAP,
    OracleCapExceeded,
    closure_count_oracle,
    enumerate_saturated_brute,
    enumerate_transfer_brute,
)
from .qstats import (
    a_direct,
    check_bounds,
    count_join_irr,
    count_meet_irr,
    count_zeros,
    density_formula,
    qbinom,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PRECONDITION = 2
EXIT_MISMATCH = 3
EXIT_IO = 4

WORKERS_ENV = "SATSYS_WORKERS"
ENUMERATE_CAP = 100_000


class VerificationMismatch(Exception):
    """An engine count disagreed with its oracle."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _tool_version() -> str:
    from . import __version__

    return __version__


def _emit(payload: dict, stream=None) -> None:
    payload = {"version": _tool_version(), **payload}
    print(json.dumps(payload, indent=2, sort_keys=True), file=stream or sys.stdout)


def _build_lattice(spec: list[str]) -> FiniteLattice:
    """Resolve ``subspace p n`` / ``chain k`` / ``file PATH`` specs."""
    kind = spec[0]
    if kind == "subspace":
        if len(spec) != 3:
            raise ValueError("subspace spec needs exactly two integers: p n")
        return subspace_lattice(int(spec[1]), int(spec[2]))
    if kind == "chain":
        if len(spec) != 2:
            raise ValueError("chain spec needs exactly one integer: k")
        return chain(int(spec[1]))
    if kind == "file":
        if len(spec) != 2:
            raise ValueError("file spec needs exactly one path")
        return load_lattice(spec[1])
    if len(spec) == 1 and os.path.exists(kind):
        return load_lattice(kind)
    raise ValueError(f"unknown lattice spec {spec!r}; use subspace p n | chain k | file PATH")


def _build_context(args) -> tuple[FormalContext, FiniteLattice | None]:
    if getattr(args, "context", None):
        with open(args.context, "r", encoding="ascii") as fh:
            return import_cxt(fh.read()), None
    lat = _build_lattice(args.lattice)
    ctx = tr_context(lat) if args.kind == "tr" else sat_context(lat)
    return ctx, lat


def _resolve_workers(args) -> int:
    if getattr(args, "workers", None) is not None:
        return args.workers
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValueError(f"{WORKERS_ENV} must be an integer, got {env!r}")
    return 1


def _oracle_for(kind: str, lat: FiniteLattice | None, ctx: FormalContext,
                explicit: bool):
    """Pick the strongest applicable oracle, or None when all caps are blown.

    With an explicit --verify request a capped-out instance is an error;
    in automatic mode it silently disables verification.
    """
    if lat is not None and kind == "sat" and len(lat.covers) <= SAT_COVER_CAP:
        return lambda: enumerate_saturated_brute(lat)
    if (lat is not None and kind == "tr"
            and sum(1 for _ in lat.comparable_pairs(strict=True)) <= TRANSFER_PAIR_CAP):
        return lambda: enumerate_transfer_brute(lat)
    if ctx.n_attributes <= CLOSURE_ATTR_CAP:
        return lambda: closure_count_oracle(ctx)
    if explicit:
        raise OracleCapExceeded(
            "no oracle applies: "
            f"{ctx.n_objects}x{ctx.n_attributes} context exceeds every oracle cap"
        )
    return None


def cmd_context(args, force_pbm: bool = False) -> int:
    ctx, _ = _build_context(args)
    fmt = "pbm" if force_pbm else args.format
    text = {"cxt": export_cxt, "fimi": export_fimi, "pbm": export_pbm}[fmt](ctx)
    d = density(ctx)
    summary = {
        "kind": args.kind,
        "rows": ctx.n_objects,
        "columns": ctx.n_attributes,
        "density_num": str(d.numerator),
        "density_den": str(d.denominator),
        "format": fmt,
        "output": args.output,
    }
    if args.output:
        with open(args.output, "w", encoding="ascii") as fh:
            fh.write(text)
        _emit(summary)
    else:
        sys.stdout.write(text)
        _emit(summary, stream=sys.stderr)
    return EXIT_OK


def cmd_count(args) -> int:
    ctx, lat = _build_context(args)
    workers = _resolve_workers(args)
    tally = count_concepts(
        ctx,
        workers=workers,
        checkpoint_path=args.checkpoint,
        max_concepts=args.budget,
        engine=args.engine,
    )
    verified = None
    oracle_method = None
    oracle_count = None
    want_verify = args.verify if args.verify is not None else True
    if want_verify and tally.complete:
        pick = _oracle_for(args.kind, lat, ctx, explicit=args.verify is True)
        if pick is not None:
            report = pick()
            oracle_method = report.method
            oracle_count = str(report.count)
            verified = report.count == tally.count
    payload = {
        "count": str(tally.count),
        "elapsed_ms": int(tally.elapsed * 1000),
        "workers": tally.workers,
        "complete": tally.complete,
        "engine": args.engine,
        "verified": verified,
        "oracle_method": oracle_method,
        "oracle_count": oracle_count,
    }
    _emit(payload)
    if verified is False:
        raise VerificationMismatch(
            f"engine counted {tally.count} but oracle {oracle_method} "
            f"counted {oracle_count}"
        )
    return EXIT_OK


def cmd_enumerate(args) -> int:
    ctx, lat = _build_context(args)
    if lat is None:
        raise ValueError("enumerate requires a lattice spec, not a raw context")
    # extents index the context objects positionally: covering relations for
    # the saturated context, strict comparable pairs for the transfer context
    if args.kind == "tr":
        obj_pairs = list(lat.comparable_pairs(strict=True))
    else:
        obj_pairs = lat.covers
    blocks: list[str] = []
    for concept in iter_concepts(ctx):
        if len(blocks) >= args.max_systems:
            raise ValueError(
                f"more than {args.max_systems} systems; raise --max-systems"
            )
        chosen = [obj_pairs[i] for i in _bits(concept.extent)]
        if args.kind == "tr":
            system = ArrowSet.from_pairs(lat, chosen)
        else:
            system = from_saturated_cover(SaturatedCover(lat, frozenset(chosen)))
        blocks.append(system.serialize())
    text = "\n".join(blocks)
    if args.output:
        with open(args.output, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    _emit({"kind": args.kind, "systems": len(blocks)}, stream=sys.stderr)
    return EXIT_OK


def cmd_oracle(args) -> int:
    if args.oracle_kind == "closure":
        ctx, _ = _build_context(args)
        report = closure_count_oracle(ctx)
    else:
        lat = _build_lattice(args.lattice)
        if args.oracle_kind == "sat":
            report = enumerate_saturated_brute(lat)
        else:
            report = enumerate_transfer_brute(lat)
    _emit({
        "kind": args.oracle_kind,
        "count": str(report.count),
        "method": report.method,
    })
    return EXIT_OK


def cmd_stats(args) -> int:
    n, p = args.n, args.p
    d = density_formula(n, p)
    payload = {
        "n": n,
        "p": p,
        "qbinoms": [str(qbinom(n, i, p)) for i in range(n + 1)],
        "a": str(a_direct(n, p)),
        "meet_irr": str(count_meet_irr(n, p)),
        "join_irr": str(count_join_irr(n, p)),
        "zeros": str(count_zeros(n, p)),
        "density_num": str(d.numerator),
        "density_den": str(d.denominator),
        "bounds_ok": check_bounds(n, p),
    }
    _emit(payload)
    return EXIT_OK


def _add_lattice_opts(p: _Parser, need_context_alt: bool = False) -> None:
    p.add_argument(
        "--lattice", nargs="+", metavar="SPEC",
        help="subspace p n | chain k | file PATH",
    )
    if need_context_alt:
        p.add_argument("--context", metavar="FILE", help="read a .cxt context instead")
    p.add_argument("--kind", choices=("sat", "tr"), default="sat",
                   help="which relation the context encodes (default sat)")


def build_parser() -> _Parser:
    top = _Parser(prog="satsys", description=__doc__.splitlines()[0])
    top.add_argument("--version", action="version", version=f"satsys {_tool_version()}")
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("context", help="export a formal context")
    _add_lattice_opts(p)
    p.add_argument("--format", choices=("cxt", "fimi", "pbm"), default="cxt")
    p.add_argument("--output", metavar="FILE")

    p = sub.add_parser("render", help="export a context as a PBM bitmap")
    _add_lattice_opts(p)
    p.add_argument("--output", metavar="FILE")

    p = sub.add_parser("count", help="count concepts, optionally oracle-verified")
    _add_lattice_opts(p, need_context_alt=True)
    p.add_argument("--workers", type=int, metavar="N",
                   help=f"worker processes (default ${WORKERS_ENV} or 1)")
    p.add_argument("--checkpoint", metavar="FILE")
    p.add_argument("--budget", type=int, metavar="N",
                   help="stop after N concepts (reported as incomplete)")
    p.add_argument("--engine", choices=("auto", "python", "kernel"), default="auto")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--verify", dest="verify", action="store_true", default=None,
                   help="force oracle verification (error if no oracle fits)")
    g.add_argument("--no-verify", dest="verify", action="store_false",
                   help="skip oracle verification")

    p = sub.add_parser("enumerate", help="list the systems one block per concept")
    _add_lattice_opts(p)
    p.add_argument("--output", metavar="FILE")
    p.add_argument("--max-systems", type=int, default=ENUMERATE_CAP, metavar="N")

    p = sub.add_parser("oracle", help="run a brute-force oracle on its own")
    p.add_argument("oracle_kind", choices=("sat", "tr", "closure"))
    _add_lattice_opts(p, need_context_alt=True)

    p = sub.add_parser("stats", help="exact subspace-counting statistics")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)

    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_OK
    try:
        if args.command in ("context", "render") and not args.lattice:
            parser.error("a --lattice spec is required")
        if args.command in ("count", "enumerate", "oracle"):
            needs_lattice = args.command == "enumerate" or (
                args.command == "oracle" and args.oracle_kind in ("sat", "tr")
            )
            has_ctx = getattr(args, "context", None)
            if needs_lattice and not args.lattice:
                parser.error("this command requires a --lattice spec")
            if not needs_lattice and not args.lattice and not has_ctx:
                parser.error("provide --lattice or --context")
            if args.lattice and has_ctx:
                parser.error("--lattice and --context are mutually exclusive")
        if args.command == "context":
            return cmd_context(args)
        if args.command == "render":
            return cmd_context(args, force_pbm=True)
        if args.command == "count":
            return cmd_count(args)
        if args.command == "enumerate":
            return cmd_enumerate(args)
        if args.command == "oracle":
            return cmd_oracle(args)
        if args.command == "stats":
            return cmd_stats(args)
        parser.error(f"unknown command {args.command!r}")
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except VerificationMismatch as exc:
        print(f"satsys: verification failed: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (CheckpointError, OSError) as exc:
        print(f"satsys: i/o failure: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ModularityError, LatticeError, ArrowSetError, ContextError,
            OracleCapExceeded, ValueError) as exc:
        print(f"satsys: precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
