"""Command-line front door.

Subcommands cover every module; output is a JSON report (or CSV for the
table-shaped ones) whose envelope embeds the schema version, tool version,
and the exact config that produced it.  No persistent state: every run
recomputes, so identical configs give byte-identical reports.

Exit codes: 0 success, 1 usage error, 2 domain error, 3 experiment abort
(unsound formal system).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import __version__, complexity, incompleteness, machines, omega, progs, reports, vm
from .bits import BitParseError, Dyadic, bs_parse, dyadic_bits, is_prefix_free, kraft_sum
from .complexity import DEFAULT_CHAR_CAP, STRUCTURAL, InexactTableError
from .hierarchy import DEFAULT_CAP_BITS, OrdinalParseError, dominance_check, fgh_eval, ord_parse
from .incompleteness import ToyFAS, UnsoundFASError, bundled_fas
from .machines import Program
from .sexpr import SExprDecodeError, SExprParseError, parse, print_sexpr, to_bits

USAGE_ERROR, DOMAIN_ERROR, EXPERIMENT_ABORT = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message} (try --help)", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _bits_arg(text: str) -> str:
    return bs_parse(text)


def _budget(text: str):
    if text == "structural":
        return STRUCTURAL
    return int(text)


def build_parser() -> _Parser:
    top = _Parser(prog="omegalab", description=__doc__)
    top.add_argument("--version", action="version", version=f"omegalab {__version__}")
    sub = top.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        p = sub.add_parser(name, **kw)
        p.add_argument("--json", action="store_true", help="JSON output (default)")
        p.add_argument("--csv", action="store_true", help="CSV output where applicable")
        p.add_argument("--config", help="JSON config file; explicit flags win")
        return p

    p = add("bits", help="prefix-code utilities")
    p.add_argument("action", choices=["kraft", "prefixfree"])
    p.add_argument("--set", required=True, help="comma-separated bit strings (empty string allowed)")

    p = add("sexpr", help="expression parse/encode")
    p.add_argument("action", choices=["parse", "encode"])
    p.add_argument("--text", required=True)

    p = add("run", help="run one program on a machine")
    p.add_argument("--machine", choices=machines.MACHINES, required=True)
    p.add_argument("--raw", type=_bits_arg, help="raw program bits (machine c2)")
    p.add_argument("--prefix", help="prefix expression text (machines sd/total)")
    p.add_argument("--payload", type=_bits_arg, default="")
    p.add_argument("--aux", type=_bits_arg)
    p.add_argument("--budget", type=_budget, default=10**4)

    p = add("sweep", help="enumerate the domain and build the complexity table")
    _sweep_args(p)

    p = add("complexity", help="upper bound for one output")
    _sweep_args(p)
    p.add_argument("--target", type=_bits_arg, required=True)

    p = add("elegant", help="minimal program per output")
    _sweep_args(p)

    p = add("prob", help="algorithmic probability of one output")
    _sweep_args(p)
    p.add_argument("--target", type=_bits_arg, required=True)

    p = add("coding", help="coding-theorem direction check")
    _sweep_args(p)

    p = add("chain", help="chain-rule / subadditivity report")
    _sweep_args(p)
    p.add_argument("--pairs", required=True, help="semicolon-separated x:y pairs, e.g. '0:1;:'")

    p = add("omega", help="halting-probability operations")
    p.add_argument("action", choices=["lower", "exact", "bits", "oracle"])
    p.add_argument("--machine", choices=machines.SELF_DELIMITING, default="total")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--B", type=_budget, default=10**4)
    p.add_argument("--c-cap", type=int, default=DEFAULT_CHAR_CAP)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--emit-bits", type=int, default=0)
    p.add_argument("--k", type=int, help="bit count for 'bits'/'oracle'")
    p.add_argument("--kbits", type=_bits_arg, help="override oracle input bits")
    p.add_argument("--guard", type=int, default=10**8)

    p = add("normality", help="disjoint-block equidistribution check")
    p.add_argument("--x", type=_bits_arg, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--tol", required=True)

    p = add("fas", help="formal-system experiments")
    p.add_argument("action", choices=["theorems", "berry", "ceiling", "omegabits"])
    p.add_argument("--fas", required=True,
                   help=f"bundled name {incompleteness.BUNDLED_FAS_NAMES} or a JSON file")
    p.add_argument("--budget", type=int, default=10**6)
    p.add_argument("--L", type=int, help="ensemble cap for omegabits")

    p = add("fgh", help="fast-growing hierarchy")
    p.add_argument("action", choices=["eval", "dominate"])
    p.add_argument("--ordinal", help="for eval")
    p.add_argument("--n", type=int, help="for eval")
    p.add_argument("--alpha", help="for dominate")
    p.add_argument("--beta", help="for dominate")
    p.add_argument("--points", default="1,2,3")
    p.add_argument("--cap-bits", type=int, default=DEFAULT_CAP_BITS)

    p = add("diag", help="diagonalize over a total function-program family")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--width", type=int, default=incompleteness.NUMERAL_WIDTH)
    p.add_argument("--family", help="file with one 'prefix|payload' program per line")

    return top


def _sweep_args(p):
    p.add_argument("--machine", choices=machines.MACHINES, required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--B", type=_budget, default=10**4)
    p.add_argument("--c-cap", type=int, default=DEFAULT_CHAR_CAP)
    p.add_argument("--workers", type=int, default=1)


def _apply_config(args: argparse.Namespace, parser: argparse.ArgumentParser,
                  argv: List[str]) -> None:
    """Fill unset flags from --config; anything given explicitly wins."""
    if not getattr(args, "config", None):
        return
    with open(args.config) as f:
        conf = json.load(f)
    explicit = {tok.split("=", 1)[0].lstrip("-").replace("-", "_")
                for tok in argv if tok.startswith("--")}
    for key, value in conf.items():
        attr = key.replace("-", "_")
        if hasattr(args, attr) and attr not in explicit:
            setattr(args, attr, value)


def _load_fas(spec: str) -> ToyFAS:
    if spec in incompleteness.BUNDLED_FAS_NAMES:
        return bundled_fas(spec)
    with open(spec) as f:
        d = json.load(f)
    return ToyFAS(
        enumerator=Program(parse(d["prefix"]), d.get("payload", "")),
        machine=d.get("machine", "sd"),
        ensemble_L=d.get("ensemble_L"),
        name=d.get("name", spec),
    )


def _outcome_dict(out: vm.RunOutcome) -> dict:
    return {
        "outcome": out.kind,
        "value": print_sexpr(out.value) if out.halted and not isinstance(out.value, (vm.Closure, vm.Rec)) else None,
        "output": machines.output_of(out),
        "payload_consumed": out.payload_consumed,
        "aux_consumed": out.aux_consumed,
        "steps": out.steps,
        "reason": out.reason,
    }


def _config_dict(args: argparse.Namespace) -> dict:
    skip = {"command", "json", "csv", "config"}
    conf = {}
    for k, v in sorted(vars(args).items()):
        if k in skip or v is None:
            continue
        conf[k] = "structural" if v == STRUCTURAL else v
    return conf


def _dispatch(args: argparse.Namespace) -> tuple:
    """Returns (result, csv_payload or None)."""
    cmd = args.command

    if cmd == "bits":
        members = args.set.split(",") if args.set else [""]
        members = [bs_parse(m) for m in members]
        ok, witness = is_prefix_free(members)
        if args.action == "kraft":
            return {"kraft_sum": str(kraft_sum(members)), "prefix_free": ok}, None
        return {"prefix_free": ok, "witness": list(witness) if witness else None}, None

    if cmd == "sexpr":
        expr = parse(args.text)
        if args.action == "parse":
            return {"canonical": print_sexpr(expr)}, None
        bits = to_bits(expr)
        return {"canonical": print_sexpr(expr), "bits": bits, "length_bits": len(bits)}, None

    if cmd == "run":
        if args.machine == "c2":
            if args.raw is None:
                raise ValueError("machine c2 takes --raw program bits")
            out = machines.run_c2(args.raw, args.budget)
        else:
            if args.prefix is None:
                raise ValueError("machines sd/total take --prefix (and optional --payload)")
            prog = Program(parse(args.prefix), args.payload)
            out = machines.run_machine(args.machine, prog, args.budget, aux=args.aux)
        return _outcome_dict(out), None

    if cmd in ("sweep", "elegant"):
        table = complexity.build_table(args.machine, args.L, args.B, c_cap=args.c_cap,
                                       workers=args.workers)
        rep = reports.table_report(table)
        rows = rep["entries"]
        return rep, (rows, ["output", "kind", "h_upper", "witness", "minimal_count", "prob"])

    if cmd == "complexity":
        res = complexity.complexity_upper(args.machine, args.target, args.L, args.B,
                                          c_cap=args.c_cap, workers=args.workers)
        return {
            "target": args.target,
            "found": res.found,
            "h_upper": res.h_upper,
            "witness": res.witness,
            "exact": res.exact,
        }, None

    if cmd == "prob":
        p = complexity.algorithmic_probability(args.machine, args.target, args.L, args.B,
                                               c_cap=args.c_cap, workers=args.workers)
        return {"target": args.target, "prob": str(p)}, None

    if cmd == "coding":
        rep = complexity.check_coding(args.machine, args.L, args.B, c_cap=args.c_cap,
                                      workers=args.workers)
        return rep, (rep["entries"], ["output", "h_upper", "prob", "defect"])

    if cmd == "chain":
        pairs = []
        for chunk in args.pairs.split(";"):
            x, _, y = chunk.partition(":")
            pairs.append((bs_parse(x), bs_parse(y)))
        rep = complexity.check_chain_rule(args.machine, pairs, args.L, args.B,
                                          c_cap=args.c_cap, workers=args.workers)
        return rep, None

    if cmd == "omega":
        if args.action == "lower":
            approx = omega.omega_lower_bound(args.machine, args.L, args.B,
                                             c_cap=args.c_cap, workers=args.workers)
            return approx.as_dict(emit_bits=args.emit_bits), None
        if args.action == "exact":
            approx = omega.omega_exact_capped(args.L, c_cap=args.c_cap, workers=args.workers)
            return approx.as_dict(emit_bits=args.emit_bits), None
        if args.action == "bits":
            if not args.k:
                raise ValueError("omega bits needs --k")
            approx = omega.omega_exact_capped(args.L, c_cap=args.c_cap)
            return {"L": args.L, "k": args.k, "value": str(approx.value),
                    "bits": dyadic_bits(approx.value, args.k)}, None
        # oracle
        if args.kbits is not None:
            kbits = args.kbits
        else:
            if not args.k:
                raise ValueError("omega oracle needs --k or --kbits")
            approx = omega.omega_exact_capped(args.L, c_cap=args.c_cap)
            kbits = dyadic_bits(approx.value, args.k)
        res = omega.oracle_halting_from_omega(kbits, args.L, guard=args.guard, c_cap=args.c_cap)
        return {
            "L": args.L,
            "kbits": kbits,
            "guard_tripped": res.tripped,
            "reason": res.reason,
            "halting_set": list(res.halting_set),
            "lower_bound_reached": str(res.reached),
            "steps_spent": res.steps_spent,
        }, None

    if cmd == "normality":
        return omega.borel_normality(args.x, args.k, args.tol), None

    if cmd == "fas":
        fas = _load_fas(args.fas)
        if args.action == "theorems":
            thms = incompleteness.fas_theorems(fas, args.budget)
            return {
                "fas": fas.name,
                "n_bits": fas.n_bits,
                "budget": args.budget,
                "theorems": [
                    {"kind": "elegant", "program_bits": t.program_bits}
                    if isinstance(t, incompleteness.Elegant)
                    else {"kind": "omega_bit", "index": t.index, "bit": t.bit}
                    for t in thms
                ],
            }, None
        if args.action == "berry":
            P, T = incompleteness.build_berry_program(fas)
            return {
                "fas": fas.name,
                "n_bits": fas.n_bits,
                "threshold": T,
                "p_size_bits": P.size_bits,
                "threshold_minus_n": T - fas.n_bits,
            }, None
        if args.action == "ceiling":
            return incompleteness.elegance_ceiling_experiment(fas, args.budget), None
        return incompleteness.omega_bits_ceiling_experiment(fas, args.L, args.budget), None

    if cmd == "fgh":
        if args.action == "eval":
            if args.ordinal is None or args.n is None:
                raise ValueError("fgh eval needs --ordinal and --n")
            val = fgh_eval(ord_parse(args.ordinal), args.n, args.cap_bits)
            return {"ordinal": args.ordinal, "n": args.n, "cap_bits": args.cap_bits,
                    "value": val.as_dict()}, None
        if args.alpha is None or args.beta is None:
            raise ValueError("fgh dominate needs --alpha and --beta")
        points = [int(x) for x in args.points.split(",")]
        return dominance_check(ord_parse(args.alpha), ord_parse(args.beta), points,
                               args.cap_bits), None

    if cmd == "diag":
        if args.family:
            family = []
            with open(args.family) as f:
                for line in f:
                    line = line.strip()
                    if not line:
                        continue
                    prefix_text, _, payload = line.partition("|")
                    family.append(Program(parse(prefix_text), bs_parse(payload)))
        else:
            family = incompleteness.bundled_function_family(args.width)
        value = incompleteness.diagonalize_total(family, args.n, args.width)
        return {
            "n": args.n,
            "width": args.width,
            "family_sizes": [p.size_bits for p in family],
            "family_values": [
                incompleteness.apply_function_program(p, args.n, args.width)
                for p in family[: min(args.n, len(family) - 1) + 1]
            ],
            "value": value,
        }, None

    raise ValueError(f"unknown command {cmd!r}")


DOMAIN_ERRORS = (
    ValueError,
    BitParseError,
    SExprParseError,
    SExprDecodeError,
    OrdinalParseError,
    InexactTableError,
    incompleteness.MalformedTheoremError,
    incompleteness.FASRunError,
    incompleteness.BerryConstructionError,
    vm.ConversionError,
    OSError,
)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(argv)
    try:
        _apply_config(args, parser, argv)
        result, csv_payload = _dispatch(args)
    except UnsoundFASError as exc:
        report = reports.envelope(args.command, _config_dict(args), exc.report)
        sys.stdout.write(reports.emit_json(report))
        return EXPERIMENT_ABORT
    except DOMAIN_ERRORS as exc:
        print(f"omegalab: {exc}", file=sys.stderr)
        return DOMAIN_ERROR
    if args.csv and csv_payload is not None:
        rows, fields = csv_payload
        sys.stdout.write(reports.emit_csv(rows, fields))
    else:
        report = reports.envelope(args.command, _config_dict(args), result)
        sys.stdout.write(reports.emit_json(report))
    return 0


if __name__ == "__main__":
    sys.exit(main())
