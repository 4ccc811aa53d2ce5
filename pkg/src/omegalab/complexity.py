"""Exhaustive enumeration of halting programs and everything computed from it.

The sweep never iterates raw bit strings for the self-delimiting machines:
a domain member must decode as 8-bit characters of one balanced expression
followed by payload, so the space factorizes exactly into (valid prefix
expression) x (payload bits).  Payloads are discovered on demand: a run is
attempted with the empty payload and extended one bit at a time exactly when
the machine faults with payload-underrun, which enumerates precisely the
payloads a prefix can consume in full.  This is provably the same domain set
a raw scan of all 2^(L+1) strings would find, at a tiny fraction of the cost.

Exhaustiveness is bounded by the prefix-character cap (default 6 characters;
7-character sweeps are ~17M expressions and outside the desk-scale budget).
Upper bounds beyond the cap come from constructed witnesses that are always
verified by actually running them before being admitted.

Enumeration order is fixed (program length ascending, then bit-lexicographic)
so witnesses and tie-breaks are reproducible; sweeps may be partitioned
across workers by prefix range and merged order-stably, so every table is
identical regardless of parallelism.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from multiprocessing import get_context
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .bits import BitString, Dyadic
from .sexpr import ALPHABET, SExpr, is_atom, print_sexpr, to_bits
from . import machines, vm
from .machines import Program, output_of, pair_output_of, run_c2, structural_budget
from .vm import VMConfig, contains_general_only_prims

DEFAULT_CHAR_CAP = 6
C2_RAW_CAP = 22

STRUCTURAL = "structural"  # budget sentinel: per-program subexpression count


class InexactTableError(ValueError):
    """Raised when an operation requires exact complexities the sweep cannot certify."""


# ---------------------------------------------------------------------------
# expression generation

@lru_cache(maxsize=None)
def _exprs_exact(n: int, atoms_ok: bool) -> Tuple[SExpr, ...]:
    """All expressions whose canonical print has exactly n characters."""
    out: List[SExpr] = []
    if n == 1 and atoms_ok:
        out.extend(ALPHABET)
    if n >= 2:
        out.extend(tuple(seq) for seq in _item_seqs(n - 2))
    return tuple(out)


@lru_cache(maxsize=None)
def _item_seqs(m: int) -> Tuple[Tuple[SExpr, ...], ...]:
    """All sequences of expressions with total print length m."""
    if m == 0:
        return ((),)
    seqs: List[Tuple[SExpr, ...]] = []
    for k in range(1, m + 1):
        firsts = _exprs_exact(k, True)
        if not firsts:
            continue
        for rest in _item_seqs(m - k):
            seqs.extend((e,) + rest for e in firsts)
    return tuple(seqs)


def gen_exprs(max_chars: int, lists_only: bool = True) -> List[SExpr]:
    """Every expression of print length <= max_chars, shortest first, lex within length."""
    out: List[SExpr] = []
    for n in range(1, max_chars + 1):
        batch = [e for e in _exprs_exact(n, not lists_only) if not (lists_only and is_atom(e))]
        batch.sort(key=print_sexpr)
        out.extend(batch)
    return out


# ---------------------------------------------------------------------------
# branching domain runner

def domain_runs(
    prefix: SExpr,
    fragment: str,
    max_payload: int,
    budget,
    aux: Optional[BitString] = None,
) -> List[Tuple[BitString, vm.RunOutcome]]:
    """All payloads of length <= max_payload the prefix consumes exactly.

    Extends the payload by one bit precisely when the run underruns, so each
    returned run halted with payload_consumed == len(payload).
    """
    b = structural_budget(prefix) if budget == STRUCTURAL else budget
    results = []
    pending = [""]
    while pending:
        payload = pending.pop()
        out = vm.eval_expr(prefix, VMConfig(budget=b, payload=payload, aux=aux, fragment=fragment))
        if out.halted:
            assert out.payload_consumed == len(payload)
            results.append((payload, out))
        elif out.kind == vm.FAULTED and out.reason == "payload-underrun" and len(payload) < max_payload:
            pending.append(payload + "1")
            pending.append(payload + "0")
    results.sort(key=lambda pr: (len(pr[0]), pr[0]))
    return results


# ---------------------------------------------------------------------------
# sweep records

@dataclass(frozen=True)
class HaltRecord:
    program_bits: BitString
    machine: str
    output: Optional[BitString]  # wrap-convention bit output, None if unconvertible
    pair: Optional[Tuple[BitString, BitString]]
    steps: int
    size_bits: int


def _sd_records_for_prefixes(args) -> List[HaltRecord]:
    machine, prefixes, L, budget, aux = args
    fragment = "total" if machine == "total" else "general"
    records = []
    for prefix in prefixes:
        pre_bits = to_bits(prefix)
        for payload, out in domain_runs(prefix, fragment, L - len(pre_bits), budget, aux):
            bits = pre_bits + payload
            records.append(
                HaltRecord(
                    program_bits=bits,
                    machine=machine,
                    output=output_of(out),
                    pair=pair_output_of(out),
                    steps=out.steps,
                    size_bits=len(bits),
                )
            )
    return records


def enumerate_halting(
    machine: str,
    L: int,
    B,
    c_cap: int = DEFAULT_CHAR_CAP,
    workers: int = 1,
    aux: Optional[BitString] = None,
) -> List[HaltRecord]:
    """All domain members of size <= L bits, (length, lex)-ordered, run with budget B.

    B may be the STRUCTURAL sentinel on machine total.  For sd/total the sweep
    is exhaustive for sizes <= min(L, 8*c_cap + 7); see exhaustive_bits().
    """
    if machine == "c2":
        return _enumerate_c2(L, B)
    if machine not in machines.SELF_DELIMITING:
        raise ValueError(f"unknown machine {machine!r}")
    if B == STRUCTURAL and machine != "total":
        raise ValueError("structural budgets exist only on machine total")
    prefixes = [p for p in gen_exprs(min(c_cap, L // 8)) if 8 * len(print_sexpr(p)) <= L]
    if machine == "total":
        prefixes = [p for p in prefixes if not contains_general_only_prims(p)]
    if workers > 1 and len(prefixes) > 64:
        n = workers * 8
        chunks = [prefixes[i * len(prefixes) // n : (i + 1) * len(prefixes) // n] for i in range(n)]
        with get_context("fork").Pool(workers) as pool:
            parts = pool.map(_sd_records_for_prefixes, [(machine, ch, L, B, aux) for ch in chunks])
        records = list(itertools.chain.from_iterable(parts))
    else:
        records = _sd_records_for_prefixes((machine, prefixes, L, B, aux))
    records.sort(key=lambda r: (r.size_bits, r.program_bits))
    return records


def _enumerate_c2(L: int, budget: int) -> List[HaltRecord]:
    if L > C2_RAW_CAP:
        raise ValueError(f"c2 raw sweep capped at {C2_RAW_CAP} bits (desk scale), got L={L}")
    records = []
    for n in range(1, L + 1):
        for i in range(1 << n):
            raw = format(i, f"0{n}b")
            out = run_c2(raw, budget)
            if out.halted:
                records.append(
                    HaltRecord(
                        program_bits=raw,
                        machine="c2",
                        output="".join(out.value),
                        pair=None,
                        steps=out.steps,
                        size_bits=n,
                    )
                )
    return records


def exhaustive_bits(machine: str, L: int, c_cap: int = DEFAULT_CHAR_CAP) -> int:
    """Largest program size for which the sweep at (L, c_cap) is exhaustive."""
    if machine == "c2":
        return min(L, C2_RAW_CAP)
    return min(L, 8 * c_cap + 7)


# ---------------------------------------------------------------------------
# complexity tables

@dataclass(frozen=True)
class TableEntry:
    output: object  # BitString or (BitString, BitString) pair
    h_upper: int
    witness: BitString
    minimal_count: int
    prob: Optional[Dyadic]


@dataclass
class ComplexityTable:
    machine: str
    L: int
    B: object
    entries: Dict[BitString, TableEntry] = field(default_factory=dict)
    pair_entries: Dict[Tuple[BitString, BitString], TableEntry] = field(default_factory=dict)
    exhaustive_limit: int = 0
    conv_fail_mass: Dyadic = field(default_factory=Dyadic.zero)
    contributing: int = 0

    def lookup(self, x: BitString) -> Optional[TableEntry]:
        return self.entries.get(x)


def build_table(
    machine: str,
    L: int,
    B,
    c_cap: int = DEFAULT_CHAR_CAP,
    workers: int = 1,
    records: Optional[List[HaltRecord]] = None,
) -> ComplexityTable:
    if records is None:
        records = enumerate_halting(machine, L, B, c_cap=c_cap, workers=workers)
    with_prob = machine in machines.SELF_DELIMITING
    table = ComplexityTable(machine=machine, L=L, B=B, exhaustive_limit=exhaustive_bits(machine, L, c_cap))
    table.contributing = len(records)

    def fold(key, entry_map, rec):
        cur = entry_map.get(key)
        if cur is None:
            prob = Dyadic.pow2(rec.size_bits) if with_prob else None
            entry_map[key] = TableEntry(key, rec.size_bits, rec.program_bits, 1, prob)
        else:
            prob = cur.prob + Dyadic.pow2(rec.size_bits) if with_prob else None
            mc = cur.minimal_count + 1 if rec.size_bits == cur.h_upper else cur.minimal_count
            entry_map[key] = TableEntry(key, cur.h_upper, cur.witness, mc, prob)

    for rec in records:  # records are (length, lex) sorted: first hit per output is the witness
        if rec.output is not None:
            fold(rec.output, table.entries, rec)
        elif rec.pair is not None:
            fold(rec.pair, table.pair_entries, rec)
        elif with_prob:
            table.conv_fail_mass = table.conv_fail_mass + Dyadic.pow2(rec.size_bits)
    return table


@dataclass(frozen=True)
class ComplexityResult:
    found: bool
    h_upper: Optional[int] = None
    witness: Optional[BitString] = None
    exact: bool = False
    source: str = "sweep"


def _exactness(machine: str, x_len: int, h: int, L: int, B, table: ComplexityTable) -> bool:
    if machine == "c2":
        return L >= x_len + 1 and table.exhaustive_limit >= min(h, x_len + 1)
    if machine == "total":
        # every program smaller than the found witness was decided and enumerated
        budget_ok = B == STRUCTURAL or (isinstance(B, int) and B >= (h // 8) + 1)
        return budget_ok and h - 1 <= table.exhaustive_limit
    return False


def complexity_upper(machine: str, x: BitString, L: int, B, c_cap: int = DEFAULT_CHAR_CAP,
                     workers: int = 1, table: Optional[ComplexityTable] = None,
                     include_constructed: bool = False) -> ComplexityResult:
    """Minimum enumerated program size producing x; "not found" is a value.

    include_constructed additionally admits the canonical quote witness
    (verified by running it), which is how outputs above the exhaustive
    sweep cap get bounds; on machine total such a bound is still exact when
    the sweep below it was exhaustive.
    """
    if table is None:
        table = build_table(machine, L, B, c_cap=c_cap, workers=workers)
    cands: List[Tuple[int, BitString, str]] = []
    entry = table.entries.get(x)
    if entry is not None:
        cands.append((entry.h_upper, entry.witness, "sweep"))
    if include_constructed and machine in machines.SELF_DELIMITING:
        from . import progs

        qp = progs.quote_program(x)
        if qp.size_bits <= L and progs.verify_output(machine, qp, x):
            cands.append((qp.size_bits, qp.bits, "quote"))
    if not cands:
        return ComplexityResult(found=False)
    h, witness, source = min(cands, key=lambda c: (c[0], c[1]))
    return ComplexityResult(
        found=True,
        h_upper=h,
        witness=witness,
        exact=_exactness(machine, len(x), h, L, B, table),
        source=source,
    )


def algorithmic_probability(machine: str, x: BitString, L: int, B, c_cap: int = DEFAULT_CHAR_CAP,
                            workers: int = 1, table: Optional[ComplexityTable] = None) -> Dyadic:
    """Exact partial sum of 2^-|p| over enumerated domain programs outputting x."""
    if machine not in machines.SELF_DELIMITING:
        raise ValueError("algorithmic probability requires a prefix-free machine (sd or total)")
    if table is None:
        table = build_table(machine, L, B, c_cap=c_cap, workers=workers)
    entry = table.entries.get(x)
    return entry.prob if entry is not None else Dyadic.zero()


def find_elegant(machine: str, L: int, B, c_cap: int = DEFAULT_CHAR_CAP, workers: int = 1,
                 table: Optional[ComplexityTable] = None) -> List[TableEntry]:
    """Per output, the minimal-size program (lex tie-break) plus minimal_count."""
    if table is None:
        table = build_table(machine, L, B, c_cap=c_cap, workers=workers)
    return [table.entries[k] for k in sorted(table.entries, key=lambda o: (len(o), o))]


def randomness_r1(machine: str, x: BitString, L: int, B, **kw) -> bool:
    """x is random iff it cannot be compressed below its own length: h(x) >= |x|."""
    res = complexity_upper(machine, x, L, B, **kw)
    if not res.found or not res.exact:
        raise InexactTableError(f"exact complexity of {x!r} not certified at L={L}, B={B}")
    return res.h_upper >= len(x)


def randomness_r2(machine: str, x: BitString, slack: int, L: int, B,
                  c_cap: int = DEFAULT_CHAR_CAP, workers: int = 1) -> bool:
    """x is random iff h(x) is within slack of the max complexity at its length."""
    table = build_table(machine, L, B, c_cap=c_cap, workers=workers)
    n = len(x)
    best = None
    for z in ("".join(t) for t in itertools.product("01", repeat=n)):
        res = complexity_upper(machine, z, L, B, table=table)
        if not res.found or not res.exact:
            raise InexactTableError(f"exact complexity of {z!r} not certified at L={L}, B={B}")
        best = res.h_upper if best is None else max(best, res.h_upper)
    mine = complexity_upper(machine, x, L, B, table=table).h_upper
    return mine >= best - slack


def char_complexity(value: SExpr, max_chars: int, B: int) -> ComplexityResult:
    """Minimum print length of a payload-free general expression evaluating to value."""
    for chars in range(1, max_chars + 1):
        hits = []
        for e in sorted(_exprs_exact(chars, True), key=print_sexpr):
            out = vm.eval_expr(e, VMConfig(budget=B, payload=""))
            if out.halted and not isinstance(out.value, (vm.Closure, vm.Rec)) and out.value == value:
                hits.append(e)
        if hits:
            return ComplexityResult(found=True, h_upper=chars, witness=print_sexpr(hits[0]), exact=True)
    return ComplexityResult(found=False)


# ---------------------------------------------------------------------------
# joint / relative complexity (sweep + verified constructed witnesses)

@dataclass(frozen=True)
class WitnessedBound:
    found: bool
    h_upper: Optional[int] = None
    witness: Optional[BitString] = None
    source: Optional[str] = None  # "sweep" | "quote" | "composed" | "replay" | "plain"
    exact: bool = False


def _best(cands: List[Tuple[int, BitString, str]]) -> WitnessedBound:
    if not cands:
        return WitnessedBound(found=False)
    size, bits, src = min(cands, key=lambda c: (c[0], c[1]))
    return WitnessedBound(found=True, h_upper=size, witness=bits, source=src)


def joint_complexity(machine: str, x: BitString, y: BitString, L: int, B,
                     c_cap: int = DEFAULT_CHAR_CAP, workers: int = 1,
                     table: Optional[ComplexityTable] = None,
                     include_constructed: bool = True) -> WitnessedBound:
    """Upper bound on the pair complexity H(x,y), with its witness program."""
    from . import progs

    if machine not in machines.SELF_DELIMITING:
        raise ValueError("joint complexity is defined on the self-delimiting machines here")
    if table is None:
        table = build_table(machine, L, B, c_cap=c_cap, workers=workers)
    cands: List[Tuple[int, BitString, str]] = []
    entry = table.pair_entries.get((x, y))
    if entry is not None:
        cands.append((entry.h_upper, entry.witness, "sweep"))
    if include_constructed:
        qp = progs.quote_pair_program(x, y)
        if qp.size_bits <= L and progs.verify_pair(machine, qp, x, y):
            cands.append((qp.size_bits, qp.bits, "quote"))
    return _best(cands)


def relative_complexity(machine: str, x: BitString, y_star: BitString, L: int, B,
                        c_cap: int = DEFAULT_CHAR_CAP, workers: int = 1,
                        include_constructed: bool = True,
                        _sweep_cache: Optional[dict] = None) -> WitnessedBound:
    """Upper bound on H(x | y*): aux channel loaded with y_star, output x."""
    from . import progs

    if machine not in machines.SELF_DELIMITING:
        raise ValueError("relative complexity is defined on the self-delimiting machines here")
    if not machines.in_domain(machine, y_star, budget=10**6):
        raise ValueError("y_star must itself be a domain program")
    key = (machine, L, B, c_cap, y_star)
    if _sweep_cache is not None and key in _sweep_cache:
        records = _sweep_cache[key]
    else:
        records = enumerate_halting(machine, L, B, c_cap=c_cap, workers=workers, aux=y_star)
        if _sweep_cache is not None:
            _sweep_cache[key] = records
    cands: List[Tuple[int, BitString, str]] = []
    for rec in records:
        if rec.output == x:
            cands.append((rec.size_bits, rec.program_bits, "sweep"))
            break  # records are (length, lex)-sorted
    if include_constructed:
        plain = progs.quote_program(x)
        if plain.size_bits <= L and machines.output_of(
            machines.run_machine(machine, plain, 10**6, aux=y_star)
        ) == x:
            cands.append((plain.size_bits, plain.bits, "plain"))
        y_prog = machines.split_program_bits(y_star)
        y_out = machines.output_of(machines.run_machine(machine, y_prog, 10**6))
        if y_out == x:  # replaying the aux program reproduces its output
            rp = progs.replay_program()
            if rp.size_bits <= L and machines.output_of(
                machines.run_machine(machine, rp, 10**7, aux=y_star)
            ) == x:
                cands.append((rp.size_bits, rp.bits, "replay"))
    return _best(cands)


def mutual_information(machine: str, x: BitString, y: BitString, L: int, B,
                       c_cap: int = DEFAULT_CHAR_CAP, workers: int = 1) -> Optional[int]:
    """h(x) + h(y) - h(x,y) from upper bounds; None when any entry is missing."""
    table = build_table(machine, L, B, c_cap=c_cap, workers=workers)
    hx = complexity_upper(machine, x, L, B, table=table)
    hy = complexity_upper(machine, y, L, B, table=table)
    hxy = joint_complexity(machine, x, y, L, B, table=table)
    if not (hx.found and hy.found and hxy.found):
        return None
    return hx.h_upper + hy.h_upper - hxy.h_upper


# ---------------------------------------------------------------------------
# coding theorem and chain rule reports

def _ceil_neg_log2(d: Dyadic) -> int:
    # ceil(exp - log2 num) == exp - floor(log2 num) whether or not num is a
    # power of two (the fractional part of log2 num is in [0, 1))
    return d.exp - (d.num.bit_length() - 1)


def check_coding(machine: str, L: int, B, c_cap: int = DEFAULT_CHAR_CAP, workers: int = 1) -> dict:
    """For every swept output: prob(x) >= 2^-h_upper(x) exactly; report the (*) defect."""
    if machine not in machines.SELF_DELIMITING:
        raise ValueError("coding check requires a prefix-free machine")
    table = build_table(machine, L, B, c_cap=c_cap, workers=workers)
    rows = []
    max_defect = None
    for key in sorted(table.entries, key=lambda o: (len(o), o)):
        entry = table.entries[key]
        assert entry.prob >= Dyadic.pow2(entry.h_upper), "witness term must be in the sum"
        defect = entry.h_upper - _ceil_neg_log2(entry.prob)
        max_defect = defect if max_defect is None else max(max_defect, defect)
        rows.append(
            {
                "output": key,
                "h_upper": entry.h_upper,
                "prob": str(entry.prob),
                "defect": defect,
            }
        )
    return {"machine": machine, "L": L, "B": B if B != STRUCTURAL else "structural",
            "entries": rows, "max_defect": max_defect}


def check_chain_rule(machine: str, pairs: Sequence[Tuple[BitString, BitString]], L: int, B,
                     c_cap: int = DEFAULT_CHAR_CAP, workers: int = 1) -> dict:
    """Chain-rule report: d(x,y) = h(x,y) - h(x) - h(y|x*) per pair, plus the
    composition constant K (size of the fixed composing prefix, measured once).

    Only the <= direction is asserted: a composed program of size
    h(x) + h(y|x*) + K is built from the two witnesses, executed, and checked
    to output the pair, so h(x,y) <= h(x) + h(y|x*) + K stands on a run.
    """
    from . import progs

    table = build_table(machine, L, B, c_cap=c_cap, workers=workers)
    composer = progs.pair_composer(with_aux=True)
    K = 8 * len(print_sexpr(composer))
    rows = []
    skipped = []
    max_abs_d = None
    sweep_cache: dict = {}  # the same witness program x* recurs across pairs
    for x, y in pairs:
        hx = complexity_upper(machine, x, L, B, table=table)
        if not hx.found:
            skipped.append({"x": x, "y": y, "reason": "h(x) not found"})
            continue
        x_star = hx.witness
        hyx = relative_complexity(machine, y, x_star, L, B, c_cap=c_cap, workers=workers,
                                  _sweep_cache=sweep_cache)
        if not hyx.found:
            skipped.append({"x": x, "y": y, "reason": "h(y|x*) not found"})
            continue
        composed = Program(composer, x_star + hyx.witness)
        composed_ok = progs.verify_pair(machine, composed, x, y, budget=10**7)
        hxy = joint_complexity(machine, x, y, L, B, table=table)
        cands = [(hxy.h_upper, hxy.witness, hxy.source)] if hxy.found else []
        if composed_ok:
            cands.append((composed.size_bits, composed.bits, "composed"))
        best = _best(cands)
        if not best.found:
            skipped.append({"x": x, "y": y, "reason": "h(x,y) not found"})
            continue
        d = best.h_upper - hx.h_upper - hyx.h_upper
        assert best.h_upper <= hx.h_upper + hyx.h_upper + K
        max_abs_d = abs(d) if max_abs_d is None else max(max_abs_d, abs(d))
        rows.append(
            {
                "x": x,
                "y": y,
                "h_xy": best.h_upper,
                "h_xy_source": best.source,
                "h_x": hx.h_upper,
                "h_y_given_xstar": hyx.h_upper,
                "d": d,
                "composed_verified": composed_ok,
            }
        )
    return {
        "machine": machine,
        "L": L,
        "B": B if B != STRUCTURAL else "structural",
        "K": K,
        "pairs": rows,
        "skipped": skipped,
        "max_abs_d": max_abs_d,
    }


# ---------------------------------------------------------------------------
# domain scans (prefix-free checks)

def scan_domain(machine: str, max_len: int, budget: int) -> List[BitString]:
    """All domain member bit strings of length <= max_len, sorted (length, lex).

    Equivalent to scanning every bit string of length <= max_len because
    membership requires a char-aligned balanced prefix decode.
    """
    if machine not in machines.SELF_DELIMITING:
        raise ValueError("domain scans are for the self-delimiting machines")
    fragment = "total" if machine == "total" else "general"
    members = []
    for prefix in gen_exprs(max_len // 8):
        pre_bits = to_bits(prefix)
        if machine == "total" and contains_general_only_prims(prefix):
            continue
        for payload, _ in domain_runs(prefix, fragment, max_len - len(pre_bits), budget):
            members.append(pre_bits + payload)
    members.sort(key=lambda b: (len(b), b))
    return members
