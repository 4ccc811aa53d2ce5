"""Toy formal axiomatic systems and the ceilings they cannot cross.

A formal system is modeled as a theorem enumerator: a Program whose halted
value is a list of theorem records.  Its complexity is the enumerator's size
in bits, reported as an upper bound N (true minimal enumerator size is
itself uncomputable).  Two theorem shapes exist on the wire:

    (e b1 ... bk)    "the program with these k bits is elegant on machine
                      total" (no smaller program has the same output)
    (o (1 ... 1) b)  "bit <unary index, 1-based> of the capped halting
                      probability is b"

Soundness is checked, not assumed: desk scale permits an exhaustive
brute-force elegance oracle below the sweep cap, which the in-principle
argument never has.  The Berry construction is executable: build_berry_program
composes a fixed driver with the system's own enumerator and embeds the least
threshold T >= the built program's own size (found by a fixed-point search),
so a sound system can never exhibit a provably elegant program above T, and
an unsound one gets its oversized claim run and reproduced.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple, Union

from .bits import BitString, dyadic_bits
from .complexity import DEFAULT_CHAR_CAP, STRUCTURAL, build_table, exhaustive_bits
from .machines import (
    Program,
    output_of,
    run_machine,
    run_total,
    split_program_bits,
    structural_budget,
)
from .progs import berry_driver
from . import progs
from .sexpr import SExprDecodeError, parse, print_sexpr, to_bits
from .vm import contains_general_only_prims


class MalformedTheoremError(ValueError):
    def __init__(self, position: int, detail: str):
        self.position = position
        super().__init__(f"malformed theorem at position {position}: {detail}")


class FASRunError(RuntimeError):
    pass


class BerryConstructionError(RuntimeError):
    pass


class UnsoundFASError(RuntimeError):
    """Experiment abort; carries the report naming the false theorem."""

    def __init__(self, report: dict):
        self.report = report
        super().__init__(report.get("abort_reason", "unsound formal system"))


@dataclass(frozen=True)
class Elegant:
    program_bits: BitString

    def encode(self):
        return ("e",) + tuple(self.program_bits)


@dataclass(frozen=True)
class OmegaBit:
    index: int  # 1-based position after the binary point
    bit: str

    def encode(self):
        return ("o", ("1",) * self.index, self.bit)


Theorem = Union[Elegant, OmegaBit]


@dataclass(frozen=True)
class ToyFAS:
    enumerator: Program
    machine: str = "sd"
    ensemble_L: Optional[int] = None  # for OmegaBit claims: the capped ensemble
    name: str = ""

    @property
    def n_bits(self) -> int:
        return self.enumerator.size_bits


def decode_theorem(record, position: int) -> Theorem:
    if not isinstance(record, tuple) or not record:
        raise MalformedTheoremError(position, "record is not a nonempty list")
    tag = record[0]
    if tag == "e":
        bits = record[1:]
        if not bits or any(b not in ("0", "1") for b in bits):
            raise MalformedTheoremError(position, "elegance claim needs inline program bits")
        return Elegant("".join(bits))
    if tag == "o":
        if len(record) != 3:
            raise MalformedTheoremError(position, "omega-bit claim is (o <unary index> <bit>)")
        idx, bit = record[1], record[2]
        if not isinstance(idx, tuple) or not idx or any(d != "1" for d in idx):
            raise MalformedTheoremError(position, "index must be a nonempty unary list of 1s")
        if bit not in ("0", "1"):
            raise MalformedTheoremError(position, "claimed bit must be the atom 0 or 1")
        return OmegaBit(len(idx), bit)
    raise MalformedTheoremError(position, f"unknown tag {tag!r}")


def fas_theorems(fas: ToyFAS, budget: int) -> List[Theorem]:
    """Theorems visible within the budget: none before the enumerator halts,
    the full decoded list at and after its halting budget (monotone)."""
    out = run_machine(fas.machine, fas.enumerator, budget)
    if out.kind == "out_of_budget":
        return []
    if not out.halted:
        raise FASRunError(f"enumerator faulted: {out.reason}")
    if not isinstance(out.value, tuple):
        raise MalformedTheoremError(0, "enumerator value is not a theorem list")
    return [decode_theorem(rec, i) for i, rec in enumerate(out.value)]


def fas_complexity_upper(fas: ToyFAS) -> int:
    """N: the given enumerator's size in bits (an upper bound by definition)."""
    return fas.n_bits


# ---------------------------------------------------------------------------
# the exhaustive elegance oracle

@dataclass(frozen=True)
class EleganceVerdict:
    status: str  # "confirmed" | "refuted" | "unverifiable"
    output: Optional[BitString] = None
    counterexample: Optional[BitString] = None
    exhaustive_to: int = 0


@lru_cache(maxsize=4)
def _oracle_table(limit_bits: int):
    return build_table("total", limit_bits, STRUCTURAL, c_cap=DEFAULT_CHAR_CAP)


def elegance_oracle(program_bits: BitString, budget: int = 10**6) -> EleganceVerdict:
    """Brute-force check of "no smaller total program has the same output".

    Refutation needs one smaller witness; confirmation needs the sweep below
    |Q| to be exhaustive, which desk scale grants only below the character
    cap.  Q itself must be a domain program with an output.
    """
    try:
        p = split_program_bits(program_bits)
    except SExprDecodeError:
        return EleganceVerdict(status="refuted", counterexample=None, output=None)
    out = output_of(run_total(p, budget))
    if out is None:
        # a non-producing program is vacuously non-elegant here: it has no output
        return EleganceVerdict(status="refuted")
    size = len(program_bits)
    limit = min(size - 1, exhaustive_bits("total", size - 1))
    table = _oracle_table(limit)
    counterexamples: List[BitString] = []
    entry = table.lookup(out)
    if entry is not None and entry.h_upper < size:
        counterexamples.append(entry.witness)
    # above the exhaustive range a constructed smaller program still refutes
    qp = progs.quote_program(out)
    if qp.size_bits < size and progs.verify_output("total", qp, out):
        counterexamples.append(qp.bits)
    if counterexamples:
        best = min(counterexamples, key=lambda b: (len(b), b))
        return EleganceVerdict(status="refuted", output=out, counterexample=best, exhaustive_to=limit)
    if size - 1 <= table.exhaustive_limit:
        return EleganceVerdict(status="confirmed", output=out, exhaustive_to=limit)
    return EleganceVerdict(status="unverifiable", output=out, exhaustive_to=limit)


# ---------------------------------------------------------------------------
# the Berry construction

def build_berry_program(fas: ToyFAS, max_doublings: int = 64) -> Tuple[Program, int]:
    """Compose the fixed driver with the system's enumerator; embed the least
    threshold T with T >= size_bits(P(T)).  Returns (P, T), size_bits(P) <= T."""
    def size_at(t: int) -> int:
        return Program(berry_driver(fas.enumerator.prefix, t), fas.enumerator.payload).size_bits

    T = 1
    for _ in range(max_doublings):
        size = size_at(T)
        if T >= size:
            while T > 1 and T - 1 >= size_at(T - 1):
                T -= 1
            P = Program(berry_driver(fas.enumerator.prefix, T), fas.enumerator.payload)
            assert P.size_bits <= T
            return P, T
        T = max(size, 2 * T)
    raise BerryConstructionError(f"no threshold fixed point within {max_doublings} doublings")


# ---------------------------------------------------------------------------
# experiments

def elegance_ceiling_experiment(fas: ToyFAS, budget: int) -> dict:
    """Soundness gate, ceiling check, and the run of the Berry program P.

    Sound system: every elegance claim survives the oracle, the largest
    claimed size stays at or below the threshold T, and P exhausts its
    budget.  A false claim aborts the experiment (UnsoundFASError) with the
    theorem named -- after running P, which finds the oversized claim and
    reproduces its output, making the contradiction executable.
    """
    theorems = fas_theorems(fas, budget)
    claims = [t for t in theorems if isinstance(t, Elegant)]
    events: List[dict] = []
    N = fas_complexity_upper(fas)
    P, T = build_berry_program(fas)
    events.append({"event": "berry_built", "threshold": T, "p_size_bits": P.size_bits})

    false_theorem = None
    for i, claim in enumerate(claims):
        verdict = elegance_oracle(claim.program_bits)
        events.append(
            {
                "event": "oracle",
                "claim_index": i,
                "claim_size_bits": len(claim.program_bits),
                "status": verdict.status,
                "counterexample": verdict.counterexample,
                "exhaustive_to": verdict.exhaustive_to,
            }
        )
        if verdict.status == "refuted":
            false_theorem = (i, claim, verdict)
            break
        if verdict.status == "unverifiable":
            raise FASRunError(
                f"claim {i} of size {len(claim.program_bits)} exceeds the exhaustive oracle range"
            )

    max_elegant = max((len(c.program_bits) for c in claims), default=0)
    out = run_machine("sd", P, budget)  # P uses the general fragment whatever the system runs on
    berry_run = {
        "outcome": out.kind,
        "steps": out.steps,
        "output": output_of(out),
    }
    report = {
        "fas": fas.name,
        "n_bits": N,
        "threshold": T,
        "max_elegant_size": max_elegant,
        "budget": budget,
        "berry_run": berry_run,
        "events": events,
    }
    if false_theorem is not None:
        i, claim, verdict = false_theorem
        report["verdict"] = "unsound"
        if verdict.counterexample is not None:
            why = f"counterexample of {len(verdict.counterexample)} bits has the same output"
        else:
            why = "the claimed program produces no output"
        report["abort_reason"] = (
            f"theorem {i} falsely claims elegance of a {len(claim.program_bits)}-bit program; {why}"
        )
        report["false_theorem"] = {
            "index": i,
            "program_bits": claim.program_bits,
            "output": verdict.output,
            "counterexample": verdict.counterexample,
        }
        raise UnsoundFASError(report)
    report["verdict"] = "soundness-consistent" if max_elegant <= T else "inconsistent"
    return report


def omega_bits_ceiling_experiment(fas: ToyFAS, L: Optional[int], budget: int) -> dict:
    """Verify every claimed bit of the capped halting probability.

    Claimed indices may be scattered; each is compared against the exact
    capped value.  Any wrong bit aborts with its index.  Reports the count of
    correct bits next to N, the system's size.
    """
    from .omega import omega_exact_capped

    ensemble_L = L if L is not None else fas.ensemble_L
    if ensemble_L is None:
        raise ValueError("omega-bit claims need the capped ensemble size L")
    theorems = fas_theorems(fas, budget)
    claims = [t for t in theorems if isinstance(t, OmegaBit)]
    exact = omega_exact_capped(ensemble_L)
    depth = max((c.index for c in claims), default=0)
    true_bits = dyadic_bits(exact.value, depth)
    checked = []
    for i, c in enumerate(claims):
        actual = true_bits[c.index - 1]
        checked.append({"index": c.index, "claimed": c.bit, "actual": actual})
        if c.bit != actual:
            raise UnsoundFASError(
                {
                    "fas": fas.name,
                    "verdict": "unsound",
                    "abort_reason": f"claimed bit at index {c.index} is {c.bit}, actual {actual}",
                    "flipped_index": c.index,
                    "ensemble_L": ensemble_L,
                    "checked": checked,
                }
            )
    N = fas_complexity_upper(fas)
    return {
        "fas": fas.name,
        "verdict": "all-correct",
        "ensemble_L": ensemble_L,
        "omega_capped": str(exact.value),
        "count_correct": len(claims),
        "n_bits": N,
        "count_minus_n": len(claims) - N,
        "checked": checked,
        "budget": budget,
    }


# ---------------------------------------------------------------------------
# UB2-style diagonalization over total function programs

NUMERAL_WIDTH = 16


def apply_function_program(p: Program, n: int, width: int = NUMERAL_WIDTH) -> int:
    """Run a total-fragment function program on input n.

    Convention: the numeral arrives on the aux channel as a width-bit
    big-endian string; the halted value, a flat bit list, is read back as a
    big-endian natural (empty list = 0).
    """
    if contains_general_only_prims(p.prefix):
        raise ValueError("function programs must lie in the total fragment")
    if not 0 <= n < 2**width:
        raise ValueError(f"input {n} does not fit in {width} bits")
    out = run_total(p, structural_budget(p.prefix), aux=format(n, f"0{width}b"))
    bits = output_of(out)
    if bits is None:
        raise FASRunError(f"function program produced no output on {n}: {out.reason}")
    return int(bits, 2) if bits else 0


def diagonalize_total(family: Sequence[Program], n: int, width: int = NUMERAL_WIDTH) -> int:
    """F(n) = 1 + max over i <= min(n, |family|-1) of family[i](n).

    F differs from every family member at and beyond its index, the
    executable shadow of diagonalizing over provably total functions.
    """
    if not family:
        return 1
    top = min(n, len(family) - 1)
    return 1 + max(apply_function_program(family[i], n, width) for i in range(top + 1))


def bundled_function_family(width: int = NUMERAL_WIDTH) -> List[Program]:
    """n, 2n, 4n as total-fragment programs: read width aux bits, append zeros.

    Multiplication beyond shifts needs bit fan-out, which the total fragment
    cannot express (each read bit is consumed once), so shifts are the
    natural realizable family.
    """
    def shifter(extra_zeros: int) -> Program:
        tail = ("q", ("0",) * extra_zeros) if extra_zeros else ("q", ())
        expr = tail
        for _ in range(width):
            expr = ("c", ("s",), expr)
        return Program(expr, "")

    return [shifter(k) for k in (0, 1, 2)]


# ---------------------------------------------------------------------------
# bundled formal systems

# Elegance facts on machine total, frozen as data.  Each says "this program's
# size is minimal for its output"; the experiment re-derives every one of
# them through the exhaustive oracle before trusting the system.
_SOUND_CLAIMS = (
    "()|",       # output ""
    "(r)|0",     # output "0"
    "(r)|1",     # output "1"
    "(q(00))|",  # output "00"
    "(q(01))|",
    "(q(10))|",
    "(q(11))|",
)


def _program_from_text(text: str) -> Program:
    prefix_text, _, payload = text.partition("|")
    return Program(parse(prefix_text), payload)


def bundled_sound_fas() -> ToyFAS:
    """Quoted list of verified elegance facts; total fragment, halts in 1 step."""
    theorems = tuple(
        Elegant(_program_from_text(t).bits).encode() for t in _SOUND_CLAIMS
    )
    enum = Program(("q", theorems), "")
    return ToyFAS(enumerator=enum, machine="total", name="sound-elegance")


def bundled_unsound_fas() -> ToyFAS:
    """Enumerator generating one oversized elegance claim the driver can cash in.

    The padding is chosen so the claimed program is strictly larger than the
    Berry threshold of the very system making the claim (iterated to a fixed
    point, since the threshold moves with the enumerator's own size).
    """
    pad = progs.bundled_unsound_pad_search(
        lambda enum_prefix: build_berry_program(
            ToyFAS(enumerator=Program(enum_prefix, ""), machine="sd", name="unsound-elegance")
        )[1]
    )
    enum = Program(progs.padded_quote_enumerator(pad), "")
    return ToyFAS(enumerator=enum, machine="sd", name="unsound-elegance")


def bundled_omega_fas(L: int = 24, nbits: int = 8, flip_index: Optional[int] = None) -> ToyFAS:
    """Hard-codes the first nbits exact bits of the capped halting probability.

    flip_index builds the deliberately wrong variant with that bit inverted.
    """
    from .omega import omega_exact_capped

    exact = omega_exact_capped(L)
    bits = dyadic_bits(exact.value, nbits)
    claims = []
    for i, b in enumerate(bits, start=1):
        if flip_index == i:
            b = "1" if b == "0" else "0"
        claims.append(OmegaBit(i, b).encode())
    enum = Program(("q", tuple(claims)), "")
    name = "omega-bits" if flip_index is None else f"omega-bits-flip{flip_index}"
    return ToyFAS(enumerator=enum, machine="total", ensemble_L=L, name=name)


BUNDLED_FAS_NAMES = ("sound", "unsound", "omega8", "omega8-flipped")


def bundled_fas(name: str) -> ToyFAS:
    if name == "sound":
        return bundled_sound_fas()
    if name == "unsound":
        return bundled_unsound_fas()
    if name == "omega8":
        return bundled_omega_fas(L=24, nbits=8)
    if name == "omega8-flipped":
        return bundled_omega_fas(L=24, nbits=8, flip_index=5)
    raise ValueError(f"unknown bundled formal system {name!r}; have {BUNDLED_FAS_NAMES}")
