"""Halting-probability engine.

All values are exact dyadic rationals about a *capped* program ensemble
(size <= L bits); the cap is carried on every result because the true
halting probability is a limit this artifact never claims to know.  The sum
runs over the machine's domain (the sum-over-programs form); the mass of
domain programs whose value does not convert to an output is tracked
separately rather than folded in or dropped.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .bits import BitString, Dyadic, bits_to_dyadic, dyadic_bits
from . import complexity, machines
from .complexity import DEFAULT_CHAR_CAP, STRUCTURAL, build_table, enumerate_halting


@dataclass(frozen=True)
class OmegaApprox:
    machine: str
    L: int
    B: object
    value: Dyadic
    contributing: int
    conv_fail_mass: Dyadic

    def as_dict(self, emit_bits: int = 0) -> dict:
        d = {
            "machine": self.machine,
            "L": self.L,
            "B": "structural" if self.B == STRUCTURAL else self.B,
            "value": str(self.value),
            "contributing": self.contributing,
            "conversion_failure_mass": str(self.conv_fail_mass),
        }
        if emit_bits:
            d["bits"] = dyadic_bits(self.value, emit_bits)
        return d


def omega_lower_bound(machine: str, L: int, B, c_cap: int = DEFAULT_CHAR_CAP,
                      workers: int = 1) -> OmegaApprox:
    """Exact sum of 2^-|p| over domain members found at (L, B); monotone in both."""
    if machine not in machines.SELF_DELIMITING:
        raise ValueError("halting probability requires a prefix-free machine")
    records = enumerate_halting(machine, L, B, c_cap=c_cap, workers=workers)
    value = Dyadic.zero()
    fail = Dyadic.zero()
    for rec in records:
        value = value + Dyadic.pow2(rec.size_bits)
        if rec.output is None and rec.pair is None:
            fail = fail + Dyadic.pow2(rec.size_bits)
    assert value <= Dyadic.one()
    return OmegaApprox(machine, L, B, value, len(records), fail)


def omega_exact_capped(L: int, c_cap: int = DEFAULT_CHAR_CAP, workers: int = 1) -> OmegaApprox:
    """EXACT capped halting probability of machine total at size cap L.

    Halting is decidable on the total fragment (the structural budget always
    suffices), so this equals the supremum over B of omega_lower_bound(total,
    L, B), reached at finite B.
    """
    return omega_lower_bound("total", L, STRUCTURAL, c_cap=c_cap, workers=workers)


def omega_double_prime(machine: str, N: int, L: int, B, c_cap: int = DEFAULT_CHAR_CAP,
                       workers: int = 1) -> dict:
    """Sum of 2^-h_upper(encode(n)) over naturals n <= N.

    Numeral convention: n is its big-endian binary expansion without leading
    zeros, 0 is the empty string.  Built from complexity upper bounds, so it
    is labeled an approximation from above-bounded complexities.
    """
    table = build_table(machine, L, B, c_cap=c_cap, workers=workers)
    total = Dyadic.zero()
    missing: List[int] = []
    terms: List[dict] = []
    for n in range(0, N + 1):
        enc = format(n, "b") if n else ""
        entry = table.lookup(enc)
        if entry is None:
            missing.append(n)
            continue
        total = total + Dyadic.pow2(entry.h_upper)
        terms.append({"n": n, "encoded": enc, "h_upper": entry.h_upper})
    return {
        "machine": machine,
        "N": N,
        "L": L,
        "B": "structural" if B == STRUCTURAL else B,
        "value": str(total),
        "value_dyadic": total,
        "terms": terms,
        "missing": missing,
        "note": "built from h_upper values; a lower-style approximation from upper bounds",
    }


@dataclass(frozen=True)
class OracleResult:
    tripped: bool
    reason: Optional[str]
    halting_set: Tuple[BitString, ...]
    reached: Dyadic
    steps_spent: int


def oracle_halting_from_omega(kbits: BitString, L: int, guard: int = 10**8,
                              c_cap: int = DEFAULT_CHAR_CAP) -> OracleResult:
    """Recover the halting set for sizes <= k from the first k bits of capped omega.

    Dovetails the capped total ensemble in increasing budget, accumulating the
    exact lower bound, until it reaches the dyadic value of kbits; at that
    point any still-unhalted program of size <= k would push the sum past
    value(kbits) + 2^-k > omega, so the halting set for sizes <= k is
    complete.  Inconsistent kbits can never be reached; the run then ends with
    a distinguishable guard-tripped outcome (the step guard, or immediately
    once the decidable ensemble is exhausted below the target).
    """
    k = len(kbits)
    if k > L:
        raise ValueError("k must not exceed the ensemble cap L")
    target = bits_to_dyadic(kbits)
    # dovetail order: the run at dovetail stage b contributes exactly the
    # programs halting in b steps, so accumulate in (steps, size, lex) order
    records = sorted(
        enumerate_halting("total", L, STRUCTURAL, c_cap=c_cap),
        key=lambda r: (r.steps, r.size_bits, r.program_bits),
    )
    acc = Dyadic.zero()
    spent = 0
    halted: List[BitString] = []
    if acc >= target:
        return OracleResult(False, None, (), acc, 0)
    for rec in records:
        spent += rec.steps
        if spent > guard:
            return OracleResult(True, "step guard exhausted", (), acc, spent)
        acc = acc + Dyadic.pow2(rec.size_bits)
        if rec.size_bits <= k:
            halted.append(rec.program_bits)
        if acc >= target:
            return OracleResult(False, None, tuple(sorted(halted, key=lambda b: (len(b), b))), acc, spent)
    return OracleResult(True, "ensemble exhausted below target (kbits inconsistent)", (), acc, spent)


def decided_halting_set(L: int, k: int, c_cap: int = DEFAULT_CHAR_CAP) -> Tuple[BitString, ...]:
    """Directly decided halting set of the capped total ensemble, sizes <= k."""
    return tuple(
        rec.program_bits
        for rec in enumerate_halting("total", min(k, L), STRUCTURAL, c_cap=c_cap)
    )


def borel_normality(x: BitString, k: int, tol) -> dict:
    """Disjoint k-block equidistribution check.

    Partitions x into floor(|x|/k) disjoint k-blocks and passes iff every
    block value's frequency is within tol of 2^-k.  Frequencies have
    non-dyadic denominators, so this one comparison uses exact Fractions.
    """
    if k < 1:
        raise ValueError("block size must be >= 1")
    if len(x) < k:
        raise ValueError("string shorter than one block")
    if k > 20:
        raise ValueError("block size capped at 20 (2^k block values)")
    tol_f = Fraction(str(tol))
    nblocks = len(x) // k
    counts: Dict[str, int] = {}
    for i in range(nblocks):
        block = x[i * k : (i + 1) * k]
        counts[block] = counts.get(block, 0) + 1
    ideal = Fraction(1, 2**k)
    freqs = {}
    verdict = True
    for v in range(2**k):
        block = format(v, f"0{k}b")
        f = Fraction(counts.get(block, 0), nblocks)
        freqs[block] = {"count": counts.get(block, 0), "frequency": str(f)}
        if abs(f - ideal) > tol_f:
            verdict = False
    return {
        "k": k,
        "tol": str(tol_f),
        "blocks": nblocks,
        "frequencies": freqs,
        "verdict": "pass" if verdict else "fail",
    }
