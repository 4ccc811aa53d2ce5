"""Exact bit-sequence and dyadic-rational arithmetic, plus prefix-code checks.

Bit strings are plain Python strings over '0'/'1' (empty string is the empty
sequence, earliest-read bit first).  All probability masses in this package
are dyadic rationals num/2^exp kept in canonical form so that equality is
structural and comparisons are exact; there is deliberately no float path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

BitString = str  # '0'/'1' characters only


class BitParseError(ValueError):
    def __init__(self, text: str, index: int):
        self.index = index
        super().__init__(f"invalid bit character {text[index]!r} at index {index}")


def bs_parse(text: str) -> BitString:
    """Validate and return a bit string; any non-'0'/'1' character is an error."""
    for i, ch in enumerate(text):
        if ch not in "01":
            raise BitParseError(text, i)
    return text


def is_proper_prefix(a: BitString, b: BitString) -> bool:
    return len(a) < len(b) and b.startswith(a)


def is_prefix_free(members: Iterable[BitString]) -> Tuple[bool, Optional[Tuple[BitString, BitString]]]:
    """True iff no member is a proper prefix of another; else one witness pair.

    Sorting makes any violating pair adjacent, so the scan is linear after the
    sort instead of quadratic.
    """
    ordered = sorted(set(members))
    for a, b in zip(ordered, ordered[1:]):
        if is_proper_prefix(a, b):
            return False, (a, b)
    return True, None


@dataclass(frozen=True)
class Dyadic:
    """Exact num/2^exp with num >= 0.

    Canonical form: num is odd or zero, or exp is zero.  Construction always
    reduces, so == is structural equality of values.
    """

    num: int
    exp: int

    def __post_init__(self):
        if self.num < 0 or self.exp < 0:
            raise ValueError("dyadic rational must be nonnegative with natural exponent")
        num, exp = self.num, self.exp
        if num == 0:
            exp = 0
        else:
            while exp > 0 and num % 2 == 0:
                num //= 2
                exp -= 1
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "exp", exp)

    @staticmethod
    def zero() -> "Dyadic":
        return Dyadic(0, 0)

    @staticmethod
    def one() -> "Dyadic":
        return Dyadic(1, 0)

    @staticmethod
    def pow2(k: int) -> "Dyadic":
        """2^-k for k >= 0."""
        return Dyadic(1, k)

    def __add__(self, other: "Dyadic") -> "Dyadic":
        e = max(self.exp, other.exp)
        return Dyadic(self.num * (1 << (e - self.exp)) + other.num * (1 << (e - other.exp)), e)

    def __sub__(self, other: "Dyadic") -> "Dyadic":
        e = max(self.exp, other.exp)
        n = self.num * (1 << (e - self.exp)) - other.num * (1 << (e - other.exp))
        if n < 0:
            raise ValueError("dyadic subtraction went negative")
        return Dyadic(n, e)

    def _cmp_key(self, other: "Dyadic") -> Tuple[int, int]:
        e = max(self.exp, other.exp)
        return self.num * (1 << (e - self.exp)), other.num * (1 << (e - other.exp))

    def __lt__(self, other: "Dyadic") -> bool:
        a, b = self._cmp_key(other)
        return a < b

    def __le__(self, other: "Dyadic") -> bool:
        a, b = self._cmp_key(other)
        return a <= b

    def __gt__(self, other: "Dyadic") -> bool:
        return other < self

    def __ge__(self, other: "Dyadic") -> bool:
        return other <= self

    def __str__(self) -> str:
        return f"{self.num}/2^{self.exp}"

    @staticmethod
    def parse(text: str) -> "Dyadic":
        num_s, _, exp_s = text.partition("/2^")
        if not exp_s:
            raise ValueError(f"expected 'num/2^exp', got {text!r}")
        return Dyadic(int(num_s), int(exp_s))


def kraft_sum(members: Iterable[BitString]) -> Dyadic:
    """Exact sum of 2^-|p| over the (deduplicated) members."""
    total = Dyadic.zero()
    for p in set(members):
        total = total + Dyadic.pow2(len(p))
    return total


def dyadic_bits(d: Dyadic, k: int) -> BitString:
    """First k binary-expansion digits of d, for 0 <= d < 1.

    Terminating expansions are padded with zeros; d = 1 is rejected rather
    than expanded as 0.111... (no machine here has halting probability 1).
    """
    if d < Dyadic.zero() or d >= Dyadic.one():
        raise ValueError(f"dyadic_bits requires 0 <= d < 1, got {d}")
    out = []
    num = d.num
    for i in range(1, k + 1):
        if i <= d.exp:
            out.append("1" if (num >> (d.exp - i)) & 1 else "0")
        else:
            out.append("0")
    return "".join(out)


def bits_to_dyadic(bits: BitString) -> Dyadic:
    """Reinterpret a bit string as the dyadic 0.b1b2...bk."""
    num = int(bits, 2) if bits else 0
    return Dyadic(num, len(bits))
