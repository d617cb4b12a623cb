"""Natural numbers stored as explicit binary strings.

A :class:`BinaryNat` holds the base-2 digits of a natural number as a plain
``str`` of ``'0'``/``'1'`` characters, most significant bit first, with no
leading zeros.  The smallest representable value is 1; zero does not exist in
this domain, which removes an entire family of edge cases from the layers
built on top (halving, inverse maps, power decompositions).

All arithmetic here is carried out on the digit strings themselves: tripling
is a single carry pass, halving drops the final digit, dividing by a power of
two strips trailing zeros.  Host integers appear only in the decimal
*rendering* direction and in counts.
"""

from __future__ import annotations

from .errors import DomainError, ParityError

__all__ = ["BinaryNat", "ONE"]


def _add_bits(a: str, b: str) -> str:
    """School addition of two canonical bit strings, MSB first."""
    if len(a) < len(b):
        a, b = b, a
    b = b.rjust(len(a), "0")
    out = []
    carry = 0
    for i in range(len(a) - 1, -1, -1):
        t = carry + (a[i] == "1") + (b[i] == "1")
        out.append("1" if t & 1 else "0")
        carry = t >> 1
    if carry:
        out.append("1")
    out.reverse()
    return "".join(out)


def _halve_decimal(digits: list[int]) -> tuple[list[int], int]:
    """Divide a decimal digit list (MSD first) by two; return quotient digits and remainder bit."""
    out = []
    rem = 0
    for d in digits:
        cur = rem * 10 + d
        out.append(cur >> 1)
        rem = cur & 1
    # drop leading zeros but keep at least one digit
    i = 0
    while i < len(out) - 1 and out[i] == 0:
        i += 1
    return out[i:], rem


class BinaryNat:
    """An arbitrary-size natural number (>= 1) as an immutable bit string."""

    __slots__ = ("_bits",)

    def __init__(self, bits: str):
        if not bits or bits.strip("01"):
            raise DomainError(f"not a binary digit string: {bits!r}")
        if bits[0] != "1":
            raise DomainError(f"leading zeros are not canonical: {bits!r}")
        self._bits = bits

    @classmethod
    def _raw(cls, bits: str) -> "BinaryNat":
        # internal fast path: bits already canonical
        obj = object.__new__(cls)
        obj._bits = bits
        return obj

    @classmethod
    def from_decimal(cls, s: str) -> "BinaryNat":
        """Convert a decimal digit string by repeated halving.

        Each halving step yields one remainder bit, least significant first;
        the collected remainders, reversed, are the binary representation.
        Rejects empty strings, non-digits, and the value 0.
        """
        if not s or s.strip("0123456789"):
            raise DomainError(f"not a decimal digit string: {s!r}")
        digits = [ord(c) - 48 for c in s]
        if set(digits) == {0}:
            raise DomainError("0 is not a representable value")
        rev = []
        while len(digits) > 1 or digits[0] != 0:
            digits, bit = _halve_decimal(digits)
            rev.append("1" if bit else "0")
        return cls._raw("".join(reversed(rev)))

    @classmethod
    def from_int(cls, n: int) -> "BinaryNat":
        """Convenience constructor from a host integer >= 1."""
        if n < 1:
            raise DomainError(f"value must be >= 1, got {n}")
        return cls._raw(format(n, "b"))

    @property
    def bits(self) -> str:
        return self._bits

    def to_decimal(self) -> str:
        """Decimal digit string of this value."""
        return str(int(self._bits, 2))

    def to_int(self) -> int:
        """This value as a host integer."""
        return int(self._bits, 2)

    # -- arithmetic ------------------------------------------------------

    def mul3_add1(self) -> "BinaryNat":
        """Return 3n + 1, computed as one carry pass over the digits.

        Column i of 2n + n contributes bit i and bit i-1 of n; seeding the
        carry with 1 folds in the "+ 1".  The result of an odd input is
        always even.
        """
        bits = self._bits
        carry = 1
        prev = 0
        out = []
        push = out.append
        for ch in reversed(bits):
            b = ch == "1"
            t = b + prev + carry
            push("1" if t & 1 else "0")
            carry = t >> 1
            prev = b
        t = prev + carry
        while t:
            push("1" if t & 1 else "0")
            t >>= 1
        out.reverse()
        return BinaryNat._raw("".join(out))

    def half(self) -> "BinaryNat":
        """Return n / 2 by dropping the final digit; the input must be even."""
        if self._bits[-1] != "0":
            raise ParityError(f"cannot halve odd value {self._bits}")
        return BinaryNat._raw(self._bits[:-1])

    def shift_right(self, k: int) -> "BinaryNat":
        """Return n / 2**k; requires at least k trailing zeros."""
        if k == 0:
            return self
        if k < 0 or self.trailing_zeros() < k:
            raise ParityError(f"{self._bits} is not divisible by 2^{k}")
        return BinaryNat._raw(self._bits[:-k])

    def trailing_zeros(self) -> int:
        """Number of trailing zero digits (the exponent of 2 dividing n)."""
        s = self._bits
        return len(s) - len(s.rstrip("0"))

    def end_substring_len(self) -> int:
        """Length of the maximal run of trailing one digits; odd inputs only."""
        s = self._bits
        if s[-1] != "1":
            raise ParityError(f"end substring is defined for odd values, got {s}")
        return len(s) - len(s.rstrip("1"))

    def append_bit(self, b: int) -> "BinaryNat":
        """Append one digit: append_bit(0) is 2n, append_bit(1) is 2n + 1."""
        if b not in (0, 1):
            raise DomainError(f"bit must be 0 or 1, got {b!r}")
        return BinaryNat._raw(self._bits + ("1" if b else "0"))

    # -- predicates and accessors ---------------------------------------

    def is_odd(self) -> bool:
        return self._bits[-1] == "1"

    def is_one(self) -> bool:
        return self._bits == "1"

    def bit_length(self) -> int:
        return len(self._bits)

    # -- comparisons -----------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryNat):
            return NotImplemented
        return self._bits == other._bits

    def __lt__(self, other: "BinaryNat") -> bool:
        a, b = self._bits, other._bits
        if len(a) != len(b):
            return len(a) < len(b)
        return a < b

    def __le__(self, other: "BinaryNat") -> bool:
        return self == other or self < other

    def __gt__(self, other: "BinaryNat") -> bool:
        return not self <= other

    def __ge__(self, other: "BinaryNat") -> bool:
        return not self < other

    def __hash__(self) -> int:
        return hash(self._bits)

    def __str__(self) -> str:
        return self._bits

    def __repr__(self) -> str:
        return f"BinaryNat({self._bits!r})"


ONE = BinaryNat._raw("1")
