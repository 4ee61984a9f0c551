"""Bit tape and approximate number encodings used for advice.

Integers are stored as their bit length (Elias-gamma, self-delimiting) plus the
``k`` bits following the leading one.  Zeroing the unknown low bits gives the
lower approximation, setting them gives the upper one.  Reals in ``[0, 1)`` are
truncated to ``k`` binary fraction digits.  A third form, used for the black
item threshold, stores a binary exponent plus ``k`` mantissa bits so that the
precision is relative rather than absolute.

Tape layout of an :class:`AdviceRecord` (most significant bit first)::

    k            gamma(k)
    mode         1 bit        0 = EASY, 1 = HARD; EASY stops here
    case         2 bits       1, 2 or 3
    m_ls         count field
    m_ll         count field
    d            k bits + 1 inexact flag
    has_black    1 bit
    s_b          gamma(E + 1) + k bits      only if has_black
    e_b          count field                only if has_black
    m_b          count field
    m_w          count field

A count field is ``gamma(L + 1)`` for bit length ``L`` (zero for the value 0)
followed by ``min(k, L - 1)`` prefix bits.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable


class AdviceError(ValueError):
    pass


class AdviceTape:
    """Append-only bit sequence with a read cursor."""

    def __init__(self, bits: Iterable[int] = ()):
        self.bits: list[int] = [1 if b else 0 for b in bits]
        self.cursor = 0

    def __len__(self) -> int:
        return len(self.bits)

    @property
    def bits_read(self) -> int:
        return self.cursor

    def rewind(self) -> "AdviceTape":
        self.cursor = 0
        return self

    def write(self, value: int, width: int) -> None:
        if width < 0 or value < 0 or value >> width:
            raise AdviceError(f"value {value} does not fit in {width} bits")
        self.bits.extend((value >> (width - 1 - i)) & 1 for i in range(width))

    def write_bit(self, bit: bool) -> None:
        self.bits.append(1 if bit else 0)

    def write_gamma(self, value: int) -> None:
        if value < 1:
            raise AdviceError("Elias-gamma encodes positive integers only")
        width = value.bit_length()
        self.write(0, width - 1)
        self.write(value, width)

    def read(self, width: int) -> int:
        if self.cursor + width > len(self.bits):
            raise AdviceError("tape exhausted")
        value = 0
        for b in self.bits[self.cursor:self.cursor + width]:
            value = (value << 1) | b
        self.cursor += width
        return value

    def read_bit(self) -> bool:
        return bool(self.read(1))

    def read_gamma(self) -> int:
        zeros = 0
        while True:
            if self.cursor >= len(self.bits):
                raise AdviceError("tape exhausted")
            if self.bits[self.cursor]:
                break
            zeros += 1
            self.cursor += 1
        return self.read(zeros + 1)

    def to_hex(self) -> str:
        if not self.bits:
            return ""
        value = int("".join(map(str, self.bits)), 2)
        # pad on the right so the first bit is the top bit of the first nibble
        pad = (-len(self.bits)) % 4
        return format(value << pad, f"0{(len(self.bits) + pad) // 4}x")

    @classmethod
    def from_hex(cls, text: str, nbits: int) -> "AdviceTape":
        width = len(text) * 4
        value = int(text, 16) if text else 0
        bits = [(value >> (width - 1 - i)) & 1 for i in range(width)]
        return cls(bits[:nbits])

    def copy(self) -> "AdviceTape":
        return AdviceTape(self.bits)


def gamma_length(value: int) -> int:
    return 2 * value.bit_length() - 1


@dataclass(frozen=True)
class ApproxNumber:
    """An approximation stored as a ``width``-bit prefix.

    kind ``"int"``:   ``length`` is the bit length of the original integer.
    kind ``"real"``:  value truncated to ``k`` fraction bits; ``inexact``
                      records whether truncation dropped anything.
    kind ``"scaled"``: ``length`` is the number of leading zero fraction bits;
                      the stored bits follow the leading one.
    """

    kind: str
    k: int
    prefix: int
    length: int = 0
    inexact: bool = False

    @property
    def width(self) -> int:
        if self.kind == "int":
            return min(self.k, max(self.length - 1, 0))
        return self.k

    def _unknown_bits(self) -> int:
        return max(self.length - 1 - self.k, 0)

    def down(self) -> Fraction | int:
        if self.kind == "int":
            if self.length == 0:
                return 0
            head = (1 << self.width) | self.prefix
            return head << self._unknown_bits()
        if self.kind == "real":
            return Fraction(self.prefix, 1 << self.k)
        return Fraction((1 << self.k) | self.prefix, 1 << (self.length + 1 + self.k))

    def up(self) -> Fraction | int:
        if self.kind == "int":
            return self.down() | ((1 << self._unknown_bits()) - 1) if self.length else 0
        if self.kind == "real":
            return self.down() + (Fraction(1, 1 << self.k) if self.inexact else 0)
        return self.down() + Fraction(1, 1 << (self.length + 1 + self.k))


def approx_count(x: int, k: int) -> ApproxNumber:
    """Like :func:`approx_int` but also accepts 0 (stored with length 0)."""
    if k < 1:
        raise ValueError("precision k must be at least 1")
    if x < 0:
        raise ValueError("counts are nonnegative")
    length = x.bit_length()
    kept = min(k, max(length - 1, 0))
    drop = max(length - 1 - kept, 0)
    prefix = (x >> drop) & ((1 << kept) - 1) if length else 0
    return ApproxNumber("int", k, prefix, length)


def approx_int(x: int, k: int) -> ApproxNumber:
    if x < 1:
        raise ValueError("approx_int needs x >= 1; encode zero with a separate flag")
    return approx_count(x, k)


def truncate_real(x: Fraction, k: int) -> ApproxNumber:
    """k-bit truncation of ``x`` in ``[0, 1)``."""
    if not 0 <= x < 1:
        raise ValueError(f"{x} outside [0, 1)")
    scaled = x * (1 << k)
    prefix = scaled.numerator // scaled.denominator
    return ApproxNumber("real", k, prefix, inexact=prefix != scaled)


def approx_real(x: Fraction, k: int) -> ApproxNumber:
    x = Fraction(x)
    if not 0 < x < 1:
        raise ValueError(f"approx_real needs 0 < x < 1, got {x}")
    if k < 1:
        raise ValueError("precision k must be at least 1")
    return truncate_real(x, k)


def approx_scaled(x: Fraction, k: int) -> ApproxNumber:
    """Relative-precision approximation of ``x`` in ``(0, 1)``.

    ``down() <= x < up() <= down() * (1 + 2**-k)``.
    """
    x = Fraction(x)
    if not 0 < x < 1:
        raise ValueError(f"approx_scaled needs 0 < x < 1, got {x}")
    zeros = 0
    while x * (1 << (zeros + 1)) < 1:
        zeros += 1
    mant = x * (1 << (zeros + 1 + k))
    head = mant.numerator // mant.denominator
    return ApproxNumber("scaled", k, head - (1 << k), zeros)


def choose_k(n: int) -> int:
    """max(4, ceil(log2 log2 max(n, 4))), computed with integers only."""
    n = max(n, 4)
    k = 0
    while (1 << (1 << k)) < n:
        k += 1
    return max(4, k)


def write_count(tape: AdviceTape, a: ApproxNumber) -> None:
    tape.write_gamma(a.length + 1)
    tape.write(a.prefix, a.width)


def read_count(tape: AdviceTape, k: int) -> ApproxNumber:
    length = tape.read_gamma() - 1
    width = min(k, max(length - 1, 0))
    return ApproxNumber("int", k, tape.read(width), length)


EASY, HARD = "EASY", "HARD"


@dataclass(frozen=True)
class AdviceRecord:
    """Decoded advice.  Counts are :class:`ApproxNumber` of kind ``"int"``.

    The online algorithm uses ``m_ls.down()``, ``m_ll.up()``, ``d.up()``,
    ``s_b.down()``/``s_b.up()``, ``e_b.down()``, ``m_b.down()`` and
    ``m_w.down()``.
    """

    k: int
    mode: str = EASY
    case_id: int = 0
    m_ls: ApproxNumber | None = None
    m_ll: ApproxNumber | None = None
    d: ApproxNumber | None = None
    has_black: bool = False
    s_b: ApproxNumber | None = None
    e_b: ApproxNumber | None = None
    m_b: ApproxNumber | None = None
    m_w: ApproxNumber | None = None

    @property
    def eps(self) -> Fraction:
        return Fraction(1, 1 << self.k)

    def check(self) -> None:
        if self.mode == EASY:
            return
        if self.mode != HARD or self.case_id not in (1, 2, 3):
            raise AdviceError("HARD record needs case_id in {1, 2, 3}")
        for name in ("m_ls", "m_ll", "d", "m_b", "m_w"):
            if getattr(self, name) is None:
                raise AdviceError(f"HARD record missing {name}")
        if self.has_black != (self.s_b is not None and self.e_b is not None):
            raise AdviceError("has_black must match presence of s_b and e_b")

    def to_json(self) -> dict:
        out = {"k": self.k, "mode": self.mode}
        if self.mode == EASY:
            return out
        out["case_id"] = self.case_id
        out["has_black"] = self.has_black
        for name in ("m_ls", "m_ll", "d", "s_b", "e_b", "m_b", "m_w"):
            a = getattr(self, name)
            if a is not None:
                out[name] = {"down": str(a.down()), "up": str(a.up())}
        return out


def encode_advice(record: AdviceRecord) -> AdviceTape:
    record.check()
    k = record.k
    tape = AdviceTape()
    tape.write_gamma(k)
    tape.write_bit(record.mode == HARD)
    if record.mode == EASY:
        return tape
    tape.write(record.case_id, 2)
    write_count(tape, record.m_ls)
    write_count(tape, record.m_ll)
    tape.write(record.d.prefix, k)
    tape.write_bit(record.d.inexact)
    tape.write_bit(record.has_black)
    if record.has_black:
        tape.write_gamma(record.s_b.length + 1)
        tape.write(record.s_b.prefix, k)
        write_count(tape, record.e_b)
    write_count(tape, record.m_b)
    write_count(tape, record.m_w)
    return tape


def decode_advice(tape: AdviceTape) -> AdviceRecord:
    k = tape.read_gamma()
    if not tape.read_bit():
        return AdviceRecord(k=k)
    case_id = tape.read(2)
    if case_id not in (1, 2, 3):
        raise AdviceError(f"invalid case id {case_id}")
    m_ls = read_count(tape, k)
    m_ll = read_count(tape, k)
    d_prefix = tape.read(k)
    d = ApproxNumber("real", k, d_prefix, inexact=tape.read_bit())
    has_black = tape.read_bit()
    s_b = e_b = None
    if has_black:
        zeros = tape.read_gamma() - 1
        s_b = ApproxNumber("scaled", k, tape.read(k), zeros)
        e_b = read_count(tape, k)
    m_b = read_count(tape, k)
    m_w = read_count(tape, k)
    return AdviceRecord(k, HARD, case_id, m_ls, m_ll, d, has_black, s_b, e_b, m_b, m_w)


def encode_full_advice(targets: list[int], bins: int) -> AdviceTape:
    """Per-item bin indices, each in ``ceil(log2 bins)`` bits, after a gamma header."""
    width = max(bins - 1, 0).bit_length()
    tape = AdviceTape()
    tape.write_gamma(width + 1)
    for t in targets:
        tape.write(t, width)
    return tape


def decode_full_advice(tape: AdviceTape, n: int) -> list[int]:
    width = tape.read_gamma() - 1
    return [tape.read(width) for _ in range(n)]
