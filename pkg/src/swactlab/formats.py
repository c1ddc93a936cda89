"""Signed fixed-point number formats and the golden arithmetic models.

Four representations are supported:

* TC   -- two's complement, full range [-2^(w-1), 2^(w-1)-1]
* TCS  -- two's complement restricted to the symmetric range; the pattern
          10...0 is illegal
* SM   -- sign-magnitude (MSB = sign); 10...0 (negative zero) is illegal
* SME  -- sign-magnitude with 10...0 reassigned to the most negative value

No format has a distinct negative zero. Bit words are stored LSB-first;
string renderings are MSB-first.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass


class RangeError(ValueError):
    """Value is not representable in the requested format/width."""


class EncodingError(ValueError):
    """Bit pattern is illegal in the given format."""


class Format(enum.Enum):
    TC = "TC"
    TCS = "TCS"
    SM = "SM"
    SME = "SME"


@dataclass(frozen=True)
class ValueRange:
    lo: int
    hi: int

    def __contains__(self, value: int) -> bool:
        return self.lo <= value <= self.hi


@dataclass(frozen=True)
class BitWord:
    """Fixed-width bit pattern, LSB-first."""

    bits: tuple[int, ...]

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError(f"bits must be 0/1, got {self.bits}")

    @property
    def width(self) -> int:
        return len(self.bits)

    @property
    def uint(self) -> int:
        return sum(b << i for i, b in enumerate(self.bits))

    @classmethod
    def from_uint(cls, value: int, width: int) -> "BitWord":
        return cls(tuple((value >> i) & 1 for i in range(width)))

    @classmethod
    def parse(cls, text: str) -> "BitWord":
        """Parse an MSB-first string such as "1011"."""
        return cls(tuple(int(c) for c in reversed(text)))

    def __str__(self) -> str:
        return "".join(str(b) for b in reversed(self.bits))


def _check_width(width: int) -> None:
    if width < 2:
        raise ValueError(f"width must be >= 2, got {width}")


def representable_range(fmt: Format, width: int) -> ValueRange:
    """Inclusive integer range the format covers at the given width."""
    _check_width(width)
    hi = 2 ** (width - 1) - 1
    if fmt in (Format.TC, Format.SME):
        return ValueRange(-(2 ** (width - 1)), hi)
    return ValueRange(-hi, hi)


def encode(value: int, fmt: Format, width: int) -> BitWord:
    """Encode an integer; raises RangeError outside the representable range."""
    _check_width(width)
    rng = representable_range(fmt, width)
    if value not in rng:
        raise RangeError(f"{value} not representable as {fmt.value} width {width}")
    if fmt in (Format.TC, Format.TCS):
        return BitWord.from_uint(value % (1 << width), width)
    # Sign-magnitude family. The most negative SME value wraps to magnitude 0,
    # which is exactly the reassigned 10...0 pattern.
    sign = 1 if value < 0 else 0
    mag = abs(value) % (1 << (width - 1))
    bits = tuple((mag >> i) & 1 for i in range(width - 1)) + (sign,)
    return BitWord(bits)


def decode(word: BitWord, fmt: Format) -> int:
    """Decode a bit pattern; raises EncodingError on illegal patterns."""
    width = word.width
    _check_width(width)
    if fmt in (Format.TC, Format.TCS):
        value = word.uint
        if word.bits[-1]:
            value -= 1 << width
        if fmt is Format.TCS and value == -(2 ** (width - 1)):
            raise EncodingError(f"{word} is illegal in TCS")
        return value
    sign = word.bits[-1]
    mag = word.uint & ((1 << (width - 1)) - 1)
    if sign and mag == 0:
        if fmt is Format.SM:
            raise EncodingError(f"{word} is illegal in SM")
        return -(2 ** (width - 1))
    return -mag if sign else mag


def ref_convert(word: BitWord, src: Format, dst: Format, clip: bool = False) -> BitWord:
    """Golden model of format conversion.

    Value-preserving whenever the value fits the destination. With clip=True
    the most negative value is clipped to the closest representable one when
    converting into SM/TCS; with clip=False that case raises RangeError.
    """
    value = decode(word, src)
    rng = representable_range(dst, word.width)
    if value not in rng:
        if not clip:
            raise RangeError(
                f"{value} not representable as {dst.value} width {word.width}"
            )
        value = min(max(value, rng.lo), rng.hi)
    return encode(value, dst, word.width)


def ref_multiply(a: int, b: int, width: int) -> int:
    """Golden multiplier model: the exact integer product.

    Callers are expected to keep a and b within [-2^(w-1), 2^(w-1)-1]; the
    product then fits 2*width output bits in two's complement except for the
    (-2^(w-1))^2 corner, which still fits because the output range is
    [-2^(2w-1), 2^(2w-1)-1].
    """
    return a * b
