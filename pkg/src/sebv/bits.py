"""Fixed-width binary words.

Bit-order convention used throughout the package: position ``i`` of a
``BitString`` is bit ``i`` of the backing integer, and it corresponds to
qubit ``i`` of a state vector (amplitude-index bit ``i``).  Rendering is
most-significant-position first, so ``BitString(3, 0b101)`` prints as
``"101"`` with position 2 leftmost.
"""

from __future__ import annotations

from dataclasses import dataclass

MAX_WIDTH = 16


@dataclass(frozen=True)
class BitString:
    """A binary word of fixed ``width`` (1..16) backed by an int."""

    width: int
    bits: int

    def __post_init__(self):
        if not 1 <= self.width <= MAX_WIDTH:
            raise ValueError(f"width must be in [1, {MAX_WIDTH}], got {self.width}")
        if not 0 <= self.bits < (1 << self.width):
            raise ValueError(f"bits 0x{self.bits:x} out of range for width {self.width}")

    @classmethod
    def zeros(cls, width: int) -> "BitString":
        return cls(width, 0)

    @classmethod
    def from_text(cls, text: str) -> "BitString":
        """Parse an MSB-first string of 0s and 1s, e.g. ``"101"``."""
        if not text or any(c not in "01" for c in text):
            raise ValueError(f"not a binary string: {text!r}")
        return cls(len(text), int(text, 2))

    @classmethod
    def random(cls, width: int, rng) -> "BitString":
        return cls(width, rng.bits(width))

    def bit(self, i: int) -> int:
        if not 0 <= i < self.width:
            raise IndexError(f"bit position {i} out of range for width {self.width}")
        return (self.bits >> i) & 1

    def __xor__(self, other: "BitString") -> "BitString":
        if self.width != other.width:
            raise ValueError(f"width mismatch: {self.width} vs {other.width}")
        return BitString(self.width, self.bits ^ other.bits)

    def dot(self, other: "BitString") -> int:
        """Inner product modulo 2: XOR of the pairwise bit products."""
        if self.width != other.width:
            raise ValueError(f"width mismatch: {self.width} vs {other.width}")
        return (self.bits & other.bits).bit_count() & 1

    @property
    def is_zero(self) -> bool:
        return self.bits == 0

    def __str__(self) -> str:
        return format(self.bits, f"0{self.width}b")
