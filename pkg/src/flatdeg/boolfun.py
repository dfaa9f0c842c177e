"""Truth tables, ANF, Walsh spectra and the basic per-function metrics.

Index convention: table index ``idx(x) = sum(x_i * 2**(i-1))``, so ``x1`` is
the least significant coordinate.  Monomial masks use the same bit layout.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

MAX_VARS = 24


def _check_n(n: int) -> None:
    if not 0 <= n <= MAX_VARS:
        raise ValueError(f"number of variables must be in [0, {MAX_VARS}], got {n}")


def popcounts(size: int) -> np.ndarray:
    """Hamming weight of every index in ``range(size)`` (size a power of two)."""
    w = np.zeros(size, dtype=np.uint8)
    h = 1
    while h < size:
        w[h : 2 * h] = w[:h] + 1
        h *= 2
    return w


# --- row-wise transforms over the last axis (batched) ----------------------


def mobius_rows(a: np.ndarray) -> np.ndarray:
    """In-place binary Moebius transform along the last axis of a 0/1 array."""
    size = a.shape[-1]
    lead = a.shape[:-1]
    h = 1
    while h < size:
        v = a.reshape(*lead, size // (2 * h), 2, h)
        v[..., 1, :] ^= v[..., 0, :]
        h *= 2
    return a


def walsh_rows(bits: np.ndarray) -> np.ndarray:
    """Walsh-Hadamard spectrum of each row of a 0/1 array (returns int64)."""
    a = 1 - 2 * bits.astype(np.int64)
    size = a.shape[-1]
    lead = a.shape[:-1]
    h = 1
    while h < size:
        v = a.reshape(*lead, size // (2 * h), 2, h)
        x = v[..., 0, :].copy()
        y = v[..., 1, :]
        v[..., 0, :] += y
        v[..., 1, :] = x - y
        h *= 2
    return a


def degree_rows(bits: np.ndarray) -> np.ndarray:
    """Algebraic degree of each row (constants have degree 0)."""
    anf = mobius_rows(np.array(bits, dtype=np.uint8, copy=True))
    weights = popcounts(bits.shape[-1])
    return (anf * weights).max(axis=-1)


def nonlinearity_rows(bits: np.ndarray) -> np.ndarray:
    size = bits.shape[-1]
    spec = walsh_rows(bits)
    return size // 2 - np.abs(spec).max(axis=-1) // 2


# --- value types -------------------------------------------------------------


class TruthTable:
    """Immutable truth table of a Boolean function in ``n`` variables."""

    __slots__ = ("n", "_bits")

    def __init__(self, n: int, bits: Iterable[int] | np.ndarray):
        _check_n(n)
        arr = np.array(bits, dtype=np.uint8, copy=True).ravel()
        if arr.size != 1 << n:
            raise ValueError(f"truth table for n={n} needs {1 << n} bits, got {arr.size}")
        if arr.size and arr.max() > 1:
            raise ValueError("truth table entries must be 0 or 1")
        arr.flags.writeable = False
        self.n = n
        self._bits = arr

    @property
    def bits(self) -> np.ndarray:
        """Read-only uint8 array of length ``2**n``."""
        return self._bits

    @classmethod
    def zeros(cls, n: int) -> "TruthTable":
        return cls(n, np.zeros(1 << n, dtype=np.uint8))

    @classmethod
    def constant(cls, n: int, value: int) -> "TruthTable":
        return cls(n, np.full(1 << n, value & 1, dtype=np.uint8))

    @classmethod
    def from_function(cls, n: int, func) -> "TruthTable":
        """Build from a callable taking the point index."""
        return cls(n, [func(x) & 1 for x in range(1 << n)])

    def __len__(self) -> int:
        return self._bits.size

    def __getitem__(self, idx: int) -> int:
        return int(self._bits[idx])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruthTable):
            return NotImplemented
        return self.n == other.n and np.array_equal(self._bits, other._bits)

    def __hash__(self) -> int:
        return hash((self.n, self._bits.tobytes()))

    def __xor__(self, other: "TruthTable") -> "TruthTable":
        if self.n != other.n:
            raise ValueError("cannot add functions in different numbers of variables")
        return TruthTable(self.n, self._bits ^ other._bits)

    def __invert__(self) -> "TruthTable":
        return TruthTable(self.n, self._bits ^ 1)

    def weight(self) -> int:
        return int(self._bits.sum())

    def flipped(self, *points: int) -> "TruthTable":
        bits = self._bits.copy()
        for p in points:
            bits[p] ^= 1
        return TruthTable(self.n, bits)

    def to_hex(self) -> str:
        return tt_to_hex(self)

    @classmethod
    def from_hex(cls, text: str, n: int | None = None) -> "TruthTable":
        return tt_from_hex(text, n)

    def __repr__(self) -> str:
        return f"TruthTable(n={self.n}, hex={self.to_hex()!r})"


@dataclass(frozen=True)
class Anf:
    """Algebraic normal form as a set of monomial masks."""

    n: int
    monomials: frozenset[int]

    def __post_init__(self):
        _check_n(self.n)
        object.__setattr__(self, "monomials", frozenset(int(m) for m in self.monomials))
        limit = 1 << self.n
        for m in self.monomials:
            if not 0 <= m < limit:
                raise ValueError(f"monomial mask {m:#x} out of range for n={self.n}")

    @property
    def degree(self) -> int:
        return max((m.bit_count() for m in self.monomials), default=0)

    def __len__(self) -> int:
        return len(self.monomials)


@dataclass(frozen=True)
class WalshSpectrum:
    n: int
    coefficients: tuple[int, ...]

    def max_abs(self) -> int:
        return max(abs(c) for c in self.coefficients)


# --- operations ----------------------------------------------------------------


def mobius(tt: TruthTable) -> Anf:
    coeffs = mobius_rows(tt.bits.copy())
    return Anf(tt.n, frozenset(np.flatnonzero(coeffs).tolist()))


def anf_to_tt(anf: Anf) -> TruthTable:
    coeffs = np.zeros(1 << anf.n, dtype=np.uint8)
    if anf.monomials:
        coeffs[list(anf.monomials)] = 1
    return TruthTable(anf.n, mobius_rows(coeffs))


def degree(tt: TruthTable) -> int:
    return int(degree_rows(tt.bits))


def walsh(tt: TruthTable) -> WalshSpectrum:
    return WalshSpectrum(tt.n, tuple(walsh_rows(tt.bits).tolist()))


def nonlinearity(tt: TruthTable) -> int:
    if tt.n == 0:
        raise ValueError("nonlinearity is undefined for n = 0")
    return int(nonlinearity_rows(tt.bits))


def parity_over(tt: TruthTable, indices: Iterable[int]) -> int:
    idx = np.fromiter(indices, dtype=np.int64)
    if idx.size == 0:
        return 0
    if idx.min() < 0 or idx.max() >= len(tt):
        raise IndexError("table index out of range")
    return int(np.bitwise_xor.reduce(tt.bits[idx]))


# --- hex format ------------------------------------------------------------------


def tt_to_hex(tt: TruthTable) -> str:
    """Pack bits LSB-first into bytes; one byte minimum."""
    bits = tt.bits
    if bits.size < 8:
        bits = np.concatenate([bits, np.zeros(8 - bits.size, dtype=np.uint8)])
    return np.packbits(bits, bitorder="little").tobytes().hex()


def tt_from_hex(text: str, n: int | None = None) -> TruthTable:
    text = text.strip().lower()
    if text.startswith("0x"):
        text = text[2:]
    try:
        raw = bytes.fromhex(text)
    except ValueError as exc:
        raise ValueError(f"invalid truth-table hex: {exc}") from None
    if not raw:
        raise ValueError("empty truth-table hex")
    nbytes = len(raw)
    if n is None:
        if nbytes & (nbytes - 1):
            raise ValueError(f"hex length {nbytes} bytes is not a power of two")
        n = nbytes.bit_length() - 1 + 3
    _check_n(n)
    expected = max(1, (1 << n) // 8)
    if nbytes != expected:
        raise ValueError(f"n={n} needs {expected} hex bytes, got {nbytes}")
    bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
    if bits[1 << n :].any():
        raise ValueError("unused high bits must be zero")
    return TruthTable(n, bits[: 1 << n])
