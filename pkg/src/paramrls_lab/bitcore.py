"""Bit-vector primitives, seeded random streams and the k-distinct-bit mutation of RLS_k."""
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence, Union

import numpy as np

from paramrls_lab.errors import InvalidArgumentError

_U64_MAX = 2**64 - 1


class BitString:
    """Fixed-length immutable binary vector."""

    __slots__ = ("_bits",)

    def __init__(self, bits: Union[str, Iterable[int], np.ndarray]):
        if isinstance(bits, str):
            if any(ch not in "01" for ch in bits):
                raise InvalidArgumentError(f"BitString text must contain only '0' and '1', got {bits!r}")
            arr = np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")
        else:
            arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits)
            if arr.ndim != 1:
                raise InvalidArgumentError("BitString needs a one-dimensional sequence of bits")
            if arr.size and not np.isin(arr, (0, 1)).all():
                raise InvalidArgumentError("Every element of a BitString must be 0 or 1")
            arr = arr.astype(np.uint8)
        if arr.size == 0:
            raise InvalidArgumentError("BitString length must be positive")
        arr = arr.copy()
        arr.flags.writeable = False
        self._bits = arr

    @classmethod
    def zeros(cls, n: int) -> "BitString":
        return cls(np.zeros(n, dtype=np.uint8))

    @classmethod
    def ones(cls, n: int) -> "BitString":
        return cls(np.ones(n, dtype=np.uint8))

    @classmethod
    def random(cls, n: int, rng: "RngStream") -> "BitString":
        return cls(rng.generator.integers(0, 2, size=n, dtype=np.uint8))

    @classmethod
    def from_hex(cls, text: str, n: int) -> "BitString":
        """Parse a hex string into n bits, most significant bit first."""
        cleaned = text.lower().removeprefix("0x")
        try:
            value = int(cleaned, 16)
        except ValueError:
            raise InvalidArgumentError(f"Invalid hex bit string: {text!r}")
        if value >= 2**n:
            raise InvalidArgumentError(f"Hex value {text!r} does not fit in {n} bits")
        return cls(format(value, f"0{n}b"))

    @property
    def n(self) -> int:
        return int(self._bits.size)

    @property
    def bits(self) -> np.ndarray:
        """Read-only view of the underlying uint8 array."""
        return self._bits

    def count_ones(self) -> int:
        return int(self._bits.sum(dtype=np.int64))

    def to_hex(self) -> str:
        width = (self.n + 3) // 4
        return format(int(str(self), 2), f"0{width}x")

    def __len__(self) -> int:
        return self.n

    def __xor__(self, other: "BitString") -> "BitString":
        _require_same_length(self, other)
        return BitString(self._bits ^ other._bits)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitString):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self._bits, other._bits))

    def __hash__(self) -> int:
        return hash(self._bits.tobytes())

    def __str__(self) -> str:
        return (self._bits + ord("0")).tobytes().decode("ascii")

    def __repr__(self) -> str:
        text = str(self)
        if len(text) > 32:
            text = text[:29] + "..."
        return f"BitString('{text}', n={self.n})"

    def __reduce__(self):
        return (BitString, (self._bits,))


@dataclass(frozen=True)
class RngStream:
    """Reproducible random stream identified by (master_seed, stream_id) plus an optional sub-path.

    The generator is seeded from a SeedSequence over the whole key, so distinct stream ids and
    distinct child paths are statistically independent and insensitive to scheduling order.
    """

    master_seed: int
    stream_id: int = 0
    path: tuple = field(default=())

    def __post_init__(self):
        for name in ("master_seed", "stream_id"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or not 0 <= value <= _U64_MAX:
                raise InvalidArgumentError(f"{name} must be a 64-bit unsigned integer, got {value!r}")

    @cached_property
    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(entropy=int(self.master_seed), spawn_key=(int(self.stream_id), *self.path))
        return np.random.Generator(np.random.PCG64(seq))

    def child(self, *keys: int) -> "RngStream":
        return RngStream(self.master_seed, self.stream_id, self.path + tuple(int(k) for k in keys))


def _require_same_length(x: BitString, y: BitString) -> None:
    if x.n != y.n:
        raise InvalidArgumentError(f"Length mismatch: {x.n} vs {y.n}")


def sample_k_subset(n: int, k: int, rng: RngStream) -> list[int]:
    """Uniform k-subset of range(n) by partial Fisher-Yates over a sparse swap map."""
    if not 1 <= k <= n:
        raise InvalidArgumentError(f"k must satisfy 1 <= k <= n (k={k}, n={n})")
    gen = rng.generator
    draws = gen.integers(np.arange(k), n)
    swapped: dict[int, int] = {}
    chosen = []
    for i, j in enumerate(draws.tolist()):
        vi = swapped.get(i, i)
        vj = swapped.get(j, j)
        swapped[j] = vi
        chosen.append(vj)
    return chosen


def flip_positions(x: BitString, positions: Sequence[int]) -> BitString:
    if len(set(positions)) != len(positions):
        raise InvalidArgumentError("Flip positions must be distinct")
    arr = x.bits.copy()
    idx = np.asarray(positions, dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= x.n):
        raise InvalidArgumentError(f"Flip position out of range for n={x.n}")
    arr[idx] ^= 1
    return BitString(arr)


def flip_k_distinct(x: BitString, k: int, rng: RngStream) -> BitString:
    """Copy of x with a uniformly random set of exactly k distinct bits flipped."""
    if not 1 <= k <= x.n:
        raise InvalidArgumentError(f"k must satisfy 1 <= k <= n (k={k}, n={x.n})")
    return flip_positions(x, sample_k_subset(x.n, k, rng))


def hamming_distance(x: BitString, y: BitString) -> int:
    _require_same_length(x, y)
    return int(np.count_nonzero(x.bits != y.bits))
