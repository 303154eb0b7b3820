"""Bernoulli 0/1 sequences: reproducible generation, parsing, transforms.

Externally every index is 1-based. Internally ``bits`` is a 0-based uint8
array and ``ones`` holds the 1-based indices of the set bits.

Each trial's stream comes from a Philox4x64 counter-based generator keyed by
``(trial_index << 64) | master_seed``. Two sampling routes exist:

* dense (``p >= 1/64``): draw ``u_1..u_n`` uniformly on [0, 1) from the
  stream and set ``bit_i = u_i < p``;
* sparse (``p < 1/64``): draw geometric gaps ``G_1, G_2, ...`` (support
  ``{1, 2, ...}``) from the stream in batches, and put ones at the partial
  sums ``G_1, G_1+G_2, ...`` that are ``<= n``.

Both routes give i.i.d. Bernoulli(p) bits. They do not give identical bits
for the same seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Union

import numpy as np

SPARSE_THRESHOLD = 1.0 / 64.0
_MASK64 = (1 << 64) - 1


class SequenceParseError(ValueError):
    """Raised for sequence text containing anything but '0'/'1'."""

    def __init__(self, position: int, char: str):
        self.position = position
        self.char = char
        super().__init__(f"non-binary character {char!r} at position {position}")


@dataclass(frozen=True)
class SeedSpec:
    master_seed: int
    trial_index: int = 0

    def __post_init__(self):
        for name in ("master_seed", "trial_index"):
            v = getattr(self, name)
            if not 0 <= v <= _MASK64:
                raise ValueError(f"{name} must be a 64-bit unsigned integer, got {v}")

    def generator(self) -> np.random.Generator:
        key = (self.trial_index << 64) | self.master_seed
        return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True, eq=False)
class BitSequence:
    """Immutable 0/1 sequence with a dense and a sparse view.

    Construct through :meth:`from_bits`, :meth:`from_ones`, :func:`generate`
    or :func:`from_text`; both views are kept consistent there.
    """

    bits: np.ndarray
    ones: np.ndarray = field(repr=False)

    @classmethod
    def from_bits(cls, bits) -> "BitSequence":
        arr = np.ascontiguousarray(bits, dtype=np.uint8)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("bits must be a nonempty 1-d array")
        if arr.max(initial=0) > 1:
            raise ValueError("bits must be 0/1")
        arr = arr.copy()
        arr.setflags(write=False)
        ones = np.flatnonzero(arr).astype(np.int64) + 1
        ones.setflags(write=False)
        return cls(arr, ones)

    @classmethod
    def from_ones(cls, n: int, ones) -> "BitSequence":
        if n < 1:
            raise ValueError("n must be >= 1")
        idx = np.unique(np.asarray(ones, dtype=np.int64))
        if idx.size and (idx[0] < 1 or idx[-1] > n):
            raise ValueError("one-indices must lie in [1, n]")
        bits = np.zeros(n, dtype=np.uint8)
        bits[idx - 1] = 1
        bits.setflags(write=False)
        idx.setflags(write=False)
        return cls(bits, idx)

    @property
    def n(self) -> int:
        return int(self.bits.size)

    @property
    def popcount(self) -> int:
        return int(self.ones.size)

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> int:
        """1-based bit access."""
        if not 1 <= i <= self.n:
            raise IndexError(i)
        return int(self.bits[i - 1])

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitSequence):
            return NotImplemented
        return np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash(self.bits.tobytes())

    def to_text(self) -> str:
        return (self.bits + ord("0")).tobytes().decode("ascii")

    def __str__(self) -> str:
        return self.to_text()


def _check_p(p: float) -> None:
    if not (0.0 < p < 1.0) or math.isnan(p):
        raise ValueError(f"p must lie strictly between 0 and 1, got {p}")


def dense_bits(n: int, p: float, rng: np.random.Generator) -> np.ndarray:
    return (rng.random(n) < p).astype(np.uint8)


def sparse_ones(n: int, p: float, rng: np.random.Generator) -> np.ndarray:
    """1-based positions of ones, built from geometric gaps."""
    mean = n * p
    batch = int(mean + 6.0 * math.sqrt(mean) + 16)
    chunks = []
    last = 0
    while True:
        gaps = rng.geometric(p, size=batch)
        pos = last + np.cumsum(gaps)
        if pos[-1] > n:
            chunks.append(pos[pos <= n])
            break
        chunks.append(pos)
        last = int(pos[-1])
    return np.concatenate(chunks).astype(np.int64)


def generate(
    n: int,
    p: float,
    seed: Union[SeedSpec, int],
    method: Literal["auto", "dense", "sparse"] = "auto",
) -> BitSequence:
    """Draw ``n`` i.i.d. Bernoulli(``p``) bits, deterministic in ``seed``.

    ``method="auto"`` picks the sparse route when ``p < 1/64``. Forcing a
    route is for cross-checking the two against each other.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_p(p)
    if isinstance(seed, int):
        seed = SeedSpec(seed)
    rng = seed.generator()
    if method == "auto":
        method = "sparse" if p < SPARSE_THRESHOLD else "dense"
    if method == "dense":
        return BitSequence.from_bits(dense_bits(n, p, rng))
    if method == "sparse":
        return BitSequence.from_ones(n, sparse_ones(n, p, rng))
    raise ValueError(f"unknown method {method!r}")


def from_text(text: str) -> BitSequence:
    if text.endswith("\n"):
        text = text[:-1]
        if text.endswith("\r"):
            text = text[:-1]
    if not text:
        raise SequenceParseError(1, "")
    for i, ch in enumerate(text, start=1):
        if ch not in "01":
            raise SequenceParseError(i, ch)
    return BitSequence.from_bits(np.frombuffer(text.encode("ascii"), dtype=np.uint8) - ord("0"))


def rotate(seq: BitSequence, k: int) -> BitSequence:
    """Move bit ``i`` to position ``((i - 1 + k) mod n) + 1``."""
    if not 0 <= k < seq.n:
        raise ValueError(f"rotation {k} out of range [0, {seq.n})")
    return BitSequence.from_bits(np.roll(seq.bits, k))


def reverse(seq: BitSequence) -> BitSequence:
    return BitSequence.from_bits(seq.bits[::-1])


def transform(seq: BitSequence, op: Union[str, tuple]) -> BitSequence:
    """Apply ``"reverse"`` or ``("rotate", k)``."""
    if op == "reverse":
        return reverse(seq)
    if isinstance(op, tuple) and len(op) == 2 and op[0] == "rotate":
        return rotate(seq, int(op[1]))
    raise ValueError(f"unknown transform {op!r}")
