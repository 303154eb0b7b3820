"""Longest arithmetic progressions of ones: U (linear) and W (mod n).

Conventions:

* the all-zero sequence has value 0 and no witness;
* a single one is a progression of length 1;
* the witness is the lexicographically smallest ``(a, s)`` attaining the
  value, with ``1 <= a, s <= n``;
* for W the residue ``kn mod n`` is reported as ``n``.

The ``naive`` strategies are deliberately plain Python and serve as the
reference the compiled strategies are tested against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from longest_ap import _kernels
from longest_ap.sequence import BitSequence

Statistic = Literal["U", "W"]
UStrategy = Literal["naive", "pruned", "sparse", "auto"]
WStrategy = Literal["naive", "cyclic", "sparse", "auto"]


@dataclass(frozen=True)
class ScanResult:
    statistic: Statistic
    value: int
    witness_a: Optional[int] = None
    witness_s: Optional[int] = None

    def witness_terms(self, n: int) -> list[int]:
        """1-based indices of the witness progression."""
        if self.value == 0:
            return []
        a, s = self.witness_a, self.witness_s
        if self.statistic == "U":
            return [a + k * s for k in range(self.value)]
        return [(a - 1 + k * s) % n + 1 for k in range(self.value)]

    def as_dict(self) -> dict:
        return {"statistic": self.statistic, "value": self.value, "a": self.witness_a, "s": self.witness_s}


def _result(stat: Statistic, value: int, a0: int, s: int) -> ScanResult:
    if value == 0:
        return ScanResult(stat, 0)
    return ScanResult(stat, int(value), int(a0) + 1, int(s))


def use_sparse(seq: BitSequence) -> bool:
    return seq.popcount <= 2.0 * math.sqrt(seq.n)


def naive_u(seq: BitSequence) -> ScanResult:
    bits = seq.bits.tolist()
    n = len(bits)
    best, wa, ws = 0, None, None
    for a in range(1, n + 1):
        for s in range(1, n + 1):
            m = 0
            while a + m * s <= n and bits[a + m * s - 1]:
                m += 1
            if m > best:
                best, wa, ws = m, a, s
    return ScanResult("U", best, wa, ws)


def naive_w(seq: BitSequence) -> ScanResult:
    bits = seq.bits.tolist()
    n = len(bits)
    best, wa, ws = 0, None, None
    for a in range(1, n + 1):
        for s in range(1, n + 1):
            cap = n // math.gcd(s, n)
            m = 0
            while m < cap and bits[(a - 1 + m * s) % n]:
                m += 1
            if m > best:
                best, wa, ws = m, a, s
    return ScanResult("W", best, wa, ws)


def longest_ap(seq: BitSequence, strategy: UStrategy = "auto") -> ScanResult:
    """U for ``seq``: the longest all-ones progression inside ``[1, n]``."""
    if strategy == "auto":
        strategy = "sparse" if use_sparse(seq) else "pruned"
    if strategy == "naive":
        return naive_u(seq)
    if strategy == "pruned":
        return _result("U", *_kernels.u_pruned(seq.bits, True))
    if strategy == "sparse":
        return _result("U", *_kernels.u_sparse(seq.bits, seq.ones - 1, True))
    raise ValueError(f"unknown U strategy {strategy!r}")


def longest_cyclic_ap(seq: BitSequence, strategy: WStrategy = "auto") -> ScanResult:
    """W for ``seq``: the longest all-ones progression taken mod ``n``.

    A progression with difference ``s`` has at most ``n / gcd(s, n)``
    distinct terms, so that is the cap on its length.
    """
    if strategy == "auto":
        strategy = "sparse" if use_sparse(seq) else "cyclic"
    if strategy == "naive":
        return naive_w(seq)
    if strategy == "cyclic":
        return _result("W", *_kernels.w_cyclic(seq.bits, True))
    if strategy == "sparse":
        return _result("W", *_kernels.w_sparse(seq.bits, seq.ones - 1, True))
    raise ValueError(f"unknown W strategy {strategy!r}")


def scan_value(seq: BitSequence, statistic: Statistic, strategy: str = "auto") -> int:
    """Value only; lets the kernels skip witness bookkeeping."""
    sparse = use_sparse(seq) if strategy == "auto" else strategy == "sparse"
    if statistic == "U":
        if strategy == "naive":
            return naive_u(seq).value
        if sparse:
            return int(_kernels.u_sparse(seq.bits, seq.ones - 1, False)[0])
        if strategy not in ("auto", "pruned"):
            raise ValueError(f"unknown U strategy {strategy!r}")
        return int(_kernels.u_pruned(seq.bits, False)[0])
    if statistic == "W":
        if strategy == "naive":
            return naive_w(seq).value
        if sparse:
            return int(_kernels.w_sparse(seq.bits, seq.ones - 1, False)[0])
        if strategy not in ("auto", "cyclic"):
            raise ValueError(f"unknown W strategy {strategy!r}")
        return int(_kernels.w_bitset(seq.bits))
    raise ValueError(f"unknown statistic {statistic!r}")


def longest_circular_run(cycle_bits) -> int:
    """Longest block of ones on a cycle; ``L`` if every entry is one."""
    arr = np.asarray(cycle_bits, dtype=np.uint8)
    if arr.size == 0:
        raise ValueError("cycle must be nonempty")
    zeros = np.flatnonzero(arr == 0)
    if zeros.size == 0:
        return int(arr.size)
    # gaps between consecutive zeros, wrapping once around
    z = np.append(zeros, zeros[0] + arr.size)
    return int(np.max(np.diff(z)) - 1)
