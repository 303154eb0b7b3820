"""Exact event calculus for small n.

For U the event attached to ``(a, s)`` is "``r`` ones from ``a`` with step
``s``, and the term before ``a`` (if inside ``[1, n]``) is a zero". For W it
is "a zero at ``a`` followed by ``r`` ones along ``a + s, a + 2s, ... mod n``".
Supports are kept as bitmasks over positions ``1..n`` (bit ``i - 1``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from longest_ap.errors import ResourceGuardError
from longest_ap.scanner import longest_cyclic_ap
from longest_ap.sequence import BitSequence, SeedSpec, generate

Statistic = Literal["U", "W"]

PAIR_CAP = 10**7
EXHAUSTIVE_MAX_N = 24
INCLUSION_EXCLUSION_MAX_EVENTS = 20


def _mod_index(x: int, n: int) -> int:
    # residues reported in 1..n, with kn mod n = n
    return (x - 1) % n + 1


@dataclass(frozen=True)
class ProgressionEvent:
    statistic: Statistic
    n: int
    a: int
    s: int
    r: int
    support_ones: tuple[int, ...]
    support_zero: tuple[int, ...]

    @property
    def ones_mask(self) -> int:
        return sum(1 << (i - 1) for i in self.support_ones)

    @property
    def zero_mask(self) -> int:
        return sum(1 << (i - 1) for i in self.support_zero)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self.support_ones) | frozenset(self.support_zero)

    def occurs(self, seq: BitSequence) -> bool:
        return all(seq[i] for i in self.support_ones) and not any(seq[i] for i in self.support_zero)


def u_event(n: int, a: int, s: int, r: int) -> ProgressionEvent:
    if not (1 <= a <= n and s >= 1 and a + (r - 1) * s <= n):
        raise ValueError(f"(a={a}, s={s}) is not a length-{r} progression in [1, {n}]")
    ones = tuple(a + k * s for k in range(r))
    zero = (a - s,) if a > s else ()
    return ProgressionEvent("U", n, a, s, r, ones, zero)


def w_event(n: int, a: int, s: int, r: int) -> ProgressionEvent:
    if not (1 <= a <= n and 1 <= s <= n):
        raise ValueError("a and s must lie in [1, n]")
    if math.gcd(n, s) * r >= n:
        raise ValueError(f"gcd(n, s) must be < n/r for a well-defined event (n={n}, s={s}, r={r})")
    ones = tuple(sorted(_mod_index(a + k * s, n) for k in range(1, r + 1)))
    return ProgressionEvent("W", n, a, s, r, ones, (a,))


def make_event(statistic: Statistic, n: int, a: int, s: int, r: int) -> ProgressionEvent:
    return u_event(n, a, s, r) if statistic == "U" else w_event(n, a, s, r)


def _check_range(n: int, r: int) -> None:
    if not 2 <= r <= n:
        raise ValueError(f"need 2 <= r <= n, got n={n}, r={r}")


def enumerate_pairs(statistic: Statistic, n: int, r: int) -> list[tuple[int, int]]:
    """Index set of the events, sorted lexicographically."""
    _check_range(n, r)
    if statistic == "U":
        return [(a, s) for a in range(1, n + 1) for s in range(1, (n - a) // (r - 1) + 1)]
    if statistic == "W":
        good = [s for s in range(1, n // 2 + 1) if math.gcd(n, s) * r < n]
        return [(a, s) for a in range(1, n + 1) for s in good]
    raise ValueError(f"unknown statistic {statistic!r}")


def enumerate_events(statistic: Statistic, n: int, r: int) -> list[ProgressionEvent]:
    return [make_event(statistic, n, a, s, r) for a, s in enumerate_pairs(statistic, n, r)]


def event_probability(ev: ProgressionEvent, p: float) -> float:
    return p ** len(ev.support_ones) * (1.0 - p) ** len(ev.support_zero)


def exact_intensity(statistic: Statistic, n: int, r: int, p: float) -> float:
    """Sum of the event probabilities over the whole index set."""
    return math.fsum(event_probability(ev, p) for ev in enumerate_events(statistic, n, r))


def joint_event_probability(ev1: ProgressionEvent, ev2: ProgressionEvent, p: float) -> float:
    if ev1.n != ev2.n:
        raise ValueError("events live on different n")
    o1, z1, o2, z2 = ev1.ones_mask, ev1.zero_mask, ev2.ones_mask, ev2.zero_mask
    if (o1 & z2) or (o2 & z1):
        return 0.0
    return p ** (o1 | o2).bit_count() * (1.0 - p) ** (z1 | z2).bit_count()


def _mask_words(masks: list[int], words: int) -> np.ndarray:
    out = np.zeros((len(masks), words), dtype=np.uint64)
    for i, m in enumerate(masks):
        for w in range(words):
            out[i, w] = (m >> (64 * w)) & 0xFFFFFFFFFFFFFFFF
    return out


def _popcount_rows(arr: np.ndarray) -> np.ndarray:
    return np.bitwise_count(arr).sum(axis=1, dtype=np.int64)


def dependency_graph_sum(
    statistic: Statistic, n: int, r: int, p: float, pair_cap: int = PAIR_CAP
) -> float:
    """Exact Chen-Stein error sum over the dependency graph of the events.

    Two events are adjacent when their supports (guard zero included) meet.
    The first sum runs over adjacent ordered pairs including the diagonal and
    multiplies marginals; the second runs over adjacent distinct pairs and
    uses joint probabilities.
    """
    events = enumerate_events(statistic, n, r)
    k = len(events)
    if k * k > pair_cap:
        raise ResourceGuardError(f"{k * k} event pairs exceed the cap of {pair_cap}")
    if k == 0:
        return 0.0
    q = 1.0 - p
    words = (n + 63) // 64
    ones = _mask_words([ev.ones_mask for ev in events], words)
    zero = _mask_words([ev.zero_mask for ev in events], words)
    supp = ones | zero
    marg = np.array([event_probability(ev, p) for ev in events])
    idx = np.arange(k)
    first, second = [], []
    for i in range(k):
        adj = np.any((supp & supp[i]) != 0, axis=1)
        first.append(marg[i] * math.fsum(marg[adj]))
        others = adj & (idx != i)
        conflict = np.any(((ones[others] & zero[i]) | (zero[others] & ones[i])) != 0, axis=1)
        n1 = _popcount_rows(ones[others] | ones[i])
        n0 = _popcount_rows(zero[others] | zero[i])
        joint = np.where(conflict, 0.0, p**n1 * q**n0)
        second.append(math.fsum(joint))
    return math.fsum(first) + math.fsum(second)


@dataclass(frozen=True)
class CycleSet:
    n: int
    s: int
    a: int
    members: tuple[int, ...]


def cycle_sets(n: int, s: int) -> list[CycleSet]:
    """Orbits of ``i -> i + s mod n``, one per representative ``a <= gcd(s, n)``."""
    if not (n >= 1 and 1 <= s <= n):
        raise ValueError("need 1 <= s <= n")
    g = math.gcd(s, n)
    return [
        CycleSet(n, s, a, tuple(_mod_index(a + k * s, n) for k in range(n // g))) for a in range(1, g + 1)
    ]


def full_cycle_masks(n: int, r: int, minimal: bool = True) -> list[int]:
    """Supports of the full-cycle events: residue classes mod a divisor ``d <= n/r``.

    With ``minimal`` set, classes that contain another class are dropped;
    the union of events is unchanged since a larger support implies the
    smaller one's event.
    """
    _check_range(n, r)
    divs = [d for d in range(1, n // r + 1) if n % d == 0]
    if minimal:
        divs = [d for d in divs if not any(e != d and e % d == 0 for e in divs)]
    masks = []
    for d in divs:
        for a in range(1, d + 1):
            masks.append(sum(1 << (i - 1) for i in range(a, n + 1, d)))
    return masks


def _union_by_inclusion_exclusion(masks: list[int], p: float) -> float:
    total = []

    def walk(start: int, union: int, depth: int) -> None:
        for j in range(start, len(masks)):
            u = union | masks[j]
            sign = 1.0 if depth % 2 == 0 else -1.0
            total.append(sign * p ** u.bit_count())
            walk(j + 1, u, depth + 1)

    walk(0, 0, 0)
    return math.fsum(total)


def _union_by_enumeration(n: int, masks: list[int], p: float) -> float:
    x = np.arange(1 << n, dtype=np.int64)
    hit = np.zeros(x.size, dtype=bool)
    for m in masks:
        hit |= (x & m) == m
    k = np.bitwise_count(x[hit])
    weights = p**k * (1.0 - p) ** (n - k)
    return math.fsum(weights)


def full_cycle_union_probability(
    n: int,
    r: int,
    p: float,
    method: Literal["exhaustive", "inclusion_exclusion", "enumeration", "monte_carlo"] = "exhaustive",
    trials: int = 10000,
    seed: int = 0,
) -> float:
    """Probability that some full cycle (of a divisor step ``<= n/r``) is all ones.

    ``exhaustive`` uses inclusion-exclusion when the (deduplicated) event
    count is small enough, else enumerates all ``2**n`` sequences.
    """
    masks = full_cycle_masks(n, r)
    if method == "exhaustive":
        method = "inclusion_exclusion" if len(masks) <= INCLUSION_EXCLUSION_MAX_EVENTS else "enumeration"
    if method == "inclusion_exclusion":
        if len(masks) > INCLUSION_EXCLUSION_MAX_EVENTS:
            raise ResourceGuardError(f"{len(masks)} events is too many for inclusion-exclusion")
        return _union_by_inclusion_exclusion(masks, p)
    if method == "enumeration":
        if n > EXHAUSTIVE_MAX_N:
            raise ResourceGuardError(f"n={n} is too large for exhaustive enumeration (max {EXHAUSTIVE_MAX_N})")
        return _union_by_enumeration(n, masks, p)
    if method == "monte_carlo":
        hits = 0
        for t in range(trials):
            seq = generate(n, p, SeedSpec(seed, t))
            x = sum(1 << (int(i) - 1) for i in seq.ones)
            hits += any((x & m) == m for m in masks)
        return hits / trials
    raise ValueError(f"unknown method {method!r}")


def a1_occurs(seq: BitSequence, r: int) -> bool:
    n = seq.n
    bits = seq.bits
    for s in range(1, n // 2 + 1):
        if math.gcd(n, s) * r >= n:
            continue
        for a in range(n):
            if bits[a]:
                continue
            if all(bits[(a + k * s) % n] for k in range(1, r + 1)):
                return True
    return False


def a2_occurs(seq: BitSequence, r: int) -> bool:
    bits = seq.bits
    n = seq.n
    for d in range(1, n // r + 1):
        if n % d:
            continue
        for a in range(d):
            if bits[a::d].all():
                return True
    return False


def w_decomposition_holds(seq: BitSequence, r: int) -> tuple[bool, bool]:
    """``(W >= r via the scanner, A1 or A2 evaluated on the bits)``."""
    _check_range(seq.n, r)
    lhs = longest_cyclic_ap(seq).value >= r
    rhs = a1_occurs(seq, r) or a2_occurs(seq, r)
    return lhs, rhs
