"""Compiled scan kernels.

All kernels take 0-based ``bits`` (uint8) and, for the sparse ones, the
sorted 0-based positions of the ones. They return ``(value, a, s)`` with
``a`` 0-based and ``(-1, -1)`` for an absent witness. With ``witness=False``
the kernels may skip work that only matters for the witness tie-break; the
value is unaffected. ``w_bitset`` computes the value only.
"""

import numba as nb
import numpy as np


@nb.njit(cache=True, nogil=True, inline="always")
def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@nb.njit(cache=True, nogil=True, inline="always")
def _lex_less(a1, s1, a2, s2):
    return a1 < a2 or (a1 == a2 and s1 < s2)


@nb.njit(cache=True, nogil=True)
def u_pruned(bits, witness):
    n = bits.size
    best = 0
    wa = -1
    ws = -1
    count = 0
    for i in range(n):
        count += bits[i]
    for s in range(1, n + 1):
        if s > 1:
            if count <= 1:
                break
            reach = 1 + (n - 1) // s
            if reach < best or (not witness and reach == best):
                break
        for r in range(min(s, n)):
            run = 0
            i = r
            while True:
                bit = bits[i] if i < n else 0
                if bit:
                    run += 1
                elif run > 0:
                    start = i - run * s
                    if run > best or (run == best and start < wa):
                        best = run
                        wa = start
                        ws = s
                    run = 0
                if i >= n:
                    break
                i += s
    return best, wa, ws


@nb.njit(cache=True, nogil=True)
def u_sparse(bits, ones, witness):
    n = bits.size
    m = ones.size
    if m == 0:
        return 0, -1, -1
    best = 1
    wa = ones[0]
    ws = 1
    for i in range(m):
        a = ones[i]
        for j in range(i + 1, m):
            s = ones[j] - a
            far = a + best * s
            if far >= n:
                break
            if bits[far] == 0:
                continue
            if a >= s and bits[a - s]:
                continue
            length = 2
            pos = a + 2 * s
            while pos < n and bits[pos]:
                length += 1
                pos += s
            if length > best:
                best = length
                wa = a
                ws = s
    return best, wa, ws


@nb.njit(cache=True, nogil=True)
def w_cyclic(bits, witness):
    n = bits.size
    if n == 1:
        if bits[0]:
            return 1, 0, 1
        return 0, -1, -1
    best = 0
    wa = -1
    ws = -1
    for s in range(1, n // 2 + 1):
        g = _gcd(s, n)
        cyc = n // g
        if cyc < best or (not witness and cyc == best):
            continue
        s_rev = n - s
        for a in range(g):
            # locate a zero on the cycle to anchor a linear scan
            z = -1
            pos = a
            for k in range(cyc):
                if bits[pos] == 0:
                    z = pos
                    break
                pos += s
                if pos >= n:
                    pos -= n
            if z < 0:
                # full cycle of ones; smallest member is a
                if cyc > best:
                    best = cyc
                    wa = a
                    ws = s
                elif cyc == best and _lex_less(a, s, wa, ws):
                    wa = a
                    ws = s
                continue
            run = 0
            first = -1
            pos = z
            for k in range(cyc + 1):
                pos += s
                if pos >= n:
                    pos -= n
                if k < cyc and bits[pos]:
                    if run == 0:
                        first = pos
                    run += 1
                elif run > 0:
                    last = pos - s
                    if last < 0:
                        last += n
                    ca = first
                    cs = s
                    if _lex_less(last, s_rev, ca, cs):
                        ca = last
                        cs = s_rev
                    if run > best:
                        best = run
                        wa = ca
                        ws = cs
                    elif run == best and _lex_less(ca, cs, wa, ws):
                        wa = ca
                        ws = cs
                    run = 0
    return best, wa, ws


@nb.njit(cache=True, nogil=True)
def _pack(bits):
    n = bits.size
    words = np.zeros((n + 63) // 64, dtype=np.uint64)
    for i in range(n):
        if bits[i]:
            words[i >> 6] |= np.uint64(1) << np.uint64(i & 63)
    return words


@nb.njit(cache=True, nogil=True, inline="always")
def _test(words, i):
    return np.int64((words[i >> 6] >> np.uint64(i & 63)) & np.uint64(1))


@nb.njit(cache=True, nogil=True)
def _w_extend(words, n, a, b, s, best):
    """Run length from ``a`` along ``s`` (``b = a + s``), or 0 if <= best."""
    length = 2
    pos = b + s
    if pos >= n:
        pos -= n
    # uncapped walk: a cycle shorter than best+1 would wrap, but cannot win
    while length <= best and _test(words, pos):
        length += 1
        pos += s
        if pos >= n:
            pos -= n
    if length <= best:
        return 0
    cyc = n // _gcd(s, n)
    if cyc <= best:
        return 0
    while length < cyc and _test(words, pos):
        length += 1
        pos += s
        if pos >= n:
            pos -= n
    return length


_BLOCK = 32


@nb.njit(cache=True, nogil=True, inline="always")
def _probe(words, n, mult, off, j):
    pos = mult[j] + off
    if pos >= n:
        pos -= n
    return _test(words, pos)


@nb.njit(cache=True, nogil=True, inline="always")
def _hit_mask(words, n, scaled, c, doubled, c2, j0, j1):
    # bit j - j0 set when both probes hit; no early exit, so LLVM can
    # vectorize the gathers
    acc = np.int64(0)
    for j in range(j0, j1):
        acc |= (_probe(words, n, scaled, c, j) & _probe(words, n, doubled, c2, j)) << (j - j0)
    return acc


@nb.njit(cache=True, nogil=True, inline="always")
def _low_bit_index(x):
    x = np.uint64(x)
    k = 0
    while not x & np.uint64(1):
        x >>= np.uint64(1)
        k += 1
    return k


@nb.njit(cache=True, nogil=True)
def w_sparse(bits, ones, witness):
    n = bits.size
    m = ones.size
    if m == 0:
        return 0, -1, -1
    words = _pack(bits)
    best = 1
    wa = ones[0]
    ws = 1
    half = n // 2 if not witness else n - 1
    # with s = ones[j] - a (mod n), position a + k*s is (k*ones[j] mod n) plus
    # an offset depending on a only; scaled tracks k = best, doubled k = 2
    scaled = ones.copy()
    doubled = (2 * ones) % n
    for i in range(m):
        a = ones[i]
        c = (a - (best * a) % n) % n
        c2 = (n - a) % n
        # s = ones[j] - a for j > i, then ones[j] + n - a for j < i;
        # both ranges keep s ascending, so improvements come in lex order
        hi = np.searchsorted(ones, a + half, side="right")
        wrap_hi = min(np.searchsorted(ones, a + half - n, side="right"), i)
        for part in range(2):
            j0 = i + 1 if part == 0 else 0
            j1 = hi if part == 0 else wrap_hi
            for b in range(j0, j1, _BLOCK):
                e = min(b + _BLOCK, j1)
                # the a + 2s probe is a necessary condition once best >= 2
                if best < 2:
                    mask = (np.int64(1) << (e - b)) - 1
                else:
                    mask = _hit_mask(words, n, scaled, c, doubled, c2, b, e)
                while mask:
                    k = _low_bit_index(mask)
                    mask &= mask - 1
                    j = b + k
                    if not _probe(words, n, scaled, c, j):
                        continue
                    s = ones[j] - a
                    if s < 0:
                        s += n
                    length = _w_extend(words, n, a, ones[j], s, best)
                    if length > best:
                        best = length
                        wa = a
                        ws = s
                        for q in range(m):
                            scaled[q] = (best * ones[q]) % n
                        c = (a - (best * a) % n) % n
    return best, wa, ws


@nb.njit(cache=True, nogil=True)
def _pack_doubled(bits):
    # bit i holds bits[i mod n] for i < 2n, plus a spare word for _window
    n = bits.size
    ext = np.zeros((2 * n + 127) // 64, dtype=np.uint64)
    for i in range(2 * n):
        if bits[i % n]:
            ext[i >> 6] |= np.uint64(1) << np.uint64(i & 63)
    return ext


@nb.njit(cache=True, nogil=True, inline="always")
def _window(ext, off):
    # 64 bits starting at bit ``off``; the split shift keeps off % 64 == 0 defined
    q = off >> 6
    r = np.uint64(off & 63)
    return (ext[q] >> r) | ((ext[q + 1] << np.uint64(1)) << (np.uint64(63) - r))


@nb.njit(cache=True, nogil=True, inline="always")
def _and_word(ext, w, o1, o2, o3, o4):
    base = w << 6
    return ext[w] & _window(ext, base + o1) & _window(ext, base + o2) & _window(ext, base + o3) & _window(ext, base + o4)


@nb.njit(cache=True, nogil=True)
def w_bitset(bits):
    """Value of W by word-parallel filtering, one step ``s`` at a time.

    Bit ``a`` survives when ``a, a+s, a+2s, a+3s, a+best*s`` (capped at
    ``best``) are all ones; only survivors are walked. The cost does not
    depend on the density, which suits dense inputs.
    """
    n = bits.size
    best = 0
    for i in range(n):
        if bits[i]:
            best = 1
            break
    if best == 0 or n == 1:
        return best
    ext = _pack_doubled(bits)
    words = _pack(bits)
    nw = (n + 63) // 64
    last_mask = np.uint64(0xFFFFFFFFFFFFFFFF) >> np.uint64(64 * nw - n)
    for s in range(1, n // 2 + 1):
        cyc = n // _gcd(s, n)
        if cyc <= best:
            continue
        o2 = (min(2, best) * s) % n
        o3 = (min(3, best) * s) % n
        o4 = (best * s) % n
        acc = np.uint64(0)
        for w in range(nw - 1):
            acc |= _and_word(ext, w, s, o2, o3, o4)
        acc |= _and_word(ext, nw - 1, s, o2, o3, o4) & last_mask
        if acc == 0:
            continue
        for w in range(nw):
            v = _and_word(ext, w, s, o2, o3, o4)
            if w == nw - 1:
                v &= last_mask
            while v:
                a = (w << 6) + _low_bit_index(v)
                v &= v - np.uint64(1)
                b = a + s
                if b >= n:
                    b -= n
                length = _w_extend(words, n, a, b, s, best)
                if length > best:
                    best = length
                    o2 = (min(2, best) * s) % n
                    o3 = (min(3, best) * s) % n
                    o4 = (best * s) % n
    return best
