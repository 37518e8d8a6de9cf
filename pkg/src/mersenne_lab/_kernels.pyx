# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops over Z/MZ, M = 2^p - 1, for 3 <= p <= 61.

Residues live in 64-bit words; products are formed in 128 bits and reduced
with the Mersenne fold x -> (x & M) + (x >> p).  Signatures and results
match ``_pykernels`` exactly.
"""

from libc.stdlib cimport calloc, free

cdef extern from *:
    ctypedef unsigned long long u128 "unsigned __int128"

ctypedef unsigned long long u64
ctypedef long long i64

MAX_P = 61
DEF GCD_EVERY = 64


cdef inline u64 fold(u128 x, u64 M, int p) nogil:
    x = (x & M) + (x >> p)
    x = (x & M) + (x >> p)
    cdef u64 r = <u64>x
    if r >= M:
        r -= M
    return r


cdef inline u64 mulmod(u64 a, u64 b, u64 M, int p) nogil:
    return fold(<u128>a * b, M, p)


cdef inline u64 addmod(u64 a, u64 b, u64 M) nogil:
    cdef u64 r = a + b
    if r >= M:
        r -= M
    return r


cdef inline u64 submod(u64 a, u64 b, u64 M) nogil:
    return a - b if a >= b else a + M - b


cdef inline u64 gcd64(u64 a, u64 b) nogil:
    cdef u64 t
    while b:
        t = a % b
        a = b
        b = t
    return a


cdef inline u64 invmod(u64 a, u64 M) nogil:
    # caller guarantees gcd(a, M) == 1
    cdef i64 t = 0, newt = 1, q, tmp
    cdef i64 r = <i64>M, newr = <i64>a
    while newr:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += <i64>M
    return <u64>t


cdef inline u64 reduce_word(u64 x, u64 M, int p) nogil:
    return fold(<u128>x, M, p)


cdef u64 first_divisor(u64 M, u64 upto) nogil:
    cdef u64 j, g
    for j in range(2, upto + 1):
        g = gcd64(j, M)
        if g > 1:
            return g
    return 0


cdef void _check(int p) except *:
    if p < 3 or p > MAX_P:
        raise ValueError(f"compiled kernels support 3 <= p <= {MAX_P}, got {p}")


def v1_table_sum(int p):
    _check(p)
    cdef u64 M = (<u64>1 << p) - 1
    cdef u64 n = <u64>1 << (p - 1)
    cdef u64 width = n // 2 + 1
    cdef u64 *older = <u64 *>calloc(width, sizeof(u64))
    cdef u64 *old = <u64 *>calloc(width, sizeof(u64))
    cdef u64 *row = <u64 *>calloc(width, sizeof(u64))
    cdef u64 *swap
    cdef u64 m, h, k, r, cut, total = 0
    if older == NULL or old == NULL or row == NULL:
        free(older); free(old); free(row)
        raise MemoryError()
    try:
        with nogil:
            m = 0
            while m <= n:
                r = m % 8
                h = m // 2
                # older holds row m - 4, of length h - 1
                cut = h - 1 if m >= 4 else 0
                if r == 0:
                    row[0] = 2
                elif r == 4:
                    row[0] = M - 2
                else:
                    row[0] = 0
                if h >= 1:
                    if r == 2:
                        row[1] = reduce_word(2 * m, M, p)
                    elif r == 6:
                        row[1] = M - reduce_word(2 * m, M, p)
                    else:
                        row[1] = 0
                for k in range(2, h + 1):
                    row[k] = mulmod(4, old[k - 1], M, p)
                    if k < cut:
                        row[k] = submod(row[k], older[k], M)
                swap = older
                older = old
                old = row
                row = swap
                m += 2
            # old holds row n (length n//2 + 1)
            k = 0
            while k <= n // 2:
                total = addmod(total, old[k], M)
                k += 2
    finally:
        free(older); free(old); free(row)
    return int(total)


def v2_fraction_sum(int p):
    _check(p)
    cdef u64 M = (<u64>1 << p) - 1
    cdef u64 n = <u64>1 << (p - 1)
    cdef u64 n2 = mulmod(reduce_word(n, M, p), reduce_word(n, M, p), M, p)
    cdef u64 A = 2, P = 1, B = 1, kk, f, twoP, k
    cdef u64 terms = 1, half = n // 2, witness = 0
    with nogil:
        k = 2
        while k <= half:
            kk = mulmod(reduce_word(k, M, p), reduce_word(k - 1, M, p), M, p)
            f = reduce_word(2 * k - 4, M, p)
            f = submod(n2, mulmod(f, f, M, p), M)
            P = mulmod(P, f, M, p)
            B = mulmod(B, kk, M, p)
            twoP = addmod(P, P, M)
            A = mulmod(A, kk, M, p)
            if (k >> 1) & 1:
                A = submod(A, twoP, M)
            else:
                A = addmod(A, twoP, M)
            terms += 1
            if terms % GCD_EVERY == 0 and gcd64(B, M) != 1:
                witness = first_divisor(M, k)
                break
            k += 2
        if witness == 0 and gcd64(B, M) != 1:
            witness = first_divisor(M, half)
    if witness:
        return 0, int(terms), int(witness)
    return int(mulmod(A, invmod(B, M), M, p)), int(terms), 0


def v3_ratio_sum(int p, bint backward=False):
    _check(p)
    cdef u64 M = (<u64>1 << p) - 1
    cdef u64 n = <u64>1 << (p - 1)
    cdef u64 nr = reduce_word(n, M, p)
    cdef u64 n2 = mulmod(nr, nr, M, p)
    cdef u64 half = n // 2
    cdef u64 t, total, k, num, den, g, f, terms = 1, witness = 0
    with nogil:
        if not backward:
            t = 2
            total = 2
            k = 2
            while k <= half:
                den = mulmod(reduce_word(k, M, p), reduce_word(k - 1, M, p), M, p)
                g = gcd64(den, M)
                if g != 1:
                    witness = g
                    break
                f = reduce_word(2 * k - 4, M, p)
                num = submod(mulmod(f, f, M, p), n2, M)
                t = mulmod(mulmod(t, num, M, p), invmod(den, M), M, p)
                total = addmod(total, t, M)
                terms += 1
                k += 2
        else:
            # phi_{n/2} = 2^n
            t = 1
            f = 2
            num = n
            while num:
                if num & 1:
                    t = mulmod(t, f, M, p)
                f = mulmod(f, f, M, p)
                num >>= 1
            total = t
            k = half
            while k >= 2:
                f = reduce_word(2 * k - 4, M, p)
                den = submod(mulmod(f, f, M, p), n2, M)
                g = gcd64(den, M)
                if g != 1:
                    witness = g if g != M else gcd64(reduce_word(n - 2 * k + 4, M, p), M)
                    break
                num = mulmod(reduce_word(k, M, p), reduce_word(k - 1, M, p), M, p)
                t = mulmod(mulmod(t, num, M, p), invmod(den, M), M, p)
                total = addmod(total, t, M)
                terms += 1
                k -= 2
    if witness:
        return 0, int(terms), int(witness)
    return int(total), int(terms), 0


def ll_iterate(int p):
    _check(p)
    cdef u64 M = (<u64>1 << p) - 1
    cdef u64 s = reduce_word(4, M, p)
    cdef int j
    with nogil:
        for j in range(p - 2):
            s = submod(mulmod(s, s, M, p), reduce_word(2, M, p), M)
    return int(s)
