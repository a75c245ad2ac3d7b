# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Fraction-free sparse rank on 64-bit integers.

Same elimination order as ``sullivan.linalg.rank_integer_rows``: incoming
rows are reduced against pivot rows in registration order (a min-heap of
pivot indices), then registered with the smallest-bit-length entry as pivot.
Any intermediate that does not fit in int64 raises OverflowError so the
caller can redo the work with Python integers.
"""

from libc.stdlib cimport malloc, calloc, free

cdef extern from *:
    """
    static inline int sl_mul_ovf(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int sl_sub_ovf(long long a, long long b, long long *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    #define SL_INT64_MIN (-9223372036854775807LL - 1)
    """
    int sl_mul_ovf(long long a, long long b, long long *r) nogil
    int sl_sub_ovf(long long a, long long b, long long *r) nogil
    long long SL_INT64_MIN


cdef inline long long _abs(long long x) nogil:
    return -x if x < 0 else x


cdef long long _gcd(long long a, long long b) nogil:
    a = _abs(a)
    b = _abs(b)
    while b:
        a, b = b, a % b
    return a


cdef int _bitlen(long long x) nogil:
    cdef int n = 0
    x = _abs(x)
    while x:
        n += 1
        x >>= 1
    return n


cdef void _heap_push(int *heap, int *size, int v) nogil:
    cdef int i = size[0]
    cdef int parent
    size[0] += 1
    heap[i] = v
    while i > 0:
        parent = (i - 1) >> 1
        if heap[parent] <= heap[i]:
            break
        heap[parent], heap[i] = heap[i], heap[parent]
        i = parent


cdef int _heap_pop(int *heap, int *size) nogil:
    cdef int top = heap[0]
    cdef int i = 0, child, n
    size[0] -= 1
    n = size[0]
    heap[0] = heap[n]
    while True:
        child = 2 * i + 1
        if child >= n:
            break
        if child + 1 < n and heap[child + 1] < heap[child]:
            child += 1
        if heap[i] <= heap[child]:
            break
        heap[i], heap[child] = heap[child], heap[i]
        i = child
    return top


def rank_int64(rows, Py_ssize_t ncols):
    """Rank of the integer matrix given as a list of ``{col: int}`` dicts."""
    cdef Py_ssize_t nrows = len(rows)
    if nrows == 0 or ncols == 0:
        return 0
    cdef long long *work = <long long *> calloc(ncols, sizeof(long long))
    cdef int *stamp = <int *> calloc(ncols, sizeof(int))
    cdef int *nz = <int *> malloc(ncols * sizeof(int))
    cdef int *col_to_pivot = <int *> malloc(ncols * sizeof(int))
    cdef int *heap = <int *> malloc(nrows * sizeof(int))
    cdef int *seen = <int *> calloc(nrows, sizeof(int))
    cdef int *pcol = <int *> malloc(nrows * sizeof(int))
    cdef long long *pval = <long long *> malloc(nrows * sizeof(long long))
    cdef int *plen = <int *> malloc(nrows * sizeof(int))
    cdef int **pcols = <int **> calloc(nrows, sizeof(int *))
    cdef long long **pvals = <long long **> calloc(nrows, sizeof(long long *))
    cdef int npiv = 0
    cdef int r, j, k, c, t, nnz, hsize, kk, best, bestbits, bits, m
    cdef long long a, p, g, mp, ma, v, tmp, cg
    cdef bint overflow = False
    if (work == NULL or stamp == NULL or nz == NULL or col_to_pivot == NULL or heap == NULL
            or seen == NULL or pcol == NULL or pval == NULL or plen == NULL
            or pcols == NULL or pvals == NULL):
        raise MemoryError()
    try:
        for j in range(ncols):
            col_to_pivot[j] = -1
        for r in range(nrows):
            row = rows[r]
            nnz = 0
            hsize = 0
            for key, val in row.items():
                j = key
                v = val  # raises OverflowError beyond int64
                if v == 0:
                    continue
                if v == SL_INT64_MIN:
                    raise OverflowError
                work[j] = v
                stamp[j] = r + 1
                nz[nnz] = j
                nnz += 1
                kk = col_to_pivot[j]
                if kk >= 0 and seen[kk] != r + 1:
                    seen[kk] = r + 1
                    _heap_push(heap, &hsize, kk)
            with nogil:
                while hsize > 0:
                    k = _heap_pop(heap, &hsize)
                    c = pcol[k]
                    a = work[c]
                    if a == 0:
                        continue
                    p = pval[k]
                    g = _gcd(p, a)
                    mp = p // g
                    ma = a // g
                    if mp != 1:
                        for t in range(nnz):
                            j = nz[t]
                            if work[j] and sl_mul_ovf(work[j], mp, &work[j]):
                                overflow = True
                                break
                        if overflow:
                            break
                    for t in range(plen[k]):
                        j = pcols[k][t]
                        if sl_mul_ovf(ma, pvals[k][t], &tmp) or sl_sub_ovf(work[j], tmp, &v) or v == SL_INT64_MIN:
                            overflow = True
                            break
                        work[j] = v
                        if stamp[j] != r + 1:
                            stamp[j] = r + 1
                            nz[nnz] = j
                            nnz += 1
                        if v != 0:
                            kk = col_to_pivot[j]
                            if kk >= 0 and seen[kk] != r + 1:
                                seen[kk] = r + 1
                                _heap_push(heap, &hsize, kk)
                    if overflow:
                        break
                    cg = 0
                    for t in range(nnz):
                        if work[nz[t]]:
                            cg = _gcd(cg, work[nz[t]])
                            if cg == 1:
                                break
                    if cg > 1:
                        for t in range(nnz):
                            work[nz[t]] //= cg
            if overflow:
                raise OverflowError("int64 overflow in rank kernel")
            # compact and register
            m = 0
            best = -1
            bestbits = 0
            for t in range(nnz):
                j = nz[t]
                if work[j]:
                    nz[m] = j
                    m += 1
                    bits = _bitlen(work[j])
                    if best < 0 or bits < bestbits or (bits == bestbits and j < best):
                        best = j
                        bestbits = bits
            if m:
                pcols[npiv] = <int *> malloc(m * sizeof(int))
                pvals[npiv] = <long long *> malloc(m * sizeof(long long))
                if pcols[npiv] == NULL or pvals[npiv] == NULL:
                    raise MemoryError()
                for t in range(m):
                    pcols[npiv][t] = nz[t]
                    pvals[npiv][t] = work[nz[t]]
                plen[npiv] = m
                pcol[npiv] = best
                pval[npiv] = work[best]
                col_to_pivot[best] = npiv
                npiv += 1
            for t in range(nnz):
                work[nz[t]] = 0
        return npiv
    finally:
        for k in range(nrows):
            if pcols[k] != NULL:
                free(pcols[k])
            if pvals[k] != NULL:
                free(pvals[k])
        free(work); free(stamp); free(nz); free(col_to_pivot); free(heap); free(seen)
        free(pcol); free(pval); free(plen); free(pcols); free(pvals)
