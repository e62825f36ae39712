# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled fraction-free sparse echelon kernel (int64 with overflow traps).

Same contract as ``ceppa.exactlin._echelon.echelon``.  Any intermediate
value leaving the int64 range raises ``OverflowError``; the caller then
falls back to the arbitrary-precision Python kernel.
"""
from libc.stdlib cimport malloc, calloc, free

cdef extern from *:
    """
    #include <limits.h>
    static inline int ceppa_mul(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r) || *r == LLONG_MIN;
    }
    static inline int ceppa_add(long long a, long long b, long long *r) {
        return __builtin_add_overflow(a, b, r) || *r == LLONG_MIN;
    }
    """
    int ceppa_mul(long long a, long long b, long long *r) nogil
    int ceppa_add(long long a, long long b, long long *r) nogil


ctypedef struct Row:
    Py_ssize_t n
    Py_ssize_t *cols
    long long *vals


cdef inline long long _gcd(long long a, long long b) noexcept nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


cdef inline void _free_row(Row *r) noexcept nogil:
    if r.cols != NULL:
        free(r.cols)
    if r.vals != NULL:
        free(r.vals)
    r.cols = NULL
    r.vals = NULL
    r.n = 0


cdef int _alloc_row(Row *r, Py_ssize_t n) noexcept nogil:
    r.n = 0
    r.cols = <Py_ssize_t *> malloc((n if n > 0 else 1) * sizeof(Py_ssize_t))
    r.vals = <long long *> malloc((n if n > 0 else 1) * sizeof(long long))
    if r.cols == NULL or r.vals == NULL:
        _free_row(r)
        return -2
    return 0


cdef void _primitive(Row *r) noexcept nogil:
    cdef long long g = 0
    cdef Py_ssize_t k
    for k in range(r.n):
        g = _gcd(g, r.vals[k])
        if g == 1:
            break
    if r.vals[0] < 0:
        g = -g
    if g != 1:
        for k in range(r.n):
            r.vals[k] = r.vals[k] // g


cdef int _eliminate(Row *r, Py_ssize_t pos, Row *p, Row *out) noexcept nogil:
    """out = a*r - b*p cancelling r[pos] against p's pivot; returns -1 on overflow."""
    cdef long long pv = p.vals[0]
    cdef long long rv = r.vals[pos]
    cdef long long g = _gcd(pv, rv)
    cdef long long a = pv // g
    cdef long long b = -(rv // g)
    cdef long long x, y, v
    cdef Py_ssize_t i = 0, j = 0, n = 0
    if _alloc_row(out, r.n + p.n) != 0:
        return -2
    while i < r.n and j < p.n:
        if r.cols[i] < p.cols[j]:
            if ceppa_mul(a, r.vals[i], &x):
                _free_row(out)
                return -1
            out.cols[n] = r.cols[i]
            out.vals[n] = x
            n += 1
            i += 1
        elif p.cols[j] < r.cols[i]:
            if ceppa_mul(b, p.vals[j], &y):
                _free_row(out)
                return -1
            out.cols[n] = p.cols[j]
            out.vals[n] = y
            n += 1
            j += 1
        else:
            if ceppa_mul(a, r.vals[i], &x) or ceppa_mul(b, p.vals[j], &y) or ceppa_add(x, y, &v):
                _free_row(out)
                return -1
            if v != 0:
                out.cols[n] = r.cols[i]
                out.vals[n] = v
                n += 1
            i += 1
            j += 1
    while i < r.n:
        if ceppa_mul(a, r.vals[i], &x):
            _free_row(out)
            return -1
        out.cols[n] = r.cols[i]
        out.vals[n] = x
        n += 1
        i += 1
    while j < p.n:
        if ceppa_mul(b, p.vals[j], &y):
            _free_row(out)
            return -1
        out.cols[n] = p.cols[j]
        out.vals[n] = y
        n += 1
        j += 1
    out.n = n
    return 0


cdef int _run(Row *inputs, Py_ssize_t nrows, Row *table) noexcept nogil:
    cdef Py_ssize_t i, k, c
    cdef Row cur, nxt
    cdef int err
    for i in range(nrows):
        cur = inputs[i]
        inputs[i].cols = NULL
        inputs[i].vals = NULL
        inputs[i].n = 0
        while cur.n > 0:
            c = cur.cols[0]
            if table[c].n == 0:
                _primitive(&cur)
                table[c] = cur
                cur.cols = NULL
                cur.vals = NULL
                cur.n = 0
                break
            err = _eliminate(&cur, 0, &table[c], &nxt)
            _free_row(&cur)
            if err != 0:
                return err
            cur = nxt
            if cur.n > 0:
                _primitive(&cur)
        _free_row(&cur)
    return 0


cdef int _back_substitute(Row *table, Py_ssize_t ncols) noexcept nogil:
    cdef Py_ssize_t c, k
    cdef Row cur, nxt
    cdef int err, changed
    c = ncols - 1
    while c >= 0:
        if table[c].n > 0:
            cur = table[c]
            k = 1
            changed = 0
            while k < cur.n:
                if table[cur.cols[k]].n == 0:
                    k += 1
                    continue
                err = _eliminate(&cur, k, &table[cur.cols[k]], &nxt)
                if err != 0:
                    if changed:
                        _free_row(&cur)
                    return err
                if changed:
                    _free_row(&cur)
                cur = nxt
                changed = 1
            if changed:
                _primitive(&cur)
                _free_row(&table[c])
                table[c] = cur
        c -= 1
    return 0


def echelon(rows, Py_ssize_t ncols):
    """Reduced echelon form of integer sparse rows; see module docstring."""
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t i, k, n
    cdef Row *inputs = <Row *> calloc(nrows if nrows > 0 else 1, sizeof(Row))
    cdef Row *table = <Row *> calloc(ncols if ncols > 0 else 1, sizeof(Row))
    cdef int err = 0
    if inputs == NULL or table == NULL:
        free(inputs)
        free(table)
        raise MemoryError()
    try:
        for i in range(nrows):
            cols, vals = rows[i]
            n = len(cols)
            if _alloc_row(&inputs[i], n) != 0:
                raise MemoryError()
            for k in range(n):
                c = cols[k]
                if c < 0 or c >= ncols:
                    raise IndexError(f"column {c} out of range")
                inputs[i].cols[k] = c
                inputs[i].vals[k] = vals[k]  # OverflowError if beyond int64
            inputs[i].n = n
        with nogil:
            err = _run(inputs, nrows, table)
            if err == 0:
                err = _back_substitute(table, ncols)
        if err == -1:
            raise OverflowError("int64 overflow in echelon kernel")
        if err == -2:
            raise MemoryError()
        out = []
        for i in range(ncols):
            if table[i].n > 0:
                out.append(
                    ([table[i].cols[k] for k in range(table[i].n)],
                     [table[i].vals[k] for k in range(table[i].n)])
                )
        return out
    finally:
        for i in range(nrows):
            _free_row(&inputs[i])
        for i in range(ncols):
            _free_row(&table[i])
        free(inputs)
        free(table)
