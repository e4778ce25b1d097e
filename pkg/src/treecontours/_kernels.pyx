# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twins of ``_pykernels``; same signatures, same results."""
from libc.stdlib cimport malloc, free


cdef struct State:
    const int* offsets
    const int* kids
    const unsigned char* open_end
    int* stack
    unsigned long long* counts
    int n_max


cdef void _rec(State* s, int fsize, int boundary) noexcept nogil:
    cdef int v, lo, hi, top, i
    if boundary + fsize > s.n_max:
        return
    if fsize == 0:
        s.counts[boundary] += 1
        return
    top = fsize - 1
    v = s.stack[top]
    _rec(s, top, boundary + 1)
    if not s.open_end[v]:
        lo = s.offsets[v]
        hi = s.offsets[v + 1]
        for i in range(lo, hi):
            s.stack[top + i - lo] = s.kids[i]
        _rec(s, top + hi - lo, boundary)
    # either branch may have written over slot ``top``
    s.stack[top] = v


def count_boundaries(offsets, kids, open_end, int root, int n_max, bint force_root=False):
    cdef int n = len(open_end)
    cdef int m = len(kids)
    cdef int i, j, c, fsize = 0, max_kids = 0
    cdef State s
    cdef int* c_off = <int*> malloc((n + 1) * sizeof(int))
    cdef int* c_kids = <int*> malloc((m + 1) * sizeof(int))
    cdef unsigned char* c_open = <unsigned char*> malloc((n + 1) * sizeof(unsigned char))
    cdef unsigned long long* c_counts = <unsigned long long*> malloc((n_max + 1) * sizeof(unsigned long long))
    cdef int* c_stack = NULL
    try:
        if not c_off or not c_kids or not c_open or not c_counts:
            raise MemoryError()
        for i in range(n + 1):
            c_off[i] = offsets[i]
        for i in range(m):
            c_kids[i] = kids[i]
        for i in range(n):
            c_open[i] = 1 if open_end[i] else 0
            if c_off[i + 1] - c_off[i] > max_kids:
                max_kids = c_off[i + 1] - c_off[i]
        for i in range(n_max + 1):
            c_counts[i] = 0
        # the frontier never exceeds n_max + max_kids entries before pruning,
        # except for the initial fill which is bounded by the vertex count
        c_stack = <int*> malloc((n + n_max + max_kids + 1) * sizeof(int))
        if not c_stack:
            raise MemoryError()
        if c_open[root]:
            return [0] * (n_max + 1)
        if force_root:
            for i in range(c_off[root], c_off[root + 1]):
                c = c_kids[i]
                if c_open[c]:
                    return [0] * (n_max + 1)
                for j in range(c_off[c], c_off[c + 1]):
                    c_stack[fsize] = c_kids[j]
                    fsize += 1
        else:
            for i in range(c_off[root], c_off[root + 1]):
                c_stack[fsize] = c_kids[i]
                fsize += 1
        s.offsets = c_off
        s.kids = c_kids
        s.open_end = c_open
        s.stack = c_stack
        s.counts = c_counts
        s.n_max = n_max
        with nogil:
            _rec(&s, fsize, 0)
        return [c_counts[i] for i in range(n_max + 1)]
    finally:
        free(c_off)
        free(c_kids)
        free(c_open)
        free(c_counts)
        free(c_stack)


def conv_coeff(list a, list b, Py_ssize_t n, Py_ssize_t lo=0):
    cdef Py_ssize_t start = max(lo, n - len(b) + 1)
    cdef Py_ssize_t stop = min(n, len(a) - 1)
    cdef Py_ssize_t k
    cdef object total = 0
    for k in range(start, stop + 1):
        total += a[k] * b[n - k]
    return total


def convolve(list a, list b, Py_ssize_t order):
    cdef list out = [0] * (order + 1)
    cdef Py_ssize_t i, j, nb = len(b), na = min(len(a), order + 1), top
    cdef object x
    for i in range(na):
        x = a[i]
        if not x:
            continue
        top = min(nb, order + 1 - i)
        for j in range(top):
            out[i + j] += x * b[j]
    return out
