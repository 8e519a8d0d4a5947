# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numeric kernels; see _kernels_py for the reference semantics."""


cdef inline double _interp(const double[:] xs, const double[:] mus,
                           Py_ssize_t a, Py_ssize_t b, double x) nogil:
    cdef Py_ssize_t k
    if x <= xs[a]:
        return mus[a]
    if x >= xs[b - 1]:
        return mus[b - 1]
    k = a
    while xs[k + 1] <= x:
        k += 1
    return mus[k] + (mus[k + 1] - mus[k]) * (x - xs[k]) / (xs[k + 1] - xs[k])


def pwl_eval(const double[:] xs, const double[:] mus, double x):
    return _interp(xs, mus, 0, xs.shape[0], x)


def clipped_centroid(double lo, double hi, Py_ssize_t n,
                     const double[:] xs, const double[:] mus,
                     const long[:] offsets, const double[:] clips):
    cdef Py_ssize_t i, j, nterms = clips.shape[0]
    cdef double x, m, v, c, w
    cdef double num = 0.0, den = 0.0
    cdef double span = hi - lo
    cdef double last = <double>(n - 1)
    with nogil:
        for i in range(n):
            x = lo + span * (i / last)
            m = 0.0
            for j in range(nterms):
                c = clips[j]
                if c <= 0.0:
                    continue
                v = _interp(xs, mus, offsets[j], offsets[j + 1], x)
                if v > c:
                    v = c
                if v > m:
                    m = v
            w = 0.5 if (i == 0 or i == n - 1) else 1.0
            num += w * m * x
            den += w * m
    return num, den
