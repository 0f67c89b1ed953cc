# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernels: exact integer linear algebra and continued fractions.

Mirrors `_pure` exactly.  Values stay arbitrary-precision Python ints (the
exactness contract forbids machine integers); the speedup comes from typed
loop indices and the removal of interpreter dispatch in the inner loops.
"""

from math import gcd

__all__ = ["solve_int_system", "leading_minors", "cf_evaluate"]


def solve_int_system(matrix, rhs):
    """Solve M x = b exactly; see `_pure.solve_int_system`."""
    cdef Py_ssize_t n = len(matrix)
    cdef Py_ssize_t i, j, k
    if n == 0:
        return []
    cdef list m = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    cdef list row_i, row_k
    prev = 1
    for k in range(n):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    break
            else:
                raise ValueError("singular matrix")
        pivot = m[k][k]
        row_k = m[k]
        for i in range(k + 1, n):
            row_i = m[i]
            mik = row_i[k]
            for j in range(k + 1, n + 1):
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    cdef list out = [(0, 1)] * n
    for i in range(n - 1, -1, -1):
        row_i = m[i]
        num = row_i[n]
        den = 1
        for j in range(i + 1, n):
            xn, xd = out[j]
            num = num * xd - row_i[j] * xn * den
            den = den * xd
            g = gcd(num, den)
            if g > 1:
                num //= g
                den //= g
        den = den * row_i[i]
        if den == 0:
            raise ValueError("singular matrix")
        if den < 0:
            num, den = -num, -den
        g = gcd(num, den)
        if g > 1:
            num //= g
            den //= g
        out[i] = (num, den)
    return out


def leading_minors(matrix):
    """Leading principal minors by fraction-free elimination; see `_pure`."""
    cdef Py_ssize_t n = len(matrix)
    cdef Py_ssize_t i, j, k
    cdef list m = [list(row) for row in matrix]
    cdef list minors = []
    cdef list row_i, row_k
    prev = 1
    for k in range(n):
        pivot = m[k][k]
        minors.append(pivot)
        if pivot == 0:
            break
        row_k = m[k]
        for i in range(k + 1, n):
            row_i = m[i]
            mik = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return minors


def cf_evaluate(weights):
    """Evaluate a negative-regular continued fraction; see `_pure`."""
    n = 1
    q = 0
    for b in reversed(weights):
        n, q = b * n - q, n
    g = gcd(n, q)
    if g > 1:
        n //= g
        q //= g
    if n < 0:
        n, q = -n, -q
    return n, q
