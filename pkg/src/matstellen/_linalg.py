"""Ring-generic dense kernels shared by polynomial and rational matrices.

Entries only need ``+``, ``-``, ``*`` and multiplication by a ``Fraction``;
``zero`` and ``one`` are passed explicitly so that the same code runs on
``Poly`` and ``Fraction`` entries.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable


def matmul(a, b, zero):
    n, m, p = len(a), len(b), len(b[0]) if b else 0
    out = []
    for i in range(n):
        row = a[i]
        new = []
        for j in range(p):
            s = zero
            for k in range(m):
                x = row[k]
                if x:
                    y = b[k][j]
                    if y:
                        s = s + x * y
            new.append(s)
        out.append(new)
    return out


def identity(n, zero, one):
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def trace(a, zero):
    s = zero
    for i in range(len(a)):
        s = s + a[i][i]
    return s


def det_cofactor(a, zero, one):
    """Laplace expansion along the first row; fine for n <= 4."""
    n = len(a)
    if n == 0:
        return one
    if n == 1:
        return a[0][0]
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    total = zero
    for j in range(n):
        if not a[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in a[1:]]
        term = a[0][j] * det_cofactor(minor, zero, one)
        total = total + term if j % 2 == 0 else total - term
    return total


def det_bareiss(a, zero, one, divexact: Callable):
    """Fraction-free elimination; every division is exact over an integral domain."""
    n = len(a)
    if n == 0:
        return one
    m = [list(r) for r in a]
    sign = 1
    prev = one
    for k in range(n - 1):
        if not m[k][k]:
            for r in range(k + 1, n):
                if m[r][k]:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return zero
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = divexact(m[i][j] * pivot - m[i][k] * m[k][j], prev)
            m[i][k] = zero
        prev = pivot
    d = m[n - 1][n - 1]
    return d if sign == 1 else zero - d


def faddeev_leverrier(a, zero, one):
    """Coefficients c_0..c_n of det(lambda*I - A), c_n = 1.

    M_0 = 0, c_n = 1; M_k = A M_{k-1} + c_{n-k+1} I; c_{n-k} = -tr(A M_k)/k.
    Only divisions by the integers 1..n occur.
    """
    n = len(a)
    coeffs = [zero] * (n + 1)
    coeffs[n] = one
    m = [[zero] * n for _ in range(n)]
    for k in range(1, n + 1):
        am = matmul(a, m, zero)
        c_prev = coeffs[n - k + 1]
        m = [[am[i][j] + (c_prev if i == j else zero) for j in range(n)] for i in range(n)]
        tr = trace(matmul(a, m, zero), zero)
        coeffs[n - k] = (zero - tr) * Fraction(1, k)
    return coeffs


def horner_matrix(coeffs, a, zero, one):
    """Evaluate sum c_k A^k for scalar-ring coefficients ``coeffs`` (low to high)."""
    n = len(a)
    acc = [[zero] * n for _ in range(n)]
    for c in reversed(coeffs):
        acc = matmul(acc, a, zero)
        for i in range(n):
            acc[i][i] = acc[i][i] + c
    return acc
