"""GF(2^s) arithmetic on integer bit representations plus F2 linear algebra."""
from __future__ import annotations

import numpy as np

from .errors import InvalidArgumentError

# irreducible polynomials over GF(2), index = degree, value includes the x^s term
IRREDUCIBLE = {
    1: 0b11,          # x + 1
    2: 0b111,         # x^2 + x + 1
    3: 0b1011,        # x^3 + x + 1
    4: 0b10011,       # x^4 + x + 1
    5: 0b100101,      # x^5 + x^2 + 1
    6: 0b1000011,     # x^6 + x + 1
    7: 0b10000011,    # x^7 + x + 1
    8: 0b100011011,   # x^8 + x^4 + x^3 + x + 1
}


class BinaryField:
    """GF(2^s) with elements as ints 0 .. 2^s - 1 (polynomial basis)."""

    def __init__(self, s: int):
        if s not in IRREDUCIBLE:
            raise InvalidArgumentError(f"unsupported field degree {s}")
        self.s = s
        self.size = 1 << s
        self.modulus = IRREDUCIBLE[s]

    def mul(self, a: int, b: int) -> int:
        r = 0
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a & self.size:
                a ^= self.modulus
        return r

    def pow(self, a: int, e: int) -> int:
        r = 1
        for _ in range(e):
            r = self.mul(r, a)
        return r

    def trace(self, a: int) -> int:
        t = 0
        x = a
        for _ in range(self.s):
            t ^= x
            x = self.mul(x, x)
        # t lies in GF(2)
        return t & 1

    def self_dual_basis(self) -> list:
        """A basis b_1..b_s with tr(b_i b_j) = delta_ij (found by backtracking)."""
        elems = list(range(1, self.size))
        chosen: list[int] = []

        def ok(c: int) -> bool:
            if self.trace(self.mul(c, c)) != 1:
                return False
            return all(self.trace(self.mul(c, b)) == 0 for b in chosen)

        def independent(c: int) -> bool:
            span = {0}
            for b in chosen:
                span |= {v ^ b for v in span}
            return c not in span

        def search() -> bool:
            if len(chosen) == self.s:
                return True
            for c in elems:
                if ok(c) and independent(c):
                    chosen.append(c)
                    if search():
                        return True
                    chosen.pop()
            return False

        if not search():
            raise RuntimeError(f"no self-dual basis found for GF(2^{self.s})")
        return list(chosen)


def int_to_bits(a: int, width: int) -> np.ndarray:
    return np.array([(a >> i) & 1 for i in range(width)], dtype=np.uint8)


def bits_to_int(bits) -> int:
    return int(sum(int(b) << i for i, b in enumerate(bits)))


def row_reduce(mat: np.ndarray):
    """RREF over F2; returns (reduced matrix, pivot column list)."""
    m = (np.asarray(mat, dtype=np.uint8) % 2).copy()
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        pivot = None
        for i in range(r, rows):
            if m[i, c]:
                pivot = i
                break
        if pivot is None:
            continue
        m[[r, pivot]] = m[[pivot, r]]
        for i in range(rows):
            if i != r and m[i, c]:
                m[i] ^= m[r]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m[:r], pivots


def in_row_space(mat: np.ndarray, vecs: np.ndarray) -> np.ndarray:
    """Boolean array: which rows of ``vecs`` lie in the F2 row space of ``mat``."""
    red, pivots = row_reduce(mat)
    v = (np.asarray(vecs, dtype=np.uint8) % 2).copy()
    if v.ndim == 1:
        v = v[None, :]
    for row, c in zip(red, pivots):
        mask = v[:, c].astype(bool)
        v[mask] ^= row
    return ~v.any(axis=1)


def solve_f2(mat: np.ndarray, rhs: np.ndarray):
    """One solution x of mat @ x = rhs over F2, or None."""
    m = (np.asarray(mat, dtype=np.uint8) % 2).copy()
    b = (np.asarray(rhs, dtype=np.uint8) % 2).copy()
    rows, cols = m.shape
    aug = np.hstack([m, b[:, None]])
    red, pivots = row_reduce(aug)
    x = np.zeros(cols, dtype=np.uint8)
    for row, c in zip(red, pivots):
        if c == cols:
            return None  # inconsistent
    for row, c in zip(red, pivots):
        x[c] = row[cols]
    # verify (handles free variables set to zero)
    if np.any((m @ x) % 2 != b):
        return None
    return x


def invert_f2(mat: np.ndarray) -> np.ndarray:
    m = (np.asarray(mat, dtype=np.uint8) % 2).copy()
    n = m.shape[0]
    if m.shape != (n, n):
        raise InvalidArgumentError("matrix must be square")
    aug = np.hstack([m, np.eye(n, dtype=np.uint8)])
    red, pivots = row_reduce(aug)
    if pivots[:n] != list(range(n)):
        raise InvalidArgumentError("matrix is singular over F2")
    return red[:, n:]
