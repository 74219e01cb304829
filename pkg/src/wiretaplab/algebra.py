"""Exact arithmetic over Z_d and prime fields, matrices, and MDS generators.

Everything here is integer residue arithmetic: no floating point is used
anywhere in this module.  Determinants are computed with fraction-free
(Bareiss) elimination over the integers and reduced by the modulus at the
end, so they are exact over any Z_d, prime or not.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import gcd
from typing import Optional, Sequence


def is_prime(n: int) -> bool:
    """Trial-division primality test; moduli here are desk-scale."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class RingElement:
    """A canonical residue in Z_d (0 <= value < modulus, modulus >= 2)."""

    value: int
    modulus: int

    def __post_init__(self) -> None:
        if self.modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {self.modulus}")
        object.__setattr__(self, "value", self.value % self.modulus)

    def _check(self, other: "RingElement") -> None:
        if self.modulus != other.modulus:
            raise ValueError(
                f"modulus mismatch: {self.modulus} vs {other.modulus}")

    def __add__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        return type(self)(self.value + other.value, self.modulus)

    def __sub__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        return type(self)(self.value - other.value, self.modulus)

    def __mul__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        return type(self)(self.value * other.value, self.modulus)

    def __neg__(self) -> "RingElement":
        return type(self)(-self.value, self.modulus)

    def is_invertible(self) -> bool:
        return gcd(self.value, self.modulus) == 1

    def invert(self) -> Optional["RingElement"]:
        """Multiplicative inverse, or None when gcd(value, modulus) > 1.

        Non-invertibility is a queryable outcome, not an error: zero
        divisors of Z_d are ordinary citizens in the codes built on top.
        """
        if not self.is_invertible():
            return None
        return type(self)(pow(self.value, -1, self.modulus), self.modulus)


@dataclass(frozen=True)
class PrimeFieldElement(RingElement):
    """A residue in F_q with q prime; every nonzero element is invertible."""

    def __post_init__(self) -> None:
        if not is_prime(self.modulus):
            raise ValueError(f"modulus {self.modulus} is not prime")
        super().__post_init__()


@dataclass(frozen=True)
class Matrix:
    """Row-major matrix of canonical residues sharing one modulus."""

    rows: int
    cols: int
    modulus: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.modulus < 2:
            raise ValueError("modulus must be >= 2")
        if self.rows < 0 or self.cols < 0:
            raise ValueError("dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}")
        object.__setattr__(
            self, "entries", tuple(e % self.modulus for e in self.entries))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], modulus: int) -> "Matrix":
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged rows")
        flat = tuple(v for row in rows for v in row)
        return cls(len(rows), len(rows[0]) if rows else 0, modulus, flat)

    def entry(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def element(self, i: int, j: int) -> RingElement:
        return RingElement(self.entry(i, j), self.modulus)

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column_submatrix(self, col_indices: Sequence[int]) -> "Matrix":
        """Columns selected by an injective index sequence, in the given order."""
        if len(set(col_indices)) != len(col_indices):
            raise ValueError("column selection must be injective")
        flat = tuple(self.entry(i, j) for i in range(self.rows) for j in col_indices)
        return Matrix(self.rows, len(col_indices), self.modulus, flat)

    def determinant(self) -> int:
        """Determinant as a canonical residue mod the modulus.

        Bareiss fraction-free elimination over the integers; all divisions
        are exact, so the result is the true integer determinant reduced
        mod d.  Works over Z_d with zero divisors.
        """
        if self.rows != self.cols:
            raise ValueError("determinant requires a square matrix")
        return _int_det([list(self.row(i)) for i in range(self.rows)]) % self.modulus

    def mat_vec(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Row-vector times matrix: returns vec . self (length = cols)."""
        if len(vec) != self.rows:
            raise ValueError("vector length must equal row count")
        return tuple(
            sum(vec[i] * self.entry(i, j) for i in range(self.rows)) % self.modulus
            for j in range(self.cols))

    def to_text(self) -> str:
        """First line "rows cols modulus", then row-major integers."""
        lines = [f"{self.rows} {self.cols} {self.modulus}"]
        for i in range(self.rows):
            lines.append(" ".join(str(v) for v in self.row(i)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Matrix":
        tokens = text.split()
        if len(tokens) < 3:
            raise ValueError("matrix text needs a 'rows cols modulus' header")
        rows, cols, modulus = int(tokens[0]), int(tokens[1]), int(tokens[2])
        body = [int(t) for t in tokens[3:]]
        if len(body) != rows * cols:
            raise ValueError(
                f"expected {rows * cols} entries after header, got {len(body)}")
        return cls(rows, cols, modulus, tuple(body))


def _int_det(m: list[list[int]]) -> int:
    """Exact integer determinant via Bareiss elimination."""
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def build_mds_generator(k: int, r: int, q: int) -> Matrix:
    """Systematic r x k generator whose every r x r column selection is invertible.

    Layout is [I_r | C] over F_q, where C is an r x (k-r) Cauchy block
    C[i][j] = (x_i - y_j)^-1 built on k distinct field points (hence the
    q >= k requirement).  Every square submatrix of a Cauchy matrix is
    nonsingular, which makes the whole generator MDS.
    """
    if r < 1 or k <= r:
        raise ValueError(f"need k > r >= 1, got k={k}, r={r}")
    if not is_prime(q):
        raise ValueError(f"q={q} is not prime")
    if q < k:
        raise ValueError(f"need q >= k distinct field points, got q={q}, k={k}")
    xs = list(range(r))
    ys = list(range(r, k))
    rows = []
    for i in range(r):
        ident = [1 if j == i else 0 for j in range(r)]
        cauchy = [pow((xs[i] - y) % q, -1, q) for y in ys]
        rows.append(ident + cauchy)
    return Matrix.from_rows(rows, q)


def verify_mds(m: Matrix) -> bool:
    """True iff every rows x rows column-selection submatrix is invertible.

    Exhaustive over all C(cols, rows) selections; requires a prime modulus
    since invertibility over Z_d with zero divisors is not a rank notion.
    """
    if not is_prime(m.modulus):
        raise ValueError(f"verify_mds needs a prime modulus, got {m.modulus}")
    if m.rows > m.cols:
        raise ValueError("need rows <= cols")
    for selection in combinations(range(m.cols), m.rows):
        if m.column_submatrix(selection).determinant() == 0:
            return False
    return True
