"""Exact integer and rational linear algebra.

Everything in this module is exact: integer entries are Python ints
(arbitrary precision), rational entries are ``fractions.Fraction``.  The
central primitive is the Smith normal form with unimodular certificates;
integer linear systems, finite quotients Z^d / L and orbit computations
are all driven through it.  No floating point enters here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import prod

from .errors import LatticeNotInvariant, NonInvertibleAction, SingularMatrix


class IntMatrix:
    """Immutable dense matrix over Z, stored as a tuple of row tuples."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data):
        data = tuple(tuple(int(x) for x in row) for row in data)
        if data and any(len(row) != len(data[0]) for row in data):
            raise ValueError("ragged rows")
        self.rows = len(data)
        self.cols = len(data[0]) if data else 0
        self.data = data

    @classmethod
    def identity(cls, n):
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def zero(cls, rows, cols):
        return cls(tuple((0,) * cols for _ in range(rows)))

    def __eq__(self, other):
        return isinstance(other, IntMatrix) and self.data == other.data

    def __hash__(self):
        return hash(self.data)

    def __repr__(self):
        return f"IntMatrix({[list(r) for r in self.data]})"

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __neg__(self):
        return IntMatrix(tuple(tuple(-x for x in row) for row in self.data))

    def __add__(self, other):
        self._same_shape(other)
        return IntMatrix(
            tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.data, other.data))
        )

    def __sub__(self, other):
        self._same_shape(other)
        return IntMatrix(
            tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(self.data, other.data))
        )

    def __mul__(self, other):
        if isinstance(other, int):
            return IntMatrix(tuple(tuple(other * x for x in row) for row in self.data))
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        bt = other.transpose().data
        return IntMatrix(
            tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in bt) for row in self.data)
        )

    __rmul__ = __mul__

    def _same_shape(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")

    def mul_vec(self, v):
        """Matrix times column vector (tuple in, tuple out)."""
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.data)

    def transpose(self):
        return IntMatrix(tuple(zip(*self.data))) if self.data else IntMatrix(())

    def is_zero(self):
        return all(x == 0 for row in self.data for x in row)

    def column(self, j):
        return tuple(row[j] for row in self.data)

    def to_rat(self):
        return RatMatrix(tuple(tuple(Fraction(x) for x in row) for row in self.data))

    def det(self):
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        m = [list(row) for row in self.data]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k]:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            prev = m[k][k]
        return sign * m[n - 1][n - 1]


class RatMatrix:
    """Immutable dense matrix over Q with always-reduced Fraction entries."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data):
        data = tuple(tuple(Fraction(x) for x in row) for row in data)
        if data and any(len(row) != len(data[0]) for row in data):
            raise ValueError("ragged rows")
        self.rows = len(data)
        self.cols = len(data[0]) if data else 0
        self.data = data

    @classmethod
    def identity(cls, n):
        return cls(tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))

    def __eq__(self, other):
        return isinstance(other, RatMatrix) and self.data == other.data

    def __hash__(self):
        return hash(self.data)

    def __repr__(self):
        return f"RatMatrix({[[str(x) for x in r] for r in self.data]})"

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __mul__(self, other):
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        bt = tuple(zip(*other.data))
        return RatMatrix(
            tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in bt) for row in self.data)
        )

    def __sub__(self, other):
        return RatMatrix(
            tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(self.data, other.data))
        )

    def mul_vec(self, v):
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        return tuple(sum(a * Fraction(b) for a, b in zip(row, v)) for row in self.data)

    def is_integral(self):
        return all(x.denominator == 1 for row in self.data for x in row)

    def to_int(self):
        if not self.is_integral():
            raise ValueError("matrix has non-integer entries")
        return IntMatrix(tuple(tuple(int(x) for x in row) for row in self.data))

    def inverse(self):
        """Exact inverse by Gauss-Jordan elimination."""
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        m = [list(row) for row in self.data]
        inv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        for col in range(n):
            pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
            if pivot is None:
                raise SingularMatrix("matrix is singular")
            if pivot != col:
                m[col], m[pivot] = m[pivot], m[col]
                inv[col], inv[pivot] = inv[pivot], inv[col]
            p = m[col][col]
            m[col] = [x / p for x in m[col]]
            inv[col] = [x / p for x in inv[col]]
            for r in range(n):
                if r != col and m[r][col]:
                    f = m[r][col]
                    m[r] = [a - f * b for a, b in zip(m[r], m[col])]
                    inv[r] = [a - f * b for a, b in zip(inv[r], inv[col])]
        return RatMatrix(inv)


@dataclass(frozen=True)
class SNFDecomposition:
    """Certificate u_left * a * v_right = diag with unimodular u_left, v_right.

    The diagonal is nonnegative with each entry dividing the next and all
    zeros trailing.
    """

    u_left: IntMatrix
    diag: IntMatrix
    v_right: IntMatrix

    def invariant_factors(self):
        n = min(self.diag.rows, self.diag.cols)
        return tuple(self.diag[i, i] for i in range(n) if self.diag[i, i] != 0)


def _swap_rows(m, i, j):
    m[i], m[j] = m[j], m[i]


def _swap_cols(m, i, j):
    for row in m:
        row[i], row[j] = row[j], row[i]


def _add_row(m, dst, src, q):
    # row[dst] -= q * row[src]
    rd, rs = m[dst], m[src]
    for j in range(len(rd)):
        rd[j] -= q * rs[j]


def _add_col(m, dst, src, q):
    # col[dst] -= q * col[src]
    for row in m:
        row[dst] -= q * row[src]


def snf(a: IntMatrix) -> SNFDecomposition:
    """Smith normal form with transformation certificates.

    Pivoting always selects the entry of minimal absolute value in the
    remaining submatrix, which keeps coefficient growth acceptable at the
    small dimensions used throughout this package.
    """
    rows, cols = a.rows, a.cols
    m = [list(row) for row in a.data]
    u = [list(row) for row in IntMatrix.identity(rows).data]
    v = [list(row) for row in IntMatrix.identity(cols).data]

    for t in range(min(rows, cols)):
        while True:
            # select min-abs nonzero pivot in the submatrix and move it to (t, t)
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    x = m[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                break
            _, pi, pj = best
            if pi != t:
                _swap_rows(m, t, pi)
                _swap_rows(u, t, pi)
            if pj != t:
                _swap_cols(m, t, pj)
                _swap_cols(v, t, pj)
            p = m[t][t]

            clean = True
            for i in range(t + 1, rows):
                if m[i][t]:
                    q = m[i][t] // p
                    if q:
                        _add_row(m, i, t, q)
                        _add_row(u, i, t, q)
                    if m[i][t]:
                        clean = False
            if not clean:
                continue
            for j in range(t + 1, cols):
                if m[t][j]:
                    q = m[t][j] // p
                    if q:
                        _add_col(m, j, t, q)
                        _add_col(v, j, t, q)
                    if m[t][j]:
                        clean = False
            if not clean:
                continue

            # pivot must divide every remaining entry before we move on
            offender = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if m[i][j] % p:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            _add_row(m, t, offender, -1)
            _add_row(u, t, offender, -1)

        if m[t][t] < 0:
            m[t] = [-x for x in m[t]]
            u[t] = [-x for x in u[t]]

    return SNFDecomposition(IntMatrix(u), IntMatrix(m), IntMatrix(v))


def det(a: IntMatrix) -> int:
    return a.det()


def inverse_rat(a: IntMatrix) -> RatMatrix:
    """Exact rational inverse; raises SingularMatrix when det = 0."""
    return a.to_rat().inverse()


def mat_pow(a: IntMatrix, e: int) -> RatMatrix:
    """Exact e-th power over Q; negative e goes through one rational inverse."""
    if a.rows != a.cols:
        raise ValueError("power of a non-square matrix")
    if e >= 0:
        return mat_pow_int(a, e).to_rat()
    base = inverse_rat(a)
    result = RatMatrix.identity(a.rows)
    e = -e
    while e:
        if e & 1:
            result = result * base
        base = base * base
        e >>= 1
    return result


def mat_pow_int(a: IntMatrix, e: int) -> IntMatrix:
    """Integer e-th power for e >= 0 by binary exponentiation."""
    if e < 0:
        raise ValueError("negative exponent on integer path")
    result = IntMatrix.identity(a.rows)
    base = a
    while e:
        if e & 1:
            result = result * base
        base = base * base
        e >>= 1
    return result


def solve_integer(a: IntMatrix, b):
    """Solve a*x = b over Z.

    Returns ``(particular, kernel_basis)`` where ``kernel_basis`` is a list
    of linearly independent generators of the integer kernel lattice, or
    ``None`` when no integer solution exists.
    """
    if len(b) != a.rows:
        raise ValueError("dimension mismatch")
    dec = snf(a)
    c = dec.u_left.mul_vec(b)
    n = min(a.rows, a.cols)
    z = [0] * a.cols
    for i in range(a.rows):
        d = dec.diag[i, i] if i < n else 0
        if d:
            if c[i] % d:
                return None
            z[i] = c[i] // d
        elif c[i]:
            return None
    particular = dec.v_right.mul_vec(tuple(z))
    kernel = [
        dec.v_right.column(j)
        for j in range(a.cols)
        if (dec.diag[j, j] if j < n else 0) == 0
    ]
    return particular, kernel


def hermite_basis(vectors, dim):
    """Row-style Hermite basis of the lattice spanned by ``vectors`` in Z^dim.

    Returns a list of echelon rows with positive pivots; entries above each
    pivot are reduced to the range [0, pivot).
    """
    work = [list(v) for v in vectors if any(v)]
    basis = []
    col = 0
    while col < dim and work:
        live = [r for r in work if r[col]]
        if not live:
            col += 1
            continue
        while True:
            live.sort(key=lambda r: abs(r[col]))
            p = live[0]
            done = True
            for r in live[1:]:
                q = r[col] // p[col]
                if q:
                    for j in range(dim):
                        r[j] -= q * p[j]
                if r[col]:
                    done = False
            live = [r for r in live if r[col]] or [p]
            if done and len(live) == 1:
                break
        pivot_row = live[0]
        if pivot_row[col] < 0:
            pivot_row[:] = [-x for x in pivot_row]
        basis.append(pivot_row)
        work = [r for r in work if r is not pivot_row and any(r)]
        for r in work:
            if r[col]:
                q = r[col] // pivot_row[col]
                for j in range(dim):
                    r[j] -= q * pivot_row[j]
        work = [r for r in work if any(r)]
        col += 1
    # reduce entries above pivots for a canonical result
    for i in reversed(range(len(basis))):
        pc = next(j for j in range(dim) if basis[i][j])
        for kk in range(i):
            q = basis[kk][pc] // basis[i][pc]
            if q:
                for j in range(dim):
                    basis[kk][j] -= q * basis[i][j]
    return [tuple(r) for r in basis]


@dataclass(frozen=True)
class FinQuotient:
    """The finite abelian group Z^d / L for a full-rank lattice L.

    ``to_canonical`` maps Z^d into invariant-factor coordinates; residues
    are tuples reduced componentwise mod ``invariant_factors``.
    """

    basis: IntMatrix
    invariant_factors: tuple
    to_canonical: IntMatrix
    from_canonical: IntMatrix
    order: int

    def zero(self):
        return (0,) * len(self.invariant_factors)


def quotient(lattice_basis: IntMatrix) -> FinQuotient:
    """Quotient of Z^d by the lattice spanned by the columns of the basis."""
    if lattice_basis.rows != lattice_basis.cols:
        raise SingularMatrix("lattice basis must be square and full rank")
    if lattice_basis.det() == 0:
        raise SingularMatrix("lattice basis is rank deficient")
    dec = snf(lattice_basis)
    factors = tuple(dec.diag[i, i] for i in range(lattice_basis.rows))
    from_canonical = inverse_rat(dec.u_left).to_int()
    return FinQuotient(
        basis=lattice_basis,
        invariant_factors=factors,
        to_canonical=dec.u_left,
        from_canonical=from_canonical,
        order=prod(factors),
    )


def project(q: FinQuotient, x) -> tuple:
    """Canonical residue of x in Z^d / L."""
    y = q.to_canonical.mul_vec(x)
    return tuple(c % f for c, f in zip(y, q.invariant_factors))


def residue_representative(q: FinQuotient, residue) -> tuple:
    """Some integer vector projecting onto the given residue."""
    return q.from_canonical.mul_vec(residue)


def all_residues(q: FinQuotient):
    """Iterate over every residue of the quotient in lexicographic order."""
    return product(*(range(f) for f in q.invariant_factors))


def orbit_order(t: IntMatrix, q: FinQuotient, x_bar) -> int:
    """Smallest m >= 1 with t^m * x_bar = x_bar in the quotient.

    Requires t to map the lattice into itself; raises NonInvertibleAction
    when the forward orbit closes a cycle that avoids ``x_bar`` (which can
    only happen when t is not a bijection on the quotient).
    """
    for j in range(q.basis.cols):
        img = t.mul_vec(q.basis.column(j))
        if any(project(q, img)):
            raise LatticeNotInvariant("t does not preserve the lattice")
    seen = set()
    cur = x_bar
    m = 0
    while True:
        cur = project(q, t.mul_vec(residue_representative(q, cur)))
        m += 1
        if cur == x_bar:
            return m
        if cur in seen or m > q.order:
            raise NonInvertibleAction("action on the quotient is not a bijection")
        seen.add(cur)
