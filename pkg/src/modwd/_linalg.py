"""Exact dense linear algebra over a FiniteField.

Matrices hold numpy arrays of element indices; arithmetic goes through the
field's add/mul lookup tables so every operation is exact.  Row reduction,
kernels, characteristic polynomials (via Hessenberg form) and polynomial
evaluation are enough for the whole matrix model.
"""

from __future__ import annotations

import numpy as np

from . import _poly


class FMat:
    """Dense matrix over a FiniteField (entries are element indices)."""

    __slots__ = ("field", "a")

    def __init__(self, field, a):
        self.field = field
        self.a = np.asarray(a, dtype=np.int32)
        if self.a.ndim != 2:
            raise ValueError("FMat needs a 2-d array")

    # -- constructors --------------------------------------------------------

    @classmethod
    def zeros(cls, field, nrows, ncols):
        return cls(field, np.zeros((nrows, ncols), dtype=np.int32))

    @classmethod
    def identity(cls, field, n):
        a = np.zeros((n, n), dtype=np.int32)
        np.fill_diagonal(a, 1)
        return cls(field, a)

    @classmethod
    def diag(cls, field, idx_values):
        n = len(idx_values)
        a = np.zeros((n, n), dtype=np.int32)
        for i, v in enumerate(idx_values):
            a[i, i] = v
        return cls(field, a)

    @classmethod
    def from_rows(cls, field, rows):
        return cls(field, np.array(rows, dtype=np.int32).reshape(len(rows), -1)
                   if rows else np.zeros((0, 0), dtype=np.int32))

    @classmethod
    def block_diag(cls, field, blocks):
        n = sum(b.nrows for b in blocks)
        m = sum(b.ncols for b in blocks)
        a = np.zeros((n, m), dtype=np.int32)
        r = c = 0
        for b in blocks:
            a[r:r + b.nrows, c:c + b.ncols] = b.a
            r += b.nrows
            c += b.ncols
        return cls(field, a)

    @classmethod
    def hstack(cls, mats):
        return cls(mats[0].field, np.hstack([m.a for m in mats]))

    # -- basics ----------------------------------------------------------------

    @property
    def nrows(self):
        return self.a.shape[0]

    @property
    def ncols(self):
        return self.a.shape[1]

    def copy(self):
        return FMat(self.field, self.a.copy())

    def is_zero(self):
        return not self.a.any()

    def is_diagonal(self):
        off = self.a.copy()
        np.fill_diagonal(off, 0)
        return not off.any()

    def __eq__(self, other):
        return (isinstance(other, FMat) and self.field == other.field
                and self.a.shape == other.a.shape
                and np.array_equal(self.a, other.a))

    def __hash__(self):
        return hash((self.a.shape, self.a.tobytes()))

    def __repr__(self):
        return f"FMat({self.nrows}x{self.ncols} over {self.field!r})"

    def submatrix(self, rows, cols):
        return FMat(self.field, self.a[np.ix_(np.asarray(rows, dtype=np.intp),
                                              np.asarray(cols, dtype=np.intp))]
                    if len(rows) and len(cols)
                    else np.zeros((len(rows), len(cols)), dtype=np.int32))

    # -- arithmetic --------------------------------------------------------------

    def __add__(self, other):
        return FMat(self.field, self.field.np_add[self.a, other.a])

    def __neg__(self):
        return FMat(self.field, self.field.np_neg[self.a])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        if hasattr(s, "i"):
            s = s.i
        return FMat(self.field, self.field.np_mul[self.a, np.int32(s)])

    def __matmul__(self, other):
        F = self.field
        n, k = self.a.shape
        k2, m = other.a.shape
        if k != k2:
            raise ValueError("shape mismatch in matmul")
        if k == 0 or n == 0 or m == 0:
            return FMat(F, np.zeros((n, m), dtype=np.int32))
        mul, add = F.np_mul, F.np_add
        A, B = self.a, other.a
        if n * k * m <= 8192:
            # small case: one gather for the whole product cube, then a
            # tree reduction along the contracted axis
            P = mul[A[:, :, None], B[None, :, :]]
            while P.shape[1] > 1:
                h = P.shape[1] // 2
                Q = add[P[:, 0:2 * h:2, :], P[:, 1:2 * h:2, :]]
                if P.shape[1] & 1:
                    Q = np.concatenate([Q, P[:, -1:, :]], axis=1)
                P = Q
            return FMat(F, P[:, 0, :])
        out = np.zeros((n, m), dtype=np.int32)
        for t in range(k):
            out = add[out, mul[A[:, t][:, None], B[t, :][None, :]]]
        return FMat(F, out)

    def kron(self, other):
        F = self.field
        n1, m1 = self.a.shape
        n2, m2 = other.a.shape
        out = F.np_mul[self.a[:, None, :, None], other.a[None, :, None, :]]
        return FMat(F, out.reshape(n1 * n2, m1 * m2))

    @property
    def T(self):
        return FMat(self.field, self.a.T.copy())

    def power(self, e):
        if self.nrows != self.ncols:
            raise ValueError("power of non-square matrix")
        acc = FMat.identity(self.field, self.nrows)
        base = self
        while e:
            if e & 1:
                acc = acc @ base
            base = base @ base
            e >>= 1
        return acc

    # -- elimination ----------------------------------------------------------------

    def rref(self):
        """Reduced row echelon form; returns (R, pivot_columns)."""
        F = self.field
        R = self.a.copy()
        n, m = R.shape
        mul, add, neg = F.np_mul, F.np_add, F.np_neg
        pivots = []
        r = 0
        for c in range(m):
            if r == n:
                break
            nz = np.nonzero(R[r:, c])[0]
            if nz.size == 0:
                continue
            p = r + nz[0]
            if p != r:
                R[[r, p]] = R[[p, r]]
            inv = F.inv_idx(int(R[r, c]))
            R[r] = mul[R[r], np.int32(inv)]
            col = R[:, c].copy()
            col[r] = 0
            rows = np.nonzero(col)[0]
            if rows.size:
                R[rows] = add[R[rows], mul[neg[col[rows]][:, None], R[r][None, :]]]
            pivots.append(c)
            r += 1
        return FMat(F, R), pivots

    def rank(self):
        return len(self.rref()[1])

    def kernel(self):
        """Columns form a basis of the right kernel."""
        F = self.field
        R, pivots = self.rref()
        m = self.ncols
        free = [c for c in range(m) if c not in pivots]
        out = np.zeros((m, len(free)), dtype=np.int32)
        for j, fc in enumerate(free):
            out[fc, j] = 1
            for i, pc in enumerate(pivots):
                out[pc, j] = F.neg_idx(int(R.a[i, fc]))
        return FMat(F, out)

    def column_space_basis(self):
        """Columns of self forming a basis of the column space."""
        _, pivots = self.rref()
        return FMat(self.field, self.a[:, pivots].copy()
                    if pivots else np.zeros((self.nrows, 0), dtype=np.int32))

    def inverse(self):
        F = self.field
        n = self.nrows
        aug = FMat.hstack([self, FMat.identity(F, n)])
        R, pivots = aug.rref()
        if pivots[:n] != list(range(n)):
            raise ValueError("matrix is singular")
        return FMat(F, R.a[:, n:].copy())

    def solve_in_basis(self, T):
        """X with self @ X = T, assuming self has full column rank and the
        columns of T lie in the column space."""
        F = self.field
        w = self.ncols
        aug = FMat.hstack([self, T])
        R, pivots = aug.rref()
        if pivots[:w] != list(range(w)) or len([p for p in pivots if p < w]) != w:
            raise ValueError("basis matrix is not full column rank")
        if any(p >= w for p in pivots):
            raise ValueError("columns do not lie in the span of the basis")
        return FMat(F, R.a[:w, w:].copy())

    # -- characteristic polynomial -----------------------------------------------

    def charpoly(self):
        """Monic characteristic polynomial as a little-endian index list."""
        F = self.field
        n = self.nrows
        if n != self.ncols:
            raise ValueError("charpoly of non-square matrix")
        if n == 0:
            return [1]
        H = self.a.copy()
        mul, add, neg = F.np_mul, F.np_add, F.np_neg
        for j in range(n - 2):
            nz = np.nonzero(H[j + 1:, j])[0]
            if nz.size == 0:
                continue
            p = j + 1 + nz[0]
            if p != j + 1:
                H[[j + 1, p]] = H[[p, j + 1]]
                H[:, [j + 1, p]] = H[:, [p, j + 1]]
            inv = F.inv_idx(int(H[j + 1, j]))
            for i in range(j + 2, n):
                if H[i, j]:
                    f = F.mul_idx(int(H[i, j]), inv)
                    H[i] = add[H[i], mul[np.int32(F.neg_idx(f)), H[j + 1]]]
                    H[:, j + 1] = add[H[:, j + 1], mul[np.int32(f), H[:, i]]]
        # recurrence on leading principal minors of the Hessenberg form
        polys = [[1]]
        for k in range(1, n + 1):
            hkk = int(H[k - 1, k - 1])
            term = _poly.pmul(F, [F.neg_idx(hkk), 1], polys[k - 1])
            prod_sub = 1
            for i in range(1, k):
                prod_sub = F.mul_idx(prod_sub, int(H[k - i, k - i - 1]))
                if prod_sub == 0:
                    break
                hji = int(H[k - 1 - i, k - 1])
                if hji:
                    coeff = F.neg_idx(F.mul_idx(hji, prod_sub))
                    term = _poly.padd(F, term,
                                      _poly.pscale(F, polys[k - 1 - i], coeff))
            polys.append(term)
        return polys[n]

    def poly_eval(self, coeffs):
        """Evaluate a polynomial (little-endian index list) at this matrix."""
        F = self.field
        n = self.nrows
        acc = FMat.zeros(F, n, n)
        for c in reversed(coeffs):
            acc = acc @ self
            if c:
                acc = acc + FMat.identity(F, n).scale(c)
        return acc
