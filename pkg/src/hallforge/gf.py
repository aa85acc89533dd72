"""Exact arithmetic and linear algebra over small finite fields F_{p^n}.

Field elements are plain ints in ``[0, p^n)``: the base-p digits of the int,
least significant first, are the coefficients of the residue polynomial
modulo the field's modulus.  The prime subfield is therefore the ints
``[0, p)`` and the embedding ``F_p -> F_{p^n}`` is the identity on values.

All arithmetic goes through precomputed tables (orders are capped at 81),
so everything downstream is exact integer work; no floating point exists
anywhere in this package.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import DegreeZeroError, DimensionError, DivideByZeroError, NonPrimeError

MAX_FIELD_ORDER = 81


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# Polynomials over a field, coefficients low degree first (used for modulus
# search and for minimal-polynomial factoring).  A polynomial is a tuple of
# ints; the zero polynomial is ().
# ---------------------------------------------------------------------------

def poly_trim(f: Sequence[int]) -> tuple[int, ...]:
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return tuple(f)


def poly_mul(field: "FieldCtx", f: Sequence[int], g: Sequence[int]) -> tuple[int, ...]:
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            if b:
                out[i + j] = field.add(out[i + j], field.mul(a, b))
    return poly_trim(out)


def poly_divmod(field: "FieldCtx", f: Sequence[int], g: Sequence[int]):
    """Quotient and remainder of f by g (g nonzero)."""
    g = poly_trim(g)
    if not g:
        raise DivideByZeroError("polynomial division by zero")
    rem = list(poly_trim(f))
    dg = len(g) - 1
    lead_inv = field.inv(g[-1])
    quo = [0] * max(len(rem) - dg, 0)
    while len(rem) - 1 >= dg and rem:
        shift = len(rem) - 1 - dg
        c = field.mul(rem[-1], lead_inv)
        quo[shift] = c
        for i, b in enumerate(g):
            rem[shift + i] = field.sub(rem[shift + i], field.mul(c, b))
        rem = list(poly_trim(rem))
    return poly_trim(quo), poly_trim(rem)


def monic_polys(field: "FieldCtx", degree: int) -> Iterator[tuple[int, ...]]:
    """All monic polynomials of the given degree, lexicographic by
    (c_0, c_1, ..., c_{degree-1})."""
    for tail in itertools.product(field.elements(), repeat=degree):
        yield tuple(tail) + (1,)


def poly_is_irreducible(field: "FieldCtx", f: Sequence[int]) -> bool:
    """Trial division by all monic polynomials of degree <= deg(f)/2."""
    f = poly_trim(f)
    deg = len(f) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for g in monic_polys(field, d):
            _, rem = poly_divmod(field, f, g)
            if not rem:
                return False
    return True


# ---------------------------------------------------------------------------
# Field contexts
# ---------------------------------------------------------------------------

class FieldCtx:
    """The finite field F_{p^n} with a fixed modulus polynomial.

    Do not construct directly; use :func:`make_field`, which canonicalizes
    the modulus (lexicographically least monic irreducible, coefficients
    compared low degree first) and caches the context so that two contexts
    with equal (p, n) are the same object.
    """

    __slots__ = ("p", "n", "modulus", "order", "_add", "_sub", "_neg", "_mul", "_inv")

    def __init__(self, p: int, n: int, modulus: tuple[int, ...]):
        self.p = p
        self.n = n
        self.modulus = modulus
        self.order = p ** n
        self._build_tables()

    def _digits(self, v: int) -> list[int]:
        out = []
        for _ in range(self.n):
            out.append(v % self.p)
            v //= self.p
        return out

    def _value(self, digits: Sequence[int]) -> int:
        v = 0
        for d in reversed(digits):
            v = v * self.p + d
        return v

    def _build_tables(self) -> None:
        p, n, q = self.p, self.n, self.order
        digs = [self._digits(v) for v in range(q)]
        self._add = [[self._value([(a[i] + b[i]) % p for i in range(n)]) for b in digs] for a in digs]
        self._neg = [self._value([(-a[i]) % p for i in range(n)]) for a in digs]
        self._sub = [[self._add[x][self._neg[y]] for y in range(q)] for x in range(q)]
        mod = self.modulus
        mul = []
        for a in digs:
            row = []
            for b in digs:
                prod = [0] * (2 * n - 1 if n > 1 else 1)
                for i, x in enumerate(a):
                    if x:
                        for j, y in enumerate(b):
                            if y:
                                prod[i + j] = (prod[i + j] + x * y) % p
                # reduce modulo the monic modulus
                for k in range(len(prod) - 1, n - 1, -1):
                    c = prod[k]
                    if c:
                        prod[k] = 0
                        for i in range(n):
                            prod[k - n + i] = (prod[k - n + i] - c * mod[i]) % p
                row.append(self._value(prod[:n]))
            mul.append(row)
        self._mul = mul
        self._inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if mul[a][b] == 1:
                    self._inv[a] = b
                    break

    # -- arithmetic ---------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def sub(self, a: int, b: int) -> int:
        return self._sub[a][b]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivideByZeroError("inverse of zero in %r" % self)
        return self._inv[a]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        out, base = 1, a
        while e:
            if e & 1:
                out = self._mul[out][base]
            base = self._mul[base][base]
            e >>= 1
        return out

    # -- structure ----------------------------------------------------------

    def elements(self) -> range:
        return range(self.order)

    def coeffs(self, a: int) -> tuple[int, ...]:
        """Coefficient vector of a over F_p, low degree first, length n."""
        return tuple(self._digits(a))

    def element(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) != self.n:
            raise DimensionError("expected %d coefficients, got %d" % (self.n, len(coeffs)))
        return self._value([c % self.p for c in coeffs])

    @property
    def is_prime_field(self) -> bool:
        return self.n == 1

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldCtx) and (self.p, self.n) == (other.p, other.n)

    def __hash__(self) -> int:
        return hash((self.p, self.n))

    def __repr__(self) -> str:
        if self.n == 1:
            return "GF(%d)" % self.p
        return "GF(%d^%d)" % (self.p, self.n)


@lru_cache(maxsize=None)
def make_field(p: int, n: int = 1) -> FieldCtx:
    """Canonical field context for F_{p^n}.

    The modulus is the lexicographically least monic irreducible of degree n
    over F_p (coefficients compared low degree first), found by exhaustive
    search; orders are capped at 81 to keep that search and the arithmetic
    tables trivial.
    """
    if n < 1:
        raise DegreeZeroError("extension degree must be >= 1, got %d" % n)
    if not is_prime(p):
        raise NonPrimeError("%d is not prime" % p)
    if p ** n > MAX_FIELD_ORDER:
        raise ValueError(
            "field order %d exceeds the supported cap %d" % (p ** n, MAX_FIELD_ORDER))
    if n == 1:
        return FieldCtx(p, 1, (0, 1))  # modulus t
    prime = make_field(p, 1)
    for cand in monic_polys(prime, n):
        if poly_is_irreducible(prime, cand):
            return FieldCtx(p, n, cand)
    raise AssertionError("no irreducible polynomial of degree %d over GF(%d)" % (n, p))


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------

class Mat:
    """A dense rows x cols matrix over a :class:`FieldCtx`.

    Treated as immutable after construction; all operations return new
    matrices.  Entries are field elements (ints).
    """

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: FieldCtx, rows: int, cols: int, data=None):
        self.field = field
        self.rows = rows
        self.cols = cols
        if data is None:
            self.data = [[0] * cols for _ in range(rows)]
        else:
            self.data = [list(r) for r in data]
            if len(self.data) != rows or any(len(r) != cols for r in self.data):
                raise DimensionError("matrix data does not match shape %dx%d" % (rows, cols))

    @classmethod
    def zeros(cls, field: FieldCtx, rows: int, cols: int) -> "Mat":
        return cls(field, rows, cols)

    @classmethod
    def identity(cls, field: FieldCtx, size: int) -> "Mat":
        m = cls(field, size, size)
        for i in range(size):
            m.data[i][i] = 1
        return m

    @classmethod
    def from_rows(cls, field: FieldCtx, rows: Sequence[Sequence[int]], cols: int | None = None) -> "Mat":
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise DimensionError("cannot infer column count from zero rows")
            cols = len(rows[0])
        return cls(field, len(rows), cols, rows)

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise DimensionError("shape mismatch %dx%d @ %dx%d"
                                 % (self.rows, self.cols, other.rows, other.cols))
        f = self.field
        mul, add = f._mul, f._add
        out = Mat(f, self.rows, other.cols)
        bdata = other.data
        for i in range(self.rows):
            arow = self.data[i]
            orow = out.data[i]
            for k in range(self.cols):
                a = arow[k]
                if a == 0:
                    continue
                mrow = mul[a]
                brow = bdata[k]
                for j in range(other.cols):
                    b = brow[j]
                    if b:
                        orow[j] = add[orow[j]][mrow[b]]
        return out

    def add(self, other: "Mat") -> "Mat":
        f = self.field
        return Mat(f, self.rows, self.cols,
                   [[f.add(a, b) for a, b in zip(r1, r2)]
                    for r1, r2 in zip(self.data, other.data)])

    def sub(self, other: "Mat") -> "Mat":
        f = self.field
        return Mat(f, self.rows, self.cols,
                   [[f.sub(a, b) for a, b in zip(r1, r2)]
                    for r1, r2 in zip(self.data, other.data)])

    def scale(self, c: int) -> "Mat":
        f = self.field
        return Mat(f, self.rows, self.cols, [[f.mul(c, a) for a in r] for r in self.data])

    def transpose(self) -> "Mat":
        return Mat(self.field, self.cols, self.rows,
                   [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Matrix times column vector."""
        f = self.field
        out = []
        for i in range(self.rows):
            acc = 0
            row = self.data[i]
            for j, v in enumerate(vec):
                if v and row[j]:
                    acc = f.add(acc, f.mul(row[j], v))
            out.append(acc)
        return tuple(out)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(self.data[i][j] for i in range(self.rows))

    def is_zero(self) -> bool:
        return all(all(a == 0 for a in r) for r in self.data)

    def encode(self) -> tuple:
        return (self.rows, self.cols, tuple(a for r in self.data for a in r))

    def __eq__(self, other) -> bool:
        return (isinstance(other, Mat) and self.field == other.field
                and self.rows == other.rows and self.cols == other.cols
                and self.data == other.data)

    def __hash__(self) -> int:
        return hash((self.field, self.encode()))

    def __repr__(self) -> str:
        return "Mat(%d x %d over %r)" % (self.rows, self.cols, self.field)


def block_diag(field: FieldCtx, blocks: Sequence[Mat]) -> Mat:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = Mat(field, rows, cols)
    r = c = 0
    for b in blocks:
        for i in range(b.rows):
            out.data[r + i][c:c + b.cols] = list(b.data[i])
        r += b.rows
        c += b.cols
    return out


def vstack(field: FieldCtx, blocks: Sequence[Mat], cols: int) -> Mat:
    data = []
    for b in blocks:
        data.extend(list(r) for r in b.data)
    return Mat(field, len(data), cols, data)


# ---------------------------------------------------------------------------
# Row reduction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RrefResult:
    rank: int
    reduced: Mat
    kernel: tuple[tuple[int, ...], ...]
    pivots: tuple[int, ...]


def rref(m: Mat) -> RrefResult:
    """Reduced row echelon form, kernel basis and pivot columns.

    The kernel basis spans {v : m @ v = 0}; rank + len(kernel) == cols.
    """
    f = m.field
    a = [list(r) for r in m.data]
    rows, cols = m.rows, m.cols
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pr = None
        for i in range(r, rows):
            if a[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = f.inv(a[r][c])
        if inv != 1:
            a[r] = [f.mul(inv, x) for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                t = a[i][c]
                arow = a[r]
                a[i] = [f.sub(x, f.mul(t, y)) for x, y in zip(a[i], arow)]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    reduced = Mat(f, rows, cols, a)
    piv_set = set(pivots)
    kernel = []
    for c in range(cols):
        if c in piv_set:
            continue
        v = [0] * cols
        v[c] = 1
        for i, pc in enumerate(pivots):
            v[pc] = f.neg(a[i][c])
        kernel.append(tuple(v))
    return RrefResult(rank=r, reduced=reduced, kernel=tuple(kernel), pivots=tuple(pivots))


def rank(m: Mat) -> int:
    return rref(m).rank


def row_space(m: Mat) -> tuple[Mat, tuple[int, ...]]:
    """RREF basis (rows) of the row space of m, with its pivot columns."""
    res = rref(m)
    return Mat(m.field, res.rank, m.cols, res.reduced.data[:res.rank]), res.pivots


def column_space(m: Mat) -> tuple[Mat, tuple[int, ...]]:
    """RREF basis (rows) of the column space of m."""
    return row_space(m.transpose())


def kernel_space(m: Mat) -> tuple[Mat, tuple[int, ...]]:
    """RREF basis (rows) of the kernel of m."""
    res = rref(m)
    if not res.kernel:
        return Mat(m.field, 0, m.cols), ()
    return row_space(Mat.from_rows(m.field, res.kernel, m.cols))


def reduce_against(basis: Mat, pivots: Sequence[int], vec: Sequence[int]):
    """Reduce vec against an RREF row basis.

    Returns (coords, residual): coords over the basis rows and the residual
    after subtracting the projection; vec is in the row space iff the
    residual is zero.
    """
    f = basis.field
    v = list(vec)
    coords = []
    for i, pc in enumerate(pivots):
        c = v[pc]
        coords.append(c)
        if c:
            row = basis.data[i]
            v = [f.sub(x, f.mul(c, y)) for x, y in zip(v, row)]
    return tuple(coords), tuple(v)


def in_row_space(basis: Mat, pivots: Sequence[int], vec: Sequence[int]) -> bool:
    _, residual = reduce_against(basis, pivots, vec)
    return not any(residual)


def solve(a: Mat, rhs_cols: Mat):
    """One solution X of a @ X = rhs_cols, or None if inconsistent.

    Free variables are set to zero, which makes the solution deterministic.
    """
    f = a.field
    aug = Mat(f, a.rows, a.cols + rhs_cols.cols,
              [list(r1) + list(r2) for r1, r2 in zip(a.data, rhs_cols.data)])
    res = rref(aug)
    for i in range(res.rank):
        p = res.pivots[i]
        if p >= a.cols:
            return None
    x = Mat(f, a.cols, rhs_cols.cols)
    for i, p in enumerate(res.pivots):
        for j in range(rhs_cols.cols):
            x.data[p][j] = res.reduced.data[i][a.cols + j]
    return x


def invertible(m: Mat) -> bool:
    return m.rows == m.cols and rank(m) == m.rows


# ---------------------------------------------------------------------------
# Subspace enumeration
# ---------------------------------------------------------------------------

def gaussian_binomial(d: int, s: int, q: int) -> int:
    """Number of s-dimensional subspaces of F_q^d (product formula)."""
    if s < 0 or s > d:
        return 0
    num = den = 1
    for i in range(s):
        num *= q ** (d - i) - 1
        den *= q ** (i + 1) - 1
    assert num % den == 0
    return num // den


def enumerate_subspaces(ctx: FieldCtx, ambient_dim: int, sub_dim: int) -> Iterator[Mat]:
    """All sub_dim-dimensional subspaces of ctx^ambient_dim, each exactly once.

    Subspaces are represented canonically by their RREF basis matrix
    (sub_dim x ambient_dim, rows are basis vectors).  Enumeration order is
    deterministic: pivot column sets lexicographically, then free entries.
    """
    for mat, _pivots in subspaces_with_pivots(ctx, ambient_dim, sub_dim):
        yield mat


_SUBSPACE_CACHE: dict = {}


def subspaces_with_pivots(ctx: FieldCtx, d: int, s: int):
    """Cached tuple of (RREF basis Mat, pivot columns) for all s-subspaces."""
    if s < 0 or s > d:
        raise DimensionError("subspace dimension %d out of range for ambient %d" % (s, d))
    key = (ctx.p, ctx.n, d, s)
    cached = _SUBSPACE_CACHE.get(key)
    if cached is not None:
        return cached
    out = []
    if s == 0:
        out.append((Mat(ctx, 0, d), ()))
    else:
        for pivots in itertools.combinations(range(d), s):
            piv_set = set(pivots)
            free = [(i, j) for i in range(s) for j in range(d)
                    if j > pivots[i] and j not in piv_set]
            for values in itertools.product(ctx.elements(), repeat=len(free)):
                m = Mat(ctx, s, d)
                for i, p in enumerate(pivots):
                    m.data[i][p] = 1
                for (i, j), v in zip(free, values):
                    m.data[i][j] = v
                out.append((m, pivots))
    result = tuple(out)
    _SUBSPACE_CACHE[key] = result
    return result


def all_matrices(ctx: FieldCtx, rows: int, cols: int):
    """Cached tuple of every rows x cols matrix over ctx (lexicographic)."""
    key = ("mats", ctx.p, ctx.n, rows, cols)
    cached = _SUBSPACE_CACHE.get(key)
    if cached is not None:
        return cached
    out = []
    for entries in itertools.product(ctx.elements(), repeat=rows * cols):
        out.append(Mat(ctx, rows, cols,
                       [entries[i * cols:(i + 1) * cols] for i in range(rows)]))
    result = tuple(out)
    _SUBSPACE_CACHE[key] = result
    return result


# ---------------------------------------------------------------------------
# Minimal polynomials of matrices (used for residue field degrees)
# ---------------------------------------------------------------------------

def matrix_minpoly(m: Mat) -> tuple[int, ...]:
    """Monic minimal polynomial of a square matrix, low degree first."""
    f = m.field
    size = m.rows
    dim = size * size
    power = Mat.identity(f, size)
    flat_rows = []
    powers = [power]
    while True:
        flat_rows.append([a for r in powers[-1].data for a in r] or [0])
        # does the newest power depend linearly on the previous ones?
        k = len(flat_rows) - 1
        if k >= 1:
            a = Mat(f, dim if dim else 1, k,
                    [[flat_rows[j][i] for j in range(k)] for i in range(max(dim, 1))])
            b = Mat(f, dim if dim else 1, 1, [[flat_rows[k][i]] for i in range(max(dim, 1))])
            x = solve(a, b)
            if x is not None:
                coeffs = [f.neg(x.data[j][0]) for j in range(k)] + [1]
                return poly_trim(coeffs)
        powers.append(powers[-1] @ m)


def least_irreducible_factor(field: FieldCtx, f: Sequence[int]) -> tuple[int, ...]:
    """A lowest-degree monic irreducible factor of f (deg f >= 1)."""
    f = poly_trim(f)
    deg = len(f) - 1
    for d in range(1, deg + 1):
        for g in monic_polys(field, d):
            _, rem = poly_divmod(field, f, g)
            if not rem:
                return g
    raise AssertionError("polynomial of degree >= 1 must have an irreducible factor")
