"""Submodule counting and Hall polynomial fitting.

For a module M and iso classes N, L (given as catalog label multisets) the
Hall number counts submodules U of M with U isomorphic to L and M/U
isomorphic to N.  Counting runs over every conservative extension degree
requested, and an integer polynomial is fitted to the (field order, count)
points by exact rational interpolation with mandatory validation points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from . import gf, repcat
from .errors import BudgetExceededError, MixedContextError
from .gf import Mat, make_field
from .presentation import BoundQuiverAlgebra, Rep
from .repcat import (
    DEFAULT_CANDIDATE_CAP,
    DEFAULT_IDEMPOTENT_CAP,
    IndecCatalog,
    decompose,
    list_indecomposables,
    quotient_rep,
    sub_rep,
)

Labels = tuple[str, ...]

STATUS_FITTED = "Fitted"
STATUS_VALIDATION_FAILED = "ValidationFailed"
STATUS_INSUFFICIENT = "InsufficientPoints"


# ---------------------------------------------------------------------------
# Submodule enumeration
# ---------------------------------------------------------------------------

def _vertex_order(quiver) -> list[int]:
    """0-based vertex order, topological where the quiver permits (Kahn);
    vertices on cycles are appended in index order."""
    n = quiver.vertex_count
    indeg = [0] * n
    for a in quiver.arrows:
        if a.source != a.target:
            indeg[a.target - 1] += 1
    order = []
    placed = [False] * n
    avail = sorted(v for v in range(n) if indeg[v] == 0)
    while avail:
        v = avail.pop(0)
        order.append(v)
        placed[v] = True
        for a in quiver.arrows:
            if a.source - 1 == v and not placed[a.target - 1] and a.source != a.target:
                indeg[a.target - 1] -= 1
                if indeg[a.target - 1] == 0:
                    avail.append(a.target - 1)
                    avail.sort()
    order.extend(v for v in range(n) if not placed[v])
    return order


def candidate_tuple_count(M: Rep) -> int:
    """Unpruned number of per-vertex subspace tuples for M."""
    total = 1
    for d in M.dims:
        total *= sum(gf.gaussian_binomial(d, s, M.field.order) for s in range(d + 1))
    return total


def submodules(M: Rep, candidate_cap: int = DEFAULT_CANDIDATE_CAP):
    """All submodules of M, as per-vertex (RREF basis, pivots) tuples.

    Iterates dimension sub-vectors; within each, subspaces are assigned
    vertex by vertex (arrow sources before targets where the orientation
    permits) and any partial tuple violating arrow stability is pruned.
    On cycles the violated arrows are simply checked once both endpoints
    are assigned, which degenerates to filter-after-enumerate.
    """
    total = candidate_tuple_count(M)
    if total > candidate_cap:
        raise BudgetExceededError(
            "submodule enumeration needs %d candidate tuples (cap %d)"
            % (total, candidate_cap), dims=M.dims)
    quiver = M.algebra.quiver
    order = _vertex_order(quiver)
    position = {v: k for k, v in enumerate(order)}
    ready: list[list[int]] = [[] for _ in order]
    for ai, a in enumerate(quiver.arrows):
        k = max(position[a.source - 1], position[a.target - 1])
        ready[k].append(ai)
    field = M.field
    nv = quiver.vertex_count
    assignment: list = [None] * nv

    def stable(ai: int) -> bool:
        a = quiver.arrows[ai]
        am = M.mats[ai]
        bs, _ = assignment[a.source - 1]
        bt, pt = assignment[a.target - 1]
        for row in bs.data:
            _, residual = gf.reduce_against(bt, pt, am.apply(row))
            if any(residual):
                return False
        return True

    def rec(k: int, subdims):
        if k == nv:
            yield tuple(assignment)
            return
        v = order[k]
        for choice in gf.subspaces_with_pivots(field, M.dims[v], subdims[v]):
            assignment[v] = choice
            if all(stable(ai) for ai in ready[k]):
                yield from rec(k + 1, subdims)

    for subdims in product(*(range(d + 1) for d in M.dims)):
        yield from rec(0, subdims)


def submodule_count(M: Rep, candidate_cap: int = DEFAULT_CANDIDATE_CAP) -> int:
    return sum(1 for _ in submodules(M, candidate_cap))


# ---------------------------------------------------------------------------
# Hall numbers
# ---------------------------------------------------------------------------

def submodule_profile(M: Rep, catalog: IndecCatalog,
                      candidate_cap: int = DEFAULT_CANDIDATE_CAP,
                      idempotent_cap: int = DEFAULT_IDEMPOTENT_CAP) -> dict:
    """Counts of every (quotient class, submodule class) pair of M.

    Keys are (N labels, L labels), both sorted tuples; values sum to the
    number of submodules.  Cached on the catalog.
    """
    if M.algebra != catalog.algebra or M.field != catalog.field:
        raise MixedContextError("module does not match the catalog context")
    key = M.encode()
    cached = catalog._profiles.get(key)
    if cached is not None:
        return cached
    profile: dict = {}
    for bases in submodules(M, candidate_cap):
        sub_labels = decompose(sub_rep(M, bases), catalog, idempotent_cap)
        quot_labels = decompose(quotient_rep(M, bases), catalog, idempotent_cap)
        pair = (quot_labels, sub_labels)
        profile[pair] = profile.get(pair, 0) + 1
    catalog._profiles[key] = profile
    return profile


def hall_number(M: Rep, N_labels, L_labels, catalog: IndecCatalog,
                candidate_cap: int = DEFAULT_CANDIDATE_CAP,
                idempotent_cap: int = DEFAULT_IDEMPOTENT_CAP) -> int:
    """F^M_{N,L}: submodules U of M with U = L and M/U = N (up to iso)."""
    N_labels = tuple(sorted(N_labels))
    L_labels = tuple(sorted(L_labels))
    want = tuple(a + b for a, b in zip(catalog.dims_of_labels(N_labels),
                                       catalog.dims_of_labels(L_labels)))
    if want != M.dims:
        return 0
    return submodule_profile(M, catalog, candidate_cap, idempotent_cap).get(
        (N_labels, L_labels), 0)


def conservative_degrees(catalog: IndecCatalog, n_max: int) -> tuple[int, ...]:
    """Extension degrees n <= n_max coprime to every residue degree in the
    catalog (the finite-field reading of conservativity: F_{q^d} tensor
    F_{q^n} is a field iff gcd(d, n) = 1)."""
    return tuple(n for n in range(1, n_max + 1)
                 if all(math.gcd(n, e.residue_degree) == 1 for e in catalog.entries))


# ---------------------------------------------------------------------------
# Integer polynomials and exact interpolation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntPolynomial:
    """Element of Z[T]; coefficients low degree first, trailing nonzero."""
    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(x) for x in c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x: int) -> int:
        out = 0
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            elif k == 1:
                body = "T" if mag == 1 else "%d*T" % mag
            else:
                body = "T^%d" % k if mag == 1 else "%d*T^%d" % (mag, k)
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)


ZERO_POLY = IntPolynomial(())


def lagrange_rational(points) -> list[Fraction]:
    """Exact interpolating polynomial through (x, y) points, coefficients
    low degree first, as rationals."""
    n = len(points)
    coeffs = [Fraction(0)] * n
    for i, (xi, yi) in enumerate(points):
        num = [Fraction(1)]
        den = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            nxt = [Fraction(0)] * (len(num) + 1)
            for k, c in enumerate(num):
                nxt[k] += c * Fraction(-xj)
                nxt[k + 1] += c
            num = nxt
            den *= xi - xj
        scale = Fraction(yi) / den
        for k, c in enumerate(num):
            coeffs[k] += c * scale
    return coeffs


def _fit_points(points, degree_cap: int):
    """Fit the smallest-degree integer polynomial through the first points
    that exactly validates on at least two remaining points.

    Returns (status, polynomial, fit_points, validation_points).
    """
    points = sorted(points)
    for deg in range(0, degree_cap + 1):
        if len(points) < deg + 3:
            return (STATUS_INSUFFICIENT, ZERO_POLY, tuple(points), ())
        head = points[:deg + 1]
        rat = lagrange_rational(head)
        if any(c.denominator != 1 for c in rat):
            continue
        poly = IntPolynomial(tuple(int(c) for c in rat))
        rest = points[deg + 1:]
        if all(poly(x) == y for x, y in rest):
            validation = tuple((x, y, poly(x)) for x, y in rest)
            return (STATUS_FITTED, poly, tuple(head), validation)
    return (STATUS_VALIDATION_FAILED, ZERO_POLY, tuple(points), ())


# ---------------------------------------------------------------------------
# Hall polynomial fits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HallFit:
    algebra: str
    prime: int
    m_labels: Labels
    n_labels: Labels
    l_labels: Labels
    fit_points: tuple
    validation_points: tuple
    polynomial: IntPolynomial
    conservative_degrees_used: tuple[int, ...]
    status: str

    def line(self) -> str:
        pts = " ".join("%d:%d" % (o, c) for o, c in
                       tuple(self.fit_points) + tuple((o, c) for o, c, _ in self.validation_points))
        return "%s | %s | %s | φ = %s | points = %s | %s" % (
            format_labels(self.m_labels), format_labels(self.n_labels),
            format_labels(self.l_labels), self.polynomial, pts or "-", self.status)


def format_labels(labels) -> str:
    return "+".join(labels) if labels else "0"


def parse_labels(text: str) -> Labels:
    text = text.strip()
    if not text or text == "0":
        return ()
    return tuple(sorted(part.strip() for part in text.split("+")))


def _check_degrees(catalog: IndecCatalog, degrees) -> tuple[int, ...]:
    degrees = tuple(sorted(set(int(n) for n in degrees)))
    if not degrees:
        raise ValueError("at least one extension degree is required")
    allowed = set(conservative_degrees(catalog, max(degrees)))
    bad = [n for n in degrees if n not in allowed]
    if bad:
        raise ValueError("degrees %r are not conservative for this catalog" % (bad,))
    return degrees


def degree_cap(total_dim_m: int) -> int:
    """Interpolation degree cap: the subspace count of a total_dim-space
    grows with this exponent, and submodule counts are bounded by it."""
    return (total_dim_m ** 2) // 4


def fit_hall_polynomial(alg: BoundQuiverAlgebra, p: int, M_labels, N_labels, L_labels,
                        degrees, catalog: IndecCatalog | None = None,
                        candidate_cap: int = DEFAULT_CANDIDATE_CAP,
                        idempotent_cap: int = DEFAULT_IDEMPOTENT_CAP,
                        dim_bound: int = 4) -> HallFit:
    """Fit the integer polynomial reproducing F^{M^E}_{N^E, L^E} across the
    requested conservative extension degrees of F_p.

    Counts are computed on base changes of the canonical prime-field
    representatives of the labels; fitting interpolates the smallest point
    prefix and validates exactly on at least two held-out points.
    """
    if catalog is None:
        catalog = list_indecomposables(alg, make_field(p), dim_bound,
                                       candidate_cap, idempotent_cap)
    M_labels = tuple(sorted(M_labels))
    N_labels = tuple(sorted(N_labels))
    L_labels = tuple(sorted(L_labels))
    degrees = _check_degrees(catalog, degrees)
    dims_m = catalog.dims_of_labels(M_labels)
    dims_nl = tuple(a + b for a, b in zip(catalog.dims_of_labels(N_labels),
                                          catalog.dims_of_labels(L_labels)))
    if dims_m != dims_nl:
        return HallFit(alg.name, p, M_labels, N_labels, L_labels, (), (),
                       ZERO_POLY, degrees, STATUS_FITTED)
    points = []
    for n in degrees:
        ext = catalog.extension(n)
        m_rep = ext.rep_from_labels(M_labels)
        count = hall_number(m_rep, N_labels, L_labels, ext,
                            candidate_cap, idempotent_cap)
        points.append((p ** n, count))
    status, poly, fitp, valp = _fit_points(points, degree_cap(sum(dims_m)))
    return HallFit(alg.name, p, M_labels, N_labels, L_labels, fitp, valp,
                   poly, degrees, status)


# ---------------------------------------------------------------------------
# Theorem verification sweep
# ---------------------------------------------------------------------------

def multisets_with_dims(catalog: IndecCatalog, target: tuple[int, ...]):
    """All label multisets with the exact dimension-vector sum, sorted."""
    entries = catalog.entries

    def rec(i, remaining):
        if i == len(entries):
            if not any(remaining):
                yield ()
            return
        dims = entries[i].rep.dims
        copies = 0
        rem = remaining
        while True:
            for rest in rec(i + 1, rem):
                yield (entries[i].label,) * copies + rest
            if all(r >= d for r, d in zip(rem, dims)) and any(dims):
                rem = tuple(r - d for r, d in zip(rem, dims))
                copies += 1
            else:
                return

    return sorted(tuple(sorted(ms)) for ms in rec(0, target))


@dataclass(frozen=True)
class TripleResult:
    m_labels: Labels
    n_labels: Labels
    l_labels: Labels
    fit: HallFit | None
    error: str | None

    def line(self) -> str:
        if self.error is not None:
            return "%s | %s | %s | ERROR %s" % (
                format_labels(self.m_labels), format_labels(self.n_labels),
                format_labels(self.l_labels), self.error)
        return self.fit.line()


@dataclass(frozen=True)
class TheoremReport:
    algebra: str
    prime: int
    dim_bound: int
    degrees: tuple[int, ...]
    include_sums: bool
    catalog_size: int
    triples: tuple[TripleResult, ...]

    def count(self, status: str) -> int:
        return sum(1 for t in self.triples if t.fit is not None and t.fit.status == status)

    @property
    def n_failed(self) -> int:
        return self.count(STATUS_VALIDATION_FAILED)

    @property
    def n_errors(self) -> int:
        return sum(1 for t in self.triples if t.error is not None)

    @property
    def budget_errors(self) -> int:
        return sum(1 for t in self.triples
                   if t.error is not None and t.error.startswith("BudgetExceeded"))

    def human_lines(self) -> list[str]:
        lines = [
            "# hall polynomial verification: %s, p=%d" % (self.algebra, self.prime),
            "# dim bound = %d (catalog bound: completeness is relative to it)"
            % self.dim_bound,
            "# degrees = %s  include sums = %s  catalog size = %d"
            % (",".join(str(n) for n in self.degrees),
               "yes" if self.include_sums else "no", self.catalog_size),
        ]
        lines.extend(t.line() for t in self.triples)
        lines.append("# triples=%d fitted=%d insufficient=%d failed=%d errors=%d"
                     % (len(self.triples), self.count(STATUS_FITTED),
                        self.count(STATUS_INSUFFICIENT), self.n_failed, self.n_errors))
        return lines

    def kv_lines(self) -> list[str]:
        lines = [
            "algebra = %s" % self.algebra,
            "prime = %d" % self.prime,
            "dim_bound = %d" % self.dim_bound,
            "degrees = %s" % ",".join(str(n) for n in self.degrees),
            "include_sums = %d" % int(self.include_sums),
            "catalog_size = %d" % self.catalog_size,
            "triples = %d" % len(self.triples),
            "fitted = %d" % self.count(STATUS_FITTED),
            "insufficient = %d" % self.count(STATUS_INSUFFICIENT),
            "failed = %d" % self.n_failed,
            "errors = %d" % self.n_errors,
        ]
        for i, t in enumerate(self.triples):
            prefix = "triple.%d" % i
            lines.append("%s.M = %s" % (prefix, format_labels(t.m_labels)))
            lines.append("%s.N = %s" % (prefix, format_labels(t.n_labels)))
            lines.append("%s.L = %s" % (prefix, format_labels(t.l_labels)))
            if t.error is not None:
                lines.append("%s.error = %s" % (prefix, t.error))
                continue
            lines.append("%s.phi = %s" % (prefix, t.fit.polynomial))
            pts = tuple(t.fit.fit_points) + tuple((o, c) for o, c, _ in t.fit.validation_points)
            lines.append("%s.points = %s" % (prefix, " ".join("%d:%d" % p for p in pts)))
            lines.append("%s.status = %s" % (prefix, t.fit.status))
        return lines


def verify_triples(catalog: IndecCatalog, dim_bound: int, include_sums: bool):
    """Deterministic list of (M, N, L) label multisets to test."""
    m_sets = [(e.label,) for e in catalog.entries]
    if include_sums:
        labels = [e.label for e in catalog.entries]
        for i in range(len(labels)):
            for j in range(i, len(labels)):
                pair = tuple(sorted((labels[i], labels[j])))
                if sum(catalog.dims_of_labels(pair)) <= dim_bound:
                    m_sets.append(pair)
    m_sets.sort(key=lambda ms: (sum(catalog.dims_of_labels(ms)), ms))
    triples = []
    for m_labels in m_sets:
        dims_m = catalog.dims_of_labels(m_labels)
        for n_labels in multisets_with_dims_at_most(catalog, dims_m):
            rest = tuple(a - b for a, b in zip(dims_m, catalog.dims_of_labels(n_labels)))
            for l_labels in multisets_with_dims(catalog, rest):
                triples.append((m_labels, n_labels, l_labels))
    return triples


def multisets_with_dims_at_most(catalog: IndecCatalog, bound: tuple[int, ...]):
    """All label multisets with dimension vector componentwise <= bound."""
    out = []
    for target in product(*(range(b + 1) for b in bound)):
        out.extend(multisets_with_dims(catalog, target))
    return sorted(set(out))


def verify_theorem(alg: BoundQuiverAlgebra, p: int, dim_bound: int, degrees,
                   include_sums: bool = False,
                   candidate_cap: int = DEFAULT_CANDIDATE_CAP,
                   idempotent_cap: int = DEFAULT_IDEMPOTENT_CAP) -> TheoremReport:
    """Fit a Hall polynomial for every dimension-compatible triple.

    M runs over the catalog entries (and, with include_sums, pairwise direct
    sums within the dim bound); N and L run over all label multisets whose
    dimension vectors sum to M's.  A ValidationFailed triple would falsify
    the polynomial-existence claim; per-triple errors are collected and the
    sweep continues.
    """
    field = make_field(p)
    catalog = list_indecomposables(alg, field, dim_bound, candidate_cap, idempotent_cap)
    degrees = _check_degrees(catalog, degrees)
    results = []
    for m_labels, n_labels, l_labels in verify_triples(catalog, dim_bound, include_sums):
        try:
            points = []
            for n in degrees:
                ext = catalog.extension(n)
                m_rep = ext.rep_from_labels(m_labels)
                profile = submodule_profile(m_rep, ext, candidate_cap, idempotent_cap)
                points.append((p ** n, profile.get((n_labels, l_labels), 0)))
            cap = degree_cap(sum(catalog.dims_of_labels(m_labels)))
            status, poly, fitp, valp = _fit_points(points, cap)
            fit = HallFit(alg.name, p, m_labels, n_labels, l_labels, fitp, valp,
                          poly, degrees, status)
            results.append(TripleResult(m_labels, n_labels, l_labels, fit, None))
        except BudgetExceededError as exc:
            results.append(TripleResult(m_labels, n_labels, l_labels, None,
                                        "BudgetExceeded: %s" % exc))
        except Exception as exc:  # aggregated per spec; the sweep continues
            results.append(TripleResult(m_labels, n_labels, l_labels, None,
                                        "%s: %s" % (type(exc).__name__, exc)))
    return TheoremReport(alg.name, p, dim_bound, degrees, include_sums,
                         len(catalog.entries), tuple(results))
