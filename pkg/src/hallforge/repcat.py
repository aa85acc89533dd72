"""The module category of a bound quiver algebra at desk scale.

Hom/End/Ext^1, direct sums, isomorphism testing, decomposition into
indecomposables, catalogs of indecomposables, the Auslander-Reiten
translate, stable Hom modulo injectives, base change and residue field
degrees.  Everything is exact; budgets guard the few search-based
decisions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from . import gf
from .errors import (
    BudgetExceededError,
    CharacteristicMismatchError,
    MixedContextError,
    NotInCatalogError,
    NotIndecomposableError,
    NotPrimeBaseError,
    UndecidableError,
    ZeroModuleError,
)
from .gf import FieldCtx, Mat, make_field
from .presentation import (
    BoundQuiverAlgebra,
    Rep,
    dual_of_opposite,
    eval_element,
    eval_path,
    injective,
    make_rep,
    projective,
    simple,
    zero_rep,
)

DEFAULT_IDEMPOTENT_CAP = 10 ** 6
DEFAULT_CANDIDATE_CAP = 10 ** 7

__all__ = [
    "Rep", "HomBasis", "IndecCatalog", "CatalogEntry", "Presentation",
    "make_rep", "zero_rep",
    "hom_basis", "hom_dim", "direct_sum", "direct_sum_many", "sub_rep",
    "quotient_rep", "is_isomorphic", "is_indecomposable", "fitting_decompose",
    "decompose", "list_indecomposables", "min_projective_presentation",
    "ext1_dim", "tau", "stable_hom_dim", "base_change", "residue_degree",
    "module_to_text", "parse_module",
]


def _same_context(M: Rep, N: Rep) -> None:
    if M.algebra != N.algebra:
        raise MixedContextError("modules live over different algebras")
    if M.field != N.field:
        raise MixedContextError("modules live over different fields")


# ---------------------------------------------------------------------------
# Hom spaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HomBasis:
    source: Rep
    target: Rep
    basis: tuple[tuple[Mat, ...], ...]  # each element: one matrix per vertex
    dim: int


def _hom_system(M: Rep, N: Rep):
    """Linear system for intertwiners f: M -> N.

    Unknowns are the entries of the vertex matrices f_v (N.dims[v] x
    M.dims[v], row-major), blocks in vertex order.  Returns (system matrix,
    per-vertex offsets, total unknowns).
    """
    f = M.field
    nv = M.algebra.quiver.vertex_count
    offsets = []
    total = 0
    for v in range(nv):
        offsets.append(total)
        total += N.dims[v] * M.dims[v]
    rows = []
    for a, AM, AN in zip(M.algebra.quiver.arrows, M.mats, N.mats):
        s, t = a.source - 1, a.target - 1
        for i in range(N.dims[t]):
            for j in range(M.dims[s]):
                row = [0] * total
                for k in range(M.dims[t]):
                    c = AM.data[k][j]
                    if c:
                        idx = offsets[t] + i * M.dims[t] + k
                        row[idx] = f.add(row[idx], c)
                for k in range(N.dims[s]):
                    c = AN.data[i][k]
                    if c:
                        idx = offsets[s] + k * M.dims[s] + j
                        row[idx] = f.sub(row[idx], c)
                rows.append(row)
    return Mat(f, len(rows), total, rows), offsets, total


def hom_dim(M: Rep, N: Rep) -> int:
    """dim_k Hom(M, N), without materializing a basis."""
    _same_context(M, N)
    system, _, total = _hom_system(M, N)
    if total == 0:
        return 0
    return total - gf.rank(system)


def hom_basis(M: Rep, N: Rep) -> HomBasis:
    """A basis of Hom(M, N) as vertex-matrix tuples."""
    _same_context(M, N)
    system, offsets, total = _hom_system(M, N)
    if total == 0:
        return HomBasis(M, N, (), 0)
    res = gf.rref(system)
    basis = []
    nv = M.algebra.quiver.vertex_count
    for vec in res.kernel:
        mats = []
        for v in range(nv):
            r, c = N.dims[v], M.dims[v]
            block = [[vec[offsets[v] + i * c + j] for j in range(c)] for i in range(r)]
            mats.append(Mat(M.field, r, c, block))
        basis.append(tuple(mats))
    return HomBasis(M, N, tuple(basis), len(basis))


def _hom_compose(f: tuple[Mat, ...], g: tuple[Mat, ...]) -> tuple[Mat, ...]:
    return tuple(a @ b for a, b in zip(f, g))


def _hom_add(f, g):
    return tuple(a.add(b) for a, b in zip(f, g))


def _hom_scale(f, c):
    return tuple(a.scale(c) for a in f)


def _identity_hom(M: Rep) -> tuple[Mat, ...]:
    return tuple(Mat.identity(M.field, d) for d in M.dims)


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------

def direct_sum(M: Rep, N: Rep) -> Rep:
    _same_context(M, N)
    dims = tuple(a + b for a, b in zip(M.dims, N.dims))
    mats = tuple(gf.block_diag(M.field, [m1, m2]) for m1, m2 in zip(M.mats, N.mats))
    return Rep(M.algebra, M.field, dims, mats)


def direct_sum_many(algebra: BoundQuiverAlgebra, field: FieldCtx, reps) -> Rep:
    out = zero_rep(algebra, field)
    for r in reps:
        out = direct_sum(out, r)
    return out


def sub_rep(M: Rep, bases) -> Rep:
    """Restrict M to an arrow-stable family of subspaces.

    ``bases`` holds one (RREF row basis, pivot columns) pair per vertex.
    """
    dims = tuple(b.rows for b, _ in bases)
    mats = []
    for a, am in zip(M.algebra.quiver.arrows, M.mats):
        s, t = a.source - 1, a.target - 1
        bs, _ = bases[s]
        bt, pt = bases[t]
        m = Mat(M.field, dims[t], dims[s])
        for col in range(bs.rows):
            coords, residual = gf.reduce_against(bt, pt, am.apply(bs.data[col]))
            if any(residual):
                raise ValueError("subspaces are not arrow stable")
            for i, c in enumerate(coords):
                m.data[i][col] = c
        mats.append(m)
    return Rep(M.algebra, M.field, dims, tuple(mats))


def quotient_rep(M: Rep, bases) -> Rep:
    """Quotient of M by an arrow-stable family of subspaces.

    Complement coordinates are the non-pivot positions of each RREF basis.
    """
    comp = []
    for (b, piv), d in zip(bases, M.dims):
        piv_set = set(piv)
        comp.append([j for j in range(d) if j not in piv_set])
    dims = tuple(len(c) for c in comp)
    mats = []
    for a, am in zip(M.algebra.quiver.arrows, M.mats):
        s, t = a.source - 1, a.target - 1
        bt, pt = bases[t]
        m = Mat(M.field, dims[t], dims[s])
        for col, j in enumerate(comp[s]):
            vec = am.column(j)
            _, residual = gf.reduce_against(bt, pt, vec)
            for i, jj in enumerate(comp[t]):
                m.data[i][col] = residual[jj]
        mats.append(m)
    return Rep(M.algebra, M.field, dims, tuple(mats))


def base_change(M: Rep, E: FieldCtx) -> Rep:
    """Read the module over an extension field (entries embed identically)."""
    if E.p != M.field.p:
        raise CharacteristicMismatchError(
            "cannot base change from characteristic %d to %d" % (M.field.p, E.p))
    if not M.field.is_prime_field:
        raise NotPrimeBaseError("base change starts from the prime field")
    if E == M.field:
        return M
    mats = tuple(Mat(E, m.rows, m.cols, m.data) for m in M.mats)
    return Rep(M.algebra, E, M.dims, mats)


# ---------------------------------------------------------------------------
# Isomorphism and decomposition
# ---------------------------------------------------------------------------

def _direct_isomorphic(M: Rep, N: Rep, idempotent_cap: int) -> bool:
    """Search Hom(M, N) exhaustively for an invertible element."""
    hb = hom_basis(M, N)
    if hb.dim == 0:
        return M.total_dim == 0
    q = M.field.order
    if q ** hb.dim > idempotent_cap:
        raise UndecidableError(
            "isomorphism search space %d^%d exceeds the budget; supply a catalog "
            "or raise the budget" % (q, hb.dim))
    for coeffs in product(M.field.elements(), repeat=hb.dim):
        if not any(coeffs):
            continue
        cand = None
        for c, b in zip(coeffs, hb.basis):
            if c == 0:
                continue
            term = _hom_scale(b, c)
            cand = term if cand is None else _hom_add(cand, term)
        if all(gf.invertible(m) for m in cand):
            return True
    return False


def _find_registered_catalog(algebra, field, need_bound):
    best = None
    for (order, bound), cat in sorted(algebra._catalogs.items()):
        if order == field.order and bound >= need_bound:
            if best is None or bound < best.dim_bound:
                best = cat
    return best


def is_isomorphic(M: Rep, N: Rep, catalog: "IndecCatalog | None" = None,
                  idempotent_cap: int = DEFAULT_IDEMPOTENT_CAP) -> bool:
    """Exact isomorphism test.

    Dimension vectors first; then Hom fingerprints against a catalog that
    covers both modules (sound and complete once the catalog contains every
    indecomposable up to the bound); finally exhaustive invertible-hom
    search within the budget.
    """
    _same_context(M, N)
    if M.dims != N.dims:
        return False
    if M.total_dim == 0:
        return True
    need = max(M.total_dim, N.total_dim)
    cat = catalog
    if cat is not None and (cat.dim_bound < need or cat.field != M.field
                            or cat.algebra != M.algebra):
        cat = None
    if cat is None:
        cat = _find_registered_catalog(M.algebra, M.field, need)
    if cat is not None:
        return cat.fingerprint(M) == cat.fingerprint(N)
    return _direct_isomorphic(M, N, idempotent_cap)


def _stable_power(f: tuple[Mat, ...], total: int) -> tuple[Mat, ...]:
    """f^(2^k) for the first 2^k >= total, where kernels have stabilized."""
    g = f
    k = 1
    while k < total:
        g = _hom_compose(g, g)
        k *= 2
    return g


def _split_along(M: Rep, g: tuple[Mat, ...]):
    """Split M = ker(g) + im(g) if the split is nontrivial, else None."""
    ker_bases = [gf.kernel_space(m) for m in g]
    ker_total = sum(b.rows for b, _ in ker_bases)
    if ker_total == 0 or ker_total == M.total_dim:
        return None
    im_bases = [gf.column_space(m) for m in g]
    return sub_rep(M, ker_bases), sub_rep(M, im_bases)


def find_split(M: Rep, idempotent_cap: int = DEFAULT_IDEMPOTENT_CAP):
    """A nontrivial direct sum decomposition M = A + B, or None.

    Fitting splits over an End(M) basis and its pairwise sums, then an
    exhaustive idempotent search bounded by field_order^dim End.
    """
    if M.total_dim == 0:
        raise ZeroModuleError("cannot split the zero module")
    end = hom_basis(M, M)
    if end.dim == 1:
        return None
    total = M.total_dim
    candidates = list(end.basis)
    for f1, f2 in combinations(end.basis, 2):
        candidates.append(_hom_add(f1, f2))
    for f in candidates:
        split = _split_along(M, _stable_power(f, total))
        if split is not None:
            return split
    q = M.field.order
    if q ** end.dim > idempotent_cap:
        raise UndecidableError(
            "idempotent search space %d^%d exceeds the budget" % (q, end.dim))
    ident = _identity_hom(M)
    for coeffs in product(M.field.elements(), repeat=end.dim):
        e = None
        for c, b in zip(coeffs, end.basis):
            if c == 0:
                continue
            term = _hom_scale(b, c)
            e = term if e is None else _hom_add(e, term)
        if e is None or e == ident:
            continue
        if _hom_compose(e, e) == e:
            split = _split_along(M, e)
            if split is not None:
                return split
    return None


def is_indecomposable(M: Rep, idempotent_cap: int = DEFAULT_IDEMPOTENT_CAP) -> bool:
    """True iff End(M) is local (no idempotents besides 0 and 1)."""
    if M.total_dim == 0:
        raise ZeroModuleError("the zero module is not indecomposable")
    return find_split(M, idempotent_cap) is None


def fitting_decompose(M: Rep, idempotent_cap: int = DEFAULT_IDEMPOTENT_CAP):
    """Indecomposable summands of M via recursive Fitting splits."""
    if M.total_dim == 0:
        return ()
    split = find_split(M, idempotent_cap)
    if split is None:
        return (M,)
    a, b = split
    return fitting_decompose(a, idempotent_cap) + fitting_decompose(b, idempotent_cap)


# ---------------------------------------------------------------------------
# Catalogs of indecomposables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CatalogEntry:
    label: str
    rep: Rep
    residue_degree: int


class IndecCatalog:
    """All indecomposables of total dimension <= dim_bound, labelled
    deterministically, with cached Hom fingerprints."""

    def __init__(self, algebra, field, dim_bound, entries):
        self.algebra = algebra
        self.field = field
        self.dim_bound = dim_bound
        self.entries = tuple(entries)
        self._by_label = {e.label: e for e in self.entries}
        self._gram = [[hom_dim(a.rep, b.rep) for b in self.entries] for a in self.entries]
        self._gram_inv = _invert_integer_matrix(self._gram)
        self._extensions: dict[int, "IndecCatalog"] = {1: self}
        self._rep_cache: dict[tuple, Rep] = {}
        self._profiles: dict = {}
        algebra._catalogs[(field.order, dim_bound)] = self

    def labels(self) -> tuple[str, ...]:
        return tuple(e.label for e in self.entries)

    def entry(self, label: str) -> CatalogEntry:
        try:
            return self._by_label[label]
        except KeyError:
            raise NotInCatalogError("no catalog entry labelled %r" % label) from None

    def fingerprint(self, M: Rep) -> tuple[int, ...]:
        """dim Hom(C, M) for every catalog entry C."""
        return tuple(hom_dim(e.rep, M) for e in self.entries)

    def multiplicities(self, fingerprint):
        """Entry multiplicities with that fingerprint, or None if the
        fingerprint does not come from a sum of catalog entries."""
        if self._gram_inv is None:
            return None
        out = []
        for row in self._gram_inv:
            v = sum(c * f for c, f in zip(row, fingerprint))
            if v.denominator != 1 or v < 0:
                return None
            out.append(int(v))
        return tuple(out)

    def identify(self, M: Rep) -> str:
        """Label of the unique entry isomorphic to an indecomposable M."""
        fp = None
        cands = []
        for i, e in enumerate(self.entries):
            if e.rep.dims != M.dims:
                continue
            if fp is None:
                fp = self.fingerprint(M)
            if tuple(self._gram[j][i] for j in range(len(self.entries))) == fp:
                cands.append(e)
        if len(cands) == 1:
            return cands[0].label
        for e in cands:
            if _direct_isomorphic(M, e.rep, DEFAULT_IDEMPOTENT_CAP):
                return e.label
        raise NotInCatalogError(
            "summand with dimension vector %r matches no catalog entry" % (M.dims,))

    def rep_from_labels(self, labels) -> Rep:
        """Canonical representative of a label multiset (block order sorted)."""
        key = tuple(sorted(labels))
        cached = self._rep_cache.get(key)
        if cached is None:
            cached = direct_sum_many(self.algebra, self.field,
                                     [self.entry(l).rep for l in key])
            self._rep_cache[key] = cached
        return cached

    def dims_of_labels(self, labels) -> tuple[int, ...]:
        dims = [0] * self.algebra.quiver.vertex_count
        for l in labels:
            for i, d in enumerate(self.entry(l).rep.dims):
                dims[i] += d
        return tuple(dims)

    def extension(self, n: int) -> "IndecCatalog":
        """The catalog over F_{p^n}, by base change of every entry.

        Requires n to be conservative (gcd 1 against every residue degree),
        which keeps entries indecomposable and pairwise non-isomorphic; Hom
        dimensions, and therefore the Gram matrix, are unchanged.
        """
        cached = self._extensions.get(n)
        if cached is not None:
            return cached
        if not self.field.is_prime_field:
            raise NotPrimeBaseError("extensions are taken from the prime-field catalog")
        for e in self.entries:
            if math.gcd(n, e.residue_degree) != 1:
                raise ValueError(
                    "degree %d is not conservative: gcd(%d, d(%s)=%d) != 1"
                    % (n, n, e.label, e.residue_degree))
        E = make_field(self.field.p, n)
        ext = IndecCatalog.__new__(IndecCatalog)
        ext.algebra = self.algebra
        ext.field = E
        ext.dim_bound = self.dim_bound
        ext.entries = tuple(CatalogEntry(e.label, base_change(e.rep, E), e.residue_degree)
                            for e in self.entries)
        ext._by_label = {e.label: e for e in ext.entries}
        ext._gram = self._gram
        ext._gram_inv = self._gram_inv
        ext._extensions = {n: ext}
        ext._rep_cache = {}
        ext._profiles = {}
        self.algebra._catalogs[(E.order, self.dim_bound)] = ext
        self._extensions[n] = ext
        return ext


def _invert_integer_matrix(g):
    """Exact inverse over the rationals, or None if singular."""
    n = len(g)
    if n == 0:
        return []
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(g)]
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, n) if a[i][c] != 0), None)
        if piv is None:
            return None
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(n):
            if i != r and a[i][c] != 0:
                t = a[i][c]
                a[i] = [x - t * y for x, y in zip(a[i], a[r])]
        r += 1
    return [row[n:] for row in a]


def decompose(M: Rep, catalog: IndecCatalog,
              idempotent_cap: int = DEFAULT_IDEMPOTENT_CAP) -> tuple[str, ...]:
    """The unique multiset of catalog labels whose direct sum is M.

    For modules within the catalog bound the multiplicities are read off the
    Hom fingerprint (exact, since the catalog is complete up to its bound and
    its Gram matrix is invertible); otherwise Fitting splits produce the
    summands, which are identified entry by entry.
    """
    if M.algebra != catalog.algebra or M.field != catalog.field:
        raise MixedContextError("module does not match the catalog context")
    if M.total_dim == 0:
        return ()
    if M.total_dim <= catalog.dim_bound:
        mult = catalog.multiplicities(catalog.fingerprint(M))
        if mult is not None and catalog.dims_of_labels(
                [e.label for e, m in zip(catalog.entries, mult) for _ in range(m)]) == M.dims:
            out = []
            for e, m in zip(catalog.entries, mult):
                out.extend([e.label] * m)
            return tuple(sorted(out))
    leaves = fitting_decompose(M, idempotent_cap)
    labels = sorted(catalog.identify(leaf) for leaf in leaves)
    expected = [0] * len(catalog.entries)
    for l in labels:
        expected[[e.label for e in catalog.entries].index(l)] += 1
    fp = catalog.fingerprint(M)
    accounted = tuple(sum(catalog._gram[i][j] * expected[j]
                          for j in range(len(catalog.entries)))
                      for i in range(len(catalog.entries)))
    if accounted != fp:
        raise NotInCatalogError("fingerprint accounting failed: some summand "
                                "lies outside the catalog")
    return tuple(labels)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _satisfies_relations(rep: Rep) -> bool:
    by_name = rep.algebra.quiver.arrow_by_name
    for rel in rep.algebra.relations:
        first = rel.terms[0][1]
        src = by_name[first[0]].source
        tgt = by_name[first[-1]].target
        acc = Mat(rep.field, rep.dims[tgt - 1], rep.dims[src - 1])
        for coeff, path in rel.terms:
            acc = acc.add(eval_path(rep, (src, path)).scale(coeff % rep.field.p))
        if not acc.is_zero():
            return False
    return True


def list_indecomposables(algebra: BoundQuiverAlgebra, field: FieldCtx, dim_bound: int,
                         candidate_cap: int = DEFAULT_CANDIDATE_CAP,
                         idempotent_cap: int = DEFAULT_IDEMPOTENT_CAP) -> IndecCatalog:
    """Brute-force catalog of every indecomposable with total dim <= dim_bound.

    For each dimension vector all relation-satisfying matrix tuples are
    enumerated (budgeted by candidate_cap), filtered to indecomposables and
    deduplicated.  Labels are assigned deterministically: entries sort by
    (total dim, dimension vector, matrix encoding) and are named after the
    simple / projective / injective they realize, in that precedence, with
    positional names X<k> for anything else.
    """
    arrows = algebra.quiver.arrows
    found: list[Rep] = []
    for total in range(1, dim_bound + 1):
        for dims in _compositions(total, algebra.quiver.vertex_count):
            entry_count = sum(dims[a.target - 1] * dims[a.source - 1] for a in arrows)
            if field.order ** entry_count > candidate_cap:
                raise BudgetExceededError(
                    "dimension vector %r needs %d^%d candidate tuples"
                    % (dims, field.order, entry_count), dims=dims)
            same_dims: list[Rep] = []
            choices = [gf.all_matrices(field, dims[a.target - 1], dims[a.source - 1])
                       for a in arrows]
            for mats in product(*choices):
                rep = Rep(algebra, field, dims, mats)
                if not _satisfies_relations(rep):
                    continue
                if not is_indecomposable(rep, idempotent_cap):
                    continue
                if any(_direct_isomorphic(rep, seen, idempotent_cap) for seen in same_dims):
                    continue
                same_dims.append(rep)
            found.extend(same_dims)
    found.sort(key=lambda r: (r.total_dim, r.dims, r.encode()))

    names: list[str] = []
    used: set[str] = set()
    canonical = []
    for i in algebra.quiver.vertices():
        canonical.append(("S%d" % i, simple(algebra, i, field)))
    for i in algebra.quiver.vertices():
        canonical.append(("P%d" % i, projective(algebra, i, field)))
    for i in algebra.quiver.vertices():
        canonical.append(("I%d" % i, injective(algebra, i, field)))
    for pos, rep in enumerate(found, start=1):
        label = None
        for cand_name, cand_rep in canonical:
            if cand_name in used or cand_rep.dims != rep.dims:
                continue
            if _direct_isomorphic(rep, cand_rep, idempotent_cap):
                label = cand_name
                break
        if label is None:
            label = "X%d" % pos
        used.add(label)
        names.append(label)

    entries = [CatalogEntry(name, rep, residue_degree(rep))
               for name, rep in zip(names, found)]
    return IndecCatalog(algebra, field, dim_bound, entries)


# ---------------------------------------------------------------------------
# Minimal projective presentations, Ext^1 and the AR translate
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Presentation:
    """Minimal projective presentation P1 -> P0 -> M -> 0.

    ``cover``/``syzygy`` are vertex matrices; ``syzygy_elements[(s, r)]`` is
    the algebra element (combination of basis paths from p0_vertices[s] to
    p1_vertices[r]) whose right action gives the (s, r) block of the map
    P1 -> P0.  ``syzygy_module`` is the kernel of the cover, so that
    0 -> syzygy_module -> P0 -> M -> 0 is exact and P1 covers the kernel.
    """
    module: Rep
    p0: Rep
    p1: Rep
    p0_vertices: tuple[int, ...]
    p1_vertices: tuple[int, ...]
    cover: tuple[Mat, ...]
    syzygy: tuple[Mat, ...]
    syzygy_elements: dict
    syzygy_module: Rep


def _proj_sum(algebra, field, vertex_list):
    """Direct sum of projectives at the listed vertices, plus per-summand
    fiber offsets: offsets[r][w-1] = start of summand r in the fiber at w."""
    reps = [projective(algebra, v, field) for v in vertex_list]
    total = direct_sum_many(algebra, field, reps)
    offsets = []
    acc = [0] * algebra.quiver.vertex_count
    for r in reps:
        offsets.append(tuple(acc))
        acc = [a + d for a, d in zip(acc, r.dims)]
    return total, offsets


def _top_lifts(M: Rep):
    """Per vertex: standard-basis lifts of a basis of M/rad M.

    rad M at vertex v is the sum of the images of the incoming arrow maps.
    """
    lifts = []
    for v in M.algebra.quiver.vertices():
        d = M.dims[v - 1]
        img_rows = []
        for a, m in zip(M.algebra.quiver.arrows, M.mats):
            if a.target == v:
                img_rows.extend(m.transpose().data)
        if img_rows:
            basis, piv = gf.row_space(Mat.from_rows(M.field, img_rows, d))
            piv_set = set(piv)
        else:
            piv_set = set()
        lifts.append([j for j in range(d) if j not in piv_set])
    return lifts


def _cover(M: Rep):
    """Minimal projective cover P -> M: summand vertices, the sum, offsets
    and the per-vertex cover matrices."""
    algebra, field = M.algebra, M.field
    lifts = _top_lifts(M)
    summands = []
    for v in algebra.quiver.vertices():
        for j in lifts[v - 1]:
            summands.append((v, j))
    p, offsets = _proj_sum(algebra, field, [v for v, _ in summands])
    path_action: dict = {}
    cover = []
    for w in algebra.quiver.vertices():
        m = Mat(field, M.dims[w - 1], p.dims[w - 1])
        for r, (v, j) in enumerate(summands):
            base = offsets[r][w - 1]
            for k, pth in enumerate(algebra.path_basis(v, w)):
                act = path_action.get(pth)
                if act is None:
                    act = eval_path(M, pth)
                    path_action[pth] = act
                col = act.column(j)
                for i in range(M.dims[w - 1]):
                    m.data[i][base + k] = col[i]
        cover.append(m)
    return [v for v, _ in summands], p, offsets, tuple(cover)


def min_projective_presentation(M: Rep) -> Presentation:
    """Minimal presentation: P0 covers M, P1 covers the kernel."""
    if M.total_dim == 0:
        raise ZeroModuleError("the zero module has no minimal presentation")
    key = (M.field.order, M.encode())
    cache = getattr(M.algebra, "_presentations", None)
    if cache is None:
        cache = M.algebra._presentations = {}
    if key in cache:
        return cache[key]
    algebra, field = M.algebra, M.field
    p0_vertices, p0, p0_offsets, cover = _cover(M)
    kernel_bases = [gf.kernel_space(m) for m in cover]
    K = sub_rep(p0, kernel_bases)
    if K.total_dim == 0:
        p1 = zero_rep(algebra, field)
        pres = Presentation(M, p0, p1, tuple(p0_vertices), (), cover,
                            tuple(Mat(field, d, 0) for d in p0.dims), {}, K)
        cache[key] = pres
        return pres
    p1_vertices, p1, p1_offsets, k_cover = _cover(K)
    syzygy = []
    for w_idx in range(algebra.quiver.vertex_count):
        incl = kernel_bases[w_idx][0].transpose()  # P0 fiber x K fiber
        syzygy.append(incl @ k_cover[w_idx])
    # read the algebra-element matrix off the generator columns
    elements: dict = {}
    for r, v in enumerate(p1_vertices):
        gen_paths = algebra.path_basis(v, v)
        gen_col = p1_offsets[r][v - 1] + gen_paths.index((v, ()))
        column = syzygy[v - 1].column(gen_col)
        for s, b in enumerate(p0_vertices):
            paths = algebra.path_basis(b, v)
            base = p0_offsets[s][v - 1]
            terms = tuple((paths[k], column[base + k])
                          for k in range(len(paths)) if column[base + k])
            if terms:
                elements[(s, r)] = terms
    pres = Presentation(M, p0, p1, tuple(p0_vertices), tuple(p1_vertices),
                        cover, tuple(syzygy), elements, K)
    cache[key] = pres
    return pres


def ext1_dim(M: Rep, N: Rep) -> int:
    """dim Ext^1(M, N), from the exact sequence 0 -> K -> P0 -> M -> 0.

    Ext^1(M, N) is Hom(K, N) modulo restrictions of maps P0 -> N; the
    restriction map has kernel Hom(M, N) and Hom(P0, N) has dimension
    sum of the fibers N_b over the cover vertices, so

        dim Ext^1 = dim Hom(K, N) - dim Hom(P0, N) + dim Hom(M, N).

    (The presentation-level cokernel Hom(P0,N) -> Hom(P1,N) would overcount
    whenever the syzygy K is not projective: maps P1 -> N that do not factor
    through K are not extensions.  With N injective that cokernel can be
    nonzero while Ext^1 must vanish.)
    """
    _same_context(M, N)
    if M.total_dim == 0:
        return 0
    pres = min_projective_presentation(M)
    K = pres.syzygy_module
    if K.total_dim == 0:
        return 0
    hom_p0 = sum(N.dims[v - 1] for v in pres.p0_vertices)
    return hom_dim(K, N) - hom_p0 + hom_dim(M, N)


def tau(M: Rep) -> Rep:
    """Auslander-Reiten translate D Tr M from the minimal presentation.

    Hom(-, Lambda) turns the presentation map into a map of opposite-algebra
    projectives given by the same elements with reversed paths; Tr is its
    cokernel and the final duality transposes back.
    """
    if M.total_dim == 0:
        raise ZeroModuleError("tau of the zero module")
    pres = min_projective_presentation(M)
    algebra, field = M.algebra, M.field
    if not pres.p1_vertices:
        return zero_rep(algebra, field)
    op = algebra.opposite()
    # reversed elements: block (r, s) of the transposed map acts on the left
    psi: dict = {}
    for (s, r), terms in pres.syzygy_elements.items():
        acc: dict = {}
        for path, coeff in terms:
            tgt = algebra.path_target(path)
            for rp, c in op.reduce_path((tgt, tuple(reversed(path[1])))):
                acc[rp] = field.add(acc.get(rp, 0), field.mul(coeff, c))
        cleaned = tuple((p, c) for p, c in sorted(acc.items(),
                                                  key=lambda kv: (len(kv[0][1]), kv[0]))
                        if c)
        if cleaned:
            psi[(r, s)] = cleaned
    dst, dst_off = _proj_sum(op, field, list(pres.p1_vertices))
    image_cols: list[list] = [[] for _ in range(op.quiver.vertex_count)]
    for w in op.quiver.vertices():
        for s, b in enumerate(pres.p0_vertices):
            for qpath in op.path_basis(b, w):
                col = [0] * dst.dims[w - 1]
                for r, a_vertex in enumerate(pres.p1_vertices):
                    terms = psi.get((r, s))
                    if not terms:
                        continue
                    prod = op.elem_mul(terms, ((qpath, 1),))
                    basis = op.path_basis(a_vertex, w)
                    index = {p: k for k, p in enumerate(basis)}
                    base = dst_off[r][w - 1]
                    for p, c in prod:
                        col[base + index[p]] = field.add(col[base + index[p]], c)
                image_cols[w - 1].append(col)
    image_bases = []
    for w_idx in range(op.quiver.vertex_count):
        if image_cols[w_idx]:
            image_bases.append(gf.row_space(
                Mat.from_rows(field, image_cols[w_idx], dst.dims[w_idx])))
        else:
            image_bases.append((Mat(field, 0, dst.dims[w_idx]), ()))
    coker = quotient_rep(dst, image_bases)
    return dual_of_opposite(algebra, coker, field)


# ---------------------------------------------------------------------------
# Stable Hom modulo injectives
# ---------------------------------------------------------------------------

def _socle_bases(M: Rep):
    """Per vertex, an RREF basis of the socle (joint kernel of the outgoing
    arrow actions)."""
    out = []
    for v in M.algebra.quiver.vertices():
        d = M.dims[v - 1]
        rows = []
        for a, m in zip(M.algebra.quiver.arrows, M.mats):
            if a.source == v:
                rows.extend(m.data)
        if rows:
            basis, piv = gf.kernel_space(Mat.from_rows(M.field, rows, d))
        else:
            basis, piv = Mat.identity(M.field, d), tuple(range(d))
        out.append((basis, piv))
    return out


def injective_envelope(M: Rep):
    """The injective envelope I of M and an embedding iota: M -> I.

    I is the sum of injectives matching the socle; iota solves the
    intertwining equations with the socle pinned to the canonical socle
    coordinates of I (solvable because I is injective, injective because
    the socle embeds)."""
    algebra, field = M.algebra, M.field
    op = algebra.opposite()
    socles = _socle_bases(M)
    summands = []
    for v in algebra.quiver.vertices():
        basis, _ = socles[v - 1]
        for j in range(basis.rows):
            summands.append((v, tuple(basis.data[j])))
    reps = [injective(algebra, v, field) for v, _ in summands]
    env = direct_sum_many(algebra, field, reps)
    offsets = []
    acc = [0] * algebra.quiver.vertex_count
    for r in reps:
        offsets.append(tuple(acc))
        acc = [a + d for a, d in zip(acc, r.dims)]
    if env.total_dim == 0:
        return env, tuple(Mat(field, 0, d) for d in M.dims)
    system, offs, total = _hom_system(M, env)
    extra_rows = []
    rhs = []
    for r, (v, soc_vec) in enumerate(summands):
        gen_paths = op.path_basis(v, v)
        pin = offsets[r][v - 1] + gen_paths.index((v, ()))
        dI, dM = env.dims[v - 1], M.dims[v - 1]
        for i in range(dI):
            row = [0] * total
            for k in range(dM):
                if soc_vec[k]:
                    row[offs[v - 1] + i * dM + k] = soc_vec[k]
            extra_rows.append(row)
            rhs.append(1 if i == pin else 0)
    full = Mat(field, system.rows + len(extra_rows), total,
               system.data + extra_rows)
    rhs_mat = Mat(field, full.rows, 1,
                  [[0]] * system.rows + [[v] for v in rhs])
    sol = gf.solve(full, rhs_mat)
    if sol is None:
        raise AssertionError("injective envelope embedding must exist")
    iota = []
    for v in range(algebra.quiver.vertex_count):
        r, c = env.dims[v], M.dims[v]
        block = [[sol.data[offs[v] + i * c + j][0] for j in range(c)] for i in range(r)]
        iota.append(Mat(field, r, c, block))
    return env, tuple(iota)


def stable_hom_dim(N: Rep, X: Rep) -> int:
    """dim of Hom(N, X) modulo maps factoring through injectives.

    Every map factoring through an injective factors through the injective
    envelope iota: N -> I(N), so the factoring subspace is Hom(I, X) o iota.
    """
    _same_context(N, X)
    if N.total_dim == 0 or X.total_dim == 0:
        return 0
    full = hom_dim(N, X)
    if full == 0:
        return 0
    env, iota = injective_envelope(N)
    hb = hom_basis(env, X)
    if hb.dim == 0:
        return full
    rows = []
    for g in hb.basis:
        flat = []
        for gv, iv in zip(g, iota):
            comp = gv @ iv
            flat.extend(a for r in comp.data for a in r)
        rows.append(flat or [0])
    width = len(rows[0])
    return full - gf.rank(Mat.from_rows(N.field, rows, width))


# ---------------------------------------------------------------------------
# Residue field degrees
# ---------------------------------------------------------------------------

def residue_degree(M: Rep) -> int:
    """Degree d with End(M)/rad End(M) isomorphic to F_{q^d}, M indecomposable.

    Each End basis element is local, so its minimal polynomial is a power of
    a single irreducible; d is the lcm of those irreducible degrees.  Two
    distinct irreducible factors expose a decomposable module.
    """
    if M.total_dim == 0:
        raise ZeroModuleError("residue degree of the zero module")
    field = M.field
    end = hom_basis(M, M)
    if end.dim == 1:
        return 1
    d = 1
    for f in end.basis:
        big = gf.block_diag(field, [m for m in f if m.rows])
        mu = gf.matrix_minpoly(big)
        factor = gf.least_irreducible_factor(field, mu)
        g = mu
        while len(g) > 1:
            g, rem = gf.poly_divmod(field, g, factor)
            if rem:
                raise NotIndecomposableError(
                    "minimal polynomial has two distinct irreducible factors; "
                    "the module is decomposable")
        d = d * (len(factor) - 1) // math.gcd(d, len(factor) - 1)
    return d


# ---------------------------------------------------------------------------
# Module text format
# ---------------------------------------------------------------------------

def module_to_text(M: Rep) -> str:
    lines = ["module over %s" % M.algebra.name,
             "field %d %d" % (M.field.p, M.field.n),
             "dims " + " ".join(str(d) for d in M.dims)]
    for a, m in zip(M.algebra.quiver.arrows, M.mats):
        if M.field.is_prime_field:
            entries = [str(x) for row in m.data for x in row]
        else:
            entries = [",".join(str(c) for c in M.field.coeffs(x))
                       for row in m.data for x in row]
        lines.append(("mat %s " % a.name + " ".join(entries)).rstrip())
    return "\n".join(lines) + "\n"


def parse_module(text: str, algebra: BoundQuiverAlgebra) -> Rep:
    field = None
    dims = None
    mats: dict[str, list[int]] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "module":
            if len(parts) != 3 or parts[1] != "over":
                raise ValueError("bad module line: %r" % raw)
            if parts[2] != algebra.name:
                raise MixedContextError(
                    "module file is over %r, not %r" % (parts[2], algebra.name))
        elif parts[0] == "field":
            field = make_field(int(parts[1]), int(parts[2]))
        elif parts[0] == "dims":
            dims = tuple(int(x) for x in parts[1:])
        elif parts[0] == "mat":
            if field is None:
                raise ValueError("'mat' line before 'field' line")
            vals = []
            for tok in parts[2:]:
                if "," in tok:
                    vals.append(field.element([int(c) for c in tok.split(",")]))
                else:
                    vals.append(int(tok) % field.order)
            mats[parts[1]] = vals
        else:
            raise ValueError("unrecognized line: %r" % raw)
    if field is None or dims is None:
        raise ValueError("missing 'field' or 'dims' line")
    if field.p != algebra.base.p:
        raise CharacteristicMismatchError("module field characteristic mismatch")
    mat_list = []
    for a in algebra.quiver.arrows:
        r, c = dims[a.target - 1], dims[a.source - 1]
        flat = mats.get(a.name, [0] * (r * c))
        if len(flat) != r * c:
            raise ValueError("arrow %s expects %d entries, got %d"
                             % (a.name, r * c, len(flat)))
        mat_list.append(Mat(field, r, c, [flat[i * c:(i + 1) * c] for i in range(r)]))
    return make_rep(algebra, field, dims, mat_list)
