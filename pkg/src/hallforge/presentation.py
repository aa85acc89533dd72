"""Bound quiver algebras kQ/I and their canonical modules.

A path is stored as ``(source_vertex, (arrow_name, ...))``; the trivial path
at vertex i is ``(i, ())``.  Composition reads left to right: the path
``(a, b)`` means "a then b", and a right module assigns to each arrow
``a: s -> t`` a matrix of shape (dims[t] x dims[s]) acting on column
vectors, so the path ``(a, b)`` acts as ``B @ A``.

The path basis is computed degree by degree: at each length the span of all
paths of that length is quotiented by the corresponding component of the
two-sided ideal generated by the relations.  This construction requires
every relation to be length homogeneous (all terms the same length), which
covers all presets; mixed-length relations are rejected.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

from . import gf
from .errors import (
    InfiniteDimensionalError,
    MixedContextError,
    NotAdmissibleError,
    NotPrimeBaseError,
    UnknownPresetError,
)
from .gf import FieldCtx, Mat, make_field

Path = tuple[int, tuple[str, ...]]


@dataclass(frozen=True)
class Arrow:
    name: str
    source: int
    target: int


@dataclass(frozen=True)
class Quiver:
    vertex_count: int
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise ValueError("arrow names must be unique")
        for a in self.arrows:
            if not (1 <= a.source <= self.vertex_count and 1 <= a.target <= self.vertex_count):
                raise ValueError("arrow %s has endpoints outside 1..%d" % (a.name, self.vertex_count))

    @property
    def arrow_by_name(self) -> dict[str, Arrow]:
        return {a.name: a for a in self.arrows}

    def vertices(self) -> range:
        return range(1, self.vertex_count + 1)

    def opposite(self) -> "Quiver":
        return Quiver(self.vertex_count,
                      tuple(Arrow(a.name, a.target, a.source) for a in self.arrows))


@dataclass(frozen=True)
class Relation:
    """A linear combination of parallel paths of length >= 2, coefficients
    in the prime field."""
    terms: tuple[tuple[int, tuple[str, ...]], ...]


class BoundQuiverAlgebra:
    """A finite-dimensional bound quiver algebra with computed path basis."""

    def __init__(self, name, quiver, base, relations, pair_paths, reduction,
                 path_target, nil_bound):
        self.name = name
        self.quiver = quiver
        self.base = base
        self.relations = relations
        # pair_paths[(i, j)] -> tuple of basis paths from i to j
        self.pair_paths = pair_paths
        self._reduction = reduction           # Path -> tuple[(Path, coeff)]
        self._path_target = path_target       # Path -> target vertex
        self.nil_bound = nil_bound
        self.total_dim = sum(len(v) for v in pair_paths.values())
        self._opposite = None
        self._catalogs: dict = {}
        self._projectives: dict = {}

    # -- identity -------------------------------------------------------

    def signature(self) -> tuple:
        return (self.quiver.vertex_count,
                tuple((a.name, a.source, a.target) for a in self.quiver.arrows),
                tuple(tuple(r.terms) for r in self.relations),
                self.base.p)

    def __eq__(self, other) -> bool:
        return isinstance(other, BoundQuiverAlgebra) and self.signature() == other.signature()

    def __hash__(self) -> int:
        return hash(self.signature())

    def __repr__(self) -> str:
        return "BoundQuiverAlgebra(%s, dim %d over %r)" % (self.name, self.total_dim, self.base)

    # -- path algebra ----------------------------------------------------

    def path_basis(self, i: int, j: int) -> tuple[Path, ...]:
        return self.pair_paths.get((i, j), ())

    def path_target(self, path: Path) -> int:
        return self._path_target[path]

    def reduce_path(self, path: Path):
        """Residue of a path as a combination of basis paths (possibly empty)."""
        return self._reduction.get(path, ())

    def compose(self, path: Path, arrow: Arrow):
        """Residue of path * arrow, or () if not composable / zero."""
        if self._path_target.get(path) != arrow.source:
            return ()
        return self._reduction.get((path[0], path[1] + (arrow.name,)), ())

    def elem_mul(self, x_terms, y_terms):
        """Product of two algebra elements given as ((path, coeff), ...)."""
        f = self.base
        acc: dict[Path, int] = {}
        for p, c in x_terms:
            pt = self._path_target.get(p)
            for q, d in y_terms:
                if q[0] != pt:
                    continue
                cd = f.mul(c, d)
                if cd == 0:
                    continue
                for r, e in self._reduction.get((p[0], p[1] + q[1]), ()):
                    v = f.add(acc.get(r, 0), f.mul(cd, e))
                    if v:
                        acc[r] = v
                    elif r in acc:
                        del acc[r]
        return tuple(sorted(acc.items(), key=lambda kv: (len(kv[0][1]), kv[0])))

    def opposite(self) -> "BoundQuiverAlgebra":
        """The opposite algebra: reversed quiver, reversed relation paths."""
        if self._opposite is None:
            op_rels = tuple(
                Relation(tuple((c, tuple(reversed(p))) for c, p in r.terms))
                for r in self.relations)
            op = build_algebra(self.quiver.opposite(), self.base, op_rels,
                               name=self.name + "^op")
            op._opposite = self
            self._opposite = op
        return self._opposite

    # -- text format -------------------------------------------------------

    def to_text(self) -> str:
        lines = ["quiver %d" % self.quiver.vertex_count]
        for a in self.quiver.arrows:
            lines.append("arrow %s %d %d" % (a.name, a.source, a.target))
        for r in self.relations:
            lines.append("rel " + " + ".join(
                "%d*%s" % (c, ".".join(p)) for c, p in r.terms))
        lines.append("field %d" % self.base.p)
        return "\n".join(lines) + "\n"


def parse_algebra(text: str, name: str = "parsed") -> BoundQuiverAlgebra:
    """Parse the line-oriented algebra format ('#' starts a comment)."""
    vertex_count = None
    arrows: list[Arrow] = []
    relations: list[Relation] = []
    prime = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "quiver":
            if len(parts) != 2 or not parts[1].isdigit():
                raise ValueError("bad quiver line: %r" % raw)
            vertex_count = int(parts[1])
        elif parts[0] == "arrow":
            if len(parts) != 4:
                raise ValueError("bad arrow line: %r" % raw)
            arrows.append(Arrow(parts[1], int(parts[2]), int(parts[3])))
        elif parts[0] == "rel":
            body = line[len("rel"):].strip()
            terms = []
            for chunk in body.split(" + "):
                m = re.fullmatch(r"(-?\d+)\*([\w.]+)", chunk.strip())
                if not m:
                    raise ValueError("bad relation term: %r" % chunk)
                terms.append((int(m.group(1)), tuple(m.group(2).split("."))))
            relations.append(Relation(tuple(terms)))
        elif parts[0] == "field":
            if len(parts) != 2 or not parts[1].isdigit():
                raise ValueError("bad field line: %r" % raw)
            prime = int(parts[1])
        else:
            raise ValueError("unrecognized line: %r" % raw)
    if vertex_count is None:
        raise ValueError("missing 'quiver' line")
    if prime is None:
        raise ValueError("missing 'field' line")
    return build_algebra(Quiver(vertex_count, tuple(arrows)), make_field(prime),
                         tuple(relations), name=name)


# ---------------------------------------------------------------------------
# Path basis construction
# ---------------------------------------------------------------------------

def _validate_relations(quiver: Quiver, base: FieldCtx, relations):
    by_name = quiver.arrow_by_name
    cleaned = []
    for rel in relations:
        terms = []
        src = tgt = length = None
        for coeff, path in rel.terms:
            if len(path) < 2:
                raise NotAdmissibleError(
                    "relation path %r has length < 2" % (path,))
            for nm in path:
                if nm not in by_name:
                    raise NotAdmissibleError("unknown arrow %r in relation" % nm)
            for x, y in zip(path, path[1:]):
                if by_name[x].target != by_name[y].source:
                    raise NotAdmissibleError(
                        "relation path %r is not composable" % (path,))
            s, t = by_name[path[0]].source, by_name[path[-1]].target
            if src is None:
                src, tgt, length = s, t, len(path)
            elif (s, t) != (src, tgt):
                raise NotAdmissibleError(
                    "relation terms are not parallel: %r" % (rel.terms,))
            elif len(path) != length:
                raise NotAdmissibleError(
                    "relation mixes path lengths %d and %d; the degree-by-degree "
                    "basis construction requires length-homogeneous relations"
                    % (length, len(path)))
            c = coeff % base.p
            if c:
                terms.append((c, path))
        if terms:
            cleaned.append((src, length, tuple(terms)))
    return cleaned


def build_algebra(quiver: Quiver, base: FieldCtx, relations, name: str = "custom",
                  max_length: int | None = None,
                  level_path_cap: int = 200_000) -> BoundQuiverAlgebra:
    """Build the bound quiver algebra kQ/I with its path basis.

    Levels are processed in increasing path length; construction stops at
    the first length with no surviving basis paths, which sets nil_bound.
    If no such length appears by ``max_length`` (default
    vertex_count * (1 + max relation length) * 4) the algebra is reported
    infinite dimensional; raise ``max_length`` for unusually long quivers.
    """
    if not base.is_prime_field:
        raise NotPrimeBaseError("algebras are defined over prime fields only")
    relations = tuple(relations)
    cleaned = _validate_relations(quiver, base, relations)
    max_rel_len = max((length for _, length, _ in cleaned), default=0)
    if max_length is None:
        max_length = quiver.vertex_count * (1 + max_rel_len) * 4

    by_name = quiver.arrow_by_name
    rel_by_length: dict[int, list] = {}
    for src, length, terms in cleaned:
        rel_by_length.setdefault(length, []).append((src, terms))

    path_target: dict[Path, int] = {}
    reduction: dict[Path, tuple] = {}
    pair_paths: dict[tuple[int, int], list[Path]] = {}
    f = base

    def record_level(level_paths, ideal_rows):
        """RREF the ideal span inside each (source, target) block; returns the
        surviving basis paths and the ideal row basis (sparse dicts)."""
        # group paths and ideal vectors by (source, target)
        blocks: dict[tuple[int, int], list[Path]] = {}
        for p in level_paths:
            blocks.setdefault((p[0], path_target[p]), []).append(p)
        vec_blocks: dict[tuple[int, int], list[dict]] = {}
        for v in ideal_rows:
            some = next(iter(v))
            key = (some[0], path_target[some])
            vec_blocks.setdefault(key, []).append(v)
        survivors = []
        ideal_basis = []
        for key in sorted(blocks):
            paths = sorted(blocks[key], key=lambda p: p[1])
            vecs = vec_blocks.get(key, [])
            if not vecs:
                for p in paths:
                    reduction[p] = ((p, 1),)
                survivors.extend(paths)
                continue
            col = {p: i for i, p in enumerate(paths)}
            mat = Mat(f, len(vecs), len(paths),
                      [[v.get(p, 0) for p in paths] for v in vecs])
            res = gf.rref(mat)
            piv = set(res.pivots)
            free = [p for i, p in enumerate(paths) if i not in piv]
            for p in free:
                reduction[p] = ((p, 1),)
            for i, pc in enumerate(res.pivots):
                row = res.reduced.data[i]
                terms = tuple((paths[j], f.neg(row[j]))
                              for j in range(len(paths)) if j not in piv and row[j])
                reduction[paths[pc]] = terms
            survivors.extend(free)
            for i in range(res.rank):
                row = res.reduced.data[i]
                ideal_basis.append({paths[j]: row[j] for j in range(len(paths)) if row[j]})
        return survivors, ideal_basis

    # level 0: trivial paths
    level_paths: list[Path] = []
    for v in quiver.vertices():
        p: Path = (v, ())
        path_target[p] = v
        reduction[p] = ((p, 1),)
        pair_paths.setdefault((v, v), []).append(p)
        level_paths.append(p)

    prev_ideal: list[dict] = []
    prev_paths = level_paths
    nil_bound = None
    length = 0
    while True:
        length += 1
        if length > max_length:
            raise InfiniteDimensionalError(
                "no zero level reached by path length %d; if %s really is finite "
                "dimensional, raise max_length" % (max_length, name))
        cur_paths: list[Path] = []
        for p in prev_paths:
            t = path_target[p]
            for a in quiver.arrows:
                if a.source == t:
                    np_: Path = (p[0], p[1] + (a.name,))
                    path_target[np_] = a.target
                    cur_paths.append(np_)
        if len(cur_paths) > level_path_cap:
            raise InfiniteDimensionalError(
                "path count %d at length %d exceeds the cap; %s looks infinite "
                "dimensional" % (len(cur_paths), length, name))
        # degree component of the ideal: extend last level's ideal basis on
        # both sides by arrows, plus the relations of this exact length
        ideal_rows: list[dict] = []
        for v in prev_ideal:
            for a in quiver.arrows:
                left = {}
                right = {}
                for p, c in v.items():
                    if a.target == p[0]:
                        left[(a.source, (a.name,) + p[1])] = c
                    if path_target[p] == a.source:
                        right[(p[0], p[1] + (a.name,))] = c
                if left:
                    ideal_rows.append(left)
                if right:
                    ideal_rows.append(right)
        for src, terms in rel_by_length.get(length, []):
            ideal_rows.append({(src, path): c for c, path in terms})
        survivors, ideal_basis = record_level(cur_paths, ideal_rows)
        if not survivors:
            nil_bound = length
            break
        for p in survivors:
            pair_paths.setdefault((p[0], path_target[p]), []).append(p)
        prev_paths = cur_paths
        prev_ideal = ideal_basis

    pair_paths_t = {k: tuple(sorted(v, key=lambda p: (len(p[1]), p[1])))
                    for k, v in pair_paths.items()}
    alg = BoundQuiverAlgebra(name, quiver, base, relations, pair_paths_t,
                             reduction, path_target, nil_bound)
    _check_relations_vanish(alg, cleaned)
    return alg


def _check_relations_vanish(alg: BoundQuiverAlgebra, cleaned) -> None:
    f = alg.base
    for src, _length, terms in cleaned:
        acc: dict[Path, int] = {}
        for c, path in terms:
            for bp, e in alg.reduce_path((src, path)):
                acc[bp] = f.add(acc.get(bp, 0), f.mul(c, e))
        if any(acc.values()):
            raise NotAdmissibleError("relation does not vanish in the computed basis")


# ---------------------------------------------------------------------------
# Representations
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Rep:
    """A finite-dimensional right module as a quiver representation.

    ``mats`` is parallel to ``algebra.quiver.arrows``; the matrix for an
    arrow a: s -> t has shape (dims[t-1] x dims[s-1]).
    """
    algebra: BoundQuiverAlgebra
    field: FieldCtx
    dims: tuple[int, ...]
    mats: tuple[Mat, ...]

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def mat(self, arrow_name: str) -> Mat:
        for a, m in zip(self.algebra.quiver.arrows, self.mats):
            if a.name == arrow_name:
                return m
        raise KeyError(arrow_name)

    def encode(self) -> tuple:
        return (self.dims, tuple(m.encode() for m in self.mats))

    def __eq__(self, other) -> bool:
        return (isinstance(other, Rep) and self.algebra == other.algebra
                and self.field == other.field and self.encode() == other.encode())

    def __hash__(self) -> int:
        return hash((self.field, self.encode()))

    def __repr__(self) -> str:
        return "Rep(dims=%r over %r)" % (list(self.dims), self.field)


def make_rep(algebra: BoundQuiverAlgebra, field: FieldCtx, dims, mats,
             validate: bool = True) -> Rep:
    """Public Rep constructor; checks shapes and that relations vanish."""
    dims = tuple(dims)
    if len(dims) != algebra.quiver.vertex_count:
        raise MixedContextError("dimension vector length mismatch")
    mats = tuple(mats)
    rep = Rep(algebra, field, dims, mats)
    if validate:
        for a, m in zip(algebra.quiver.arrows, mats):
            if (m.rows, m.cols) != (dims[a.target - 1], dims[a.source - 1]):
                raise MixedContextError(
                    "matrix for arrow %s has shape %dx%d, expected %dx%d"
                    % (a.name, m.rows, m.cols, dims[a.target - 1], dims[a.source - 1]))
            if m.field != field:
                raise MixedContextError("matrix field differs from module field")
        check_relations(rep)
    return rep


def eval_path(rep: Rep, path: Path) -> Mat:
    """Action of a path on the representation (fiber at source -> target)."""
    src, names = path
    by_name = rep.algebra.quiver.arrow_by_name
    out = Mat.identity(rep.field, rep.dims[src - 1])
    for nm in names:
        out = rep.mat(nm) @ out
    return out


def eval_element(rep: Rep, terms, src: int, tgt: int) -> Mat:
    """Action of an algebra element (combination of parallel paths)."""
    out = Mat(rep.field, rep.dims[tgt - 1], rep.dims[src - 1])
    for path, coeff in terms:
        out = out.add(eval_path(rep, path).scale(coeff))
    return out


def check_relations(rep: Rep) -> None:
    for rel in rep.algebra.relations:
        first = rel.terms[0][1]
        by_name = rep.algebra.quiver.arrow_by_name
        src = by_name[first[0]].source
        tgt = by_name[first[-1]].target
        acc = Mat(rep.field, rep.dims[tgt - 1], rep.dims[src - 1])
        for coeff, path in rel.terms:
            acc = acc.add(eval_path(rep, (src, path)).scale(coeff % rep.field.p))
        if not acc.is_zero():
            raise MixedContextError("relation %r does not vanish on the module" % (rel,))


def zero_rep(algebra: BoundQuiverAlgebra, field: FieldCtx) -> Rep:
    dims = (0,) * algebra.quiver.vertex_count
    mats = tuple(Mat(field, 0, 0) for _ in algebra.quiver.arrows)
    return Rep(algebra, field, dims, mats)


def simple(algebra: BoundQuiverAlgebra, i: int, field: FieldCtx | None = None) -> Rep:
    """The simple module concentrated at vertex i."""
    field = field or algebra.base
    dims = tuple(1 if v == i else 0 for v in algebra.quiver.vertices())
    mats = tuple(Mat(field, dims[a.target - 1], dims[a.source - 1])
                 for a in algebra.quiver.arrows)
    return Rep(algebra, field, dims, mats)


def projective(algebra: BoundQuiverAlgebra, i: int, field: FieldCtx | None = None) -> Rep:
    """The indecomposable projective e_i * Lambda as a representation.

    The fiber at vertex j is spanned by the basis paths from i to j; arrows
    act by right multiplication in the path basis.
    """
    field = field or algebra.base
    key = (i, field.order)
    cached = algebra._projectives.get(key)
    if cached is not None:
        return cached
    fibers = {j: algebra.path_basis(i, j) for j in algebra.quiver.vertices()}
    index = {j: {p: k for k, p in enumerate(fibers[j])} for j in fibers}
    dims = tuple(len(fibers[j]) for j in algebra.quiver.vertices())
    mats = []
    for a in algebra.quiver.arrows:
        s, t = a.source, a.target
        m = Mat(field, dims[t - 1], dims[s - 1])
        for col, p in enumerate(fibers[s]):
            for q, coeff in algebra.compose(p, a):
                m.data[index[t][q]][col] = coeff % field.p
        mats.append(m)
    rep = Rep(algebra, field, dims, tuple(mats))
    algebra._projectives[key] = rep
    return rep


def dual_of_opposite(algebra: BoundQuiverAlgebra, op_rep: Rep,
                     field: FieldCtx | None = None) -> Rep:
    """k-dual of a module over the opposite algebra, as a module over
    ``algebra`` (same dimensions, transposed arrow actions)."""
    field = field or op_rep.field
    op = algebra.opposite()
    if op_rep.algebra != op:
        raise MixedContextError("expected a module over the opposite algebra")
    mats = tuple(op_rep.mat(a.name).transpose() for a in algebra.quiver.arrows)
    return Rep(algebra, field, op_rep.dims, mats)


def injective(algebra: BoundQuiverAlgebra, i: int, field: FieldCtx | None = None) -> Rep:
    """The indecomposable injective, the dual of the opposite projective."""
    field = field or algebra.base
    op_proj = projective(algebra.opposite(), i, field)
    return dual_of_opposite(algebra, op_proj, field)


# ---------------------------------------------------------------------------
# Preset catalog
# ---------------------------------------------------------------------------

PRESET_NAMES = ("hereditary-a2", "hereditary-a3", "ct-a3-cyclic", "ct-a4",
                "nakayama-cyclic-3-2", "kronecker")


def _linear_quiver(n: int) -> Quiver:
    names = "abcdefghij"
    return Quiver(n, tuple(Arrow(names[i], i + 1, i + 2) for i in range(n - 1)))


@lru_cache(maxsize=None)
def preset(name: str, base: FieldCtx) -> BoundQuiverAlgebra:
    """Named preset algebras, including cluster-tilted presentations."""
    if name in ("hereditary-a2", "hereditary-a3"):
        n = int(name[-1])
        return build_algebra(_linear_quiver(n), base, (), name=name)
    if name in ("ct-a3-cyclic", "nakayama-cyclic-3-2"):
        quiver = Quiver(3, (Arrow("a", 1, 2), Arrow("b", 2, 3), Arrow("c", 3, 1)))
        rels = (Relation(((1, ("a", "b")),)),
                Relation(((1, ("b", "c")),)),
                Relation(((1, ("c", "a")),)))
        return build_algebra(quiver, base, rels, name=name)
    if name == "ct-a4":
        quiver = Quiver(4, (Arrow("a", 1, 2), Arrow("b", 2, 3), Arrow("c", 3, 1),
                            Arrow("d", 3, 4)))
        rels = (Relation(((1, ("a", "b")),)),
                Relation(((1, ("b", "c")),)),
                Relation(((1, ("c", "a")),)))
        return build_algebra(quiver, base, rels, name=name)
    if name == "kronecker":
        quiver = Quiver(2, (Arrow("x", 1, 2), Arrow("y", 1, 2)))
        return build_algebra(quiver, base, (), name=name)
    raise UnknownPresetError("unknown preset %r; choose from %s"
                             % (name, ", ".join(PRESET_NAMES)))
