"""Command-line front end.

Commands: indec, hall, fit, verify, archeck.  Exit codes: 0 success,
2 usage/parse error, 3 budget exceeded, 4 undecidable or label not in
catalog, 5 falsification (a ValidationFailed fit or a failed AR check).
All output is deterministic: identical configuration gives byte-identical
reports.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import hall, repcat
from .errors import (
    BudgetExceededError,
    HallforgeError,
    NotInCatalogError,
    UndecidableError,
)
from .gf import MAX_FIELD_ORDER, make_field
from .hall import (
    STATUS_FITTED,
    STATUS_VALIDATION_FAILED,
    fit_hall_polynomial,
    format_labels,
    parse_labels,
    verify_theorem,
)
from .presentation import BoundQuiverAlgebra, build_algebra, parse_algebra, preset
from .repcat import (
    DEFAULT_CANDIDATE_CAP,
    DEFAULT_IDEMPOTENT_CAP,
    ext1_dim,
    list_indecomposables,
    stable_hom_dim,
    tau,
)

ENV_BUDGET = "HALLFORGE_BUDGET"


@dataclass
class RunConfig:
    algebra_source: str
    is_preset: bool
    prime: int
    dim_bound: int = 4
    degrees: tuple[int, ...] = ()
    extension: int = 1
    candidate_cap: int = DEFAULT_CANDIDATE_CAP
    idempotent_cap: int = DEFAULT_IDEMPOTENT_CAP
    out: str | None = None
    include_sums: bool = False
    cross_prime: bool = False
    m_labels: tuple[str, ...] = ()
    n_labels: tuple[str, ...] = ()
    l_labels: tuple[str, ...] = ()

    def algebra(self, prime: int | None = None) -> BoundQuiverAlgebra:
        p = self.prime if prime is None else prime
        if self.is_preset:
            return preset(self.algebra_source, make_field(p))
        text = Path(self.algebra_source).read_text()
        alg = parse_algebra(text, name=Path(self.algebra_source).stem)
        if prime is not None and alg.base.p != p:
            return build_algebra(alg.quiver, make_field(p), alg.relations, name=alg.name)
        return alg


def _config_from_args(args) -> RunConfig:
    if args.preset is not None and getattr(args, "algebra_file", None):
        raise ValueError("give either --preset or --algebra-file, not both")
    if args.preset is None and not getattr(args, "algebra_file", None):
        raise ValueError("an algebra is required: --preset NAME or --algebra-file PATH")
    candidate_cap = DEFAULT_CANDIDATE_CAP
    env = os.environ.get(ENV_BUDGET)
    if env is not None:
        candidate_cap = int(env)
    if getattr(args, "budget", None) is not None:
        candidate_cap = args.budget
    if candidate_cap <= 0:
        raise ValueError("budget must be positive")
    degrees = ()
    if getattr(args, "degrees", None):
        degrees = tuple(int(x) for x in args.degrees.split(","))
        if not degrees:
            raise ValueError("--degrees must list at least one extension degree")
    cfg = RunConfig(
        algebra_source=args.preset if args.preset is not None else args.algebra_file,
        is_preset=args.preset is not None,
        prime=args.prime,
        dim_bound=getattr(args, "dim_bound", 4),
        degrees=degrees,
        extension=getattr(args, "n", 1),
        candidate_cap=candidate_cap,
        idempotent_cap=DEFAULT_IDEMPOTENT_CAP,
        out=getattr(args, "out", None),
        include_sums=getattr(args, "include_sums", False),
        cross_prime=getattr(args, "cross_prime", False),
        m_labels=parse_labels(args.M) if getattr(args, "M", None) else (),
        n_labels=parse_labels(args.N) if getattr(args, "N", None) is not None else (),
        l_labels=parse_labels(args.L) if getattr(args, "L", None) is not None else (),
    )
    return cfg


def _emit(lines, out_path: str | None) -> None:
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if out_path:
        Path(out_path).write_text(text)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_indec(cfg: RunConfig) -> int:
    alg = cfg.algebra()
    catalog = list_indecomposables(alg, make_field(cfg.prime), cfg.dim_bound,
                                   cfg.candidate_cap, cfg.idempotent_cap)
    lines = ["# label dims residue-degree"]
    for e in sorted(catalog.entries, key=lambda e: e.label):
        lines.append("%s (%s) %d" % (e.label, ",".join(str(d) for d in e.rep.dims),
                                     e.residue_degree))
    _emit(lines, cfg.out)
    return 0


def cmd_hall(cfg: RunConfig) -> int:
    alg = cfg.algebra()
    catalog = list_indecomposables(alg, make_field(cfg.prime), cfg.dim_bound,
                                   cfg.candidate_cap, cfg.idempotent_cap)
    ext = catalog.extension(cfg.extension)
    m_rep = ext.rep_from_labels(cfg.m_labels)
    count = hall.hall_number(m_rep, cfg.n_labels, cfg.l_labels, ext,
                             cfg.candidate_cap, cfg.idempotent_cap)
    _emit([str(count)], cfg.out)
    return 0


def _usable_degrees(prime: int, degrees) -> tuple[int, ...]:
    return tuple(n for n in degrees if prime ** n <= MAX_FIELD_ORDER)


def _cross_prime_lines_fit(cfg: RunConfig, fit) -> list[str]:
    p2 = 3 if cfg.prime != 3 else 2
    degrees = _usable_degrees(p2, cfg.degrees)
    if len(degrees) < 3:
        return ["# cross-prime p=%d: not comparable (needs 3 usable degrees)" % p2]
    try:
        alg2 = cfg.algebra(prime=p2)
        fit2 = fit_hall_polynomial(alg2, p2, cfg.m_labels, cfg.n_labels, cfg.l_labels,
                                   degrees, dim_bound=cfg.dim_bound,
                                   candidate_cap=cfg.candidate_cap,
                                   idempotent_cap=cfg.idempotent_cap)
    except HallforgeError as exc:
        return ["# cross-prime p=%d: not comparable (%s)" % (p2, exc)]
    if fit.status != STATUS_FITTED or fit2.status != STATUS_FITTED:
        return ["# cross-prime p=%d: not comparable (status %s / %s)"
                % (p2, fit.status, fit2.status)]
    verdict = "agree" if fit.polynomial == fit2.polynomial else "differ"
    return ["# cross-prime p=%d: %s (φ = %s)" % (p2, verdict, fit2.polynomial)]


def cmd_fit(cfg: RunConfig) -> int:
    alg = cfg.algebra()
    fit = fit_hall_polynomial(alg, cfg.prime, cfg.m_labels, cfg.n_labels, cfg.l_labels,
                              cfg.degrees, dim_bound=cfg.dim_bound,
                              candidate_cap=cfg.candidate_cap,
                              idempotent_cap=cfg.idempotent_cap)
    lines = [fit.line()]
    if cfg.cross_prime:
        lines.extend(_cross_prime_lines_fit(cfg, fit))
    _emit(lines, cfg.out)
    return 5 if fit.status == STATUS_VALIDATION_FAILED else 0


def _cross_prime_lines_verify(cfg: RunConfig, report) -> list[str]:
    p2 = 3 if cfg.prime != 3 else 2
    degrees = _usable_degrees(p2, cfg.degrees)
    if len(degrees) < 3:
        return ["# cross-prime p=%d: not comparable (needs 3 usable degrees)" % p2]
    try:
        alg2 = cfg.algebra(prime=p2)
        report2 = verify_theorem(alg2, p2, cfg.dim_bound, degrees,
                                 include_sums=cfg.include_sums,
                                 candidate_cap=cfg.candidate_cap,
                                 idempotent_cap=cfg.idempotent_cap)
    except HallforgeError as exc:
        return ["# cross-prime p=%d: not comparable (%s)" % (p2, exc)]
    other = {(t.m_labels, t.n_labels, t.l_labels): t for t in report2.triples}
    agree = differ = incomparable = 0
    differ_lines = []
    for t in report.triples:
        t2 = other.get((t.m_labels, t.n_labels, t.l_labels))
        if (t2 is None or t.fit is None or t2.fit is None
                or t.fit.status != STATUS_FITTED or t2.fit.status != STATUS_FITTED):
            incomparable += 1
            continue
        if t.fit.polynomial == t2.fit.polynomial:
            agree += 1
        else:
            differ += 1
            differ_lines.append("# cross-prime differ: %s | %s | %s : %s vs %s" % (
                format_labels(t.m_labels), format_labels(t.n_labels),
                format_labels(t.l_labels), t.fit.polynomial, t2.fit.polynomial))
    lines = ["# cross-prime p=%d (observation): agree=%d differ=%d not-comparable=%d"
             % (p2, agree, differ, incomparable)]
    lines.extend(differ_lines)
    return lines


def cmd_verify(cfg: RunConfig) -> int:
    alg = cfg.algebra()
    report = verify_theorem(alg, cfg.prime, cfg.dim_bound, cfg.degrees,
                            include_sums=cfg.include_sums,
                            candidate_cap=cfg.candidate_cap,
                            idempotent_cap=cfg.idempotent_cap)
    lines = report.human_lines()
    if cfg.cross_prime:
        lines.extend(_cross_prime_lines_verify(cfg, report))
    _emit(lines, cfg.out)
    if cfg.out:
        Path(cfg.out + ".kv").write_text("\n".join(report.kv_lines()) + "\n")
    if report.n_failed:
        return 5
    if report.budget_errors:
        return 3
    if report.n_errors:
        return 4
    return 0


def cmd_archeck(cfg: RunConfig) -> int:
    alg = cfg.algebra()
    catalog = list_indecomposables(alg, make_field(cfg.prime), cfg.dim_bound,
                                   cfg.candidate_cap, cfg.idempotent_cap)
    mismatches = []
    pairs = 0
    for em in catalog.entries:
        t = tau(em.rep)
        for en in catalog.entries:
            pairs += 1
            lhs = ext1_dim(em.rep, en.rep)
            rhs = stable_hom_dim(en.rep, t) if t.total_dim else 0
            if lhs != rhs:
                mismatches.append("%s %s ext1=%d stable=%d" % (em.label, en.label, lhs, rhs))
    lines = list(mismatches)
    lines.append("# archeck %s p=%d: pairs=%d mismatches=%d"
                 % (alg.name, cfg.prime, pairs, len(mismatches)))
    _emit(lines, cfg.out)
    return 0 if not mismatches else 5


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_common(sub, needs_bound=True):
    sub.add_argument("--preset", help="preset algebra name")
    sub.add_argument("--algebra-file", help="path to an algebra text file")
    sub.add_argument("-p", "--prime", type=int, required=True,
                     help="characteristic of the base prime field")
    if needs_bound:
        sub.add_argument("--dim-bound", type=int, default=4,
                         help="catalog bound on total dimension (default 4)")
    sub.add_argument("--budget", type=int, default=None,
                     help="candidate-tuple cap (overrides %s)" % ENV_BUDGET)
    sub.add_argument("--out", default=None, help="also write the output to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hallforge",
        description="Exact submodule counting and Hall polynomial fitting "
                    "for bound quiver algebras over finite fields.")
    subs = parser.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("indec", help="list the catalog of indecomposables")
    _add_common(sp)

    sp = subs.add_parser("hall", help="one Hall number F^M_{N,L}")
    _add_common(sp)
    sp.add_argument("-n", type=int, default=1, help="extension degree (default 1)")
    sp.add_argument("-M", required=True, help="ambient module labels, e.g. P1+S2")
    sp.add_argument("-N", required=True, help="quotient labels ('0' for the zero module)")
    sp.add_argument("-L", required=True, help="submodule labels ('0' for the zero module)")

    sp = subs.add_parser("fit", help="fit one Hall polynomial")
    _add_common(sp)
    sp.add_argument("-M", required=True)
    sp.add_argument("-N", required=True)
    sp.add_argument("-L", required=True)
    sp.add_argument("--degrees", required=True,
                    help="comma-separated conservative extension degrees")
    sp.add_argument("--cross-prime", action="store_true",
                    help="also fit at another prime and report agreement")

    sp = subs.add_parser("verify", help="fit polynomials for every triple")
    _add_common(sp)
    sp.add_argument("--degrees", required=True)
    sp.add_argument("--include-sums", action="store_true",
                    help="let M range over pairwise direct sums too")
    sp.add_argument("--cross-prime", action="store_true")

    sp = subs.add_parser("archeck", help="Auslander-Reiten formula sweep")
    _add_common(sp)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        cfg = _config_from_args(args)
        command = {
            "indec": cmd_indec,
            "hall": cmd_hall,
            "fit": cmd_fit,
            "verify": cmd_verify,
            "archeck": cmd_archeck,
        }[args.command]
        return command(cfg)
    except BudgetExceededError as exc:
        print("budget exceeded: %s" % exc, file=sys.stderr)
        return 3
    except (UndecidableError, NotInCatalogError) as exc:
        print("undecidable: %s" % exc, file=sys.stderr)
        return 4
    except (HallforgeError, ValueError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
