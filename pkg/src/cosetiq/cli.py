"""Command-line front end: counts, decompose, structure, verify, interpolate, semisimple.

Exit status is 0 iff every check requested by the command passes, 1 if a
check fails, 2 on usage errors or refused (over-budget) computations.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from fractions import Fraction

from . import __version__
from .algebra import AlgebraContext, StructureTable, m_report, structure_constants
from .cache import ArtifactCache, canonical, resolve_cache_dir
from .cosets import (CosetDecomposition, check_decomposition, chu_vandermonde_check, decompose,
                     kappa_rho)
from .filtration import filtration_report
from .generic import (GenericAlgebra, InterpolationError, check_associativity,
                      check_generic_relations, discover, interpolate, semisimplicity_locus)
from .gf import field_new
from .groups import DEFAULT_BUDGET, BudgetExceeded, gl_order, h_order
from .pbl import sigma_rho
from .relations import verify_relations

log = logging.getLogger("cosetiq")

SLOW_BUDGET = 200_000_000


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-q", "--field", type=int, required=True, help="field size (prime power <= 64)")
    common.add_argument("-a", "--alpha", type=int, required=True, help="alpha >= 1")
    common.add_argument("-n", type=int, default=None, help="n >= alpha")
    common.add_argument("--basis", choices=("coset", "pbw"), default=None)
    common.add_argument("--budget", type=int, default=None,
                        help=f"max objects to enumerate (default {DEFAULT_BUDGET})")
    common.add_argument("--cache-dir", default=None, help="artifact cache (else $COSETIQ_CACHE)")
    common.add_argument("--no-cache", action="store_true", help="neither read nor write the cache")
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--output", default=None, help="write the report here instead of stdout")
    common.add_argument("--threads", type=int, default=1, help="parallelism hint (results never depend on it)")
    common.add_argument("--slow", action="store_true", help=f"raise the default budget to {SLOW_BUDGET}")
    common.add_argument("--method", choices=("quotient", "members"), default="quotient",
                        help="structure-constant route: coset blocks (default) or full member lists")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="cosetiq", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"cosetiq {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("counts", parents=[common], help="sigma, kappa, #H, #GL and the summation identity")
    sub.add_parser("decompose", parents=[common], help="bucket GL(alpha+n) into double cosets")
    sub.add_parser("structure", parents=[common], help="structure constants (coset or pbw basis)")
    sub.add_parser("verify", parents=[common], help="relations, filtration and M functional")
    for name, helptext in (("interpolate", "interpolate pbw constants in t = q^n"),
                           ("semisimple", "trace-form determinant of the generic algebra")):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("--samples", type=_int_list, default=None,
                        help="explicit sample n values (default: adaptive discovery)")
        sp.add_argument("--holdout", type=int, default=None, help="held-out n to predict")
        sp.add_argument("--max-n", type=int, default=None, help="adaptive search limit")
    return p


# --- helpers -----------------------------------------------------------------

class Run:
    def __init__(self, args):
        self.args = args
        self.q = args.field
        self.alpha = args.alpha
        self.n = args.n
        self.budget = args.budget or (SLOW_BUDGET if args.slow else DEFAULT_BUDGET)
        self.cache = None if args.no_cache else ArtifactCache(resolve_cache_dir(args.cache_dir))
        field_new(self.q)  # validates q
        if self.alpha < 1:
            raise UsageError("alpha must be >= 1")

    def need_n(self) -> int:
        if self.n is None:
            raise UsageError("this command needs -n")
        if self.n < self.alpha:
            raise UsageError(f"need alpha <= n (alpha={self.alpha}, n={self.n})")
        return self.n

    def cached(self, kind: str, compute, **params) -> str:
        if self.cache is None:
            return compute()
        key = self.cache.key(kind, q=self.q, alpha=self.alpha, **params)
        payload, hit = self.cache.get_or_compute(key, compute)
        log.info("%s %s (%s)", kind, "cache hit" if hit else "computed", self.cache.path(key))
        return payload

    def context(self, n: int) -> AlgebraContext:
        return AlgebraContext.build(self.alpha, n, self.q, self.args.method, self.budget)

    def table(self, n: int, basis: str) -> StructureTable:
        def compute():
            return structure_constants(self.context(n), basis).to_json()
        text = self.cached("structure", compute, n=n, basis=basis, method=self.args.method)
        return StructureTable.from_json(text)


def _emit(args, text: str):
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def _no_csv(args, what: str):
    if args.format == "csv":
        raise UsageError(f"csv output is only offered for flat tables; use json for {what}")


def _frac(x) -> str:
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


# --- commands ------------------------------------------------------------------

def cmd_counts(run: Run) -> int:
    a, q = run.alpha, run.q
    n = run.need_n()
    sig = [sigma_rho(a, q, r) for r in range(a + 1)]
    kap = [kappa_rho(a, n, q, r) for r in range(a + 1)]
    total = sum(s * k for s, k in zip(sig, kap))
    ok = chu_vandermonde_check(a, n, q)
    doc = {"q": q, "alpha": a, "n": n, "sigma": [str(s) for s in sig], "kappa": [str(k) for k in kap],
           "pbl": str(sum(sig)), "h_order": str(h_order(a, n, q)), "gl_order": str(gl_order(a + n, q)),
           "sum": str(total), "identity_holds": ok}
    fmt = run.args.format
    if fmt == "json":
        _emit(run.args, canonical(doc))
    elif fmt == "csv":
        _emit(run.args, _csv([{"rho": r, "rank": a - r, "sigma": sig[r], "kappa": kap[r]} for r in range(a + 1)]))
    else:
        _emit(run.args, "\n".join([
            f"q={q} alpha={a} n={n}",
            f"sigma=({','.join(map(str, sig))})  total PBL {sum(sig)}",
            f"kappa=({','.join(map(str, kap))})",
            f"#H(n)={h_order(a, n, q)}  #GL(alpha+n)={gl_order(a + n, q)}",
            f"sum sigma*kappa = {total}  identity {'PASS' if ok else 'FAIL'}",
        ]))
    return 0 if ok else 1


def cmd_decompose(run: Run) -> int:
    _no_csv(run.args, "decompositions")
    n = run.need_n()
    text = run.cached("decompose", lambda: decompose(run.alpha, n, run.q, budget=run.budget).to_json(), n=n)
    dec = CosetDecomposition.from_json(text)
    chk = check_decomposition(dec)
    ok = chk["bijection"] and chk["size_law"] and chk["total_ok"]
    if run.args.format == "json":
        _emit(run.args, text)
    else:
        sizes = sorted({b.size for b in dec.buckets})
        _emit(run.args, "\n".join([
            f"GL({run.alpha + n},{run.q}): {dec.total} elements in {len(dec.buckets)} double cosets "
            f"(#PBL = {chk['expected_bucket_count']})",
            f"bucket sizes: {sizes}",
            f"bijection {'PASS' if chk['bijection'] else 'FAIL'}, size law {'PASS' if chk['size_law'] else 'FAIL'}",
        ]))
    return 0 if ok else 1


def cmd_structure(run: Run) -> int:
    _no_csv(run.args, "structure tensors")
    n = run.need_n()
    basis = run.args.basis or "coset"
    table = run.table(n, basis)
    assoc = table.is_associative()
    if run.args.format == "json":
        _emit(run.args, table.to_json())
    else:
        nnz = sum(1 for x in table.constants.ravel() if x != 0)
        _emit(run.args, f"{basis} basis, {table.dim}-label table, {nnz} nonzero constants; "
                        f"associativity {'PASS' if assoc else 'FAIL'}")
    return 0 if assoc else 1


def cmd_verify(run: Run) -> int:
    n = run.need_n()
    ctx = run.context(n)
    rel = verify_relations(ctx)
    fil = filtration_report(ctx)
    mrep = m_report(ctx)
    assoc = structure_constants(ctx, "coset").is_associative()
    ok = rel.passed and fil.passed and mrep["passed"] and assoc
    if run.args.format == "json":
        _emit(run.args, canonical({"relations": rel.as_dict(), "filtration": fil.as_dict(), "M": mrep,
                                   "associativity": assoc, "passed": ok}))
    elif run.args.format == "csv":
        # the only flat part of the report: graded dimensions against sigma
        _emit(run.args, _csv([{"k": k, "dim_gr": d, "sigma": s}
                              for k, (d, s) in enumerate(zip(fil.dims_gr, fil.sigma))]))
    else:
        lines = [rel.summary()]
        for f in rel.families:
            if f.vacuous:
                continue
            tag = "diagnostic " if f.diagnostic else ""
            lines.append(f"  {tag}{f.name}: {f.instances} instances {'PASS' if f.passed else 'FAIL'}")
            for msg in f.failures[:3] + f.choice_dependent[:3]:
                lines.append(f"      {msg}")
        lines.append(fil.summary())
        matched = [k for k, v in mrep["formula_matches"].items() if v]
        lines.append(f"M multiplicative on {mrep['pairs']} basis pairs: {'PASS' if mrep['passed'] else 'FAIL'}; "
                     f"M(theta(L)) = {mrep['M(theta(L))']} matches {', '.join(matched) or 'none'}")
        lines.append(f"associativity {'PASS' if assoc else 'FAIL'}")
        _emit(run.args, "\n".join(lines))
    return 0 if ok else 1


def _generic(run: Run):
    """Interpolated algebra from explicit samples or adaptive discovery; returns (ga, tables, history)."""
    a, q = run.alpha, run.q
    basis = run.args.basis or "pbw"
    if run.args.samples:
        ns = run.args.samples
        if any(n < a for n in ns):
            raise UsageError("sample n values must be >= alpha")
        tables = [run.table(n, basis) for n in ns]
        hold = run.table(run.args.holdout, basis) if run.args.holdout is not None else None
        ga = interpolate(a, q, tables, hold)
        return ga, tables + ([hold] if hold else []), []
    pre = {}
    d = discover(a, q, basis, run.args.max_n, run.args.method, run.budget, tables=pre)
    for n in d.sample_ns + [d.holdout_n]:
        pre.setdefault(n, run.table(n, basis))
    return d.algebra, [pre[n] for n in d.sample_ns + [d.holdout_n]], d.history


def _theta_square_row(ga: GenericAlgebra) -> list[str]:
    a = ga.alpha
    ident = "".join("1" if i == j else "0" for i in range(a) for j in range(a))
    # the first codim-1 idempotent label in label order
    th = next(i for i, k in enumerate(ga.labels)
              if k.startswith(f"{a - 1}|") and k.split("|")[1] == k.split("|")[2])
    unit = ga.labels.index(f"{a}|{ident}|{ident}")
    out = []
    for (mu, nu, ka), v in sorted(ga.constants.items()):
        if mu == th and nu == th:
            tag = "theta" if ka == th else ("a(1)" if ka == unit else ga.labels[ka])
            out.append(f"  -> {tag}: {v}")
    return [f"theta({ga.labels[th]})^2:"] + out


def cmd_interpolate(run: Run) -> int:
    _no_csv(run.args, "polynomial tensors")
    ga, tables, history = _generic(run)
    checks = {"holdout": ga.holdout["predicted"] if ga.holdout else None,
              "round_trip": all(ga.matches(t) for t in tables),
              "associativity": check_associativity(ga).passed}
    rel = check_generic_relations(ga) if ga.basis == "pbw" else None
    if rel is not None:
        checks["relations"] = rel.passed
    ok = all(v for v in checks.values() if v is not None)
    if run.cache is not None:
        run.cache.store(run.cache.key("generic", q=run.q, alpha=run.alpha, basis=ga.basis,
                                      samples=",".join(str(s["n"]) for s in ga.samples)), ga.to_json())
    if run.args.format == "json":
        _emit(run.args, ga.to_json())
    else:
        lines = [f"alpha={ga.alpha} q={ga.q} basis={ga.basis}: {ga.dim} labels, "
                 f"{len(ga.constants)} polynomial constants, max degree {ga.max_degree()} in t = q^n",
                 f"samples n = {[s['n'] for s in ga.samples]}"]
        lines += history
        lines += _theta_square_row(ga)
        for k, v in checks.items():
            if v is not None:
                lines.append(f"{k} {'PASS' if v else 'FAIL'}")
        if rel is not None:
            lines.append(rel.summary())
        _emit(run.args, "\n".join(lines))
    return 0 if ok else 1


def cmd_semisimple(run: Run) -> int:
    _no_csv(run.args, "determinant reports")
    ga, tables, _ = _generic(run)
    grid = sorted({t.n for t in tables} | ({run.n} if run.n else set()))
    rep = semisimplicity_locus(ga, grid, tables)
    if run.args.format == "json":
        _emit(run.args, canonical(rep.as_dict()))
    else:
        lines = [f"det G(t) = {rep.factorization}",
                 "rational roots: " + (", ".join(f"t={_frac(r)} (x{m})" for r, m in rep.rational_roots) or "none"),
                 "irrational roots: " + (", ".join(f"t~{s} (x{m})" for s, m in rep.irrational_roots) or "none"),
                 "nonvanishing at t=q^n: " + ", ".join(f"n={n} {'PASS' if v else 'FAIL'}" for n, v in rep.grid.items()),
                 "agreement with concrete Gram determinants: "
                 + ", ".join(f"n={n} {'PASS' if v else 'FAIL'}" for n, v in rep.concrete_agreement.items()),
                 f"semisimplicity {'PASS' if rep.passed else 'FAIL'}"]
        _emit(run.args, "\n".join(lines))
    return 0 if rep.passed else 1


COMMANDS = {"counts": cmd_counts, "decompose": cmd_decompose, "structure": cmd_structure,
            "verify": cmd_verify, "interpolate": cmd_interpolate, "semisimple": cmd_semisimple}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        run = Run(args)
        return COMMANDS[args.command](run)
    except BudgetExceeded as e:
        print(f"refused: {e} (raise --budget to at least {e.required})", file=sys.stderr)
        return 2
    except (UsageError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except InterpolationError as e:
        print(f"interpolation failed: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
