"""Command line front end: reduce, verify, examples.

All numeric input and output is exact rational text ("p/q"); floats
are rejected.  lam stays symbolic in every table; numeric lambda
values exist only inside the Jacobi sampling suite.  Identical
invocations produce byte-identical output.

Exit codes: 0 success, 1 a reduction or verification failed naming the
violated invariant, 2 usage or input errors.
"""

import argparse
import json
import math
import os
import re
import sys
from fractions import Fraction

from . import builtin
from .diffalg import DiffPoly, MatDiffOp
from .liealg import (
    LieAlgebraError,
    build_sl_n,
    derive_subspaces,
    dynkin_grading,
    setup_from_json,
    setup_to_json,
    sl2_from_partition,
)
from .loop_poisson import (
    LocalPoissonOp,
    PoissonPencil,
    bracket_table,
    bracket_table_json,
    casimir_set_check,
    lie_poisson_pencil,
)
from .reduction import (
    METHODS,
    NoFiniteOrderInverse,
    ReductionError,
    compare_methods,
    dirac_reduce,
    ds_reduce,
    finite_dirac_sample,
    leading_term,
    tensor_procedure,
)

CHECK_ORDER = ("setup", "skew", "lambda", "jacobi", "casimir", "methods",
               "gradings", "leading", "golden")

_TERM_RE = re.compile(r"([+-]?)([^+-]+)")


class CliError(Exception):
    """Input problem surfaced to the user with exit code 2."""


def parse_rational(text: str) -> Fraction:
    t = text.strip()
    if not re.fullmatch(r"[+-]?\d+(/[1-9]\d*)?", t):
        raise CliError(f"not an exact rational: {text!r} (floats are not "
                       "accepted; use p/q)")
    return Fraction(t)


def parse_element(alg, triple, text: str):
    """Parse 'e21+e32', '1/2*h1 - e12', 'f' into a coordinate vector.

    Terms are [coeff*]label with rational coeff; labels are basis
    labels plus e, h, f for the sl2 triple.
    """
    s = text.replace(" ", "")
    if not s:
        raise CliError("empty element expression")
    named = {}
    if triple is not None:
        named = {"e": list(triple.e), "h": list(triple.h), "f": list(triple.f)}
    total = [Fraction(0)] * alg.dim
    consumed = 0
    for sign, body in _TERM_RE.findall(s):
        consumed += len(sign) + len(body)
        coeff = Fraction(-1 if sign == "-" else 1)
        label = body
        if "*" in body:
            ctext, label = body.split("*", 1)
            coeff *= parse_rational(ctext)
        if "/" in label:
            label, den = label.split("/", 1)
            coeff /= parse_rational(den)
        if label in named:
            base = named[label]
        else:
            try:
                base = alg.basis_vector(alg.label_index(label))
            except LieAlgebraError:
                raise CliError(
                    f"unknown basis label {label!r} in element {text!r}") from None
        for i, x in enumerate(base):
            total[i] += coeff * x
    if consumed != len(s):
        raise CliError(f"could not parse element expression {text!r}")
    return tuple(total)


def _parse_partition(text: str, n: int):
    try:
        parts = [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise CliError(f"bad partition {text!r}: use e.g. 2,1") from None
    if not parts or any(p < 1 for p in parts) or sum(parts) != n:
        raise CliError(f"partition {text!r} does not sum to {n}")
    return parts


def resolve_setup(args):
    """Turn CLI flags into a validated GradedSetup."""
    if getattr(args, "setup", None):
        try:
            with open(args.setup) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise CliError(f"cannot read setup file: {exc}")
        except json.JSONDecodeError as exc:
            raise CliError(f"setup file is not valid JSON: {exc}")
        return setup_from_json(data)
    name = getattr(args, "builtin", None)
    if not name:
        raise CliError("give --setup FILE or --builtin NAME")
    custom = any(getattr(args, k, None)
                 for k in ("partition", "grading", "iso", "a"))
    if name in ("kdv", "fkdv") or name.startswith("fkdv:"):
        return builtin.builtin_setup(name)
    mbuiltin = re.fullmatch(r"sl(\d+)", name)
    if name == "sl4" and not custom:
        return builtin.sl4_setup()
    if not mbuiltin:
        known = ", ".join(builtin.BUILTIN_NAMES)
        raise CliError(
            f"unknown builtin {name!r}: use sl<n>, or one of {known}, fkdv:<variant>")
    n = int(mbuiltin.group(1))
    if not 2 <= n <= 9:
        raise CliError("builtin algebras cover sl2 through sl9")
    alg = build_sl_n(n)
    partition = _parse_partition(getattr(args, "partition", None) or str(n), n)
    triple = sl2_from_partition(n, partition)
    gname = getattr(args, "grading", None) or "dynkin"
    if (n, tuple(partition)) == (3, (2, 1)):
        grading = builtin.fkdv_grading(alg, triple, gname)
    elif gname.lower() in ("dynkin", "g1"):
        grading = dynkin_grading(alg, triple.h)
    else:
        raise CliError(
            f"grading {gname!r} is only defined for sl3 partition 2,1; use dynkin")
    iso_text = getattr(args, "iso", None) or ""
    iso = [parse_element(alg, triple, t)
           for t in iso_text.split(",") if t.strip()]
    # default a: the lowest corner element commutes with every strictly
    # lower triangular matrix, so it passes the centralizer condition
    # for any of the builtin gradings
    a_vec = parse_element(alg, triple, getattr(args, "a", None) or f"e{n}1")
    frames = builtin.standard_frames(n, partition)
    return derive_subspaces(alg, triple, grading,
                            isotropic=iso, a=a_vec, **frames)


def _spec_prefix(args) -> str:
    if getattr(args, "prefix", None):
        return args.prefix
    if getattr(args, "setup", None):
        stem = os.path.splitext(os.path.basename(args.setup))[0]
        return stem or "setup"
    name = args.builtin
    if name in ("kdv", "fkdv", "sl4") or name.startswith("fkdv:"):
        return name.replace(":", "_").replace("+", "p").replace("-", "_")
    part = (getattr(args, "partition", None) or name[2:]).replace(",", "_")
    return f"{name}_{part}"


def _table_files(prefix, pencil, fmt):
    """Render the three tables; returns {filename: text}."""
    names = pencil.names
    second = LocalPoissonOp(pencil.second().op, names, check=False)
    first = LocalPoissonOp(pencil.first().op, names, check=False)
    if fmt == "json":
        def dump(pop):
            return json.dumps(bracket_table_json(pop), sort_keys=True,
                              indent=2) + "\n"
        return {
            f"{prefix}_p1.json": dump(first),
            f"{prefix}_p2.json": dump(second),
            f"{prefix}_pencil.json": dump(pencil),
        }
    return {
        f"{prefix}_p1.txt": bracket_table(first),
        f"{prefix}_p2.txt": bracket_table(second),
        f"{prefix}_pencil.txt": bracket_table(pencil),
    }


def _write_files(outdir, files, out):
    os.makedirs(outdir, exist_ok=True)
    for fname in sorted(files):
        path = os.path.join(outdir, fname)
        with open(path, "w") as fh:
            fh.write(files[fname])
        print(f"wrote {path}", file=out)


def cmd_reduce(args, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    setup = resolve_setup(args)
    method = args.method
    if method == "all":
        agree, results, diff = compare_methods(setup)
        if not agree:
            a, b, i, j = diff
            print(f"error: methods {a} and {b} disagree at entry "
                  f"({i + 1}, {j + 1})", file=err)
            return 1
        reduced = results["tensor"]
        print("methods tensor, dirac, ds agree", file=out)
    else:
        reduced = METHODS[method](setup)
    pencil = PoissonPencil(reduced.op, reduced.names, check=False)
    files = _table_files(_spec_prefix(args), pencil, args.format)
    _write_files(args.output, files, out)
    return 0


# ---------------------------------------------------------------- verify

def _monomial_family(m: int, max_degree: int):
    """Monomial slice densities with sum(order + 1) <= max_degree."""
    fams = []
    if max_degree >= 1:
        fams += [DiffPoly.jet(i) for i in range(m)]
    if max_degree >= 2:
        fams += [DiffPoly.jet(i) * DiffPoly.jet(j)
                 for i in range(m) for j in range(i, m)]
        fams += [DiffPoly.jet(i, 1) for i in range(m)]
    if max_degree >= 3:
        fams += [DiffPoly.jet(i) * DiffPoly.jet(j) * DiffPoly.jet(k)
                 for i in range(m) for j in range(i, m) for k in range(j, m)]
        fams += [DiffPoly.jet(i) * DiffPoly.jet(j, 1)
                 for i in range(m) for j in range(m)]
        fams += [DiffPoly.jet(i, 2) for i in range(m)]
    return fams


def _clear_denominators(polys):
    """Rescale a family of polynomials by one common positive integer so
    every coefficient becomes a plain int.  A uniform scale keeps linear
    combinations of the family proportional to the true ones, so
    zero-functional tests are unaffected, and integer arithmetic is much
    faster than Fraction arithmetic in the hot loop."""
    scale = 1
    for p in polys:
        for c in p.terms.values():
            scale = scale * c.denominator // math.gcd(scale, c.denominator)
    out = [DiffPoly({k: int(c * scale) for k, c in p.terms.items()})
           for p in polys]
    return out, scale


def jacobi_scan(op: MatDiffOp, names, max_degree: int):
    """Count Jacobi-defect failures over the monomial family.

    The Jacobiator is trilinear and alternating once skew-symmetry
    holds, so distinct index triples cover all cases.  Returns
    (n_triples, n_failures, first_failure_triple).
    """
    m = len(names)
    fams = _monomial_family(m, max_degree)
    n = len(fams)
    grads = [[f.euler(i) for i in range(m)] for f in fams]
    applied = [op.apply(g) for g in grads]
    pair_applied = {}
    for a in range(n):
        for b in range(a + 1, n):
            density = DiffPoly.zero()
            for k in range(m):
                density += grads[a][k] * applied[b][k]
            pair_applied[(a, b)] = op.apply([density.euler(i) for i in range(m)])
    # every defect summand is (one grad entry) * (one pair entry), so one
    # uniform integer scale per family rescales each defect as a whole
    flat_g, _ = _clear_denominators([g for row in grads for g in row])
    gi = [flat_g[x * m:(x + 1) * m] for x in range(n)]
    keys = sorted(pair_applied)
    flat_v, _ = _clear_denominators([v for k in keys for v in pair_applied[k]])
    vi = {k: flat_v[t * m:(t + 1) * m] for t, k in enumerate(keys)}
    bad = 0
    first = None
    total = 0
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                total += 1
                # {f,{g,h}} - {g,{f,h}} + {h,{f,g}} as a density
                acc = {}
                for k in range(m):
                    for sgn, x, yz in ((1, a, (b, c)), (-1, b, (a, c)),
                                       (1, c, (a, b))):
                        prod = (gi[x][k] * vi[yz][k]).terms
                        for key, coeff in prod.items():
                            s = acc.get(key, 0) + sgn * coeff
                            if s:
                                acc[key] = s
                            else:
                                del acc[key]
                defect = DiffPoly(acc)
                if any(not defect.euler(i).is_zero() for i in defect.fields()):
                    bad += 1
                    if first is None:
                        first = (a, b, c)
    return total, bad, first


def _run_checks(args, report):
    """Execute the selected checks in canonical order; append to report."""
    selected = [c.strip() for c in (args.checks or ",".join(CHECK_ORDER)).split(",")
                if c.strip()]
    unknown = [c for c in selected if c not in CHECK_ORDER]
    if unknown:
        raise CliError(f"unknown checks: {', '.join(unknown)} "
                       f"(available: {', '.join(CHECK_ORDER)})")

    try:
        setup = resolve_setup(args)
    except (LieAlgebraError, ReductionError, CliError) as exc:
        report.append(("setup", "fail", str(exc)))
        return
    report.append(("setup", "pass",
                   f"dim {setup.algebra.dim}, m = {setup.m}"))

    reduced = tensor_procedure(setup)
    pencil = PoissonPencil(reduced.op, reduced.names, check=False)

    if "skew" in selected:
        skew = (reduced.op + reduced.op.adjoint()).is_zero()
        report.append(("skew", "pass" if skew else "fail",
                       "R* = -R" if skew else "adjoint does not negate"))
    if "lambda" in selected:
        deg = reduced.op.lam_degree()
        ok = deg <= 1
        report.append(("lambda", "pass" if ok else "fail",
                       f"lam degree {deg}" + ("" if ok else " (lam^2 term present)")))
    if "jacobi" in selected:
        lams = [parse_rational(t) for t in
                (args.lam or "0,1,-2/3").split(",") if t.strip()]
        worst = None
        total = 0
        bad = 0
        for lv in lams:
            op = reduced.op.eval_lam(lv)
            t, b, first = jacobi_scan(op, reduced.names, args.jacobi_degree)
            total += t
            bad += b
            if b and worst is None:
                worst = (lv, first)
        if bad:
            lv, first = worst
            report.append(("jacobi", "fail",
                           f"{bad}/{total} defects; first at lam={lv}, triple {first}"))
        else:
            report.append(("jacobi", "pass",
                           f"{total} triple evaluations over {len(lams)} "
                           "lambda values, all defects zero"))
    if "casimir" in selected:
        rep = casimir_set_check(setup)
        report.append(("casimir", "pass" if rep.ok else "fail", rep.summary()))
    if "methods" in selected:
        agree, _, diff = compare_methods(setup)
        if agree:
            report.append(("methods", "pass", "tensor = dirac = ds"))
        else:
            a, b, i, j = diff
            report.append(("methods", "fail",
                           f"{a} and {b} differ at entry ({i + 1}, {j + 1})"))
    if "gradings" in selected:
        if not args.gradings:
            report.append(("gradings", "skip", "no --gradings requested"))
        else:
            names = [g.strip() for g in args.gradings.split(",") if g.strip()]
            base = pencil.second().op
            alg = setup.algebra
            triple = setup.triple
            # re-derive with the lowest corner element, which stays
            # admissible when the grading changes; the second structure
            # never depends on a, so the comparison is still exact
            n_guess = math.isqrt(alg.dim + 1)
            try:
                a_indep = alg.basis_vector(alg.label_index(f"e{n_guess}1"))
            except LieAlgebraError:
                a_indep = list(triple.f)
            bad_name = None
            for gname in names:
                try:
                    if gname.lower() in ("dynkin", "g1"):
                        grading = dynkin_grading(alg, triple.h)
                    elif alg.dim == 8:
                        grading = builtin.fkdv_grading(alg, triple, gname)
                    else:
                        raise ValueError(
                            f"grading {gname!r} is only defined for sl3 minimal")
                except ValueError as exc:
                    report.append(("gradings", "fail", str(exc)))
                    bad_name = gname
                    break
                other = derive_subspaces(
                    alg, triple, grading, isotropic=(), a=a_indep,
                    slice_basis=[list(v) for v in setup.slice_basis])
                red = tensor_procedure(other)
                p2 = PoissonPencil(red.op, red.names, check=False).second().op
                if not p2 == base:
                    report.append(("gradings", "fail",
                                   f"second structure changed under grading {gname}"))
                    bad_name = gname
                    break
            if bad_name is None:
                report.append(("gradings", "pass",
                               f"identical second structure under {', '.join(names)}"))
    if "leading" in selected:
        lt = leading_term(pencil.second().op)
        m = setup.m
        primes = [2, 3, 5, 7, 11, 13, 17, 19, 23]
        checked = 0
        mismatch = None
        for j in range(5):
            values = [Fraction(primes[(k + j) % len(primes)], 1 + (j % 3))
                      for k in range(m)]
            sample = finite_dirac_sample(setup, values)
            if sample is None:
                continue
            subs = {k: DiffPoly.const(values[k]) for k in range(m)}
            for i in range(m):
                for jj in range(m):
                    got = lt[i][jj].subs_fields(subs).constant_term()
                    if got != sample[i][jj]:
                        mismatch = (j, i, jj)
                        break
                if mismatch:
                    break
            if mismatch:
                break
            checked += 1
        if mismatch:
            j, i, jj = mismatch
            report.append(("leading", "fail",
                           f"point {j}: leading term != finite Dirac at ({i + 1}, {jj + 1})"))
        elif checked == 0:
            report.append(("leading", "fail",
                           "all sample points hit a singular constrained minor"))
        else:
            report.append(("leading", "pass",
                           f"matches finite Dirac reduction at {checked} rational points"))
    if "golden" in selected:
        name = getattr(args, "builtin", None)
        example = name if name in ("kdv", "fkdv") else None
        if example is None and not args.golden:
            report.append(("golden", "skip", "no golden tables for this setup"))
        else:
            prefix = example or "fkdv"
            files = _table_files(prefix, pencil, "text")
            diff = _compare_goldens(files, args.golden)
            if diff is None:
                report.append(("golden", "pass",
                               f"{len(files)} tables match byte for byte"))
            else:
                report.append(("golden", "fail", diff))


def _golden_text(fname: str, directory):
    if directory:
        path = os.path.join(directory, fname)
        try:
            with open(path) as fh:
                return fh.read()
        except OSError as exc:
            raise CliError(f"cannot read golden file: {exc}")
    from importlib import resources
    ref = resources.files("wreduce").joinpath("goldens").joinpath(fname)
    if not ref.is_file():
        raise CliError(f"no packaged golden table {fname!r}")
    return ref.read_text()


def _compare_goldens(files, directory):
    """First difference between rendered tables and golden files, or None."""
    for fname in sorted(files):
        want = _golden_text(fname, directory)
        got = files[fname]
        if got == want:
            continue
        want_lines = want.splitlines()
        got_lines = got.splitlines()
        for i, (w, g) in enumerate(zip(want_lines, got_lines)):
            if w != g:
                entry = w.split(" = ")[0] if " = " in w else f"line {i + 1}"
                return (f"{fname}: first differing bracket entry {entry} "
                        f"(line {i + 1}): expected {w!r}, computed {g!r}")
        return (f"{fname}: table length differs "
                f"({len(got_lines)} lines computed, {len(want_lines)} expected)")
    return None


def cmd_verify(args, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    report = []
    _run_checks(args, report)
    failed = any(status == "fail" for _, status, _ in report)
    if args.format == "json":
        payload = {
            "checks": [{"name": n, "status": s, "detail": d}
                       for n, s, d in report],
            "ok": not failed,
        }
        print(json.dumps(payload, sort_keys=True, indent=2), file=out)
    else:
        for name, status, detail in report:
            tag = {"pass": "PASS", "fail": "FAIL", "skip": "SKIP"}[status]
            print(f"{tag} {name}: {detail}", file=out)
        print("result: " + ("FAIL" if failed else "OK"), file=out)
    return 1 if failed else 0


# -------------------------------------------------------------- examples

def example_files(name: str) -> dict:
    """All files the named example emits: {filename: text}."""
    if name == "kdv":
        setup = builtin.kdv_setup()
        red = tensor_procedure(setup)
        pencil = PoissonPencil(red.op, red.names, check=False)
        files = {"kdv_setup.json":
                 json.dumps(setup_to_json(setup), sort_keys=True, indent=2) + "\n"}
        files.update(_table_files("kdv", pencil, "text"))
        return files
    if name == "fkdv":
        files = {}
        variants = builtin.fkdv_variants()
        for vname in sorted(variants):
            slug = vname.replace("+", "p").replace("-", "_")
            files[f"fkdv_setup_{slug}.json"] = json.dumps(
                setup_to_json(variants[vname]), sort_keys=True, indent=2) + "\n"
        default = variants[builtin.FKDV_DEFAULT_VARIANT]
        files["fkdv_setup.json"] = json.dumps(
            setup_to_json(default), sort_keys=True, indent=2) + "\n"
        red = tensor_procedure(default)
        pencil = PoissonPencil(red.op, red.names, check=False)
        files.update(_table_files("fkdv", pencil, "text"))
        return files
    raise CliError(f"unknown example {name!r}: available names are kdv, fkdv")


def cmd_examples(args, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    files = example_files(args.name)
    _write_files(args.output, files, out)
    return 0


# ------------------------------------------------------------------ main

def _add_spec_flags(p):
    p.add_argument("--setup", help="setup JSON file (as written by examples)")
    p.add_argument("--builtin",
                   help="builtin algebra sl<n>, or a named example "
                        "(kdv, fkdv, fkdv:<variant>, sl4)")
    p.add_argument("--partition", help="nilpotent orbit, e.g. 2,1 (default: regular)")
    p.add_argument("--grading", help="dynkin (default), or G1/G2/G3 for sl3 minimal")
    p.add_argument("--iso", help="comma-separated spanning elements of ell, "
                                 "e.g. 'e21+e32' (default: empty)")
    p.add_argument("--a", help="admissible element a (default: f)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="wreduce",
        description="Reduce loop-algebra Poisson pencils to Slodowy slices "
                    "and verify the result three ways.")
    sub = ap.add_subparsers(dest="command", required=True)

    pr = sub.add_parser("reduce", help="compute the reduced pencil tables")
    _add_spec_flags(pr)
    pr.add_argument("--method", choices=("tensor", "dirac", "ds", "all"),
                    default="all")
    pr.add_argument("--format", choices=("text", "json"), default="text")
    pr.add_argument("--output", default=".", help="output directory")
    pr.add_argument("--prefix", help="output file prefix (default: from the spec)")

    pv = sub.add_parser("verify", help="run the invariant checks")
    _add_spec_flags(pv)
    pv.add_argument("--checks", help="comma list from: " + ", ".join(CHECK_ORDER))
    pv.add_argument("--gradings", help="comma list of grading names for the "
                                       "independence check, e.g. G1,G2,G3")
    pv.add_argument("--lambda", dest="lam",
                    help="rational lambda samples for the Jacobi scan "
                         "(default 0,1,-2/3)")
    pv.add_argument("--jacobi-degree", type=int, default=2, choices=(1, 2, 3),
                    help="max differential degree of the monomial family")
    pv.add_argument("--golden", help="directory of golden tables to compare "
                                     "against (default: packaged tables)")
    pv.add_argument("--format", choices=("text", "json"), default="text")

    pe = sub.add_parser("examples", help="emit builtin setups and golden tables")
    pe.add_argument("name", help="kdv or fkdv")
    pe.add_argument("--output", default=".", help="output directory")

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    handlers = {"reduce": cmd_reduce, "verify": cmd_verify,
                "examples": cmd_examples}
    try:
        return handlers[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON input: {exc}", file=sys.stderr)
        return 2
    except (LieAlgebraError, NoFiniteOrderInverse, ReductionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
