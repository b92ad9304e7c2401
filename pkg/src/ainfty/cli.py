"""Command line driver.

Commands: check, cohomology, transfer, extend, tty, pdcorrect, torus-witness,
cpn-witness.  Exit codes: 0 all checks pass, 1 a mathematical check failed or
a finding was produced, 2 usage or parse errors.  Output JSON is canonical
(sorted keys, rationals as "p/q", no timestamps): identical inputs and flags
reproduce identical bytes.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from .ainf import (check_pd_cyclic, check_stasheff, check_strict_unitality,
                   dga_to_ainf, identity_morphism)
from .dga import check_dga_axioms, cohomology_ring
from .extension import (cpn_formality_witness, extend_dga,
                        torus_nonformality_witness)
from .graded import AlgebraError, MalformedInput, compute_splitting
from .io_json import (TOOL_VERSION, certificate, load_algebra_file,
                      morphism_json, multilinear_json, parse_vector_expr,
                      structure_json, to_canonical_json)
from .pdcorrect import CyclicPDInput, pd_correct
from .report import Report
from .symplectic import (build_filtered_complex, build_tty_structure,
                         compare_with_extension)
from .transfer import (kadeishvili_transfer, strictly_unital_transfer,
                       vanishing_profile, verify_transfer)

EXIT_OK = 0
EXIT_FINDING = 1
EXIT_USAGE = 2


def _emit(doc: dict, out_path: Optional[str]):
    text = to_canonical_json(doc)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _print_report(rep: Report):
    print(rep.summary(), file=sys.stderr)


def cmd_check(args) -> int:
    alg, digest = load_algebra_file(args.path)
    rep = Report(f"check {alg.kind}")
    if alg.kind in ("dga", "symplectic"):
        rep.merge(check_dga_axioms(alg.dga))
        if alg.kind == "symplectic":
            from .symplectic import build_lefschetz_context
            build_lefschetz_context(alg.model)   # raises on sl2 violations
            rep.add("sl2_relations_and_lefschetz_decomposition", True)
        if alg.kind == "symplectic" and alg.level is not None:
            tty = build_tty_structure(build_filtered_complex(alg.model, alg.level))
            rep.merge(tty.report, prefix=f"tty_l{alg.level}_")
    else:
        struct = alg.structure
        rep.merge(check_stasheff(struct, struct.p_max))
        if struct.unit is not None:
            rep.merge(check_strict_unitality(struct))
        if alg.pd is not None:
            rep.merge(check_pd_cyclic(alg.pd, struct.p_max))
    _print_report(rep)
    _emit(certificate("check", digest, None, {"report": rep.to_json()}), args.out)
    return EXIT_OK if rep.ok else EXIT_FINDING


def cmd_cohomology(args) -> int:
    alg, digest = load_algebra_file(args.path)
    if alg.dga is None:
        raise MalformedInput("cohomology needs a dga or symplectic file")
    H = cohomology_ring(alg.dga)
    doc = certificate("cohomology", digest, None, {
        "betti": {str(k): H.splitting.betti()[k] for k in H.splitting.betti()},
        "ring": structure_json(dga_to_ainf(H.ring)),
    })
    _emit(doc, args.out)
    return EXIT_OK


def cmd_transfer(args) -> int:
    alg, digest = load_algebra_file(args.path)
    source = alg.dga if alg.dga is not None else alg.structure
    if args.strict_unital:
        T = strictly_unital_transfer(source, p_max=args.pmax)
    else:
        T = kadeishvili_transfer(source, p_max=args.pmax)
    rep = verify_transfer(T)
    if args.strict_unital:
        rep.merge(check_strict_unitality(T.structure))
        from .ainf import check_strict_unitality_morphism
        rep.merge(check_strict_unitality_morphism(T.morphism))
    payload = {
        "report": rep.to_json(),
        "minimal_model": structure_json(T.structure),
        "morphism": morphism_json(T.morphism),
        "nonzero_arities": T.structure.nonzero_arities(),
    }
    if T.structure.unit is not None and check_strict_unitality(T.structure).ok:
        payload["vanishing"] = vanishing_profile(T).to_json()
    _print_report(rep)
    _emit(certificate("transfer", digest, args.pmax, payload), args.out)
    return EXIT_OK if rep.ok else EXIT_FINDING


def cmd_extend(args) -> int:
    alg, digest = load_algebra_file(args.path)
    if alg.dga is None:
        raise MalformedInput("extend needs a dga or symplectic file")
    omega = parse_vector_expr(alg.dga, args.omega) if args.omega else alg.omega
    if omega is None:
        raise MalformedInput("no omega given (flag --omega or file field)")
    ext = extend_dga(alg.dga, omega, args.theta_degree)
    rep = check_dga_axioms(ext.dga)
    s = compute_splitting(ext.dga.space, ext.dga.d)
    _print_report(rep)
    payload = {
        "report": rep.to_json(),
        "theta_degree": ext.theta_degree,
        "total_dim": ext.dga.space.total_dim(),
        "betti": {str(k): v for k, v in s.betti().items()},
    }
    _emit(certificate("extend", digest, None, payload), args.out)
    return EXIT_OK if rep.ok else EXIT_FINDING


def cmd_tty(args) -> int:
    alg, digest = load_algebra_file(args.path)
    if alg.model is None:
        raise MalformedInput("tty needs a symplectic file "
                             "(degree-one generators and nondegenerate omega)")
    level = args.level if args.level is not None else (alg.level or 0)
    fc = build_filtered_complex(alg.model, level)
    tty = build_tty_structure(fc)
    rep = Report(f"tty level {level}")
    rep.merge(tty.report)
    cmp_rep, data = compare_with_extension(alg.model, level,
                                           p_max=min(args.pmax, 4), tty=tty)
    rep.merge(cmp_rep)
    _print_report(rep)
    payload = {
        "report": rep.to_json(),
        "level": level,
        "complex_dims": {str(t): fc.space.dim(t) for t in fc.space.degrees()},
        "betti_tty": {str(k): v for k, v in data["betti_tty"].items()},
        "betti_extension": {str(k): v for k, v in data["betti_extension"].items()},
    }
    _emit(certificate("tty", digest, args.pmax, payload), args.out)
    return EXIT_OK if rep.ok else EXIT_FINDING


def cmd_pdcorrect(args) -> int:
    alg, digest = load_algebra_file(args.path)
    if alg.structure is None or alg.pd is None:
        raise MalformedInput("pdcorrect needs an ainf file with a pd block")
    struct = alg.structure
    if not struct.minimal:
        raise MalformedInput("pdcorrect input must be minimal (m_1 = 0)")
    from .graded import GradedLinearMap
    splitting = compute_splitting(struct.space,
                                  GradedLinearMap(struct.space, struct.space, 1))
    inp = CyclicPDInput(pd=alg.pd, source=struct,
                        morphism=identity_morphism(struct, args.pmax),
                        splitting=splitting,
                        connectivity=args.k if args.k is not None
                        else alg.pd.connectivity,
                        target_arity=args.l, p_max=args.pmax)
    out = pd_correct(inp)
    _print_report(out.report)
    payload = {
        "report": out.report.to_json(),
        "target_arity": args.l,
        "corrected_model": structure_json(out.structure),
        "delta_lm1": multilinear_json(struct.space, out.delta_lm1),
        "delta_l": multilinear_json(struct.space, out.delta_l),
        "vanishing": out.certificate.to_json(),
        "notes": out.notes,
    }
    _emit(certificate("pdcorrect", digest, args.pmax, payload), args.out)
    return EXIT_OK if out.report.ok else EXIT_FINDING


def cmd_torus_witness(args) -> int:
    wit = torus_nonformality_witness(args.n, p_max=args.pmax)
    ok = wit.nonzero and wit.scalar is not None and wit.m2_value.is_zero()
    payload = {"witness": wit.to_json(), "nonformality_established": ok,
               "report": wit.model.report.to_json()}
    _emit(certificate("torus-witness", None, args.pmax, payload), args.out)
    print(f"m3([y e1],[e2],[e2]) = {wit.scalar} * [theta y e2] "
          f"({'nonzero' if ok else 'ZERO / not proportional'})", file=sys.stderr)
    return EXIT_OK if ok and wit.model.report.ok else EXIT_FINDING


def cmd_cpn_witness(args) -> int:
    wit = cpn_formality_witness(args.n, p_max=args.pmax)
    ok = (wit.higher_ops_zero and wit.certificate.certified_from == 3 and
          set(wit.h_dims) == {0, 2 * args.n + 1})
    payload = {"witness": wit.to_json(), "formality_established": ok,
               "report": wit.model.report.to_json()}
    _emit(certificate("cpn-witness", None, args.pmax, payload), args.out)
    print(f"extension of H*(CP^{args.n}): m_p = 0 certified for all p >= 3: {ok}",
          file=sys.stderr)
    return EXIT_OK if ok and wit.model.report.ok else EXIT_FINDING


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ainfty",
        description="Exact-arithmetic A-infinity minimal models over Q")
    ap.add_argument("--version", action="version", version=TOOL_VERSION)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, path=True):
        if path:
            p.add_argument("path", help="algebra JSON file")
        p.add_argument("--pmax", type=int, default=6,
                       help="arity truncation bound (default 6)")
        p.add_argument("--jobs", type=int, default=1,
                       help="worker count; evaluation is currently sequential, "
                            "the flag is reserved")
        p.add_argument("--out", help="write the certificate JSON to this file")

    p = sub.add_parser("check", help="run the axiom/identity checkers")
    common(p)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("cohomology", help="Betti numbers and cohomology ring")
    common(p)
    p.set_defaults(fn=cmd_cohomology)

    p = sub.add_parser("transfer", help="A-infinity minimal model")
    common(p)
    p.add_argument("--strict-unital", action="store_true")
    p.set_defaults(fn=cmd_transfer)

    p = sub.add_parser("extend", help="theta extension with d theta = omega")
    common(p)
    p.add_argument("--omega", help="omega expression (overrides the file)")
    p.add_argument("--theta-degree", type=int, default=None)
    p.set_defaults(fn=cmd_extend)

    p = sub.add_parser("tty", help="filtered two-row structure and checks")
    common(p)
    p.add_argument("--level", type=int, default=None)
    p.set_defaults(fn=cmd_tty)

    p = sub.add_parser("pdcorrect", help="kill operations of arity >= l")
    common(p)
    p.add_argument("--k", type=int, default=None, help="connectivity")
    p.add_argument("--l", type=int, required=True, help="target arity (>= 3)")
    p.set_defaults(fn=cmd_pdcorrect)

    p = sub.add_parser("torus-witness",
                       help="nonzero m3 on the 2n-torus extension")
    common(p, path=False)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(fn=cmd_torus_witness)

    p = sub.add_parser("cpn-witness",
                       help="formality of the CP^n extension")
    common(p, path=False)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(fn=cmd_cpn_witness)
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.fn(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MalformedInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AlgebraError as exc:
        print(f"finding: {exc}", file=sys.stderr)
        return EXIT_FINDING


if __name__ == "__main__":
    sys.exit(main())
