"""Command line front end.

Exit status: 0 on success, 1 when the mathematics says no (an obstruction,
a failed verification), 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bockstein, cobar, corpus, fileio, hopf, linalg, primitivization
from .algebra import restrict
from .errors import (
    AnickError,
    DegreeOutOfCap,
    HypothesisViolation,
    Obstructed,
    ParseError,
    TheoryViolation,
    ValidationError,
)

FIXTURES = {
    "example1": lambda p, cap: hopf.example_one(p, 1, cap),
    "example2": lambda p, cap: hopf.example_two(p, 1, cap),
    "b1": lambda p, cap: hopf.fixture_b1(p, cap=cap),
    "b2": lambda p, cap: hopf.fixture_b2(p, cap=cap),
    "b3": lambda p, cap: hopf.fixture_b3(p, cap=cap),
    "b4": lambda p, cap: hopf.fixture_b4(p, cap=cap),
}

COMMANDS = ("basis", "homology", "primitives", "jmap", "bockstein", "trivialize",
            "primitivize", "verify", "oracle-check")


class InputError(AnickError):
    pass


class Report:
    def __init__(self, emit, out):
        self.emit = emit
        self.out = out

    def record(self, rec: dict, text: str):
        if self.emit == "records":
            self.out.write(json.dumps(rec, sort_keys=True, ensure_ascii=False) + "\n")
        else:
            self.out.write(text + "\n")


def _degrees(spec, default):
    if spec is None:
        return list(default)
    if ":" in spec:
        lo, hi = spec.split(":", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in spec.split(",")]


def _load(args) -> hopf.HahPresentation:
    if args.fixture:
        if args.fixture not in FIXTURES:
            raise InputError(f"unknown fixture {args.fixture!r}; choose from {sorted(FIXTURES)}")
        return FIXTURES[args.fixture](args.prime or 3, args.cap or 20)
    if not args.input:
        raise InputError("give a presentation file or --fixture")
    try:
        with open(args.input, encoding="utf-8") as fh:
            raw = fh.read()
    except OSError as exc:
        raise InputError(str(exc)) from None
    doc_H = fileio.loads_presentation(raw)
    if args.prime is not None and args.prime != doc_H.p:
        raise InputError(f"--prime {args.prime} does not match the file's prime {doc_H.p}")
    if args.cap is not None and args.cap != doc_H.cap:
        d = fileio.presentation_to_dict(doc_H)
        d["cap"] = args.cap
        doc_H = fileio.presentation_from_dict(d)
    return doc_H


def cmd_basis(H, args, rep):
    alg = H.algebra
    for n in _degrees(args.degree, range(alg.cap + 1)):
        names = [alg.render_mono(m) for m in alg.basis(n)]
        rep.record({"command": "basis", "degree": n, "dim": len(names), "basis": names},
                   f"degree {n}: dim {len(names)}" + (f": {', '.join(names)}" if names else ""))
    return 0


def cmd_homology(H, args, rep):
    alg = H.algebra
    degrees = _degrees(args.degree, range(alg.cap))
    C = hopf.algebra_complex(H, 0, max(degrees) + 1)
    for n in degrees:
        hs = linalg.homology_at(C, n)
        tors = [H.p**s for s in hs.torsion]
        text = f"degree {n}: free rank {hs.betti}"
        if tors:
            text += ", torsion " + " + ".join(f"Z/{t}" for t in tors)
        rep.record({"command": "homology", "degree": n, "betti": hs.betti, "torsion": tors,
                    "free_reps": [alg.from_vector(n, v).render() for v in hs.free_reps]}, text)
    return 0


def cmd_primitives(H, args, rep):
    alg = H.algebra
    for n in _degrees(args.degree, range(1, alg.cap + 1)):
        P = hopf.primitives_at(H, n)
        names = [b.render() for b in P.basis]
        if args.degree is None and not names:
            continue
        rep.record({"command": "primitives", "degree": n, "dim": len(names), "basis": names},
                   f"degree {n}: dim {len(names)}" + (f": {', '.join(names)}" if names else ""))
    return 0


def cmd_jmap(H, args, rep):
    alg = H.algebra
    for n in _degrees(args.degree, range(1, alg.cap)):
        J = hopf.j_map_at(H, n)
        rep.record(
            {"command": "jmap", "degree": n, "source_dim": J.source_dim, "target_dim": J.target_dim,
             "rank": J.rank, "kernel_dim": J.kernel_dim, "cokernel_dim": J.cokernel_dim,
             "injective": J.injective, "surjective": J.surjective},
            f"degree {n}: H(PA) dim {J.source_dim} -> PH(A) dim {J.target_dim}, "
            f"kernel dim {J.kernel_dim}, cokernel dim {J.cokernel_dim}",
        )
    return 0


def cmd_bockstein(H, args, rep):
    if H.ring.kind != "localized":
        raise InputError("the Bockstein spectral sequence needs a localized (Z_(p)) presentation")
    alg = H.algebra
    degrees = _degrees(args.degree, range(1, alg.cap))
    C = hopf.algebra_complex(H, 0, max(degrees) + 1)
    page_list, ladder = bockstein.pages(C, degrees, args.page_max)
    for page in page_list:
        for n in degrees:
            rep.record(
                {"command": "bockstein", "page": page.r, "degree": n, "dim": page.dim(n),
                 "beta": page.beta[n], "beta_rank": page.beta_rank(n)},
                f"E^{page.r}_{n}: dim {page.dim(n)}, rank beta^{page.r} {page.beta_rank(n)}",
            )
    return 0


def _extension_from(H):
    alg = H.algebra
    k = len(alg.generators) - 1
    if k < 0:
        raise InputError("the presentation has no generators")
    base = H.sub(k)
    name = alg.names[k]
    n = alg.degrees[k]
    b = restrict(H.differential.value(k), base.algebra)
    phi = restrict(H.diagonal[k], base.algebra)
    f = g = None
    if k in H.homotopies:
        f, g = (restrict(t, base.algebra) for t in H.homotopies[k])
    return primitivization.ExtensionProblem(base, name, n, b, phi, f, g)


def _write_certificate(args, cert, rep):
    if args.certificate:
        with open(args.certificate, "w", encoding="utf-8") as fh:
            fh.write(fileio.dumps(cert))
    if rep.emit == "records":
        rep.record(dict(cert, command=args.command), "")


def cmd_trivialize(H, args, rep):
    problem = _extension_from(H)
    try:
        iso = primitivization.trivialize_extension(problem)
    except Obstructed as exc:
        ob = exc.obstruction
        order = getattr(ob, "order", None)
        rep.record({"command": "trivialize", "obstructed": True, "order": order, "message": str(exc)},
                   f"obstructed: {exc}")
        return 1
    cert = fileio.trivialization_certificate(iso)
    if rep.emit == "text":
        x = problem.name
        if iso.a.terms:
            rep.record({}, f"theta({x}) = {x} + {iso.a.render()}")
        else:
            rep.record({}, f"theta = id ({x} already primitive up to homotopy)")
        rep.record({}, f"Psi = {iso.psi.render()}")
        rep.record({}, f"stop page {iso.stop_page}; certificate verifies: {iso.verify()}")
    _write_certificate(args, cert, rep)
    return 0


def cmd_primitivize(H, args, rep):
    res = primitivization.primitivize(H)
    cert = fileio.primitivization_certificate(res)
    if rep.emit == "text":
        for n in H.algebra.names:
            e = res.corrections[n]
            rep.record({}, f"theta({n}) = {n}" + (f" + {e.render()}" if e.terms else ""))
        for i, n in enumerate(H.algebra.names):
            rep.record({}, f"d'({n}) = {res.target.differential.value(i).render()}")
        rep.record({}, "identity isomorphism" if res.is_identity() else "isomorphism verified")
    _write_certificate(args, cert, rep)
    return 0


def cmd_verify(args, rep):
    if not args.input:
        raise InputError("verify needs a file")
    try:
        with open(args.input, encoding="utf-8") as fh:
            raw = fh.read()
    except OSError as exc:
        raise InputError(str(exc)) from None
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if isinstance(doc, dict) and "certificate" in doc:
        res = fileio.verify_certificate(doc)
        for k, v in sorted(res["checks"].items()):
            rep.record({"command": "verify", "check": k, "ok": bool(v)}, f"{k}: {'ok' if v else 'FAILED'}")
    else:
        H = fileio.loads_presentation(raw, validate=False)
        res = primitivization.verify_presentation(H)
        for k, v in sorted(res["checks"].items()):
            rep.record({"command": "verify", "check": k, "ok": v["ok"], "offender": v["offender"]},
                       f"{k}: {'ok' if v['ok'] else 'FAILED ' + json.dumps(v['offender'], sort_keys=True)}")
    return 0 if res["ok"] else 1


def cmd_oracle_check(args, rep):
    p = args.prime or 3
    cap = args.cap or 10
    seed = args.seed if args.seed is not None else 0
    probs = corpus.extension_corpus(seed, p, cap, args.count)
    agree = 0
    for i, s in enumerate(probs):
        try:
            iso = primitivization.trivialize_extension(s.problem)
            staged = iso.verify()
        except Obstructed:
            staged = False
        oracle = cobar.obstruction(s.problem.base, s.problem.phi).order == 0
        agree += staged == oracle
        rep.record({"command": "oracle-check", "instance": i, "degree": s.problem.degree,
                    "staged": staged, "oracle": oracle},
                   f"instance {i}: degree {s.problem.degree}, staged {staged}, oracle {oracle}")
    rep.record({"command": "oracle-check", "agree": agree, "total": len(probs)},
               f"staged == oracle on {agree}/{len(probs)} instances")
    return 0 if agree == len(probs) else 1


def build_parser():
    ap = argparse.ArgumentParser(prog="anick", description="Primitivization of Hopf algebras up to homotopy")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("input", nargs="?", help="presentation or certificate file (JSON)")
    ap.add_argument("--fixture", help=f"built-in presentation: {', '.join(sorted(FIXTURES))}")
    ap.add_argument("--prime", type=int)
    ap.add_argument("--cap", type=int)
    ap.add_argument("--degree", help="N, N1,N2,... or LO:HI")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--page-max", type=int, dest="page_max")
    ap.add_argument("--emit", choices=("text", "records"), default="text")
    ap.add_argument("--certificate", help="write the certificate JSON here")
    return ap


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    rep = Report(args.emit, out)
    try:
        if args.command == "verify":
            return cmd_verify(args, rep)
        if args.command == "oracle-check":
            return cmd_oracle_check(args, rep)
        H = _load(args)
        handler = {
            "basis": cmd_basis,
            "homology": cmd_homology,
            "primitives": cmd_primitives,
            "jmap": cmd_jmap,
            "bockstein": cmd_bockstein,
            "trivialize": cmd_trivialize,
            "primitivize": cmd_primitivize,
        }[args.command]
        return handler(H, args, rep)
    except (ParseError, ValidationError, InputError, DegreeOutOfCap, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (Obstructed, HypothesisViolation) as exc:
        sys.stderr.write(f"obstructed: {exc}\n")
        return 1
    except TheoryViolation as exc:
        sys.stderr.write(f"theory violation: {exc}\n")
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
