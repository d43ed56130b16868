"""JSON presentation files, element expressions and certificates.

A presentation file looks like::

    {
      "ring": {"p": 3, "kind": "modp"},
      "flavor": "commutative",
      "cap": 20,
      "generators": [{"name": "x", "degree": 2, "truncation": null},
                     {"name": "y", "degree": 1, "truncation": null}],
      "differential": {"x": "y"},
      "diagonal": {},
      "homotopies": {},
      "metadata": {"q": 1, "rho": 3}
    }

Element expressions use the canonical rendering: ``2*x^2*y + 1/2*y^3`` for
commutative monomials, ``u.v.u`` for words, ``x (x) y`` for tensors.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from . import linalg
from .algebra import COMMUTATIVE, FREE, AlgebraPresentation, Derivation, Element, GeneratorSpec, Tensor
from .errors import AnickError, ParseError, ValidationError
from .hopf import HahPresentation

FORMAT_VERSION = 1

_TOKEN = re.compile(
    r"\s*(?:(?P<tensor>\(x\))|(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/.^])|(?P<bad>\S))"
)


# --------------------------------------------------------------------------
# expressions


def _tokens(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        kind = m.lastgroup
        if kind == "bad":
            raise ParseError(f"unexpected character {m.group(kind)!r}", column=m.start(kind) + 1)
        out.append((kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    out.append(("end", "", len(text) + 1))
    return out


class _Parser:
    def __init__(self, alg: AlgebraPresentation, text: str, k: int):
        self.alg = alg
        self.text = text
        self.k = k
        self.toks = _tokens(text)
        self.i = 0

    def peek(self, off=0):
        return self.toks[min(self.i + off, len(self.toks) - 1)]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, column=tok[2])

    def expect(self, kind, value=None):
        t = self.peek()
        if t[0] != kind or (value is not None and t[1] != value):
            self.fail(f"expected {value or kind}, found {t[1] or 'end of input'!r}")
        return self.take()

    def parse(self):
        terms = {}
        if [t[:2] for t in self.toks] == [("num", "0"), ("end", "")]:
            return terms
        sign = 1
        first = True
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] in "+-":
                self.take()
                sign = -1 if t[1] == "-" else 1
            elif not first:
                if t[0] == "end":
                    break
                self.fail(f"expected + or -, found {t[1]!r}")
            coeff, key = self.term()
            terms[key] = terms.get(key, 0) + sign * coeff
            first = False
            sign = 1
            if self.peek()[0] == "end":
                break
        return terms

    def number(self):
        n = int(self.expect("num")[1])
        if self.peek() == ("op", "/", self.peek()[2]):
            self.take()
            d = int(self.expect("num")[1])
            if d == 0:
                self.fail("zero denominator")
            return Fraction(n, d)
        return n

    def term(self):
        coeff = 1
        if self.peek()[0] == "num":
            coeff = self.number()
            t = self.peek()
            if t[0] == "op" and t[1] == "*":
                self.take()
            elif t[0] in ("end",) or (t[0] == "op" and t[1] in "+-"):
                if self.k != 1:
                    self.fail("a scalar is not a tensor")
                return coeff, self.alg.one
            else:
                self.fail(f"expected * after coefficient, found {t[1]!r}")
        factors = [self.mono()]
        while self.peek()[0] == "tensor":
            self.take()
            factors.append(self.mono())
        if len(factors) != self.k:
            self.fail(f"expected {self.k} tensor factors, found {len(factors)}")
        for sign, _ in factors:
            coeff *= sign
        keys = tuple(m for _, m in factors)
        return coeff, keys[0] if self.k == 1 else keys

    def mono(self):
        alg = self.alg
        if self.peek()[0] == "num" and self.peek()[1] == "1":
            self.take()
            return 1, alg.one
        word = []
        sep = "." if alg.flavor == FREE else "*"
        while True:
            t = self.expect("name")
            try:
                i = alg.gen_index(t[1])
            except KeyError:
                self.fail(f"unknown generator {t[1]!r}", t)
            e = 1
            if self.peek()[0] == "op" and self.peek()[1] == "^":
                self.take()
                e = int(self.expect("num")[1])
            word.extend([i] * e)
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] == sep and self.peek(1)[0] == "name":
                self.take()
                continue
            break
        sign, m = 1, alg.one
        for i in word:
            prod = alg.mono_mul(m, alg.gen_mono(i))
            if prod is None:
                return 0, None
            s, m = prod
            sign *= s
        return sign, m


def parse_element(alg: AlgebraPresentation, text: str, degree=None) -> Element:
    terms = _Parser(alg, text, 1).parse()
    terms = {m: c for m, c in terms.items() if m is not None and c}
    return _homogeneous(alg, terms, degree, lambda t: alg.mono_degree(t), lambda d, ts: Element(alg, d, ts))


def parse_tensor(alg: AlgebraPresentation, text: str, k: int = 2, degree=None) -> Tensor:
    terms = _Parser(alg, text, k).parse()
    terms = {t: c for t, c in terms.items() if None not in t and c}
    return _homogeneous(
        alg, terms, degree, lambda t: sum(alg.mono_degree(m) for m in t), lambda d, ts: Tensor(alg, k, d, ts)
    )


def _homogeneous(alg, terms, degree, deg_of, make):
    terms = {t: c for t, c in terms.items() if alg.ring.norm(c) != 0}
    degs = {deg_of(t) for t in terms}
    if len(degs) > 1:
        raise ParseError(f"expression is not homogeneous (degrees {sorted(degs)})")
    d = degs.pop() if degs else degree
    if degree is not None and d != degree:
        raise ParseError(f"expression has degree {d}, expected {degree}")
    return make(d if d is not None else 0, terms)


# --------------------------------------------------------------------------
# presentations


def _no_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise ParseError(f"duplicate key {k!r}")
        out[k] = v
    return out


def _locate(raw: str, needle: str):
    """Line and column of the first occurrence of a JSON string literal."""
    lit = json.dumps(needle, ensure_ascii=False)
    at = raw.find(lit)
    if at < 0:
        return None, None
    line = raw.count("\n", 0, at) + 1
    col = at - (raw.rfind("\n", 0, at) + 1) + 2
    return line, col


def loads_presentation(raw: str, validate: bool = True) -> HahPresentation:
    try:
        doc = json.loads(raw, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    except ParseError as exc:
        key = exc.message.split("'")[1] if "'" in exc.message else ""
        raise ParseError(exc.message, *_locate(raw, key)) from None
    return presentation_from_dict(doc, raw, validate)


def _field(doc, key, kind, raw, default=None, required=True):
    if key not in doc:
        if required:
            raise ParseError(f"missing field {key!r}")
        return default
    v = doc[key]
    if not isinstance(v, kind):
        line, col = _locate(raw, key)
        raise ParseError(f"field {key!r} has the wrong type", line, col)
    return v


def presentation_from_dict(doc: dict, raw: str = "", validate: bool = True) -> HahPresentation:
    if not isinstance(doc, dict):
        raise ParseError("a presentation is a JSON object")
    ring_doc = _field(doc, "ring", dict, raw)
    p = _field(ring_doc, "p", int, raw)
    kind = _field(ring_doc, "kind", str, raw, "localized", required=False)
    try:
        ring = linalg.make_ring(p, kind)
    except ValueError as exc:
        raise ParseError(str(exc), *_locate(raw, "ring")) from None
    flavor = _field(doc, "flavor", str, raw)
    if flavor not in (FREE, COMMUTATIVE):
        raise ParseError(f"flavor must be {FREE!r} or {COMMUTATIVE!r}", *_locate(raw, flavor))
    cap = _field(doc, "cap", int, raw)
    gens_doc = _field(doc, "generators", list, raw)
    specs, seen = [], set()
    for g in gens_doc:
        if not isinstance(g, dict) or "name" not in g or "degree" not in g:
            raise ParseError("each generator needs a name and a degree")
        name = g["name"]
        if name in seen:
            raise ParseError(f"duplicate generator {name!r}", *_locate(raw, name))
        seen.add(name)
        if not isinstance(g["degree"], int) or g["degree"] < 1:
            raise ParseError(f"generator {name!r} needs a positive integer degree", *_locate(raw, name))
        specs.append(GeneratorSpec(name, g["degree"], g.get("truncation")))
    try:
        alg = AlgebraPresentation(flavor, specs, cap, ring)
    except ValueError as exc:
        raise ParseError(str(exc)) from None

    def expr(text, parse, where, **kw):
        if not isinstance(text, str):
            raise ParseError(f"{where}: expression must be a string", *_locate(raw, where))
        try:
            return parse(alg, text, **kw)
        except ParseError as exc:
            line, col = _locate(raw, text)
            if col is not None and exc.column is not None:
                col += exc.column - 1
            raise ParseError(f"{where}: {exc.message}", line, col) from None

    def check_name(name):
        if name not in seen:
            raise ParseError(f"unknown generator {name!r}", *_locate(raw, name))
        return alg.generators[alg.gen_index(name)]

    diff = {}
    for name, text in _field(doc, "differential", dict, raw, {}, required=False).items():
        g = check_name(name)
        diff[name] = expr(text, parse_element, f"differential.{name}", degree=g.degree - 1)
    diag = {}
    for name, text in _field(doc, "diagonal", dict, raw, {}, required=False).items():
        g = check_name(name)
        diag[name] = expr(text, parse_tensor, f"diagonal.{name}", degree=g.degree)
    homs = {}
    for name, fg in _field(doc, "homotopies", dict, raw, {}, required=False).items():
        g = check_name(name)
        if not isinstance(fg, dict):
            raise ParseError(f"homotopies.{name} must be an object with f and g", *_locate(raw, name))
        f = expr(fg.get("f", "0"), parse_tensor, f"homotopies.{name}.f", k=3, degree=g.degree + 1)
        gg = expr(fg.get("g", "0"), parse_tensor, f"homotopies.{name}.g", k=2, degree=g.degree + 1)
        homs[name] = (f, gg)
    meta = _field(doc, "metadata", dict, raw, {}, required=False)
    try:
        H = HahPresentation(alg, Derivation(alg, diff, validate=False), diag, homs,
                            q=meta.get("q"), rho=meta.get("rho"))
    except (AnickError, ValueError) as exc:
        raise ParseError(str(exc)) from None
    if validate:
        from .primitivization import verify_presentation

        report = verify_presentation(H)
        if not report["ok"]:
            bad = [k for k, v in report["checks"].items() if not v["ok"]]
            raise ValidationError(f"presentation fails {', '.join(bad)}", report)
    return H


def load_presentation(path, validate: bool = True) -> HahPresentation:
    with open(path, encoding="utf-8") as fh:
        return loads_presentation(fh.read(), validate)


parse_presentation = load_presentation


def presentation_to_dict(H: HahPresentation) -> dict:
    alg = H.algebra
    gens = []
    for g in alg.generators:
        gens.append({"name": g.name, "degree": g.degree, "truncation": g.truncation})
    diff = {n: H.differential.value(i).render() for i, n in enumerate(alg.names) if H.differential.value(i)}
    diag = {alg.names[i]: v.render() for i, v in H.diagonal.items() if v}
    homs = {alg.names[i]: {"f": f.render(), "g": g.render()} for i, (f, g) in H.homotopies.items()}
    meta = {"q": H.q}
    if H.rho is not None:
        meta["rho"] = H.rho
    return {
        "ring": {"p": H.p, "kind": H.ring.kind},
        "flavor": alg.flavor,
        "cap": alg.cap,
        "generators": gens,
        "differential": diff,
        "diagonal": diag,
        "homotopies": homs,
        "metadata": meta,
    }


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def render_presentation(H: HahPresentation) -> str:
    return dumps(presentation_to_dict(H))


def presentations_equal(H1: HahPresentation, H2: HahPresentation) -> bool:
    return presentation_to_dict(H1) == presentation_to_dict(H2)


# --------------------------------------------------------------------------
# certificates


def trivialization_certificate(iso) -> dict:
    prob = iso.problem
    B = prob.base
    states = [
        {"r": s.r, "a": s.a.render(), "phi": s.phi.render(), "omega": s.omega.render()}
        for s in iso.states
    ]
    return {
        "certificate": "trivialization",
        "version": FORMAT_VERSION,
        "base": presentation_to_dict(B),
        "generator": {"name": prob.name, "degree": prob.degree},
        "b": prob.b.render(),
        "phi": prob.phi.render(),
        "a": iso.a.render(),
        "psi": iso.psi.render(),
        "stop_page": iso.stop_page,
        "states": states,
        "residuals": {k: v.render() for k, v in iso.residuals().items()},
    }


def primitivization_certificate(result) -> dict:
    alg = result.target.algebra
    return {
        "certificate": "primitivization",
        "version": FORMAT_VERSION,
        "source": presentation_to_dict(result.source),
        "target": presentation_to_dict(result.target),
        "theta": {n: result.corrections[n].render() for n in alg.names},
        "homotopy": {n: result.homotopy[n].render() for n in alg.names},
    }


def verify_certificate(doc: dict) -> dict:
    """Recheck a certificate by exact evaluation; uses no solver."""
    kind = doc.get("certificate")
    if kind == "trivialization":
        B = presentation_from_dict(doc["base"], validate=False)
        alg = B.algebra
        n = doc["generator"]["degree"]
        b = parse_element(alg, doc["b"], n - 1)
        phi = parse_tensor(alg, doc["phi"], 2, n)
        a = parse_element(alg, doc["a"], n)
        psi = parse_tensor(alg, doc["psi"], 2, n + 1)
        checks = {
            "b_cycle": not B.d(b),
            "b_primitive": not B.reduced_diagonal(b),
            "a_cycle": not B.d(a),
            "diagonal": B.reduced_diagonal(a) - phi - B.d(psi) == Tensor(alg, 2, n, {}),
        }
        p = B.p
        for s in doc.get("states", []):
            r = s["r"]
            ar = parse_element(alg, s["a"], n)
            phr = parse_tensor(alg, s["phi"], 2, n)
            om = parse_tensor(alg, s["omega"], 2, n + 1)
            res = B.reduced_diagonal(ar) - phi + phr.scale(p**r) - B.d(om)
            checks[f"state_{r}"] = not res and not B.d(ar) and not B.d(phr)
        return {"ok": all(checks.values()), "checks": checks}
    if kind == "primitivization":
        from .primitivization import PrimitivizationResult, verify_isomorphism

        src = presentation_from_dict(doc["source"], validate=False)
        tgt = presentation_from_dict(doc["target"], validate=False)
        alg = tgt.algebra
        corr = {
            n: parse_element(alg, doc["theta"][n], alg.degrees[i]) for i, n in enumerate(alg.names)
        }
        hom = {
            n: parse_tensor(alg, doc["homotopy"][n], 2, alg.degrees[i] + 1) for i, n in enumerate(alg.names)
        }
        res = verify_isomorphism(PrimitivizationResult(src, tgt, corr, hom, []))
        return {"ok": res["ok"], "checks": {"isomorphism": res["ok"]}, "failures": res["failures"]}
    raise ValidationError(f"unknown certificate kind {kind!r}")
