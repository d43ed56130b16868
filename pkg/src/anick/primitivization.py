"""Trivializing the diagonal of a free monogenic extension, and primitivization.

An extension problem is a strict, primitively generated base A together with
a new generator x, its boundary b ∈ P(A) and its reduced diagonal Φ ∈ I⊗I.
The staged pipeline works page by page through the Bockstein spectral
sequence of A: at page r it keeps

    Δ̄a_r = Φ − p^r Φ_r + ∂Ω_r,   ∂a_r = 0,   ∂Φ_r = 0,

and once p^r kills the torsion of the cobar homology the remaining term is
absorbed by one last solve. Every existence step is a single exact linear
system over Z_(p); whenever the theory promises a solution and none exists
a TheoryViolation is raised.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import cobar, linalg
from .algebra import (
    FREE,
    Derivation,
    Element,
    Tensor,
    embed,
    restrict,
    tensor,
)
from .errors import (
    DegreeOutOfCap,
    HypothesisViolation,
    IterationBoundExceeded,
    Obstructed,
    OutOfRange,
    SolveFailed,
)
from .hopf import (
    REDUCED_DIFFERENCE,
    HahPresentation,
    algebra_complex,
    coassociativity_defect,
    cocommutativity_defect,
    homotopy_defects,
)

DEFAULT_ITERATION_CAP = 64


# --------------------------------------------------------------------------
# block linear systems


class _System:
    """Unknown vectors and block equations, solved in one Smith solve."""

    def __init__(self, ring):
        self.ring = ring
        self.unknowns = []
        self.equations = []

    def unknown(self, name, size):
        self.unknowns.append((name, size))

    def equation(self, blocks: dict, rhs):
        self.equations.append((len(rhs), blocks, list(rhs)))

    def solve(self):
        cols = [s for _, s in self.unknowns]
        rows = [r for r, _, _ in self.equations]
        grid = [[blocks.get(name) for name, _ in self.unknowns] for _, blocks, _ in self.equations]
        M = linalg.block_matrix(self.ring, grid, rows, cols)
        rhs = [x for _, _, v in self.equations for x in v]
        sol = linalg.solve(self.ring, M, rhs, sum(cols))
        if sol is None:
            return None
        parts = linalg.split_vector(sol, cols)
        return {name: part for (name, _), part in zip(self.unknowns, parts)}


class _Blocks:
    """Structure matrices of a base presentation, memoized per degree."""

    def __init__(self, B: HahPresentation):
        self.B = B
        self.ring = B.ring
        self.alg = B.algebra
        self._m = {}

    def _get(self, key, make):
        if key not in self._m:
            self._m[key] = make()
        return self._m[key]

    def dim(self, n):
        return self.alg.dim(n) if 0 <= n <= self.alg.cap else 0

    def tdim(self, n):
        return len(self.alg.tensor_basis(2, n)) if 0 <= n <= self.alg.cap else 0

    def d(self, n):
        """∂ : A_n → A_{n−1}."""
        return self._get(("d", n), lambda: self.B.differential_matrix(n))

    def td(self, n):
        """∂ : (I⊗I)_n → (I⊗I)_{n−1}."""
        return self._get(("td", n), lambda: self.B.tensor_differential_matrix(2, n))

    def delta(self, n):
        """Δ̄ : A_n → (I⊗I)_n."""
        return self._get(("delta", n), lambda: self.B.reduced_diagonal_matrix(n))

    def eye(self, c, n):
        return linalg.scaled_identity(self.ring, c, n)

    def scaled(self, c, M):
        return linalg.scale_matrix(self.ring, c, M)

    def elem(self, n, v) -> Element:
        return self.alg.from_vector(n, v)

    def ten(self, n, v) -> Tensor:
        return self.alg.tensor_from_vector(2, n, v)


def _vec(x, n):
    return x.to_vector(n)


# --------------------------------------------------------------------------
# domain types


@dataclass
class PrimitivizationConfig:
    """Primes, connectivity q, least non-invertible prime ρ, cap and loop cap.

    Only one prime is supported: the coefficient ring is Z_(p) or F_p.
    """

    primes: Optional[list] = None
    q: Optional[int] = None
    rho: Optional[int] = None
    cap: Optional[int] = None
    iteration_cap: int = DEFAULT_ITERATION_CAP
    enforce_range: bool = True

    @classmethod
    def for_presentation(cls, H: HahPresentation, **kw):
        cfg = cls(**kw)
        if cfg.primes is None:
            cfg.primes = [H.p]
        if cfg.q is None:
            cfg.q = H.q
        if cfg.rho is None:
            cfg.rho = H.rho if H.rho is not None else H.p
        if cfg.cap is None:
            cfg.cap = H.cap
        if cfg.rho <= 2:
            raise HypothesisViolation("ρ must be an odd prime")
        if any(p != H.p for p in cfg.primes):
            raise HypothesisViolation(f"coefficients are localized at {H.p} only; got primes {cfg.primes}")
        return cfg

    @property
    def top_degree(self) -> int:
        """Largest generator degree covered by the range guarantee, qρ − 1."""
        return self.q * self.rho - 1


@dataclass
class ExtensionProblem:
    """A ∐ T(x) with ∂x = b and Δ̄x = Φ over a strict primitively generated A."""

    base: HahPresentation
    name: str
    degree: int
    b: Element
    phi: Tensor
    f: Optional[Tensor] = None
    g: Optional[Tensor] = None

    def validate(self, convention: str = REDUCED_DIFFERENCE):
        B = self.base
        n = self.degree
        if n + 1 > B.cap:
            raise DegreeOutOfCap(n + 1, B.cap)
        if not B.is_strict() or not B.is_primitively_generated():
            raise HypothesisViolation("the base must be a strict, primitively generated Hopf algebra")
        if self.b.terms and self.b.degree != n - 1:
            raise HypothesisViolation("∂x has the wrong degree")
        if self.phi.terms and self.phi.degree != n:
            raise HypothesisViolation("Δ̄x has the wrong degree")
        if not self.phi.is_reduced():
            raise HypothesisViolation("Δ̄x must lie in I⊗I")
        if B.d(self.b):
            raise HypothesisViolation("∂x is not a cycle")
        if B.reduced_diagonal(self.b):
            raise HypothesisViolation("∂x is not primitive")
        if B.d(self.phi):
            raise HypothesisViolation("∂Φ ≠ 0")
        if self.f is None or self.g is None:
            hd = homotopy_defects(B, self.phi, convention)
            if hd.obstructed:
                raise HypothesisViolation(f"Φ is not homotopy coassociative and cocommutative: {hd.obstruction}")
            self.f = hd.f if self.f is None else self.f
            self.g = hd.g if self.g is None else self.g
        if B.d(self.f) != coassociativity_defect(B, self.phi, convention):
            raise HypothesisViolation("∂f is not the coassociativity defect of Φ")
        if B.d(self.g) != cocommutativity_defect(self.phi):
            raise HypothesisViolation("∂g is not the cocommutativity defect of Φ")
        return self


@dataclass
class InductionState:
    r: int
    a: Element
    phi: Tensor
    omega: Tensor

    def residual(self, problem: ExtensionProblem) -> Tensor:
        """Δ̄a_r − Φ + p^r Φ_r − ∂Ω_r."""
        B = problem.base
        p = B.p
        return B.reduced_diagonal(self.a) - problem.phi + self.phi.scale(p**self.r) - B.d(self.omega)

    def check(self, problem: ExtensionProblem):
        B = problem.base
        if self.residual(problem) or B.d(self.a) or B.d(self.phi):
            raise SolveFailed(f"induction invariant broken at page {self.r}")


@dataclass
class KeyLemmaState:
    i: int
    k: int
    b: Element
    y: Element
    z: Element
    psi: Tensor
    branch: str = "start"


@dataclass
class KeyLemmaResult:
    x: Element
    y: Element
    psi: Tensor
    iterations: int
    bound: int
    trace: list = field(default_factory=list)


@dataclass
class ModPLift:
    a: Element
    b: Element
    phi_prime: Tensor
    u: Tensor


@dataclass
class ExtensionIso:
    """θ|_A = 1, θ(x) = x + a, with Δ̄a = Φ + ∂Ψ and ∂a = 0."""

    problem: ExtensionProblem
    a: Element
    psi: Tensor
    states: list = field(default_factory=list)
    stop_page: int = 0
    in_range: bool = True

    def residuals(self) -> dict:
        B = self.problem.base
        return {
            "chain_map": B.d(self.a),
            "diagonal": B.reduced_diagonal(self.a) - self.problem.phi - B.d(self.psi),
        }

    def verify(self) -> bool:
        return all(not r for r in self.residuals().values())


# --------------------------------------------------------------------------
# the steps


def make_boundary_primitive(B: HahPresentation, b: Element, n: Optional[int] = None, q: Optional[int] = None):
    """(c, z): z primitive with b + ∂c = z, for a cycle b in the strict base B.

    ``n`` is the degree of the generator whose boundary is b. If ``q`` is
    given, degrees at or above qp are refused as out of the guaranteed range.
    """
    n = b.degree + 1 if n is None else n
    alg = B.algebra
    if q is not None and n - 1 >= q * B.p:
        raise OutOfRange(f"deg ∂v = {n - 1} ≥ qp = {q * B.p}")
    if not b.terms or not B.reduced_diagonal(b):
        return alg.zero(n), Element(alg, n - 1, b.terms)
    M = _Blocks(B)
    S = _System(B.ring)
    S.unknown("z", M.dim(n - 1))
    S.unknown("c", M.dim(n))
    S.equation({"z": M.eye(1, M.dim(n - 1)), "c": M.scaled(-1, M.d(n))}, _vec(b, n - 1))
    S.equation({"z": M.delta(n - 1)}, [0] * M.tdim(n - 1))
    sol = S.solve()
    if sol is None:
        raise SolveFailed(f"no primitive representative for the boundary in degree {n - 1}")
    c, z = M.elem(n, sol["c"]), M.elem(n - 1, sol["z"])
    assert b + B.d(c) == z and not B.reduced_diagonal(z)
    return c, z


def modp_primitive_lift(problem: ExtensionProblem, prev: InductionState, r: int) -> ModPLift:
    """ã surviving to page r with Δ̄[ã]_r = [Φ_{r−1}]_r, and the chains that witness it.

    Solves ∂ã = p^r b̃ and p^{r−1}Δ̄ã = p^{r−1}Φ_{r−1} − p^r Φ' + ∂u.
    """
    B = problem.base
    p = B.p
    n = problem.degree
    M = _Blocks(B)
    S = _System(B.ring)
    S.unknown("a", M.dim(n))
    S.unknown("b", M.dim(n - 1))
    S.unknown("phi", M.tdim(n))
    S.unknown("u", M.tdim(n + 1))
    S.equation({"a": M.d(n), "b": M.eye(-p**r, M.dim(n - 1))}, [0] * M.dim(n - 1))
    S.equation(
        {
            "a": M.scaled(p ** (r - 1), M.delta(n)),
            "phi": M.eye(p**r, M.tdim(n)),
            "u": M.scaled(-1, M.td(n + 1)),
        },
        linalg.vscale(B.ring, p ** (r - 1), _vec(prev.phi, n)),
    )
    sol = S.solve()
    if sol is None:
        raise SolveFailed(f"no mod-p primitive lift at page {r}")
    return ModPLift(M.elem(n, sol["a"]), M.elem(n - 1, sol["b"]), M.ten(n, sol["phi"]), M.ten(n + 1, sol["u"]))


def _torsion_exponent(B: HahPresentation, n: int) -> int:
    C = algebra_complex(B, max(n - 1, 0), n + 1)
    return linalg.homology_at(C, n).max_torsion_exponent


def key_lemma_correct(B: HahPresentation, a: Element, b: Element, w: Tensor, r: int,
                      iteration_cap: int = DEFAULT_ITERATION_CAP) -> KeyLemmaResult:
    """x primitive mod p and y with ∂(a − x − py) = 0.

    Requires ∂a = p^r b and ∂w = p^{r−1}Δ̄b. Each pass either pushes b one
    page further (when [b]_k = 0) or removes it with a Bockstein of a
    primitive class; once k exceeds the torsion exponent m of H_{deg b}(A)
    the remainder is a boundary.
    """
    p = B.p
    ring = B.ring
    n = a.degree
    if B.d(a) != b.scale(p**r):
        raise SolveFailed("correction loop needs ∂a = p^r b")
    if B.d(w) != B.reduced_diagonal(b).scale(p ** (r - 1)):
        raise SolveFailed("correction loop needs ∂w = p^{r−1}Δ̄b")
    M = _Blocks(B)
    alg = B.algebra
    m = _torsion_exponent(B, n - 1) if M.dim(n - 1) else 0
    bound = max(m - r + 2, 1)
    st = KeyLemmaState(0, r, Element(alg, n - 1, b.terms), alg.zero(n), alg.zero(n), alg.tensor_zero(2, n))
    trace = [st]
    passes = 0
    while st.k <= m and st.b.terms:
        passes += 1
        if passes > min(bound, iteration_cap):
            raise IterationBoundExceeded(f"correction loop exceeded {bound} passes")
        k = st.k
        S = _System(ring)
        S.unknown("v", M.dim(n))
        S.unknown("b", M.dim(n - 1))
        S.equation(
            {"v": M.d(n), "b": M.eye(p**k, M.dim(n - 1))},
            linalg.vscale(ring, p ** (k - 1), _vec(st.b, n - 1)),
        )
        sol = S.solve()
        if sol is not None:
            v = M.elem(n, sol["v"])
            st = KeyLemmaState(st.i + 1, k + 1, M.elem(n - 1, sol["b"]), st.y + v, st.z, st.psi, "boundary")
        else:
            S = _System(ring)
            S.unknown("z", M.dim(n))
            S.unknown("y", M.dim(n))
            S.unknown("b", M.dim(n - 1))
            S.unknown("psi", M.tdim(n))
            S.equation(
                {"z": M.d(n), "y": M.scaled(p, M.d(n)), "b": M.eye(p ** (k + 1), M.dim(n - 1))},
                linalg.vscale(ring, p**k, _vec(st.b, n - 1)),
            )
            S.equation({"z": M.delta(n), "psi": M.eye(-p, M.tdim(n))}, [0] * M.tdim(n))
            sol = S.solve()
            if sol is None:
                raise SolveFailed(f"class at page {k} is neither zero nor a Bockstein of a primitive")
            st = KeyLemmaState(
                st.i + 1, k + 1, M.elem(n - 1, sol["b"]), st.y + M.elem(n, sol["y"]),
                st.z + M.elem(n, sol["z"]), st.psi + M.ten(n, sol["psi"]), "bockstein",
            )
        trace.append(st)
    y = st.y
    if st.b.terms:
        passes += 1
        if passes > min(bound, iteration_cap):
            raise IterationBoundExceeded(f"correction loop exceeded {bound} passes")
        rhs = linalg.vscale(ring, p ** (st.k - 1), _vec(st.b, n - 1))
        sol = linalg.solve(ring, M.d(n), rhs, M.dim(n))
        if sol is None:
            raise SolveFailed(f"p^{st.k - 1} b is not a boundary although k − 1 ≥ m = {m}")
        y = y + M.elem(n, sol)
        trace.append(KeyLemmaState(st.i + 1, st.k, alg.zero(n - 1), y, st.z, st.psi, "absorb"))
    if B.d(a - st.z - y.scale(p)):
        raise SolveFailed("correction loop output is not a cycle")
    if B.reduced_diagonal(st.z) != st.psi.scale(p):
        raise SolveFailed("correction loop x is not primitive mod p")
    return KeyLemmaResult(st.z, y, st.psi, passes, bound, trace)


def induction_step(problem: ExtensionProblem, prev: InductionState,
                   iteration_cap: int = DEFAULT_ITERATION_CAP) -> InductionState:
    """State at page r = prev.r + 1."""
    B = problem.base
    p = B.p
    r = prev.r + 1
    lift = modp_primitive_lift(problem, prev, r)
    kl = key_lemma_correct(B, lift.a, lift.b, -lift.phi_prime, r, iteration_cap)
    a = prev.a + (lift.a - kl.x - kl.y.scale(p)).scale(p ** (r - 1))
    phi = lift.phi_prime + kl.psi + B.reduced_diagonal(kl.y)
    omega = lift.u + prev.omega
    st = InductionState(r, a, phi, omega)
    st.check(problem)
    return st


def initial_state(problem: ExtensionProblem) -> InductionState:
    alg = problem.base.algebra
    n = problem.degree
    return InductionState(0, alg.zero(n), Tensor(alg, 2, n, problem.phi.terms), alg.tensor_zero(2, n + 1))


def trivialize_extension(problem: ExtensionProblem, config: Optional[PrimitivizationConfig] = None,
                         convention: str = REDUCED_DIFFERENCE) -> ExtensionIso:
    """(a, Ψ) with ∂a = 0 and Δ̄a = Φ + ∂Ψ, so x ↦ x + a kills the diagonal of x."""
    B = problem.base
    cfg = config or PrimitivizationConfig.for_presentation(B)
    problem.validate(convention)
    n = problem.degree
    in_range = n <= cfg.q * cfg.rho - 1
    alg = B.algebra
    if not problem.phi.terms:
        iso = ExtensionIso(problem, alg.zero(n), alg.tensor_zero(2, n + 1), [initial_state(problem)], 0, in_range)
        return iso
    stop = cobar.cobar_max_torsion(B, n) + 1
    states = [initial_state(problem)]
    try:
        for _ in range(stop):
            states.append(induction_step(problem, states[-1], cfg.iteration_cap))
    except (SolveFailed, IterationBoundExceeded):
        if in_range:
            raise
        ob = cobar.obstruction(B, problem.phi)
        raise Obstructed("staged induction failed outside the guaranteed degree range", ob)
    last = states[-1]
    rest = Tensor(alg, 2, n, last.phi.scale(B.p**last.r).terms)
    try:
        alpha, psi_tail = cobar.oracle_trivialize(B, rest)
    except Obstructed as exc:
        raise Obstructed(f"p^{last.r}Φ_{last.r} is not trivial in cobar homology", exc.obstruction) from exc
    a = last.a + alpha
    psi = last.omega + psi_tail
    iso = ExtensionIso(problem, a, psi, states, stop, in_range)
    if not iso.verify():
        raise SolveFailed("trivialization certificate does not verify")
    return iso


# --------------------------------------------------------------------------
# primitivization of a whole presentation


@dataclass
class PrimitivizationResult:
    """H' with trivial diagonal and primitive boundaries, and θ: H → H'.

    θ(v) = v + corrections[v]; ``homotopy[v]`` is the value on v of the
    derivation homotopy between (θ⊗θ)Δ and Δ'θ.
    """

    source: HahPresentation
    target: HahPresentation
    corrections: dict
    homotopy: dict
    steps: list

    def theta(self, a: Element) -> Element:
        return apply_morphism(self.target.algebra, self.corrections, a)

    def is_identity(self) -> bool:
        return all(not e for e in self.corrections.values())


def apply_morphism(alg, corrections: dict, a: Element) -> Element:
    """The algebra map v ↦ v + corrections[v] applied to a (coefficients in ``alg``)."""
    images = {}
    for i, name in enumerate(alg.names):
        v = alg.gen(i)
        e = corrections.get(name)
        images[i] = v + embed(e, alg) if e is not None and e.terms else v
    out = alg.zero(a.degree)
    for m, c in a.terms.items():
        term = alg.unit()
        for i in alg.word(m):
            term = term * images[i]
        out = out + term.scale(c)
    return Element(alg, a.degree, out.terms)


def _theta_tensor(alg, corrections, t: Tensor) -> Tensor:
    out = alg.tensor_zero(t.k, t.degree)
    for key, c in t.terms.items():
        factors = [apply_morphism(alg, corrections, alg.mono(m)) for m in key]
        out = out + tensor(*factors).scale(c)
    return Tensor(alg, t.k, t.degree, out.terms)


class _Homotopy:
    """H(xy) = H(x)φ1(y) + (−1)^{|x|}φ0(x)H(y) with φ0 = (θ⊗θ)Δ, φ1 = Δ'θ."""

    def __init__(self, old: HahPresentation, new: HahPresentation, corrections, values):
        self.old, self.new = old, new
        self.alg = new.algebra
        self.corrections = corrections
        self.values = values
        self._memo = {}

    def phi0(self, m) -> Tensor:
        return _theta_tensor(self.alg, self.corrections, embed_tensor(self.old.delta_mono(m), self.alg))

    def phi1(self, m) -> Tensor:
        return self.new.delta(apply_morphism(self.alg, self.corrections, self.alg.mono(m)))

    def mono(self, m) -> Tensor:
        alg = self.alg
        if m in self._memo:
            return self._memo[m]
        deg = alg.mono_degree(m) + 1
        if alg.is_one(m):
            out = alg.tensor_zero(2, 1)
        else:
            i, rest = alg.split_first(m)
            g = alg.gen_mono(i)
            hg = self.values.get(alg.names[i])
            if hg is None or not hg.terms:
                hg = alg.tensor_zero(2, alg.degrees[i] + 1)
            out = hg * self.phi1(rest)
            sign = -1 if alg.degrees[i] % 2 else 1
            out = out + (self.phi0(g) * self.mono(rest)).scale(sign)
            out = Tensor(alg, 2, deg, out.terms)
        self._memo[m] = out
        return out

    def __call__(self, a: Element) -> Tensor:
        out = self.alg.tensor_zero(2, a.degree + 1)
        for m, c in a.terms.items():
            out = out + self.mono(m).scale(c)
        return Tensor(self.alg, 2, a.degree + 1, out.terms)


def embed_tensor(t: Tensor, alg) -> Tensor:
    return Tensor(alg, t.k, t.degree, t.terms)


def _target_presentation(H: HahPresentation, values: dict) -> HahPresentation:
    alg = H.algebra
    d = Derivation(alg, values, validate=False)
    return HahPresentation(alg, d, {}, {}, q=H.q, rho=H.rho)


def primitivize(H: HahPresentation, config: Optional[PrimitivizationConfig] = None,
                convention: str = REDUCED_DIFFERENCE) -> PrimitivizationResult:
    """Replace H by an isomorphic Hah with primitive generators and boundaries.

    Generators are processed in degree order; each one becomes a free
    monogenic extension of the already primitive part, whose diagonal is
    trivialized by :func:`trivialize_extension`.
    """
    cfg = config or PrimitivizationConfig.for_presentation(H)
    alg = H.algebra
    if alg.flavor != FREE:
        raise HypothesisViolation("primitivization acts on tensor algebras")
    for g in alg.generators:
        if cfg.enforce_range and not (cfg.q <= g.degree <= cfg.top_degree):
            raise HypothesisViolation(
                f"generator {g.name} has degree {g.degree} outside [{cfg.q}, {cfg.top_degree}]"
            )
        if g.degree + 1 > alg.cap:
            raise DegreeOutOfCap(g.degree + 1, alg.cap)
    corrections, hvals, new_d, steps = {}, {}, {}, []
    for j, gspec in enumerate(alg.generators):
        name, n = gspec.name, gspec.degree
        partial = _target_presentation(H, new_d)
        homotopy = _Homotopy(H, partial, corrections, hvals)
        dv = H.differential.value(j)
        sub = partial.sub(j)
        b = restrict(apply_morphism(alg, corrections, dv), sub.algebra)
        c, z = make_boundary_primitive(sub, b, n, q=cfg.q if cfg.enforce_range else None)
        c_full = embed(c, alg)
        old_phi = H.diagonal[j]
        phi = (
            _theta_tensor(alg, corrections, old_phi)
            + homotopy(dv)
            + partial.reduced_diagonal(c_full)
        )
        phi = restrict(Tensor(alg, 2, n, phi.terms), sub.algebra)
        problem = ExtensionProblem(sub, name, n, z, phi)
        try:
            problem.validate(convention)
        except HypothesisViolation as exc:
            raise HypothesisViolation(f"generator {name}: {exc}") from exc
        iso = trivialize_extension(problem, cfg, convention)
        e = embed(iso.a, alg) - c_full
        corrections[name] = Element(alg, n, e.terms)
        hvals[name] = embed(iso.psi, alg)
        new_d[name] = embed(z, alg)
        steps.append({"generator": name, "c": c_full, "z": new_d[name], "phi": embed(phi, alg), "iso": iso})
    target = _target_presentation(H, new_d)
    result = PrimitivizationResult(H, target, corrections, hvals, steps)
    report = verify_isomorphism(result)
    if not report["ok"]:
        raise SolveFailed(f"composite isomorphism does not verify: {report}")
    return result


def verify_isomorphism(result: PrimitivizationResult) -> dict:
    """Check θ∂ = ∂'θ and Δ'θ − (θ⊗θ)Δ = ∂H + H∂ on every generator."""
    H, T = result.source, result.target
    alg = T.algebra
    homotopy = _Homotopy(H, T, result.corrections, result.homotopy)
    failures = []
    for j, name in enumerate(alg.names):
        v = alg.gen(j)
        tv = result.theta(v)
        lhs = T.d(tv)
        rhs = result.theta(H.differential.value(j))
        if lhs != rhs:
            failures.append({"generator": name, "identity": "chain_map", "residual": (lhs - rhs).render()})
        diff = T.delta(tv) - _theta_tensor(alg, result.corrections, H.delta(v))
        hv = homotopy(v)
        expected = T.d(hv) + homotopy(H.differential.value(j))
        if diff != expected:
            failures.append({"generator": name, "identity": "diagonal", "residual": (diff - expected).render()})
        if T.diagonal[j]:
            failures.append({"generator": name, "identity": "primitive_generator"})
        if T.reduced_diagonal(T.differential.value(j)):
            failures.append({"generator": name, "identity": "primitive_boundary"})
    return {"ok": not failures, "failures": failures}


# --------------------------------------------------------------------------
# presentation checks


def verify_presentation(H: HahPresentation, convention: str = REDUCED_DIFFERENCE) -> dict:
    """Pass/fail per structural invariant, naming an offending element on failure."""
    alg = H.algebra
    checks = {}

    def record(key, bad):
        checks[key] = {"ok": bad is None, "offender": bad}

    bad = None
    for i, name in enumerate(alg.names):
        dd = H.differential.apply(H.differential.value(i))
        if dd:
            bad = {"generator": name, "residual": dd.render()}
            break
    record("d_squared", bad)

    bad = None
    for n in range(alg.cap + 1):
        for m in alg.basis(n):
            if alg.is_one(m) or len(alg.word(m)) < 2:
                continue
            i, rest = alg.split_first(m)
            x, y = alg.gen(i), alg.mono(rest)
            lhs = H.d(x * y)
            rhs = H.d(x) * y + (x * H.d(y)).scale((-1) ** (alg.degrees[i] % 2))
            if lhs != rhs:
                bad = {"monomial": alg.render_mono(m)}
                break
        if bad:
            break
    record("leibniz", bad)

    bad = None
    for n in range(alg.cap + 1):
        for m in alg.basis(n):
            if alg.is_one(m) or len(alg.word(m)) < 2:
                continue
            i, rest = alg.split_first(m)
            lhs = H.delta_mono(m)
            rhs = H.delta_mono(alg.gen_mono(i)) * H.delta_mono(rest)
            if lhs != rhs:
                bad = {"monomial": alg.render_mono(m)}
                break
        if bad:
            break
    record("diagonal_morphism", bad)

    bad = None
    one = alg.one
    for n in range(1, alg.cap + 1):
        for m in alg.basis(n):
            t = H.delta_mono(m)
            left = {k[1]: c for k, c in t.terms.items() if k[0] == one}
            right = {k[0]: c for k, c in t.terms.items() if k[1] == one}
            if left != {m: 1} or right != {m: 1}:
                bad = {"monomial": alg.render_mono(m)}
                break
        if bad:
            break
    record("counit", bad)

    bad = None
    for i, name in enumerate(alg.names):
        res = H.d(H.diagonal[i]) - H.reduced_diagonal(H.differential.value(i))
        if res:
            bad = {"generator": name, "residual": res.render()}
            break
    record("coderivation", bad)

    bad = None
    for i, (f, g) in H.homotopies.items():
        phi = H.diagonal[i]
        if alg.degrees[i] + 1 > alg.cap:
            continue
        rf = H.d(f) - coassociativity_defect(H, phi, convention)
        rg = H.d(g) - cocommutativity_defect(phi)
        if rf or rg:
            bad = {
                "generator": alg.names[i],
                "f_residual": rf.render() if rf else "0",
                "g_residual": rg.render() if rg else "0",
            }
            break
    record("homotopies", bad)
    return {"ok": all(c["ok"] for c in checks.values()), "checks": checks}
