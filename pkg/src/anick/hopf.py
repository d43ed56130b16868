"""Diagonals, primitives, indecomposables and the j-map.

A :class:`HahPresentation` stores the reduced diagonal of each generator;
the full diagonal Δ is the algebra morphism determined by
Δg = g⊗1 + 1⊗g + Δ̄g, so Δ is multiplicative by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import linalg
from .algebra import (
    COMMUTATIVE,
    FREE,
    AlgebraPresentation,
    Derivation,
    Element,
    GeneratorSpec,
    Tensor,
    embed,
    restrict,
    tensor_multiply,
)
from .errors import DegreeOutOfCap, MixedPresentation, NotACoderivation

REDUCED_DIFFERENCE = "reduced_difference"  # (Δ̄⊗1 − 1⊗Δ̄)Φ in I^{⊗3}
FULL_SUM = "full_sum"  # (Δ⊗1 + 1⊗Δ)Φ in A^{⊗3}


class HahPresentation:
    """A chain algebra with a diagonal that is a chain algebra morphism.

    ``diagonal`` maps generator names to reduced diagonal values in (I⊗I);
    ``homotopies`` optionally maps names to (f, g) with f ∈ I^{⊗3} and
    g ∈ I⊗I of degree deg + 1.
    """

    def __init__(self, algebra: AlgebraPresentation, differential: Derivation,
                 diagonal: Optional[dict] = None, homotopies: Optional[dict] = None,
                 q: Optional[int] = None, rho: Optional[int] = None):
        if differential.alg is not algebra and not differential.alg.same_shape(algebra):
            raise MixedPresentation("differential belongs to another presentation")
        self.algebra = algebra
        self.differential = differential
        self.ring = algebra.ring
        diag = {}
        for i, g in enumerate(algebra.generators):
            v = (diagonal or {}).get(g.name)
            if v is None:
                v = algebra.tensor_zero(2, g.degree)
            if v.k != 2 or not v.alg.same_shape(algebra):
                raise MixedPresentation(f"diagonal of {g.name} is not in A⊗A")
            if v.terms and v.degree != g.degree:
                raise ValueError(f"Δ̄{g.name} has degree {v.degree}, expected {g.degree}")
            if not v.is_reduced():
                raise ValueError(f"Δ̄{g.name} has a 1⊗· or ·⊗1 term; the counit must be strict")
            diag[i] = Tensor(algebra, 2, g.degree, v.terms)
        self.diagonal = diag
        homs = {}
        for name, (f, gg) in (homotopies or {}).items():
            i = algebra.gen_index(name)
            homs[i] = (f, gg)
        self.homotopies = homs
        self.q = q if q is not None else algebra.q
        self.rho = rho
        self._delta = {}

    def __repr__(self):
        return f"HahPresentation({self.algebra!r})"

    @property
    def p(self) -> int:
        return self.ring.p

    @property
    def cap(self) -> int:
        return self.algebra.cap

    @property
    def generators(self):
        return self.algebra.generators

    def is_strict(self) -> bool:
        return all(not f and not g for f, g in self.homotopies.values())

    def is_primitively_generated(self) -> bool:
        return all(not v for v in self.diagonal.values())

    def d(self, a):
        if isinstance(a, Tensor):
            return self.differential.apply_tensor(a)
        return self.differential.apply(a)

    def sub(self, k: int) -> "HahPresentation":
        """The sub-Hah generated by the first k generators."""
        alg = self.algebra.sub_presentation(k)
        names = alg.names
        d = Derivation(alg, {n: restrict(self.differential.value(n), alg) for n in names}, validate=False)
        diag = {n: restrict(self.diagonal[i], alg) for i, n in enumerate(names)}
        homs = {
            self.algebra.names[i]: (restrict(f, alg), restrict(g, alg))
            for i, (f, g) in self.homotopies.items()
            if i < k
        }
        return HahPresentation(alg, d, diag, homs, q=self.q, rho=self.rho)

    def with_ring(self, ring) -> "HahPresentation":
        """Same structure constants over another ring (e.g. reduction mod p)."""
        alg = self.algebra.with_ring(ring)

        def conv(x):
            if isinstance(x, Tensor):
                return Tensor(alg, x.k, x.degree, x.terms)
            return Element(alg, x.degree, x.terms)

        d = Derivation(alg, {n: conv(self.differential.value(n)) for n in alg.names}, validate=False)
        diag = {alg.names[i]: conv(v) for i, v in self.diagonal.items()}
        homs = {alg.names[i]: (conv(f), conv(g)) for i, (f, g) in self.homotopies.items()}
        return HahPresentation(alg, d, diag, homs, q=self.q, rho=self.rho)

    def mod_p(self) -> "HahPresentation":
        if self.ring.kind == "modp":
            return self
        return self.with_ring(linalg.Fp(self.p))

    # -- the diagonal ------------------------------------------------------

    def delta_mono(self, m) -> Tensor:
        """Full diagonal Δm in A⊗A (unit terms included)."""
        if m in self._delta:
            return self._delta[m]
        alg = self.algebra
        one = alg.one
        if alg.is_one(m):
            out = Tensor(alg, 2, 0, {(one, one): 1})
        else:
            i, rest = alg.split_first(m)
            g = alg.gen_mono(i)
            dg = Tensor(alg, 2, alg.degrees[i], {(g, one): 1, (one, g): 1})
            dg = dg + self.diagonal[i]
            out = tensor_multiply(dg, self.delta_mono(rest))
        self._delta[m] = out
        return out

    def delta(self, a: Element) -> Tensor:
        alg = self.algebra
        terms = {}
        for m, c in a.terms.items():
            for t, c2 in self.delta_mono(m).terms.items():
                terms[t] = terms.get(t, 0) + c * c2
        return Tensor(alg, 2, a.degree, terms)

    def reduced_diagonal(self, a: Element) -> Tensor:
        alg = self.algebra
        if not a.alg.same_shape(alg):
            raise MixedPresentation("element is not in this presentation")
        alg.check_degree(a.degree)
        one = alg.one
        terms = {}
        for m, c in a.terms.items():
            if alg.is_one(m):
                continue
            for t, c2 in self.delta_mono(m).terms.items():
                if t[0] == one or t[1] == one:
                    continue
                terms[t] = terms.get(t, 0) + c * c2
        return Tensor(alg, 2, a.degree, terms)

    def reduced_diagonal_matrix(self, n: int):
        alg = self.algebra
        src = alg.basis(n)
        idx = alg.tensor_index(2, n)
        M = linalg.zeros(len(idx), len(src))
        for j, m in enumerate(src):
            for t, c in self.reduced_diagonal(alg.mono(m)).terms.items():
                M[idx[t]][j] = c
        return M

    def differential_matrix(self, n: int):
        return self.differential.matrix(n)

    def tensor_differential_matrix(self, k: int, n: int, reduced: bool = True):
        return self.differential.tensor_matrix(k, n, reduced)

    # -- checks ------------------------------------------------------------

    def coderivation_defects(self):
        """Generators g with ∂Δ̄g ≠ Δ̄∂g, as {name: residual}."""
        out = {}
        for i, g in enumerate(self.generators):
            lhs = self.d(self.diagonal[i])
            rhs = self.reduced_diagonal(self.differential.value(i))
            res = lhs - rhs
            if res:
                out[g.name] = res
        return out

    def is_strict_coderivation(self) -> bool:
        return not self.coderivation_defects()


def reduced_diagonal(H: HahPresentation, a: Element) -> Tensor:
    """Δ̄a = Δa − a⊗1 − 1⊗a."""
    return H.reduced_diagonal(a)


def apply_reduced_diagonal_at(H: HahPresentation, t: Tensor, position: int) -> Tensor:
    """Apply Δ̄ to the tensor factor at ``position`` (degree 0, so no sign)."""
    alg = H.algebra
    terms = {}
    for key, c in t.terms.items():
        m = key[position]
        if alg.is_one(m):
            continue
        for (l, r), c2 in H.reduced_diagonal(alg.mono(m)).terms.items():
            k2 = key[:position] + (l, r) + key[position + 1:]
            terms[k2] = terms.get(k2, 0) + c * c2
    return Tensor(alg, t.k + 1, t.degree, terms)


def apply_diagonal_at(H: HahPresentation, t: Tensor, position: int) -> Tensor:
    alg = H.algebra
    terms = {}
    for key, c in t.terms.items():
        for (l, r), c2 in H.delta_mono(key[position]).terms.items():
            k2 = key[:position] + (l, r) + key[position + 1:]
            terms[k2] = terms.get(k2, 0) + c * c2
    return Tensor(alg, t.k + 1, t.degree, terms)


def twist(t: Tensor) -> Tensor:
    """τ(a⊗b) = (−1)^{|a||b|} b⊗a."""
    alg = t.alg
    terms = {}
    for (a, b), c in t.terms.items():
        s = -1 if (alg.mono_degree(a) * alg.mono_degree(b)) % 2 else 1
        terms[(b, a)] = terms.get((b, a), 0) + s * c
    return Tensor(alg, 2, t.degree, terms)


def coassociativity_defect(H: HahPresentation, phi: Tensor, convention: str = REDUCED_DIFFERENCE) -> Tensor:
    if convention == REDUCED_DIFFERENCE:
        return apply_reduced_diagonal_at(H, phi, 0) - apply_reduced_diagonal_at(H, phi, 1)
    if convention == FULL_SUM:
        return apply_diagonal_at(H, phi, 0) + apply_diagonal_at(H, phi, 1)
    raise ValueError(f"unknown convention {convention!r}")


def cocommutativity_defect(phi: Tensor) -> Tensor:
    return twist(phi) - phi


# --------------------------------------------------------------------------
# chain complexes built from a presentation


def algebra_complex(H: HahPresentation, lo: int, hi: int) -> linalg.ChainComplex:
    """A in degrees lo..hi (degrees outside contribute zero)."""
    alg = H.algebra
    if hi > alg.cap:
        raise DegreeOutOfCap(hi, alg.cap)
    bases = {n: alg.basis(n) for n in range(max(lo, 0), hi + 1)}
    diffs = {n: H.differential_matrix(n) for n in range(max(lo, 1), hi + 1) if n - 1 in bases}
    return linalg.ChainComplex(H.ring, linalg.GradedModule(bases, hi), diffs)


def tensor_complex(H: HahPresentation, k: int, lo: int, hi: int, reduced: bool = True) -> linalg.ChainComplex:
    alg = H.algebra
    if hi > alg.cap:
        raise DegreeOutOfCap(hi, alg.cap)
    bases = {n: alg.tensor_basis(k, n, reduced) for n in range(max(lo, 0), hi + 1)}
    diffs = {
        n: H.tensor_differential_matrix(k, n, reduced)
        for n in range(max(lo, 1), hi + 1)
        if n - 1 in bases
    }
    return linalg.ChainComplex(H.ring, linalg.GradedModule(bases, hi), diffs)


# --------------------------------------------------------------------------
# primitives and indecomposables


@dataclass
class PrimitiveSubspace:
    degree: int
    basis: list  # Elements
    matrix: list  # columns are the basis vectors in monomial coordinates

    @property
    def dim(self) -> int:
        return len(self.basis)

    def include(self, coords) -> Element:
        """The inclusion P → A applied to coordinates in ``basis``."""
        alg = self.basis[0].alg if self.basis else None
        if alg is None:
            raise ValueError("empty primitive subspace")
        out = alg.zero(self.degree)
        for c, b in zip(coords, self.basis):
            if c:
                out = out + b.scale(c)
        return out


def primitives_at(H: HahPresentation, n: int) -> PrimitiveSubspace:
    """Basis of P(A)_n = ker Δ̄ in degree n."""
    alg = H.algebra
    alg.check_degree(n)
    dim = alg.dim(n)
    if n <= 0:
        return PrimitiveSubspace(n, [], linalg.zeros(dim, 0))
    M = H.reduced_diagonal_matrix(n)
    ker = linalg.kernel_basis(H.ring, M, dim)
    elems = [alg.from_vector(n, v) for v in ker]
    return PrimitiveSubspace(n, elems, linalg.transpose(ker, dim) if ker else linalg.zeros(dim, 0))


def is_primitive(H: HahPresentation, a: Element) -> bool:
    return not H.reduced_diagonal(a)


def is_primitive_mod_p(H: HahPresentation, a: Element) -> bool:
    """Δ̄a ∈ p·(A⊗A), i.e. a⊗1 is primitive in A ⊗ Z/p."""
    p = H.p
    if H.ring.kind == "modp":
        return is_primitive(H, a)
    return H.reduced_diagonal(a).divisible_by(p)


@dataclass
class IndecomposableSlice:
    degree: int
    basis: list  # monomials spanning Q_n
    primitive_to_q: list  # matrix of P_n → Q_n

    @property
    def dim(self) -> int:
        return len(self.basis)

    def project(self, a: Element):
        return [a.terms.get(m, 0) for m in self.basis]


def indecomposables_at(H: HahPresentation, n: int) -> IndecomposableSlice:
    """Q(A)_n = I_n / Σ I_i·I_{n−i}, with the natural map from P(A)_n.

    Products of monomials are ± monomials or zero in both flavors, so the
    decomposables are spanned by the monomials hit by some product and the
    quotient is spanned by the rest.
    """
    alg = H.algebra
    alg.check_degree(n)
    hit = set()
    for i in range(1, n):
        for a in alg.basis(i):
            for b in alg.basis(n - i):
                r = alg.mono_mul(a, b)
                if r is not None:
                    hit.add(r[1])
    qbasis = [m for m in alg.basis(n) if m not in hit] if n >= 1 else []
    P = primitives_at(H, n)
    mat = [[b.terms.get(m, 0) for b in P.basis] for m in qbasis]
    return IndecomposableSlice(n, qbasis, mat)


# --------------------------------------------------------------------------
# the j-map H(PA) → PH(A)


@dataclass
class JMap:
    degree: int
    matrix: list
    source_dim: int
    target_dim: int
    rank: int
    source_reps: list = field(repr=False)
    target_reps: list = field(repr=False)

    @property
    def kernel_dim(self) -> int:
        return self.source_dim - self.rank

    @property
    def cokernel_dim(self) -> int:
        return self.target_dim - self.rank

    @property
    def injective(self) -> bool:
        return self.kernel_dim == 0

    @property
    def surjective(self) -> bool:
        return self.cokernel_dim == 0

    @property
    def isomorphism(self) -> bool:
        return self.injective and self.surjective


def _span_rank(ring, vectors, dim):
    if not vectors:
        return 0
    return linalg.rank(ring, vectors, dim)


def _complement(ring, sub, vectors, dim):
    """Pick vectors (in order) extending a basis of span(sub) independently."""
    chosen = []
    base = list(sub)
    r = _span_rank(ring, base, dim)
    for v in vectors:
        r2 = _span_rank(ring, base + [v], dim)
        if r2 > r:
            base.append(v)
            chosen.append(v)
            r = r2
    return chosen


def homology_of_primitives(H: HahPresentation, n: int):
    """(cycles of PA in degree n, boundaries of PA in degree n), F_p vectors."""
    ring = H.ring
    alg = H.algebra
    Pn = primitives_at(H, n)
    dn = H.differential_matrix(n)
    cycles = []
    if Pn.dim:
        img = linalg.matmul(ring, dn, Pn.matrix, inner=alg.dim(n)) if alg.dim(n - 1) else []
        if img:
            coeffs = linalg.kernel_basis(ring, img, Pn.dim)
        else:
            coeffs = [[1 if i == j else 0 for i in range(Pn.dim)] for j in range(Pn.dim)]
        cycles = [linalg.matvec(ring, Pn.matrix, c) for c in coeffs]
    bounds = []
    if n + 1 <= alg.cap:
        Pn1 = primitives_at(H, n + 1)
        for b in Pn1.basis:
            v = H.d(b).to_vector(n)
            if any(v):
                bounds.append(v)
    return cycles, bounds


def j_map_at(H: HahPresentation, n: int) -> JMap:
    """The map H_n(PA) → PH_n(A), computed over F_p.

    Requires ∂ to be a strict coderivation so that PA is a subcomplex.
    A class [z] ∈ H_n(A) is primitive when Δ̄z is a boundary of I⊗I.
    """
    H = H.mod_p()
    if not H.is_strict_coderivation():
        raise NotACoderivation(f"∂ is not a coderivation on {sorted(H.coderivation_defects())}")
    alg = H.algebra
    if n + 1 > alg.cap:
        raise DegreeOutOfCap(n + 1, alg.cap)
    ring = H.ring
    dim = alg.dim(n)
    pcycles, pbounds = homology_of_primitives(H, n)
    source_reps = _complement(ring, pbounds, pcycles, dim)

    Z = linalg.kernel_basis(ring, H.differential_matrix(n), dim) if n >= 1 else []
    B = [v for v in linalg.transpose(H.differential_matrix(n + 1), alg.dim(n + 1)) if any(v)] if dim else []
    # W = {z ∈ Z : Δ̄z ∈ ∂(I⊗I)_{n+1}}
    W = []
    if Z:
        D = H.reduced_diagonal_matrix(n)
        tdim = len(D)
        DZ = linalg.matmul(ring, D, linalg.transpose(Z, dim), inner=dim) if tdim else []
        dT = H.tensor_differential_matrix(2, n + 1)
        if tdim:
            combined = linalg.hstack([DZ, linalg.scale_matrix(ring, -1, dT)], tdim)
            ker = linalg.kernel_basis(ring, combined, len(Z) + linalg.ncols(dT))
            coeffs = [v[: len(Z)] for v in ker]
        else:
            coeffs = [[1 if i == j else 0 for i in range(len(Z))] for j in range(len(Z))]
        W = [
            linalg.matvec(ring, linalg.transpose(Z, dim), c)
            for c in coeffs
        ]
    target_reps = _complement(ring, B, W, dim)
    # matrix of j: express each source rep in target reps modulo B
    mat = linalg.zeros(len(target_reps), len(source_reps))
    if source_reps and (target_reps or B):
        cols = target_reps + B
        A = linalg.transpose(cols, dim)
        system = linalg.LinearSystem(ring, A, len(cols))
        for j, h in enumerate(source_reps):
            sol = system.solve(h)
            if sol is None:
                raise NotACoderivation("a primitive cycle is not a primitive class")
            for i in range(len(target_reps)):
                mat[i][j] = sol[i]
    rk = linalg.rank(ring, mat, len(source_reps)) if mat and source_reps else 0
    return JMap(
        degree=n,
        matrix=mat,
        source_dim=len(source_reps),
        target_dim=len(target_reps),
        rank=rk,
        source_reps=[alg.from_vector(n, v) for v in source_reps],
        target_reps=[alg.from_vector(n, v) for v in target_reps],
    )


# --------------------------------------------------------------------------
# homotopy defects


@dataclass
class HomotopyDefects:
    coassoc_defect: Tensor
    cocomm_defect: Tensor
    f: Optional[Tensor]
    g: Optional[Tensor]
    obstruction: Optional[dict] = None

    @property
    def obstructed(self) -> bool:
        return self.f is None or self.g is None


def _solve_boundary(H, target: Tensor, reduced=True):
    """Find t with ∂t = target in the tensor complex, or None."""
    alg = H.algebra
    k, n = target.k, target.degree
    alg.check_degree(n + 1)
    rows = len(alg.tensor_basis(k, n, reduced))
    if not target.terms:
        return alg.tensor_zero(k, n + 1)
    M = H.tensor_differential_matrix(k, n + 1, reduced)
    sol = linalg.solve(H.ring, M, target.to_vector(n, reduced), len(alg.tensor_basis(k, n + 1, reduced)))
    if sol is None:
        return None
    assert rows == len(M)
    return alg.tensor_from_vector(k, n + 1, sol, reduced)


def _describe_obstruction(H, defect: Tensor, reduced=True):
    if H.d(defect):
        return {"kind": "not-a-cycle", "residual": H.d(defect).render()}
    n = defect.degree
    C = tensor_complex(H, defect.k, n - 1, n + 1, reduced)
    hs = linalg.homology_at(C, n)
    tors, free = hs.class_coordinates(defect.to_vector(n, reduced))
    return {"kind": "nonzero-class", "torsion": tors, "torsion_orders": hs.torsion, "free": free}


def homotopy_defects(H: HahPresentation, phi: Tensor, convention: str = REDUCED_DIFFERENCE) -> HomotopyDefects:
    """Coassociativity / cocommutativity defects of Φ and witnesses f, g."""
    reduced = convention == REDUCED_DIFFERENCE
    H.algebra.check_degree(phi.degree + 1)
    d3 = coassociativity_defect(H, phi, convention)
    d2 = cocommutativity_defect(phi)
    f = _solve_boundary(H, d3, reduced)
    g = _solve_boundary(H, d2, True)
    obstruction = None
    if f is None:
        obstruction = {"defect": "coassociativity", **_describe_obstruction(H, d3, reduced)}
    elif g is None:
        obstruction = {"defect": "cocommutativity", **_describe_obstruction(H, d2, True)}
    return HomotopyDefects(d3, d2, f, g, obstruction)


# --------------------------------------------------------------------------
# duality


@dataclass
class DualTables:
    """Structure constants of A up to degree N and of its graded dual.

    ``mult[(i, j)]``: A_i ⊗ A_j → A_{i+j}; ``comult[n]``: A_n → (A⊗A)_n.
    The dual tables are transposes (pairing ⟨f⊗g, a⊗b⟩ = f(a)g(b)).
    """

    N: int
    mult: dict
    comult: dict

    @property
    def dual_comult(self):
        return {k: linalg.transpose(M, 0) for k, M in self.mult.items()}

    @property
    def dual_mult(self):
        return {k: linalg.transpose(M, 0) for k, M in self.comult.items()}

    def dual(self) -> "DualTables":
        """Swap roles: the dual's multiplication is our comultiplication."""
        return DualTables(self.N, self.dual_comult, self.dual_mult)


def dualize_range(H: HahPresentation, N: int) -> DualTables:
    alg = H.algebra
    alg.check_degree(N)
    mult = {}
    for i in range(0, N + 1):
        for j in range(0, N + 1 - i):
            tgt = alg.index(i + j)
            cols = [(a, b) for a in alg.basis(i) for b in alg.basis(j)]
            M = linalg.zeros(len(tgt), len(cols))
            for c, (a, b) in enumerate(cols):
                r = alg.mono_mul(a, b)
                if r is not None:
                    M[tgt[r[1]]][c] = r[0]
            mult[(i, j)] = M
    comult = {}
    for n in range(0, N + 1):
        idx = alg.tensor_index(2, n, reduced=False)
        M = linalg.zeros(len(idx), alg.dim(n))
        for j, m in enumerate(alg.basis(n)):
            for t, c in H.delta_mono(m).terms.items():
                M[idx[t]][j] = c
        comult[n] = M
    return DualTables(N, mult, comult)


def dual_primitive_dimension(H: HahPresentation, n: int) -> int:
    """dim P(A*)_n: kernel of the reduced dual comultiplication on A*_n."""
    alg = H.algebra
    tables = dualize_range(H, n)
    dual = tables.dual_comult
    blocks = [dual[(i, n - i)] for i in range(1, n)]
    rows = [row for B in blocks for row in B]
    dim = alg.dim(n)
    if not rows or not dim:
        return dim
    return dim - linalg.rank(H.ring, rows, dim)


def deconcatenation_table(alg: AlgebraPresentation, i: int, j: int):
    """Matrix of TC(V*)_{i+j} → TC_i ⊗ TC_j by deconcatenation of words."""
    src = alg.basis(i + j)
    cols = [(a, b) for a in alg.basis(i) for b in alg.basis(j)]
    col_idx = {c: k for k, c in enumerate(cols)}
    M = linalg.zeros(len(cols), len(src))
    for k, w in enumerate(src):
        for cut in range(len(w) + 1):
            a, b = w[:cut], w[cut:]
            if alg.mono_degree(a) == i:
                M[col_idx[(a, b)]][k] = 1
    return M


def verify_tensor_coalgebra_duality(H: HahPresentation, N: int) -> bool:
    """(TV)* ≅ TC(V*): the transposed product table is deconcatenation."""
    alg = H.algebra
    if alg.flavor != FREE:
        raise ValueError("duality with TC(V*) holds for free presentations")
    dual = dualize_range(H, N).dual_comult
    return all(dual[(i, j)] == deconcatenation_table(alg, i, j)
               for i in range(N + 1) for j in range(N + 1 - i))


class TensorCoalgebra:
    """TC(V): words [v_1|...|v_n] with the deconcatenation diagonal."""

    def __init__(self, names, degrees, cap, ring):
        gens = [GeneratorSpec(n, d) for n, d in sorted(zip(names, degrees), key=lambda x: x[1])]
        self.words = AlgebraPresentation(FREE, gens, cap, ring)
        self.ring = ring

    def basis(self, n):
        return self.words.basis(n)

    def diagonal(self, word) -> Tensor:
        alg = self.words
        terms = {(word[:c], word[c:]): 1 for c in range(len(word) + 1)}
        return Tensor(alg, 2, alg.mono_degree(word), terms)

    def reduced_diagonal(self, word) -> Tensor:
        alg = self.words
        terms = {(word[:c], word[c:]): 1 for c in range(1, len(word))}
        return Tensor(alg, 2, alg.mono_degree(word), terms)

    def primitives_at(self, n: int):
        alg = self.words
        src = alg.basis(n)
        idx = alg.tensor_index(2, n)
        M = linalg.zeros(len(idx), len(src))
        for j, w in enumerate(src):
            for t, c in self.reduced_diagonal(w).terms.items():
                M[idx[t]][j] = c
        return [alg.from_vector(n, v) for v in linalg.kernel_basis(self.ring, M, len(src))]

    def render(self, word) -> str:
        return "[" + "|".join(self.words.names[i] for i in word) + "]"


# --------------------------------------------------------------------------
# built-in fixtures


def commutative_hah(p, gens, differential, cap, kind="modp", q=None):
    """Primitively generated commutative Hah from ``[(name, degree, trunc)]``."""
    ring = linalg.make_ring(p, kind)
    specs = [GeneratorSpec(n, d, t) for n, d, t in sorted(gens, key=lambda g: g[1])]
    alg = AlgebraPresentation(COMMUTATIVE, specs, cap, ring)
    vals = {k: alg.gen(v) if isinstance(v, str) else v for k, v in differential.items()}
    return HahPresentation(alg, Derivation(alg, vals), {}, {}, q=q)


def free_hah(p, gens, differential=None, diagonal=None, cap=20, kind="localized", rho=None):
    """Tensor algebra Hah from ``[(name, degree)]``; values may be callables of the algebra."""
    ring = linalg.make_ring(p, kind)
    specs = [GeneratorSpec(n, d) for n, d in sorted(gens, key=lambda g: g[1])]
    alg = AlgebraPresentation(FREE, specs, cap, ring)

    def ev(v):
        return v(alg) if callable(v) else v

    vals = {k: ev(v) for k, v in (differential or {}).items()}
    diag = {k: ev(v) for k, v in (diagonal or {}).items()}
    return HahPresentation(alg, Derivation(alg, vals), diag, {}, rho=rho)


def example_one(p: int = 3, n: int = 1, cap: int = 20) -> HahPresentation:
    """F_p[x] ⊗ Λ(y), |x| = 2n, ∂x = y."""
    return commutative_hah(p, [("x", 2 * n, None), ("y", 2 * n - 1, None)], {"x": "y"}, cap)


def example_two(p: int = 3, n: int = 1, cap: int = 20) -> HahPresentation:
    """Λ(x) ⊗ F_p[y], |x| = 2n + 1, ∂x = y."""
    return commutative_hah(p, [("x", 2 * n + 1, None), ("y", 2 * n, None)], {"x": "y"}, cap)


def fixture_b1(p: int = 3, deg: int = 3, cap: int = 20) -> HahPresentation:
    """(Λ(z), 0), z odd."""
    return commutative_hah(p, [("z", deg, None)], {}, cap)


def fixture_b2(p: int = 3, deg: int = 2, cap: int = 20) -> HahPresentation:
    """(F_p[z]/(z^p), 0), z even."""
    return commutative_hah(p, [("z", deg, p)], {}, cap)


def fixture_b3(p: int = 3, deg_x: int = 3, cap: int = 20) -> HahPresentation:
    """(Λ(x) ⊗ F_p[y]/(y^p), ∂x = y), x odd."""
    return commutative_hah(p, [("x", deg_x, None), ("y", deg_x - 1, p)], {"x": "y"}, cap)


def fixture_b4(p: int = 3, deg_x: int = 2, cap: int = 20) -> HahPresentation:
    """(F_p[x]/(x^p) ⊗ Λ(y), ∂x = y), x even."""
    return commutative_hah(p, [("x", deg_x, p), ("y", deg_x - 1, None)], {"x": "y"}, cap)


def embed_hah_element(a, H: HahPresentation):
    return embed(a, H.algebra)
