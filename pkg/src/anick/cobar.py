"""Length ≤ 2 cobar complex of a strict Hah and the extension obstruction.

Degree k of the complex is s⁻¹I_{k+1} ⊕ (s⁻¹I ⊗ s⁻¹I)_k. With the embedding
ι(a'⊗a'') = (−1)^{|a'|}[a'|a''] the differential reads

    d(s⁻¹a) = −s⁻¹∂a + ι(Δ̄a),      d|_{length 2} = ι ∂ ι⁻¹,

so d² = 0 is exactly ∂Δ̄ = Δ̄∂. A cycle Φ ∈ (I⊗I)_n sits in degree n − 2,
and a solution of d(s⁻¹α + ξ) = ιΦ gives ∂α = 0, Δ̄α = Φ + ∂Ψ with
Ψ = −ι⁻¹ξ.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import linalg
from .algebra import Element, Tensor
from .errors import DegreeOutOfCap, NotACycle, NotStrict, Obstructed
from .hopf import HahPresentation


class TruncatedCobar:
    def __init__(self, H: HahPresentation, lo: int, hi: int):
        if not H.is_strict():
            raise NotStrict("the cobar complex needs a strictly coassociative diagonal")
        if hi + 2 > H.cap:
            raise DegreeOutOfCap(hi + 2, H.cap)
        self.H = H
        self.lo, self.hi = max(lo, 0), hi
        alg = H.algebra
        bases = {}
        for k in range(self.lo, hi + 1):
            ones = [("1", m) for m in alg.basis(k + 1)]
            twos = [("2",) + t for t in alg.tensor_basis(2, k + 2)]
            bases[k] = ones + twos
        self._bases = bases
        diffs = {k: self._d(k) for k in range(self.lo + 1, hi + 1)}
        self.complex = linalg.ChainComplex(H.ring, linalg.GradedModule(bases, hi), diffs)

    def _signs(self, n):
        alg = self.H.algebra
        return [(-1) ** (alg.mono_degree(t[0]) % 2) for t in alg.tensor_basis(2, n)]

    def _d(self, k):
        H, ring = self.H, self.H.ring
        alg = H.algebra
        n1, n2 = alg.dim(k + 1), len(alg.tensor_basis(2, k + 2))
        m1, m2 = alg.dim(k), len(alg.tensor_basis(2, k + 1))
        d_alg = H.differential_matrix(k + 1) if m1 else linalg.zeros(0, n1)
        top_left = linalg.scale_matrix(ring, -1, d_alg)
        s_src, s_tgt = self._signs(k + 2), self._signs(k + 1)
        bottom_left = [
            [ring.norm(s_tgt[i] * x) for x in row]
            for i, row in enumerate(H.reduced_diagonal_matrix(k + 1))
        ]
        dt = H.tensor_differential_matrix(2, k + 2)
        bottom_right = [
            [ring.norm(s_tgt[i] * x * s_src[j]) for j, x in enumerate(row)]
            for i, row in enumerate(dt)
        ]
        return linalg.block_matrix(
            ring, [[top_left, None], [bottom_left, bottom_right]], [m1, m2], [n1, n2]
        )

    # -- coordinates ---------------------------------------------------------

    def dims(self, k):
        alg = self.H.algebra
        return alg.dim(k + 1), len(alg.tensor_basis(2, k + 2))

    def iota(self, phi: Tensor):
        """ι(Φ) as a vector in degree |Φ| − 2."""
        k = phi.degree - 2
        n1, _ = self.dims(k)
        v = phi.to_vector(phi.degree)
        s = self._signs(phi.degree)
        return [0] * n1 + [self.H.ring.norm(a * b) for a, b in zip(s, v)]

    def split(self, v, k):
        """Vector in degree k → (α ∈ I_{k+1}, ι⁻¹ of the length 2 part)."""
        alg = self.H.algebra
        n1, _ = self.dims(k)
        s = self._signs(k + 2)
        a = alg.from_vector(k + 1, v[:n1])
        t = alg.tensor_from_vector(2, k + 2, [x * y for x, y in zip(s, v[n1:])])
        return a, t


def build_truncated_cobar(H: HahPresentation, lo: int, hi: int) -> TruncatedCobar:
    return TruncatedCobar(H, lo, hi)


@dataclass
class ObstructionClass:
    """The class of ιΦ in cobar homology.

    ``order`` is the exponent s with p^s[Φ] = 0 (0 for the zero class,
    ``None`` when the class has infinite order).
    """

    degree: int
    order: Optional[int]
    torsion_coordinates: list
    free_coordinates: list
    homology: object

    @property
    def trivial(self) -> bool:
        return self.order == 0


def _check_cycle(H, phi: Tensor):
    if phi.k != 2 or not phi.is_reduced():
        raise ValueError("Φ must lie in I⊗I")
    if H.d(phi):
        raise NotACycle("Φ is not a cycle")


def obstruction(H: HahPresentation, phi: Tensor) -> ObstructionClass:
    _check_cycle(H, phi)
    k = phi.degree - 2
    cob = TruncatedCobar(H, k - 1, k + 1)
    hs = linalg.homology_at(cob.complex, k)
    tors, free = hs.class_coordinates(cob.iota(phi))
    ring = H.ring
    if any(free):
        order = None
    else:
        order = 0
        for c, s in zip(tors, hs.torsion):
            if c % ring.p**s:
                order = max(order, s - ring.valuation(c))
    return ObstructionClass(k, order, tors, free, hs)


def cobar_max_torsion(H: HahPresentation, n: int) -> int:
    """Largest torsion exponent of the cobar homology in degree n − 2."""
    k = n - 2
    cob = TruncatedCobar(H, k - 1, k + 1)
    return linalg.homology_at(cob.complex, k).max_torsion_exponent


def oracle_trivialize(H: HahPresentation, phi: Tensor):
    """(α, Ψ) with ∂α = 0 and Δ̄α = Φ + ∂Ψ, by one linear solve in the cobar complex."""
    _check_cycle(H, phi)
    k = phi.degree - 2
    cob = TruncatedCobar(H, k, k + 1)
    C = cob.complex
    sol = linalg.solve(H.ring, C.d(k + 1), cob.iota(phi), C.rank(k + 1))
    if sol is None:
        ob = obstruction(H, phi)
        raise Obstructed(
            f"Φ is not trivial in cobar homology (order p^{ob.order})" if ob.order is not None
            else "Φ has infinite order in cobar homology",
            ob,
        )
    alpha, xi = cob.split(sol, k + 1)
    psi = -xi
    assert not H.d(alpha)
    assert H.reduced_diagonal(alpha) == phi + H.d(psi)
    return alpha, psi
