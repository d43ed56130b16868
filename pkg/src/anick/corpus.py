"""Seeded random presentations, extension problems and torsion complexes.

Everything here is a pure function of its arguments; randomness comes from a
``random.Random(seed)`` instance so runs are reproducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import linalg
from .algebra import FREE, AlgebraPresentation, Derivation, Element, GeneratorSpec, Tensor
from .hopf import HahPresentation, apply_reduced_diagonal_at, twist
from .primitivization import ExtensionProblem


def _rng(seed):
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def _combo(rng, vectors, dim, spread=2):
    out = [0] * dim
    for v in vectors:
        c = rng.randint(-spread, spread)
        if c:
            out = [a + c * b for a, b in zip(out, v)]
    return out


def primitive_cycles(H: HahPresentation, n: int):
    """Basis of {z ∈ A_n : ∂z = 0, Δ̄z = 0}."""
    alg = H.algebra
    dim = alg.dim(n)
    if not dim:
        return []
    rows = []
    if n >= 1:
        rows += H.differential_matrix(n)
    rows += H.reduced_diagonal_matrix(n)
    return linalg.kernel_basis(H.ring, rows, dim)


def boundary_primitive_chains(H: HahPresentation, n: int):
    """Basis of {a ∈ A_n : ∂a primitive}."""
    alg = H.algebra
    dim = alg.dim(n)
    if not dim or n < 1:
        return [[1 if i == j else 0 for i in range(dim)] for j in range(dim)]
    M = linalg.matmul(H.ring, H.reduced_diagonal_matrix(n - 1), H.differential_matrix(n), inner=alg.dim(n - 1))
    return linalg.kernel_basis(H.ring, M, dim)


def random_primitive_hah(seed, p=3, degrees=(2, 3, 4), cap=10, kind="localized",
                         torsion_bias=0.5, rho=None) -> HahPresentation:
    """A tensor algebra with primitive generators and random primitive boundaries.

    Each boundary is a random primitive cycle of the part built so far,
    multiplied by p with probability ``torsion_bias`` to create torsion.
    """
    rng = _rng(seed)
    ring = linalg.make_ring(p, kind)
    specs = [GeneratorSpec(f"g{i}", d) for i, d in enumerate(sorted(degrees))]
    full = AlgebraPresentation(FREE, specs, cap, ring)
    values = {}
    for k, spec in enumerate(specs):
        sub = AlgebraPresentation(FREE, specs[:k], cap, ring)
        H = HahPresentation(sub, Derivation(sub, {s.name: _restrict(values[s.name], sub) for s in specs[:k]}))
        basis = primitive_cycles(H, spec.degree - 1)
        v = _combo(rng, basis, sub.dim(spec.degree - 1))
        if any(v) and rng.random() < torsion_bias:
            scale = p ** rng.randint(1, 2)
            v = [scale * x for x in v]
        values[spec.name] = Element(full, spec.degree - 1, {m: c for m, c in zip(sub.basis(spec.degree - 1), v) if c})
    return HahPresentation(full, Derivation(full, values), {}, {}, rho=rho)


def _restrict(e: Element, alg) -> Element:
    return Element(alg, e.degree, e.terms)


@dataclass
class SeededExtension:
    problem: ExtensionProblem
    a0: Element
    psi0: Tensor
    twisted: bool


def random_extension(seed, base: HahPresentation, n: int, twist_bias=0.5) -> SeededExtension:
    """Φ = Δ̄a₀ + ∂Ψ₀ with ∂a₀ primitive; f and g are read off Ψ₀.

    With probability ``twist_bias`` a₀ is drawn with nonzero boundary (a torsion
    twist); otherwise a₀ is a cycle.
    """
    rng = _rng(seed)
    H = base
    alg = H.algebra
    twisted = rng.random() < twist_bias
    rows = H.differential_matrix(n) if n >= 1 else []
    cycles = linalg.kernel_basis(H.ring, rows, alg.dim(n)) if rows else boundary_primitive_chains(H, n)
    a0 = alg.from_vector(n, _combo(rng, cycles, alg.dim(n)))
    if twisted:
        pool = boundary_primitive_chains(H, n)
        for _ in range(8):
            cand = alg.from_vector(n, _combo(rng, pool, alg.dim(n)))
            if H.d(cand):
                a0 = cand
                break
    tb = alg.tensor_basis(2, n + 1)
    psi0 = alg.tensor_from_vector(2, n + 1, [rng.choice((0, 0, 0, 1, -1)) for _ in tb])
    phi = H.reduced_diagonal(a0) + H.d(psi0)
    phi = Tensor(alg, 2, n, phi.terms)
    b = alg.from_vector(n - 1, _combo(rng, primitive_cycles(H, n - 1), alg.dim(n - 1)))
    f = apply_reduced_diagonal_at(H, psi0, 0) - apply_reduced_diagonal_at(H, psi0, 1)
    g = twist(psi0) - psi0
    problem = ExtensionProblem(H, "x", n, Element(alg, n - 1, b.terms), phi,
                               Tensor(alg, 3, n + 1, f.terms), Tensor(alg, 2, n + 1, g.terms))
    return SeededExtension(problem, a0, psi0, twisted and bool(H.d(a0)))


def random_unimodular(rng, n, ring, steps=None):
    """(U, U⁻¹) as a product of random elementary integer matrices."""
    U, Ui = linalg.identity(n), linalg.identity(n)
    for _ in range(steps if steps is not None else 3 * n):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        c = rng.randint(-3, 3)
        for row in U:
            row[j] += c * row[i]
        Ui[i] = [a - c * b for a, b in zip(Ui[i], Ui[j])]
    return U, Ui


def torsion_complex(seed, p=3, exponents=(1, 2, 3), betti=1, degree=1, lower=(), upper=0, kind="localized"):
    """A three-term complex with H_degree ≅ Z^betti ⊕ ⊕ Z/p^s, in disguised bases.

    ``lower`` lists torsion exponents placed in degree − 1, ``upper`` counts
    extra acyclic pairs between degree + 1 and degree.
    """
    rng = _rng(seed)
    ring = linalg.make_ring(p, kind)
    t, e = len(exponents), len(lower)
    n_top = t + upper
    n_mid = betti + t + upper + e
    n_low = e
    # block form: columns of ∂_top hit the torsion and acyclic coordinates,
    # the last e middle coordinates map to p^s multiples below
    d_top = linalg.zeros(n_mid, n_top)
    for i, s in enumerate(exponents):
        d_top[betti + i][i] = p**s
    for i in range(upper):
        d_top[betti + t + i][t + i] = 1
    d_mid = linalg.zeros(n_low, n_mid)
    for i, s in enumerate(lower):
        d_mid[i][betti + t + upper + i] = p**s
    U, Ui = random_unimodular(rng, n_mid, ring)
    V, _ = random_unimodular(rng, n_top, ring)
    W, _ = random_unimodular(rng, n_low, ring)
    d_top = linalg.matmul(ring, linalg.matmul(ring, U, d_top), V)
    d_mid = linalg.matmul(ring, linalg.matmul(ring, W, d_mid), Ui) if n_low else linalg.zeros(0, n_mid)
    bases = {
        degree - 1: [f"c{degree - 1}_{i}" for i in range(n_low)],
        degree: [f"c{degree}_{i}" for i in range(n_mid)],
        degree + 1: [f"c{degree + 1}_{i}" for i in range(n_top)],
    }
    bases[degree + 2] = []
    diffs = {degree + 1: d_top}
    if n_low:
        diffs[degree] = d_mid
    module = linalg.GradedModule({k: v for k, v in bases.items() if k >= 0}, degree + 2)
    return linalg.ChainComplex(ring, module, diffs)


@dataclass
class WitnessInstance:
    kind: str  # "bss" or "class_equal"
    degree: int
    r: int
    first: list
    second: list


def _rand_vec(rng, n, spread=2):
    return [rng.randint(-spread, spread) for _ in range(n)]


def witness_instances(seed, C: linalg.ChainComplex, degree: int, count: int):
    """Seeded (a, b, r) with β^r[a]_r = [b]_r and (b', b'', r) with [b']_r = [b'']_r.

    ``degree`` is the degree of b; a lives one degree up.
    """
    from .bockstein import torsion_ladder

    rng = _rng(seed)
    ring = C.ring
    p = ring.p
    ladder = torsion_ladder(C, [degree])
    pairs = ladder.pairs[degree]
    free = ladder.free[degree]
    top = max((s for s, _, _ in pairs), default=1)
    n_up, n_mid = C.rank(degree + 1), C.rank(degree)
    d_up = C.d(degree + 1)
    out = []
    for k in range(count):
        r = rng.randint(1, top)
        if k % 2 == 0:
            a = [0] * n_up
            b = [0] * n_mid
            for s, z, w in pairs:
                if s >= r:
                    c = rng.randint(-2, 2)
                    a = [x + c * y for x, y in zip(a, w)]
                    b = [x + c * p ** (s - r) * y for x, y in zip(b, z)]
            # perturb by a boundary on b, p·chains on a and b
            h = _rand_vec(rng, n_up)
            c0 = _rand_vec(rng, n_up)
            e0 = _rand_vec(rng, n_mid)
            dh = linalg.matvec(ring, d_up, h)
            a = [x + p**r * y - p * z for x, y, z in zip(a, h, c0)]
            b = [x + y - p * z for x, y, z in zip(b, dh, e0)]
            out.append(WitnessInstance("bss", degree + 1, r, a, b))
        else:
            b1 = [0] * n_mid
            for z in free:
                c = rng.randint(-2, 2)
                b1 = [x + c * y for x, y in zip(b1, z)]
            for s, z, _ in pairs:
                if s >= r:
                    c = rng.randint(-2, 2)
                    b1 = [x + c * y for x, y in zip(b1, z)]
            h = _rand_vec(rng, n_up)
            e0 = _rand_vec(rng, n_mid)
            b2 = [x - p * y + z for x, y, z in zip(b1, e0, linalg.matvec(ring, d_up, h))]
            for s, z, _ in pairs:
                if s <= r - 1:
                    c = rng.randint(-2, 2)
                    b2 = [x + c * y for x, y in zip(b2, z)]
            out.append(WitnessInstance("class_equal", degree, r, b1, b2))
    return out


def extension_corpus(seed, p: int, cap: int, count: int, q: int = 2):
    """``count`` seeded extension problems over small primitive bases in degrees < qp."""
    rng = _rng(seed)
    out = []
    while len(out) < count:
        gens = sorted(rng.choice(range(q, q + 3)) for _ in range(3))
        base = random_primitive_hah(rng, p, gens, cap, rho=p)
        top = min(cap - 1, q * p - 1)
        n = rng.randint(max(2 * q, gens[0] + 1), top)
        if base.algebra.dim(n) == 0:
            continue
        out.append(random_extension(rng, base, n))
    return out

