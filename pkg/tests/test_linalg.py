import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import oracles
from anick import linalg
from anick.errors import DegreeOutOfCap
from anick.linalg import ChainComplex, GradedModule, homology_at, make_ring

Z3 = make_ring(3, "localized")
F3 = make_ring(3, "modp")


def random_matrix(rng, m, n, spread=5):
    return [[rng.randint(-spread, spread) for _ in range(n)] for _ in range(m)]


def two_term(ring, entry):
    module = GradedModule({0: ["a"], 1: ["b"]}, 2)
    return ChainComplex(ring, module, {1: [[entry]]})


# -- scalars ---------------------------------------------------------------

def test_localized_scalars_are_reduced():
    assert Z3.norm(Fraction(4, 2)) == 2
    with pytest.raises(ValueError):
        Z3.norm(Fraction(1, 3))
    assert F3.norm(-1) == 2
    assert Z3.valuation(18) == 2
    assert Z3.render(Fraction(-1, 2)) == "-1/2"


# -- Smith form --------------------------------------------------------------

def test_smith_identity():
    U, D, V = linalg.local_smith_form(Z3, linalg.identity(2))
    assert D == [[1, 0], [0, 1]]


def test_smith_diagonal_valuation_two():
    _, D, _ = linalg.local_smith_form(Z3, [[1, 0], [0, 9]])
    assert D == [[1, 0], [0, 9]]


def _check_smith(ring, M, m, n):
    sf = linalg.smith_decompose(ring, M, n)
    D = sf.D()
    assert linalg.matmul(ring, linalg.matmul(ring, sf.U, M, inner=m), sf.V, inner=n) == D
    assert linalg.matmul(ring, sf.U, sf.Uinv, inner=m) == linalg.identity(m)
    assert linalg.matmul(ring, sf.V, sf.Vinv, inner=n) == linalg.identity(n)
    assert sf.exponents == sorted(sf.exponents)
    return sf


def test_smith_seeded_4x5():
    rng = random.Random(11)
    M = random_matrix(rng, 4, 5)
    sf = _check_smith(Z3, M, 4, 5)
    # p-parts of the integer invariant factors are the exponents
    import sympy
    from sympy.matrices.normalforms import invariant_factors
    inv = [f for f in invariant_factors(sympy.Matrix(M), domain=sympy.ZZ) if f != 0]
    assert sf.exponents == sorted(oracles.valuation(f, 3) for f in inv)


@given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 10**6), st.sampled_from([3, 5]))
def test_smith_property(m, n, seed, p):
    rng = random.Random(seed)
    ring = make_ring(p, "localized")
    M = [[rng.choice([0, 0, 1, -1, p, p * p, 2 * p, 7]) for _ in range(n)] for _ in range(m)]
    sf = _check_smith(ring, M, m, n)
    assert sf.rank == oracles._integral(M, m, n).rank()


@given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 10**6))
def test_smith_over_field_is_zero_one(m, n, seed):
    rng = random.Random(seed)
    M = [[rng.randrange(3) for _ in range(n)] for _ in range(m)]
    sf = _check_smith(F3, M, m, n)
    assert set(sf.exponents) <= {0}
    assert sf.rank == oracles.fp_rank(M, 3)


# -- solve -------------------------------------------------------------------

def test_solve_zero_system():
    assert linalg.solve(Z3, [[0, 0]], [0]) == [0, 0]


def test_solve_valuation_obstruction():
    assert linalg.solve(Z3, [[3]], [1]) is None


@given(st.integers(0, 10**6), st.sampled_from([Z3, F3]))
def test_solve_consistent_system(seed, ring):
    rng = random.Random(seed)
    m, n = rng.randint(1, 5), rng.randint(1, 5)
    M = [[ring.norm(x) for x in row] for row in random_matrix(rng, m, n)]
    u0 = [rng.randint(-3, 3) for _ in range(n)]
    v = linalg.matvec(ring, M, u0)
    u = linalg.solve(ring, M, v, n)
    assert u is not None
    assert linalg.matvec(ring, M, u) == v


def test_solve_is_deterministic():
    rng = random.Random(3)
    M = random_matrix(rng, 3, 4)
    v = linalg.matvec(Z3, M, [1, 2, 0, -1])
    assert linalg.solve(Z3, M, v) == linalg.solve(Z3, M, v)


def test_kernel_basis_spans_kernel():
    rng = random.Random(8)
    M = random_matrix(rng, 2, 5)
    K = linalg.kernel_basis(F3, [[x % 3 for x in row] for row in M], 5)
    assert len(K) == 5 - oracles.fp_rank(M, 3)
    for v in K:
        assert all(x % 3 == 0 for x in linalg.matvec(Z3, M, v))


# -- homology ----------------------------------------------------------------

def test_zero_differential_rank_three():
    module = GradedModule({0: [], 1: ["a", "b", "c"], 2: []}, 2)
    hs = homology_at(ChainComplex(Z3, module, {}), 1)
    assert (hs.betti, hs.torsion) == (3, [])


@pytest.mark.parametrize("r", [1, 2, 3])
def test_two_term_multiplication(r):
    hs = homology_at(two_term(Z3, 3**r), 0)
    assert (hs.betti, hs.torsion) == (0, [r])
    w, z = hs.torsion_preimages[0], hs.torsion_reps[0]
    assert linalg.matvec(Z3, [[3**r]], w) == [3**r * x for x in z]


def test_homology_needs_next_degree():
    with pytest.raises(DegreeOutOfCap):
        homology_at(two_term(Z3, 3), 2)


def test_rejects_nonzero_square():
    module = GradedModule({0: ["a"], 1: ["b"], 2: ["c"]}, 3)
    with pytest.raises(ValueError):
        ChainComplex(Z3, module, {1: [[1]], 2: [[1]]})


def _random_complex(rng, p, dims):
    """d_{k+1} = A_k B_k with B_k landing in ker d_k built from a kernel basis."""
    ring = make_ring(p, "localized")
    bases = {k: [f"e{k}_{i}" for i in range(dims[k])] for k in range(len(dims))}
    diffs = {}
    for k in range(1, len(dims)):
        m, n = dims[k - 1], dims[k]
        prev = diffs.get(k - 1)
        K = linalg.kernel_basis(ring, prev, m) if prev else [[int(i == j) for i in range(m)] for j in range(m)]
        if not K or not n:
            continue
        cols = []
        for _ in range(n):
            v = [0] * m
            for kv in K:
                c = rng.choice([0, 0, 1, -1, p, p * p, 2])
                v = [a + c * b for a, b in zip(v, kv)]
            cols.append(v)
        diffs[k] = [list(r) for r in zip(*cols)]
    module = GradedModule(bases, len(dims))
    return ChainComplex(ring, module, diffs)


@given(st.integers(0, 10**6), st.sampled_from([3, 5]))
def test_homology_against_smith_oracle(seed, p):
    rng = random.Random(seed)
    dims = [rng.randint(0, 4) for _ in range(4)]
    C = _random_complex(rng, p, dims)
    for n in range(len(dims) - 1):
        hs = homology_at(C, n)
        expect = oracles.local_homology(
            C.d(n + 1) if C.rank(n + 1) else [], C.d(n) if n and C.rank(n - 1) else [],
            C.rank(n), C.rank(n + 1), C.rank(n - 1) if n else 0, p,
        )
        assert (hs.betti, hs.torsion) == expect
        for z in hs.free_reps + hs.torsion_reps:
            if n and C.rank(n - 1):
                assert linalg.is_zero_vector(linalg.matvec(C.ring, C.d(n), z))
        for s, z, w in zip(hs.torsion, hs.torsion_reps, hs.torsion_preimages):
            assert linalg.matvec(C.ring, C.d(n + 1), w) == [p**s * x for x in z]


@given(st.integers(0, 10**6))
def test_universal_coefficients(seed):
    rng = random.Random(seed)
    C = _random_complex(rng, 3, [rng.randint(0, 4) for _ in range(4)])
    for n in range(3):
        hs = homology_at(C, n)
        below = homology_at(C, n - 1) if n else None
        mod_p = oracles.fp_homology_dim(
            C.d(n + 1) if C.rank(n + 1) else [], C.d(n) if n and C.rank(n - 1) else [], C.rank(n), 3
        )
        assert mod_p == hs.betti + len(hs.torsion) + (len(below.torsion) if below else 0)


def test_field_homology_matches_rank_count():
    rng = random.Random(5)
    C = _random_complex(rng, 3, [3, 4, 3])
    Cp = ChainComplex(F3, C.module, {k: [[x % 3 for x in row] for row in M] for k, M in C.differential.matrices.items()})
    hs = homology_at(Cp, 1)
    assert hs.torsion == []
    assert hs.betti == oracles.fp_homology_dim(Cp.d(2), Cp.d(1), 4, 3)
