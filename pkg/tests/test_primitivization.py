from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from anick import corpus
from anick.algebra import Derivation, tensor
from anick.cobar import obstruction
from anick.errors import HypothesisViolation, Obstructed, OutOfRange, SolveFailed
from anick.fileio import load_presentation
from anick.hopf import HahPresentation, free_hah
from anick.primitivization import (
    ExtensionProblem,
    PrimitivizationConfig,
    induction_step,
    initial_state,
    key_lemma_correct,
    make_boundary_primitive,
    modp_primitive_lift,
    primitivize,
    trivialize_extension,
    verify_isomorphism,
    verify_presentation,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def tuv(cap=10):
    return free_hah(3, [("u", 2), ("v", 3)], {"v": lambda a: a.gen("u").scale(3)}, cap=cap)


# -- boundary made primitive ----------------------------------------------------

def test_primitive_boundary_needs_no_change():
    H = tuv()
    u, v = H.algebra.gen("u"), H.algebra.gen("v")
    b = u * v - v * u
    c, z = make_boundary_primitive(H, b)
    assert not c and z == b


def test_boundary_recovered_up_to_a_boundary():
    # b = ∂(uv) = 3uu is a cycle whose diagonal is not zero
    H = tuv()
    u, v = H.algebra.gen("u"), H.algebra.gen("v")
    b = H.d(u * v)
    assert H.reduced_diagonal(b)
    c, z = make_boundary_primitive(H, b)
    assert b + H.d(c) == z
    assert not H.reduced_diagonal(z)


def test_boundary_out_of_range():
    H = tuv()
    u = H.algebra.gen("u")
    with pytest.raises(OutOfRange):
        make_boundary_primitive(H, u * u * u, n=7, q=2)


# -- key lemma ------------------------------------------------------------------

def test_key_lemma_bockstein_branch():
    # ∂(v²) = 3(uv − vu): b = uv − vu is the Bockstein of the primitive-mod-3 class v²
    H = tuv()
    alg = H.algebra
    u, v = alg.gen("u"), alg.gen("v")
    res = key_lemma_correct(H, v * v, u * v - v * u, alg.tensor_zero(2, 6), 1)
    assert res.x == v * v
    assert not res.y
    assert [s.branch for s in res.trace] == ["start", "bockstein"]
    assert res.iterations <= res.bound


def test_key_lemma_boundary_branch():
    H = tuv()
    u, v = H.algebra.gen("u"), H.algebra.gen("v")
    a, b, w = (u * v).scale(3), (u * u).scale(3), tensor(v, u).scale(2)
    res = key_lemma_correct(H, a, b, w, 1)
    assert [s.branch for s in res.trace] == ["start", "boundary"]
    assert res.y == u * v and not res.x


def test_key_lemma_absorb_branch():
    # H_4 has torsion exponent 1, so at page 2 the class is absorbed at once
    H = tuv()
    u, v = H.algebra.gen("u"), H.algebra.gen("v")
    res = key_lemma_correct(H, (u * v).scale(3), u * u, tensor(v, u).scale(2), 2)
    assert [s.branch for s in res.trace] == ["start", "absorb"]
    assert res.bound == 1
    assert not H.d((u * v).scale(3) - res.x - res.y.scale(3))


def test_key_lemma_with_zero_b():
    H = tuv()
    alg = H.algebra
    u = alg.gen("u")
    res = key_lemma_correct(H, u * u, alg.zero(3), alg.tensor_zero(2, 4), 1)
    assert res.iterations == 0 and not res.x and not res.y


def test_key_lemma_rejects_bad_input():
    H = tuv()
    alg = H.algebra
    u, v = alg.gen("u"), alg.gen("v")
    with pytest.raises(SolveFailed):
        key_lemma_correct(H, v * v, u * v, alg.tensor_zero(2, 6), 1)


# -- staged induction --------------------------------------------------------------

def corpus_problems(p=3, cap=10, count=6, seed=7):
    return [s.problem.validate() for s in corpus.extension_corpus(seed, p, cap, count)]


@pytest.mark.parametrize("idx", range(4))
def test_modp_lift_equations(idx):
    prob = corpus_problems()[idx]
    B = prob.base
    p = B.p
    prev = initial_state(prob)
    lift = modp_primitive_lift(prob, prev, 1)
    assert B.d(lift.a) == lift.b.scale(p)
    lhs = B.reduced_diagonal(lift.a)
    rhs = prev.phi - lift.phi_prime.scale(p) + B.d(lift.u)
    assert lhs == rhs


@pytest.mark.parametrize("idx", range(4))
def test_induction_invariant_holds_for_three_pages(idx):
    prob = corpus_problems()[idx]
    st_ = initial_state(prob)
    for r in (1, 2, 3):
        st_ = induction_step(prob, st_)
        assert st_.r == r
        assert not st_.residual(prob)
        assert not prob.base.d(st_.a)
        assert not prob.base.d(st_.phi)


# -- trivialization ------------------------------------------------------------------

def test_zero_diagonal_gives_identity():
    H = tuv()
    alg = H.algebra
    prob = ExtensionProblem(H, "x", 6, alg.zero(5), alg.tensor_zero(2, 6))
    iso = trivialize_extension(prob)
    assert not iso.a and iso.verify() and iso.stop_page == 0


def test_torsion_fixture_trivializes():
    H = load_presentation(FIXTURES / "torsion_extension.json")
    k = len(H.algebra.generators) - 1
    base = H.sub(k)
    from anick.algebra import restrict
    prob = ExtensionProblem(base, H.algebra.names[k], H.algebra.degrees[k],
                            restrict(H.differential.value(k), base.algebra),
                            restrict(H.diagonal[k], base.algebra))
    iso = trivialize_extension(prob)
    assert iso.verify()
    assert iso.stop_page >= 1


def test_infinite_order_class_is_refused():
    # u⊗uu − uu⊗u type classes are not Δ̄ of anything: homotopy defects expose it
    H = free_hah(3, [("u", 2)], cap=10)
    u = H.algebra.gen("u")
    prob = ExtensionProblem(H, "x", 6, H.algebra.zero(5), tensor(u, u * u))
    with pytest.raises((HypothesisViolation, Obstructed)):
        trivialize_extension(prob)


@pytest.mark.parametrize("p,cap", [(3, 10), (5, 10)])
def test_corpus_agrees_with_cobar_oracle(p, cap):
    for s in corpus.extension_corpus(11, p, cap, 6):
        iso = trivialize_extension(s.problem)
        assert iso.verify()
        assert obstruction(s.problem.base, s.problem.phi).trivial


@settings(max_examples=8)
@given(st.integers(0, 10_000))
def test_seeded_extension_trivializes(seed):
    (s,) = corpus.extension_corpus(seed, 3, 9, 1)
    iso = trivialize_extension(s.problem)
    res = iso.residuals()
    assert not res["chain_map"] and not res["diagonal"]


# -- primitivization of whole presentations -----------------------------------------

def test_primitively_generated_input_is_left_alone():
    H = corpus.random_primitive_hah(3, 3, (2, 3, 4), 10)
    res = primitivize(H)
    assert res.is_identity()
    assert verify_isomorphism(res)["ok"]


def test_transport_of_a_square():
    # Δ̄w = 7 u⊗u must equal Δ̄'θ(w) with Δ̄'w = 0 and Δ̄(uu) = 2 u⊗u, so θ(w) = w + (7/2) uu
    H = load_presentation(FIXTURES / "three_generators_p5.json")
    res = primitivize(H)
    u = H.algebra.gen("u")
    assert res.corrections["w"] == (u * u).scale(Fraction(7, 2))
    assert all(not t for t in res.target.diagonal.values())
    again = primitivize(res.target)
    assert again.is_identity()


def test_degree_range_is_enforced():
    H = free_hah(3, [("u", 2), ("x", 6)], diagonal={"x": lambda a: tensor(a.gen("u"), a.gen("u") * a.gen("u"))
                                                    + tensor(a.gen("u") * a.gen("u"), a.gen("u"))}, cap=8)
    with pytest.raises(HypothesisViolation):
        primitivize(H)


def test_config_rejects_small_rho_and_foreign_primes():
    H = tuv()
    with pytest.raises(HypothesisViolation):
        PrimitivizationConfig.for_presentation(H, rho=2)
    with pytest.raises(HypothesisViolation):
        PrimitivizationConfig.for_presentation(H, primes=[5])


# -- presentation checks ------------------------------------------------------------------

def test_verify_flags_square_nonzero():
    H = free_hah(3, [("u", 2), ("v", 3), ("w", 4)], cap=8)
    alg = H.algebra
    d = Derivation(alg, {"v": alg.gen("u"), "w": alg.gen("v")}, validate=False)
    rep = verify_presentation(HahPresentation(alg, d))
    assert not rep["ok"]
    assert not rep["checks"]["d_squared"]["ok"]
    assert rep["checks"]["d_squared"]["offender"]["generator"] == "w"


def test_verify_flags_wrong_homotopy():
    H = free_hah(3, [("u", 2), ("v", 3), ("x", 4)], {"v": lambda a: a.gen("u").scale(3)},
                 {"x": lambda a: tensor(a.gen("u"), a.gen("u"))}, cap=8)
    alg = H.algebra
    u, v = alg.gen("u"), alg.gen("v")
    bad = HahPresentation(alg, H.differential, {"x": tensor(u, u)},
                          {"x": (alg.tensor_zero(3, 5), tensor(u, v))})
    rep = verify_presentation(bad)
    assert not rep["checks"]["homotopies"]["ok"]
    assert rep["checks"]["homotopies"]["offender"]["generator"] == "x"
    good = HahPresentation(alg, H.differential, {"x": tensor(u, u)},
                           {"x": (alg.tensor_zero(3, 5), alg.tensor_zero(2, 5))})
    assert verify_presentation(good)["ok"]
