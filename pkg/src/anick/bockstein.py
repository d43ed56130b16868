"""The mod-p Bockstein spectral sequence of a Z_(p) chain complex.

Pages are read off the integral torsion ladder: a summand Z/p^s in H_{n-1}
with generator z and ∂w = p^s z contributes [w] ∈ E^r_n and [z] ∈ E^r_{n-1}
for r ≤ s, joined by β^s; free summands live to E^∞.

Chains are coordinate vectors in the complex's basis. The witness functions
return chains that satisfy their identities exactly and re-check them before
returning.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import linalg
from .errors import DegreeOutOfCap, HypothesisFails, NotAModPCycle


@dataclass(frozen=True)
class ClassHandle:
    """An integral representative of a class in E^r."""

    chain: tuple
    degree: int
    page: int
    zero: bool = False


@dataclass(frozen=True)
class Dead:
    """The class did not survive; ``page`` is the first page it misses."""

    page: int
    reason: str


@dataclass
class TorsionLadder:
    """Per degree: free representatives and (s, z, w) with ∂w = p^s z."""

    free: dict = field(default_factory=dict)
    pairs: dict = field(default_factory=dict)
    homology: dict = field(default_factory=dict, repr=False)

    def count_at_least(self, n: int, r: int) -> int:
        return sum(1 for s, _, _ in self.pairs.get(n, []) if s >= r)

    def max_exponent(self) -> int:
        return max((s for ps in self.pairs.values() for s, _, _ in ps), default=0)


@dataclass
class BocksteinPage:
    r: int
    basis: dict  # degree -> [ClassHandle]
    beta: dict  # degree n -> matrix E^r_n → E^r_{n-1}

    def dim(self, n: int) -> int:
        return len(self.basis.get(n, []))

    def beta_rank(self, n: int) -> int:
        M = self.beta.get(n)
        if not M or not M[0]:
            return 0
        return sum(1 for row in M if any(row))


def torsion_ladder(C: linalg.ChainComplex, degrees) -> TorsionLadder:
    ladder = TorsionLadder()
    for n in degrees:
        hs = linalg.homology_at(C, n)
        ladder.homology[n] = hs
        ladder.free[n] = hs.free_reps
        ladder.pairs[n] = list(zip(hs.torsion, hs.torsion_reps, hs.torsion_preimages))
    return ladder


def pages(C: linalg.ChainComplex, degrees, r_max: Optional[int] = None):
    """E^1..E^{r_max} in the given degrees, plus the torsion ladder.

    r_max defaults to the largest torsion exponent found plus one, at which
    point the page equals E^∞.
    """
    if C.ring.kind != "localized":
        raise ValueError("the Bockstein spectral sequence needs a Z_(p) complex")
    degrees = sorted(degrees)
    if not degrees:
        return [], TorsionLadder()
    if degrees[-1] + 1 > C.cap:
        raise DegreeOutOfCap(degrees[-1] + 1, C.cap)
    window = range(max(degrees[0] - 1, 0), degrees[-1] + 1)
    ladder = torsion_ladder(C, window)
    if r_max is None:
        r_max = ladder.max_exponent() + 1
    out = []
    for r in range(1, r_max + 1):
        basis, position = {}, {}
        for n in window:
            hs = []
            for z in ladder.free[n]:
                hs.append(ClassHandle(tuple(z), n, r))
            for idx, (s, z, w) in enumerate(ladder.pairs[n]):
                if s >= r:
                    position[("bottom", n, idx)] = len(hs)
                    hs.append(ClassHandle(tuple(z), n, r))
            for idx, (s, z, w) in enumerate(ladder.pairs.get(n - 1, [])):
                if s >= r:
                    position[("top", n, idx)] = len(hs)
                    hs.append(ClassHandle(tuple(w), n, r))
            basis[n] = hs
        beta = {}
        for n in window:
            rows = len(basis.get(n - 1, [])) if n - 1 in basis else 0
            M = linalg.zeros(rows, len(basis[n]))
            if n - 1 in basis:
                for idx, (s, z, w) in enumerate(ladder.pairs.get(n - 1, [])):
                    if s == r:
                        M[position[("bottom", n - 1, idx)]][position[("top", n, idx)]] = 1
            beta[n] = M
        out.append(BocksteinPage(r, {n: basis[n] for n in degrees}, {n: beta[n] for n in degrees}))
    return out, ladder


def expected_page_dim(ladder: TorsionLadder, n: int, r: int) -> int:
    """betti_n + #{s ≥ r in degree n} + #{s ≥ r in degree n−1}."""
    return (
        len(ladder.free.get(n, []))
        + ladder.count_at_least(n, r)
        + ladder.count_at_least(n - 1, r)
    )


def check_page_recursion(page_list, ladder: TorsionLadder, degrees) -> bool:
    """dim E^{r+1}_n = dim E^r_n − rank β^r out of n − rank β^r into n."""
    for a, b in zip(page_list, page_list[1:]):
        for n in degrees:
            into = sum(1 for s, _, _ in ladder.pairs.get(n, []) if s == a.r)
            if b.dim(n) != a.dim(n) - a.beta_rank(n) - into:
                return False
    return True


# --------------------------------------------------------------------------
# chains and witnesses


def _is_mod_p_cycle(C, n, a):
    ring = C.ring
    da = linalg.matvec(ring, C.d(n), a) if C.rank(n - 1) else []
    return all(ring.valuation(x) >= 1 for x in da), da


def _solve_two_blocks(ring, A, B, rows, ca, cb, rhs):
    """Solve A·x + B·y = rhs; returns (x, y) or None."""
    M = linalg.block_matrix(ring, [[A, B]], [rows], [ca, cb])
    sol = linalg.solve(ring, M, rhs, ca + cb)
    if sol is None:
        return None
    return sol[:ca], sol[ca:]


def survives_to(C: linalg.ChainComplex, n: int, a, r: int):
    """ClassHandle for [a]_r, or Dead(page, reason) if a dies before page r."""
    ring = C.ring
    p = ring.p
    ok, da = _is_mod_p_cycle(C, n, a)
    if not ok:
        raise NotAModPCycle("∂a is not divisible by p")
    if all(ring.valuation(x) >= 1 for x in a):
        return ClassHandle(tuple(a), n, 1, zero=True)
    cn, cm = C.rank(n), C.rank(n - 1)
    lift = list(a)
    for k in range(1, r):
        # find c, e with ∂(a + pc) = p^{k+1} e
        dn = C.d(n)
        sol = _solve_two_blocks(
            ring, linalg.scale_matrix(ring, p, dn), linalg.scaled_identity(ring, -p ** (k + 1), cm),
            cm, cn, cm, [-x for x in da],
        )
        if sol is None:
            return Dead(k + 1, f"β^{k}[a]_{k} ≠ 0")
        c, _ = sol
        lift = linalg.vadd(ring, a, linalg.vscale(ring, p, c))
    zero = is_zero_class(C, n, lift, r)
    return ClassHandle(tuple(lift), n, r, zero=zero)


def is_zero_class(C, n, a, r) -> bool:
    """[a]_r = 0 iff p^{r−1} a ∈ ∂C_{n+1} + p^r C_n."""
    ring = C.ring
    p = ring.p
    cn, cn1 = C.rank(n), C.rank(n + 1)
    if not cn:
        return True
    dn1 = C.d(n + 1) if cn1 else linalg.zeros(cn, 0)
    sol = _solve_two_blocks(
        ring, dn1, linalg.scaled_identity(ring, p**r, cn), cn, cn1, cn,
        linalg.vscale(ring, p ** (r - 1), a),
    )
    return sol is not None


def _residual_bss(C, n, a, b, c, e, r):
    ring = C.ring
    p = ring.p
    lhs = linalg.matvec(ring, C.d(n), linalg.vadd(ring, a, linalg.vscale(ring, p, c)))
    rhs = linalg.vscale(ring, p**r, linalg.vadd(ring, b, linalg.vscale(ring, p, e)))
    return [ring.norm(x - y) for x, y in zip(lhs, rhs)]


def bss_witness(C: linalg.ChainComplex, n: int, a, b, r: int):
    """Chains (c, e) with ∂(a + pc) = p^r (b + pe), given β^r[a]_r = [b]_r.

    Follows the induction on r: at r = 1 write ∂a = px and solve
    x = b + pe − ∂c; for r ≥ 2 first kill β^{r−1}[a] and then correct by a
    chain y with β^{r−1}[y] = [g − b].
    """
    ring = C.ring
    p = ring.p
    cn, cm = C.rank(n), C.rank(n - 1)
    ok, da = _is_mod_p_cycle(C, n, a)
    if not ok:
        raise NotAModPCycle("∂a is not divisible by p")
    if r < 1:
        raise ValueError("page index starts at 1")
    if r == 1:
        x = [ring.div(v, p) for v in da]
        rhs = [ring.norm(u - v) for u, v in zip(x, b)]
        sol = _solve_two_blocks(
            ring, linalg.scaled_identity(ring, p, cm), linalg.scale_matrix(ring, -1, C.d(n)),
            cm, cm, cn, rhs,
        )
        if sol is None:
            raise HypothesisFails("β^1[a]_1 ≠ [b]_1")
        e, c = sol
    else:
        try:
            f, g = bss_witness(C, n, a, [0] * cm, r - 1)
        except HypothesisFails as exc:
            raise HypothesisFails(f"[a] does not survive to page {r}") from exc
        gb = [ring.norm(u - v) for u, v in zip(g, b)]
        sol = _solve_two_blocks(
            ring, C.d(n), linalg.scaled_identity(ring, p**r, cm), cm, cn, cm,
            linalg.vscale(ring, p ** (r - 1), gb),
        )
        if sol is None:
            raise HypothesisFails(f"β^{r}[a]_{r} ≠ [b]_{r}")
        y, e = sol
        c = [ring.norm(u - v) for u, v in zip(f, y)]
    assert not any(_residual_bss(C, n, a, b, c, e, r)), "bss_witness identity failed"
    return c, e


def class_equal_witness(C: linalg.ChainComplex, n: int, b1, b2, r: int):
    """Chains (e, f) with p^{r−1} b1 = p^{r−1} b2 + p^r e + ∂f, given [b1]_r = [b2]_r."""
    ring = C.ring
    p = ring.p
    cn, cn1 = C.rank(n), C.rank(n + 1)
    diff = [ring.norm(u - v) for u, v in zip(b1, b2)]
    dn1 = C.d(n + 1) if cn1 else linalg.zeros(cn, 0)
    if r == 1:
        sol = _solve_two_blocks(ring, linalg.scaled_identity(ring, p, cn), dn1, cn, cn, cn1, diff)
        if sol is None:
            raise HypothesisFails("[b']_1 ≠ [b'']_1")
        e, f = sol
    else:
        # locate a with β^{r−1}[a]_{r−1} = [b' − b'']_{r−1}
        sol = _solve_two_blocks(
            ring, dn1, linalg.scaled_identity(ring, -p**r, cn), cn, cn1, cn,
            linalg.vscale(ring, p ** (r - 1), diff),
        )
        if sol is None:
            raise HypothesisFails(f"[b']_{r} ≠ [b'']_{r}")
        a, _ = sol
        c, e1 = bss_witness(C, n + 1, a, diff, r - 1)
        f = linalg.vadd(ring, a, linalg.vscale(ring, p, c))
        e = linalg.vscale(ring, -1, e1)
    lhs = linalg.vscale(ring, p ** (r - 1), b1)
    df = linalg.matvec(ring, dn1, f) if cn1 else [0] * cn
    rhs = linalg.vadd(ring, linalg.vscale(ring, p ** (r - 1), b2), linalg.vscale(ring, p**r, e), df)
    assert lhs == rhs, "class_equal_witness identity failed"
    return e, f
