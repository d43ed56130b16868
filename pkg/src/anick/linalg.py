"""Exact linear algebra over F_p and over Z_(p).

Matrices are plain lists of rows. Entries of F_p matrices are ints in
``range(p)``; entries of Z_(p) matrices are ints or ``Fraction`` objects whose
denominators are prime to p. Everything here is a pure function of its
arguments.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DegreeOutOfCap

INF = float("inf")


# --------------------------------------------------------------------------
# rings


class Fp:
    """The prime field Z/p."""

    kind = "modp"

    def __init__(self, p: int):
        if p < 3 or any(p % k == 0 for k in range(2, int(p**0.5) + 1)):
            raise ValueError(f"p must be an odd prime, got {p}")
        self.p = p

    def __repr__(self):
        return f"Fp({self.p})"

    def __eq__(self, other):
        return isinstance(other, Fp) and other.p == self.p

    def __hash__(self):
        return hash(("modp", self.p))

    def norm(self, x):
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ValueError(f"{x} is not defined mod {self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return x % self.p

    def valuation(self, x):
        return INF if x % self.p == 0 else 0

    def div(self, a, b):
        return a * pow(b, -1, self.p) % self.p

    def sub_mul(self, x, f, y):
        return (x - f * y) % self.p

    def power_of_p(self, s):
        return 1 if s == 0 else 0

    def render(self, x) -> str:
        return str(x)


class ZLocal:
    """The local ring Z_(p) of rationals with denominator prime to p."""

    kind = "localized"

    def __init__(self, p: int):
        if p < 3 or any(p % k == 0 for k in range(2, int(p**0.5) + 1)):
            raise ValueError(f"p must be an odd prime, got {p}")
        self.p = p

    def __repr__(self):
        return f"ZLocal({self.p})"

    def __eq__(self, other):
        return isinstance(other, ZLocal) and other.p == self.p

    def __hash__(self):
        return hash(("localized", self.p))

    def norm(self, x):
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ValueError(f"{x} is not in Z_({self.p})")
            return x.numerator if x.denominator == 1 else x
        return int(x)

    def valuation(self, x):
        if x == 0:
            return INF
        n = x.numerator if isinstance(x, Fraction) else x
        v = 0
        while n % self.p == 0:
            n //= self.p
            v += 1
        return v

    def div(self, a, b):
        if isinstance(a, int) and isinstance(b, int) and a % b == 0:
            return a // b
        q = Fraction(a) / b
        return q.numerator if q.denominator == 1 else q

    def sub_mul(self, x, f, y):
        r = x - f * y
        if isinstance(r, Fraction) and r.denominator == 1:
            return r.numerator
        return r

    def power_of_p(self, s):
        return self.p**s

    def render(self, x) -> str:
        return render_scalar(x)


def make_ring(p: int, kind: str = "localized"):
    if kind in ("modp", "Fp", "field"):
        return Fp(p)
    if kind in ("localized", "ZLocal", "local"):
        return ZLocal(p)
    raise ValueError(f"unknown ring kind {kind!r}")


def render_scalar(x) -> str:
    """Canonical text form ``a/b`` (``/b`` omitted when b = 1)."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# --------------------------------------------------------------------------
# matrices


def zeros(m: int, n: int):
    return [[0] * n for _ in range(m)]


def identity(n: int):
    M = zeros(n, n)
    for i in range(n):
        M[i][i] = 1
    return M


def ncols(M, default=0):
    return len(M[0]) if M else default


def transpose(M, n_cols=None):
    if not M:
        return [[] for _ in range(n_cols or 0)]
    return [list(col) for col in zip(*M)]


def matmul(ring, A, B, inner=None):
    """A (m x k) times B (k x n)."""
    m = len(A)
    k = len(B) if inner is None else inner
    n = ncols(B)
    C = zeros(m, n)
    for i in range(m):
        Ai = A[i]
        Ci = C[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                for j in range(n):
                    b = Bt[j]
                    if b:
                        Ci[j] += a * b
    return [[ring.norm(x) for x in row] for row in C]


def matvec(ring, A, v):
    out = []
    for row in A:
        s = 0
        for a, b in zip(row, v):
            if a and b:
                s += a * b
        out.append(ring.norm(s))
    return out


def is_zero_matrix(M) -> bool:
    return all(x == 0 for row in M for x in row)


def is_zero_vector(v) -> bool:
    return all(x == 0 for x in v)


def column(M, j):
    return [row[j] for row in M]


def hstack(blocks: Sequence, n_rows: int):
    """Concatenate matrices side by side; empty blocks contribute nothing."""
    out = [[] for _ in range(n_rows)]
    for B in blocks:
        if not B:
            continue
        for i in range(n_rows):
            out[i].extend(B[i])
    return out


def vstack(blocks: Sequence, n_cols: int):
    out = []
    for B in blocks:
        for row in B:
            assert len(row) == n_cols
            out.append(list(row))
    return out


def scale_matrix(ring, c, M):
    return [[ring.norm(c * x) for x in row] for row in M]


# --------------------------------------------------------------------------
# Smith form over a local PID


@dataclass
class SmithForm:
    """U M V = D with D diagonal, diagonal entries p^{s_0} | p^{s_1} | ...

    ``exponents[i]`` is s_i for the i-th nonzero diagonal entry; the rank is
    ``len(exponents)``. Over F_p every exponent is 0.
    """

    ring: object
    shape: tuple
    exponents: list
    U: list
    V: list
    Uinv: list
    Vinv: list

    @property
    def rank(self) -> int:
        return len(self.exponents)

    def D(self):
        m, n = self.shape
        D = zeros(m, n)
        for i, s in enumerate(self.exponents):
            D[i][i] = self.ring.power_of_p(s) if s else 1
        return D


def _pick_pivot(ring, A, t, m, n):
    best = None
    for j in range(t, n):
        for i in range(t, m):
            a = A[i][j]
            if a:
                v = ring.valuation(a)
                if v == 0:
                    return (0, i, j)
                if best is None or v < best[0]:
                    best = (v, i, j)
    return best


def smith_decompose(ring, M, n_cols: Optional[int] = None) -> SmithForm:
    m = len(M)
    n = ncols(M, n_cols or 0)
    A = [[ring.norm(x) for x in row] for row in M]
    U, Uinv, V, Vinv = identity(m), identity(m), identity(n), identity(n)
    exps = []
    t = 0
    while t < min(m, n):
        piv = _pick_pivot(ring, A, t, m, n)
        if piv is None:
            break
        s, i, j = piv
        if i != t:
            A[t], A[i] = A[i], A[t]
            U[t], U[i] = U[i], U[t]
            for row in Uinv:
                row[t], row[i] = row[i], row[t]
        if j != t:
            for row in A:
                row[t], row[j] = row[j], row[t]
            for row in V:
                row[t], row[j] = row[j], row[t]
            Vinv[t], Vinv[j] = Vinv[j], Vinv[t]
        pivot = A[t][t]
        ps = ring.power_of_p(s) if s else 1
        c = ring.div(ps, pivot)  # a unit
        if c != 1:
            A[t] = [ring.norm(c * x) for x in A[t]]
            U[t] = [ring.norm(c * x) for x in U[t]]
            cinv = ring.div(1, c)
            for row in Uinv:
                row[t] = ring.norm(row[t] * cinv)
        At = A[t]
        for i2 in range(t + 1, m):
            a = A[i2][t]
            if not a:
                continue
            f = ring.div(a, ps)
            Ai = A[i2]
            for j2 in range(t, n):
                if At[j2]:
                    Ai[j2] = ring.sub_mul(Ai[j2], f, At[j2])
            Ui, Ut = U[i2], U[t]
            for j2 in range(m):
                if Ut[j2]:
                    Ui[j2] = ring.sub_mul(Ui[j2], f, Ut[j2])
            for row in Uinv:
                if row[i2]:
                    row[t] = ring.sub_mul(row[t], -f, row[i2])
        for j2 in range(t + 1, n):
            a = At[j2]
            if not a:
                continue
            f = ring.div(a, ps)
            At[j2] = 0
            for row in V:
                if row[t]:
                    row[j2] = ring.sub_mul(row[j2], f, row[t])
            Vt, Vj = Vinv[t], Vinv[j2]
            for k in range(n):
                if Vj[k]:
                    Vt[k] = ring.sub_mul(Vt[k], -f, Vj[k])
        exps.append(int(s))
        t += 1
    return SmithForm(ring, (m, n), exps, U, V, Uinv, Vinv)


def local_smith_form(ring, M, n_cols: Optional[int] = None):
    """Return (U, D, V) with U·M·V = D, U and V invertible over the ring."""
    sf = smith_decompose(ring, M, n_cols)
    return sf.U, sf.D(), sf.V


def rank(ring, M, n_cols=None) -> int:
    if ring.kind == "modp":
        return len(rref(ring, M)[1])
    return smith_decompose(ring, M, n_cols).rank


# --------------------------------------------------------------------------
# solving


class LinearSystem:
    """A factored matrix that answers M·u = v for many right-hand sides.

    Returns the deterministic solution with every free coordinate zero, or
    ``None`` when v is not in the image of M over the ring.
    """

    def __init__(self, ring, M, n_cols: Optional[int] = None):
        self.ring = ring
        self.m = len(M)
        self.n = ncols(M, n_cols or 0)
        self.sf = smith_decompose(ring, M, self.n)

    def solve(self, v):
        ring = self.ring
        if len(v) != self.m:
            raise ValueError(f"right-hand side has length {len(v)}, expected {self.m}")
        w = matvec(ring, self.sf.U, v) if self.m else []
        y = [0] * self.n
        for i, s in enumerate(self.sf.exponents):
            if w[i] == 0:
                continue
            if ring.valuation(w[i]) < s:
                return None
            y[i] = ring.div(w[i], ring.power_of_p(s)) if s else w[i]
        for i in range(self.sf.rank, self.m):
            if w[i] != 0:
                return None
        return matvec(ring, self.sf.V, y) if self.n else []


def solve(ring, M, v, n_cols: Optional[int] = None):
    """Solve M·u = v exactly; ``None`` signals that no solution exists."""
    return LinearSystem(ring, M, n_cols).solve(v)


def rref(ring, M, n_cols=None):
    """Reduced row echelon form over a field; returns (R, pivot_columns)."""
    assert ring.kind == "modp"
    p = ring.p
    A = [[x % p for x in row] for row in M]
    m = len(A)
    n = ncols(A, n_cols or 0)
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        A[r] = [x * inv % p for x in A[r]]
        for i in range(m):
            if i != r and A[i][c]:
                f = A[i][c]
                Ar = A[r]
                A[i] = [(a - f * b) % p for a, b in zip(A[i], Ar)]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return A[:r], pivots


def kernel_basis(ring, M, n_cols: Optional[int] = None):
    """A basis of ker M as a list of vectors.

    Over F_p this is the reduced-echelon basis (one vector per free column,
    in column order). Over Z_(p) it is a basis of the saturated kernel
    lattice taken from the Smith form.
    """
    n = ncols(M, n_cols or 0)
    if ring.kind == "modp":
        R, pivots = rref(ring, M, n)
        free = [c for c in range(n) if c not in set(pivots)]
        basis = []
        for f in free:
            v = [0] * n
            v[f] = 1
            for row, pc in zip(R, pivots):
                v[pc] = (-row[f]) % ring.p
            basis.append(v)
        return basis
    sf = smith_decompose(ring, M, n)
    return [column(sf.V, j) for j in range(sf.rank, n)]


# --------------------------------------------------------------------------
# graded objects


@dataclass(frozen=True)
class GradedModule:
    """Per-degree ordered basis labels, zero above ``cap``."""

    bases: dict
    cap: int

    def rank(self, n: int) -> int:
        return len(self.bases.get(n, ()))

    def basis(self, n: int):
        if n > self.cap:
            raise DegreeOutOfCap(n, self.cap)
        return self.bases.get(n, [])


@dataclass(frozen=True)
class GradedMap:
    source: GradedModule
    target: GradedModule
    shift: int
    matrices: dict

    def matrix(self, n: int):
        """Matrix from source degree n to target degree n + shift."""
        if n in self.matrices:
            return self.matrices[n]
        return zeros(self.target.rank(n + self.shift), self.source.rank(n))


class ChainComplex:
    """A finite-type chain complex with exact ∂² = 0 check at construction."""

    def __init__(self, ring, module: GradedModule, differential: dict):
        self.ring = ring
        self.module = module
        self.differential = GradedMap(module, module, -1, dict(differential))
        for n, M in self.differential.matrices.items():
            if len(M) != module.rank(n - 1) or (M and len(M[0]) != module.rank(n)):
                raise ValueError(f"differential in degree {n} has wrong shape")
        for n in sorted(self.differential.matrices):
            if n - 1 in self.differential.matrices and module.rank(n) and module.rank(n - 2):
                sq = matmul(ring, self.d(n - 1), self.d(n), inner=module.rank(n - 1))
                if not is_zero_matrix(sq):
                    raise ValueError(f"d∘d ≠ 0 from degree {n}")

    @property
    def cap(self):
        return self.module.cap

    def rank(self, n):
        return self.module.rank(n)

    def d(self, n):
        """∂_n : C_n → C_{n-1}."""
        return self.differential.matrix(n)


@dataclass
class HomologySummary:
    """H_n of a chain complex over F_p or Z_(p).

    ``torsion`` lists exponents s (summand Z/p^s), sorted ascending; the
    matching ``torsion_reps[i]`` is a cycle z and ``torsion_preimages[i]`` a
    chain w in degree n+1 with ∂w = p^s z exactly.
    """

    degree: int
    ring: object
    betti: int
    torsion: list
    free_reps: list
    torsion_reps: list
    torsion_preimages: list
    _kernel_rank_offset: int = 0
    _Vinv: list = field(default_factory=list, repr=False)
    _Uprime: list = field(default_factory=list, repr=False)
    _rank_prime: int = 0
    _exponents_prime: list = field(default_factory=list, repr=False)

    @property
    def max_torsion_exponent(self) -> int:
        return max(self.torsion, default=0)

    @property
    def dimension_mod_p(self) -> int:
        return self.betti + len(self.torsion)

    def class_coordinates(self, z):
        """Coordinates of the class of the cycle z.

        Returns (torsion_coords, free_coords); torsion coordinates are reduced
        modulo p^s and are zero exactly when that component vanishes.
        """
        ring = self.ring
        full = matvec(ring, self._Vinv, z) if self._Vinv else []
        r = self._kernel_rank_offset
        if any(x != 0 for x in full[:r]):
            raise ValueError("not a cycle")
        c = matvec(ring, self._Uprime, full[r:]) if self._Uprime else []
        tors, free = [], []
        for i, s in enumerate(self._exponents_prime):
            if s == 0:
                continue
            tors.append(_mod_pk(ring, c[i], s))
        free = c[self._rank_prime:]
        return tors, free

    def is_boundary(self, z) -> bool:
        tors, free = self.class_coordinates(z)
        return all(t == 0 for t in tors) and all(f == 0 for f in free)


def _mod_pk(ring, x, s):
    """Canonical residue of x ∈ Z_(p) modulo p^s, as an int in [0, p^s)."""
    pk = ring.p**s
    x = Fraction(x)
    return x.numerator * pow(x.denominator, -1, pk) % pk


def homology_at(C: ChainComplex, n: int) -> HomologySummary:
    """Free rank, torsion and cycle representatives of H_n(C)."""
    if n + 1 > C.cap:
        raise DegreeOutOfCap(n + 1, C.cap)
    ring = C.ring
    dn = C.d(n)
    dn1 = C.d(n + 1)
    cn = C.rank(n)
    sf = smith_decompose(ring, dn, cn)
    r = sf.rank
    k = cn - r
    K = [row[r:] for row in sf.V]
    if C.rank(n + 1) and cn:
        coords = matmul(ring, sf.Vinv, dn1, inner=cn)
        if any(x != 0 for row in coords[:r] for x in row):
            raise ValueError("boundaries are not cycles")
        X = coords[r:]
    else:
        X = zeros(k, C.rank(n + 1))
    sf2 = smith_decompose(ring, X, C.rank(n + 1))
    reps = matmul(ring, K, sf2.Uinv, inner=k) if k else []
    free_reps, tors, tors_reps, tors_pre = [], [], [], []
    for i in range(k):
        z = column(reps, i)
        if i < sf2.rank:
            s = sf2.exponents[i]
            if s == 0:
                continue
            tors.append(s)
            tors_reps.append(z)
            tors_pre.append(column(sf2.V, i))
        else:
            free_reps.append(z)
    return HomologySummary(
        degree=n,
        ring=ring,
        betti=len(free_reps),
        torsion=tors,
        free_reps=free_reps,
        torsion_reps=tors_reps,
        torsion_preimages=tors_pre,
        _kernel_rank_offset=r,
        _Vinv=sf.Vinv,
        _Uprime=sf2.U,
        _rank_prime=sf2.rank,
        _exponents_prime=list(sf2.exponents),
    )


def scaled_identity(ring, c, n: int):
    M = zeros(n, n)
    c = ring.norm(c)
    for i in range(n):
        M[i][i] = c
    return M


def block_matrix(ring, blocks, row_dims, col_dims):
    """Assemble a matrix from a grid of blocks; ``None`` means a zero block."""
    out = []
    for bi, r in enumerate(row_dims):
        rows = [[] for _ in range(r)]
        for bj, c in enumerate(col_dims):
            B = blocks[bi][bj]
            for i in range(r):
                rows[i].extend(B[i] if B is not None else [0] * c)
        out.extend(rows)
    return out


def split_vector(v, dims):
    out, k = [], 0
    for d in dims:
        out.append(v[k:k + d])
        k += d
    return out


def vadd(ring, *vs):
    return [ring.norm(sum(xs)) for xs in zip(*vs)]


def vscale(ring, c, v):
    return [ring.norm(c * x) for x in v]
