"""Independent reference computations used to check the package.

Nothing here calls into ``anick`` for the mathematics: mod-p ranks use a
private Gaussian elimination, integral torsion comes from sympy's Smith
invariants, and the Bockstein pages come from the lattice description
Z^r = {x : ∂x ≡ 0 mod p^r}, B^r = {∂y / p^{r-1} : ∂y ≡ 0 mod p^{r-1}}.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

import sympy
from sympy.matrices.normalforms import invariant_factors


def residue(x, p):
    x = Fraction(x)
    return x.numerator * pow(x.denominator, -1, p) % p


def fp_rank(rows, p):
    """Rank over F_p of a list of rows (entries int or Fraction)."""
    M = [[residue(x, p) for x in row] for row in rows]
    rank = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = pow(M[rank][c], -1, p)
        M[rank] = [x * inv % p for x in M[rank]]
        for i in range(len(M)):
            if i != rank and M[i][c]:
                f = M[i][c]
                M[i] = [(a - f * b) % p for a, b in zip(M[i], M[rank])]
        rank += 1
    return rank


def fp_nullspace(rows, ncols, p):
    """Basis of {y ∈ F_p^ncols : rows · y = 0}, as integer lists."""
    M = [[residue(x, p) for x in row] for row in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][c], -1, p)
        M[r] = [x * inv % p for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [(a - f * b) % p for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = -M[i][fc] % p
        out.append(v)
    return out


def columns(M):
    return [list(c) for c in zip(*M)] if M else []


def _integral(M, nrows, ncols):
    """Scale a rational matrix to an integer one (denominators are p-units)."""
    den = 1
    for row in M:
        for x in row:
            den = den * Fraction(x).denominator // _gcd(den, Fraction(x).denominator)
    return sympy.Matrix(nrows, ncols, [int(Fraction(x) * den) for row in M for x in row])


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def valuation(x, p):
    x = abs(int(x))
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def local_homology(d_in, d_out, rank_n, rank_up, rank_down, p):
    """(betti, sorted torsion exponents) of H_n over Z_(p).

    ``d_out`` : C_n → C_{n-1} and ``d_in`` : C_{n+1} → C_n, each as a list of rows.
    """
    if rank_n == 0:
        return 0, []
    rk_out = _integral(d_out, rank_down, rank_n).rank() if rank_down and d_out else 0
    if rank_up and d_in:
        A = _integral(d_in, rank_n, rank_up)
        rk_in = A.rank()
        factors = [f for f in invariant_factors(A, domain=sympy.ZZ) if f != 0]
    else:
        rk_in, factors = 0, []
    tors = sorted(v for v in (valuation(f, p) for f in factors) if v > 0)
    return rank_n - rk_out - rk_in, tors


def fp_homology_dim(d_in, d_out, rank_n, p):
    """dim_F_p H_n(C ⊗ F_p)."""
    return rank_n - (fp_rank(d_out, p) if d_out else 0) - (fp_rank(d_in, p) if d_in else 0)


def _apply(D, v):
    return [sum(Fraction(a) * b for a, b in zip(row, v)) for row in D]


def divisibility_lattice(D, ncols, p, r):
    """Integer generators of {x ∈ Z^ncols : D x ≡ 0 mod p^r}.

    Built one power of p at a time: if D G = p^{k} M then the next lattice
    is G · ({y : M y ≡ 0 mod p} + p Z^m).
    """
    G = [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]  # generators as vectors
    for k in range(r):
        if not D:
            break
        images = [[Fraction(x, p**k) for x in _apply(D, g)] for g in G]
        M = columns(images)  # rows of M: one per row of D
        null = fp_nullspace(M, len(G), p)
        new = []
        for y in null:
            new.append([sum(c * g[i] for c, g in zip(y, G)) for i in range(ncols)])
        new += [[p * x for x in g] for g in G]
        G = new
    return G


def bockstein_page_dims(C, n, r, p):
    """dim E^r_n of the mod-p Bockstein spectral sequence, from lattices."""
    m = C.rank(n)
    if m == 0:
        return 0
    d_out = C.d(n) if C.rank(n - 1) else []
    Z = divisibility_lattice(d_out, m, p, r)
    z_dim = fp_rank(Z, p)
    up = C.rank(n + 1)
    if up == 0:
        return z_dim
    d_in = C.d(n + 1)
    Y = divisibility_lattice(d_in, up, p, r - 1)
    B = [[Fraction(x, p ** (r - 1)) for x in _apply(d_in, y)] for y in Y]
    return z_dim - fp_rank(B, p)


def beta_rank(C, n, r, p):
    """Rank of β^r : E^r_n → E^r_{n-1}, x ↦ ∂x / p^r, modulo B^r_{n-1}."""
    m = C.rank(n)
    if m == 0 or C.rank(n - 1) == 0:
        return 0
    d_out = C.d(n)
    Z = divisibility_lattice(d_out, m, p, r)
    images = [[Fraction(x, p**r) for x in _apply(d_out, z)] for z in Z]
    Y = divisibility_lattice(d_out, m, p, r - 1)
    B = [[Fraction(x, p ** (r - 1)) for x in _apply(d_out, y)] for y in Y]
    return fp_rank(images + B, p) - fp_rank(B, p)


def lucas_primitive(k, p):
    """Whether x^k is primitive in F_p[x] with x primitive: p | C(k, i) for 0 < i < k."""
    return all(comb(k, i) % p == 0 for i in range(1, k))


def series_coefficients(expr, t, cap):
    s = sympy.series(expr, t, 0, cap + 1).removeO()
    return [int(s.coeff(t, k)) for k in range(cap + 1)]


def koszul_sign(*degrees_pairs):
    """Sign of moving each (a, b) pair past each other: (−1)^{Σ ab}."""
    return -1 if sum(a * b for a, b in degrees_pairs) % 2 else 1
