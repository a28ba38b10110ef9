"""LU / UL factorizations of the monic Jacobi matrix, kernel polynomials and Darboux chains.

Matrices are dense lists of Fractions, 0-indexed.  For the unit lower factor
``L`` with d subdiagonals, the entry commonly written l_{a,b} (rows counted
from the second one) is ``L[a][b-1]``.  ``U`` is upper bidiagonal with
diagonal m_1, m_2, ... (``m[0]`` is m_1) and unit superdiagonal.

Truncation: triangular factors of a leading N x N block are exact, so L*U is
compared on the whole block; U*L needs one more row of L, so only its first
N-1 rows are complete.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import Family, PolySeq, RecCoeffs, generate
from .errors import Breakdown, FactorizationFailed, MissingCoefficient, SingularSystem, ZeroAtOrigin
from .poly import X, ZERO

Matrix = list[list[Fraction]]


def zeros(n: int, m: int | None = None) -> Matrix:
    return [[Fraction(0)] * (n if m is None else m) for _ in range(n)]


def identity(n: int) -> Matrix:
    out = zeros(n)
    for i in range(n):
        out[i][i] = Fraction(1)
    return out


def matmul(a: Matrix, b: Matrix) -> Matrix:
    n, m, p = len(a), len(b), len(b[0])
    out = zeros(n, p)
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for k in range(m):
            c = ai[k]
            if c:
                bk = b[k]
                for j in range(p):
                    if bk[j]:
                        oi[j] += c * bk[j]
    return out


def jacobi_matrix(coeffs: RecCoeffs, N: int) -> Matrix:
    """Leading N x N block of the monic Jacobi matrix."""
    if N > coeffs.horizon:
        raise MissingCoefficient(f"need horizon {N}, have {coeffs.horizon}")
    d = coeffs.d
    J = zeros(N)
    for i in range(N):
        J[i][i] = coeffs.b(i)
        if i + 1 < N:
            J[i][i + 1] = Fraction(1)
        for j in range(1, d + 1):
            if i + j < N:
                J[i + j][i] = coeffs.g(d - j, i + 1)
    return J


def coeffs_from_matrix(M: Matrix, d: int, rows: int | None = None) -> RecCoeffs:
    """Recurrence coefficients read off the first ``rows`` rows of a banded Hessenberg matrix."""
    R = len(M) if rows is None else rows
    beta = [M[i][i] for i in range(R)]
    gamma = [[M[i + d - nu][i] for i in range(R - d + nu)] for nu in range(d)]
    return RecCoeffs(d, beta, gamma)


def band_violations(M: Matrix, d: int, rows: int | None = None) -> list[tuple[int, int]]:
    """Entries breaking the (d+2)-band, unit-superdiagonal shape."""
    R = len(M) if rows is None else rows
    bad = []
    for i in range(R):
        for j in range(len(M[i])):
            v = M[i][j]
            if j == i + 1:
                if v != 1:
                    bad.append((i, j))
            elif (j > i + 1 or j < i - d) and v:
                bad.append((i, j))
    return bad


def upper(m: Sequence[Fraction], N: int) -> Matrix:
    U = zeros(N)
    for i in range(N):
        U[i][i] = m[i]
        if i + 1 < N:
            U[i][i + 1] = Fraction(1)
    return U


# --- LU ----------------------------------------------------------------------

@dataclass
class LU:
    d: int
    L: Matrix
    m: list

    @property
    def N(self) -> int:
        return len(self.L)

    def l(self, a: int, b: int) -> Fraction:
        """l_{a,b} in the 1-based column convention."""
        if b < 1 or b - 1 > a or a >= self.N:
            return Fraction(0)
        return self.L[a][b - 1]

    def U(self) -> Matrix:
        return upper(self.m, self.N)


def lu(coeffs: RecCoeffs, N: int) -> LU:
    """J = L U on the leading N x N block; raises ZeroAtOrigin when some P_n(0), n <= N, vanishes."""
    J = jacobi_matrix(coeffs, N)
    d = coeffs.d
    L = identity(N)
    m: list[Fraction] = []
    for i in range(N):
        for k in range(max(0, i - d), i):
            if not m[k]:
                raise ZeroAtOrigin(f"P_{k + 1}(0) = 0: LU factorization breaks down")
            prev = L[i][k - 1] if k >= 1 else Fraction(0)
            L[i][k] = (J[i][k] - prev) / m[k]
        m.append(J[i][i] - (L[i][i - 1] if i >= 1 else 0))
    if not m[-1]:
        raise ZeroAtOrigin(f"P_{N}(0) = 0: LU factorization breaks down")
    return LU(d, L, m)


def lu_residual(coeffs: RecCoeffs, f: LU) -> Matrix:
    J = jacobi_matrix(coeffs, f.N)
    P = matmul(f.L, f.U())
    return [[P[i][j] - J[i][j] for j in range(f.N)] for i in range(f.N)]


def m_from_values(coeffs: RecCoeffs, N: int) -> list[Fraction]:
    """-P_n(0)/P_{n-1}(0) for n = 1..N."""
    vals = [p(Fraction(0)) for p in generate(coeffs, N)]
    out = []
    for n in range(1, N + 1):
        if not vals[n - 1]:
            raise ZeroAtOrigin(f"P_{n - 1}(0) = 0")
        out.append(-vals[n] / vals[n - 1])
    return out


# --- UL ----------------------------------------------------------------------

@dataclass
class UL:
    d: int
    m: list
    L: Matrix

    @property
    def N(self) -> int:
        return len(self.L)

    def U(self) -> Matrix:
        return upper(self.m, self.N)


def ul(coeffs: RecCoeffs, free: Sequence | None = None, N: int = 12) -> UL:
    """J = U L with m_1..m_d free.

    The free values default to 1; any choice that keeps the pivots nonzero
    gives a valid factorization.  Row i of J fixes row i+1 of L and, once i >= d, the
    pivot m_{i+1} = gamma^0_{i-d+1} / L[i][i-d].
    """
    d = coeffs.d
    if free is None:
        free = [1] * d
    free = [Fraction(v) for v in free]
    if len(free) != d:
        raise ValueError(f"UL needs {d} free diagonal entries")
    J = jacobi_matrix(coeffs, N)
    L = identity(N)
    m: list[Fraction] = []
    for i in range(N):
        if i < d:
            mi = free[i]
        else:
            piv = L[i][i - d]
            if not piv:
                raise Breakdown(f"pivot L[{i}][{i - d}] vanished")
            mi = coeffs.g(0, i - d + 1) / piv
        m.append(mi)
        if i + 1 < N:
            for k in range(max(0, i - d + 1), i + 1):
                L[i + 1][k] = J[i][k] - mi * L[i][k]
    return UL(d, m, L)


def ul_residual(coeffs: RecCoeffs, f: UL) -> Matrix:
    """U L - J on the complete rows (all but the last)."""
    J = jacobi_matrix(coeffs, f.N)
    P = matmul(f.U(), f.L)
    R = f.N - 1
    return [[P[i][j] - J[i][j] for j in range(f.N)] for i in range(R)]


def ul_corecursive(coeffs: RecCoeffs, f: UL) -> RecCoeffs:
    """Co-recursive descriptor whose window coefficients are the first d rows of L."""
    d = coeffs.d
    beta = list(coeffs.beta)
    gamma = [list(r) for r in coeffs.gamma]
    for j in range(1, d + 1):
        beta[j - 1] = coeffs.b(j - 1) - f.m[j - 1]
        for i in range(1, j):
            nu = d - j + i
            gamma[nu][i - 1] = coeffs.g(nu, i) - f.m[j - 1] * f.L[j - 1][i - 1]
    return RecCoeffs(d, beta, gamma)


def ul_corecursive_residuals(coeffs: RecCoeffs, f: UL) -> list[Fraction]:
    """sum_{t=0..k} l-row entries times Q^{(n-k)}_{k-t}(0) for 1 <= k <= n <= d; all must vanish."""
    d = coeffs.d
    q = Family(ul_corecursive(coeffs, f))
    out = []
    for n in range(1, d + 1):
        if n >= f.N:
            break
        for k in range(1, n + 1):
            s = Fraction(0)
            for t in range(k + 1):
                s += f.L[n][n - t] * q(k - t, n - k)(Fraction(0))
            out.append(s)
    return out


# --- kernel polynomials --------------------------------------------------------

@dataclass
class Kernel:
    K: PolySeq
    coeffs: RecCoeffs
    factor: LU
    expansion_residuals: list
    division_residuals: list

    def all_zero(self) -> bool:
        return not any(self.expansion_residuals) and not any(self.division_residuals)


def kernel(coeffs: RecCoeffs, N: int) -> Kernel:
    """Kernel polynomials K_0..K_N from the swapped product U L.

    Residuals: P_n - sum_j L[n][n-j] K_{n-j} for n <= N and
    x K_n - P_{n+1} + (P_{n+1}(0)/P_n(0)) P_n for n < N.
    """
    d = coeffs.d
    M = N + d + 2
    f = lu(coeffs, M)
    S = matmul(f.U(), f.L)
    kc = coeffs_from_matrix(S, d, rows=M - 1)
    K = generate(kc, N)
    P = generate(coeffs, N + 1)
    exp_res = []
    for n in range(N + 1):
        rhs = ZERO
        for j in range(0, min(d, n) + 1):
            rhs = rhs + K[n - j] * f.L[n][n - j]
        exp_res.append(P[n] - rhs)
    div_res = []
    for n in range(N):
        ratio = P[n + 1](Fraction(0)) / P[n](Fraction(0))
        div_res.append(X * K[n] - (P[n + 1] - P[n] * ratio))
    return Kernel(K, kc, f, exp_res, div_res)


# --- bidiagonal factorization ----------------------------------------------------

@dataclass
class BidiagFactor:
    """L = L_1 ... L_d; ``lower[s][i]`` is the (i, i-1) entry of L_{s+1} (index 0 unused)."""
    d: int
    lower: list
    positive: bool
    violation: str | None = None

    def matrix(self, s: int) -> Matrix:
        b = self.lower[s]
        M = identity(len(b))
        for i in range(1, len(b)):
            M[i][i - 1] = b[i]
        return M

    def product(self) -> Matrix:
        P = self.matrix(0)
        for s in range(1, self.d):
            P = matmul(P, self.matrix(s))
        return P


def from_positive_factors(d: int, horizon: int, rng) -> RecCoeffs:
    """Coefficients of J = L_1 ... L_d U from constant positive bidiagonal factors.

    Every factor is TN, so every leading block of J is an oscillation matrix
    and all recurrence coefficients come out strictly positive.  The
    subdiagonal of L_s is a seeded l_s in [1/2, 2] and the diagonal of U a
    seeded m in [4, 8].  Varying entries localize eigenvectors and m < l
    drives the smallest zero to 0 exponentially; either makes neighbouring
    spectra closer than a fixed relative tolerance can resolve.
    """
    N = horizon + 1
    J = upper([Fraction(rng.randint(8, 16), 2)] * N, N)
    for _ in range(d):
        Ls = identity(N)
        l = Fraction(rng.randint(1, 4), 2)
        for i in range(1, N):
            Ls[i][i - 1] = l
        J = matmul(Ls, J)
    return coeffs_from_matrix(J, d, rows=horizon)


def bidiag_factor(L: Matrix, d: int, free: Sequence[Sequence] | None = None,
                  require_positive: bool = False) -> BidiagFactor:
    """Peel unit lower bidiagonal factors off the left: L = L_1 T_1, T_1 = L_2 T_2, ...

    At stage s the remaining factor has b = d - s subdiagonals; its rows
    1..b-1 leave the bidiagonal entry free (``free[s]`` supplies them, default
    half the first-subdiagonal entry so the remainder keeps half of it), and
    every later entry is forced by the outermost band:
    l_i = T[i][i-b] / T'[i-1][i-b].
    """
    N = len(L)
    T = [row[:] for row in L]
    lower = []
    positive = True
    violation = None
    for s in range(d):
        b = d - s
        fr = None if free is None else list(free[s])
        l = [Fraction(0)] * N
        Tn = identity(N)
        for i in range(1, N):
            if b == 1:
                li = T[i][i - 1]
            elif i < b:
                li = Fraction(fr[i - 1]) if fr is not None else T[i][i - 1] / 2
            else:
                piv = Tn[i - 1][i - b]
                if not piv:
                    raise FactorizationFailed(f"stage {s + 1}: zero pivot at row {i - 1}, column {i - b}")
                li = T[i][i - b] / piv
            l[i] = li
            for k in range(max(0, i - b + 1), i):
                Tn[i][k] = T[i][k] - li * Tn[i - 1][k]
            if positive and li <= 0:
                positive = False
                violation = f"factor {s + 1} entry l_{i} = {li} is not positive"
            if positive and b > 1:
                for k in range(max(0, i - b + 1), i):
                    if Tn[i][k] <= 0:
                        positive = False
                        violation = f"stage {s + 1} remainder t[{i}][{k}] = {Tn[i][k]} is not positive"
                        break
        lower.append(l)
        T = Tn
    if require_positive and not positive:
        raise FactorizationFailed(violation)
    return BidiagFactor(d, lower, positive, violation)


# --- Darboux chain -------------------------------------------------------------

@dataclass
class ChainLink:
    matrix: Matrix
    coeffs: RecCoeffs
    seq: PolySeq


def darboux_chain(coeffs: RecCoeffs, N: int, free: Sequence[Sequence] | None = None):
    """J^{(i)} = L_{i+1}..L_d U L_1..L_i for i = 0..d, with their sequences up to degree N.

    Returns (links, factor, connection_residuals) where the residuals are
    P^{(i)}_{m+1} - P^{(i+1)}_{m+1} - l P^{(i+1)}_m with l the (m+1, m) entry of L_{i+1}.
    """
    d = coeffs.d
    M = N + d + 2
    f = lu(coeffs, M)
    bf = bidiag_factor(f.L, d, free)
    Ls = [bf.matrix(s) for s in range(d)]
    U = f.U()
    links = []
    for i in range(d + 1):
        P = identity(M)
        for s in range(i, d):
            P = matmul(P, Ls[s])
        P = matmul(P, U)
        for s in range(i):
            P = matmul(P, Ls[s])
        rows = M if i == 0 else M - 1
        c = coeffs_from_matrix(P, d, rows=rows)
        links.append(ChainLink(P, c, generate(c, N)))
    res = []
    for i in range(d):
        a, b = links[i].seq, links[i + 1].seq
        for mm in range(N):
            res.append(a[mm + 1] - b[mm + 1] - b[mm] * bf.lower[i][mm + 1])
    return links, bf, res


# --- dual forms of the kernel sequence ----------------------------------------------

@dataclass
class KernelDual:
    a: list
    b: list
    residuals: list


def kernel_dual_matrix(coeffs: RecCoeffs, N: int) -> KernelDual:
    """Coefficients with v_r = sum_{i<=r} (a_r^i x - b_r^i) u_i - sum_{j>r} b_r^j u_j.

    The a-system is triangular with diagonal gamma^0; b is then explicit.
    Residuals: <v_r, K_m> - delta_{r,m} for m <= N, brackets taken through
    the moment tables of u_0..u_{d-1}.
    """
    from .forms import moments

    d = coeffs.d
    ker = kernel(coeffs, N)
    f = ker.factor
    g = coeffs.g
    A = []
    B = []
    for r in range(d):
        a = [Fraction(0)] * (r + 1)
        for i in range(r, -1, -1):
            s = f.L[d + i][r]
            for t in range(i + 1, r + 1):
                s -= a[t] * g(t - i, t + 1)
            piv = g(0, i + 1)
            if not piv:
                raise SingularSystem("gamma^0 vanished in the a-system")
            a[i] = s / piv
        b = [Fraction(0)] * d
        for i in range(d):
            acc = sum((a[t] * g(d - i + t, t + 1) for t in range(min(i, r + 1))), Fraction(0))
            if i < r:
                b[i] = acc + a[i] * coeffs.b(i) + a[i + 1]
            elif i == r:
                b[i] = acc + a[i] * coeffs.b(i) - 1
            else:
                b[i] = acc - f.L[i][r]
        A.append(a)
        B.append(b)
    mt = moments(coeffs, N + 2)
    res = []
    for r in range(d):
        for mdeg in range(N + 1):
            Km = ker.K[mdeg]
            val = Fraction(0)
            for n, c in enumerate(Km.coeffs):
                if not c:
                    continue
                v = Fraction(0)
                for i in range(d):
                    if i <= r:
                        v += A[r][i] * mt.get(i, n + 1)
                    v -= B[r][i] * mt.get(i, n)
                val += c * v
            res.append(val - (1 if mdeg == r else 0))
    return KernelDual(A, B, res)
