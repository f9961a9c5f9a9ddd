"""Krein-formula matrices for zero-range perturbations of the 3-D Laplacian.

Builds the free Green function, the coupling matrix Q(z) with diagonal
i sqrt(z)/(4 pi), its weighted form Qt = D^{-1/2} Q D^{-1/2} with
D = diag|w_m| and signature J = diag(sign w_m), the boundary-value
coefficient matrix Gamma = (J + Qt)^{-1}, the resolvent coefficient
C = (Q + 4 pi L)^{-1}, the sphere Gram matrix G_N(lambda), and the
Schur-Frobenius block inversion with its tail bounds.

The square root branch is fixed with Im sqrt(z) >= 0, so boundary
values on the positive axis are taken from above (sqrt(lambda) >= 0).
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    BadParams,
    NonPositiveGram,
    SingularMatrix,
    SingularSchurComplement,
    TailNotContractive,
    ZeroDistance,
)
from .scatterers import eta_by_index

FOUR_PI = 4.0 * np.pi

RCOND_LIMIT = 1e-14


def branch_sqrt(z):
    """Square root with Im sqrt(z) >= 0; +sqrt(lambda) on the positive axis."""
    s = complex(np.sqrt(complex(z)))
    if s.imag < 0.0:
        s = -s
    return s


@dataclass(frozen=True)
class ComplexEnergy:
    """Spectral point z together with its fixed-branch square root."""

    z: complex
    sqrt_z: complex

    @classmethod
    def from_z(cls, z):
        return cls(z=complex(z), sqrt_z=branch_sqrt(z))

    @property
    def conj(self):
        return ComplexEnergy.from_z(np.conj(self.z))


def as_energy(z):
    if isinstance(z, ComplexEnergy):
        return z
    return ComplexEnergy.from_z(z)


def green_at_distance(z, r):
    """Free Green function e^{i sqrt(z) r} / (4 pi r) at distances ``r``.

    Vectorized over ``r``; all distances must be positive.
    """
    e = as_energy(z)
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0):
        raise ZeroDistance("free Green function requires positive distance")
    return np.exp(1j * e.sqrt_z * r) / (FOUR_PI * r)


def free_green(z, x):
    """Free Green function of -Delta - z at displacement ``x`` in R^3."""
    x = np.asarray(x, dtype=float)
    return complex(green_at_distance(z, np.linalg.norm(x)))


def build_q(z, s):
    """Coupling matrix Q(z): diagonal i sqrt(z)/(4 pi), off-diagonal the
    free Green function between sites.  Complex symmetric; satisfies
    Q(conj z) = Q(z)^H."""
    e = as_energy(z)
    n = s.n
    q = np.full((n, n), 1j * e.sqrt_z / FOUR_PI, dtype=complex)
    if n > 1:
        d = s.distances()
        iu = np.triu_indices(n, 1)
        off = green_at_distance(e, d[iu])
        q[iu] = off
        q[(iu[1], iu[0])] = off
    return q


def build_weighted(s, q):
    """Weighted matrix Qt = D^{-1/2} Q D^{-1/2} and signature J.

    Returns ``(qtilde, j)`` with ``j`` the 1-D array of weight signs.
    """
    rootw = np.sqrt(s.abs_weights)
    qt = q / np.outer(rootw, rootw)
    return qt, s.signs.astype(float)


def _checked_inv(a, label, exc=SingularMatrix):
    sv = np.linalg.svd(a, compute_uv=False)
    rcond = float(sv[-1] / sv[0]) if sv[0] > 0 else 0.0
    if rcond < RCOND_LIMIT:
        raise exc(f"{label} is numerically singular (rcond {rcond:.2e})",
                  rcond=rcond)
    return np.linalg.inv(a)


def gamma_direct(qtilde, j):
    """Gamma = (J + Qt)^{-1} by dense inversion.

    Raises SingularMatrix when the reciprocal condition estimate falls
    below 1e-14.
    """
    a = qtilde + np.diag(np.asarray(j, dtype=float))
    return _checked_inv(a, "J + Qtilde")


@dataclass(frozen=True)
class SchurFactors:
    """Blocks of the Schur-Frobenius factorization of J + Qt at ``n0``.

    ``w_ring`` is the Schur complement W - P^T R^{-1} P; the triangular
    factors of the three-factor product can be reassembled with
    :meth:`product`.
    """

    w_block: np.ndarray
    r_block: np.ndarray
    p_block: np.ndarray
    w_ring: np.ndarray
    n0: int

    def product(self):
        """Reassemble the three-factor product; equals J + Qt."""
        n0 = self.n0
        nt = self.r_block.shape[0]
        if nt == 0:
            return self.w_block.copy()
        rinv = np.linalg.inv(self.r_block)
        upper = np.block([
            [np.eye(n0), self.p_block.T @ rinv],
            [np.zeros((nt, n0)), np.eye(nt)],
        ])
        middle = np.block([
            [self.w_ring, np.zeros((n0, nt))],
            [np.zeros((nt, n0)), self.r_block],
        ])
        lower = np.block([
            [np.eye(n0), np.zeros((n0, nt))],
            [rinv @ self.p_block, np.eye(nt)],
        ])
        return upper @ middle @ lower

    def imag_w_ring_min(self):
        """Least eigenvalue of Im w_ring = (w_ring - w_ring^H) / 2i."""
        h = (self.w_ring - self.w_ring.conj().T) / 2j
        return float(np.linalg.eigvalsh(h)[0])


def gamma_schur(qtilde, j, split, tail_bound=None):
    """Gamma = (J + Qt)^{-1} through the Schur-Frobenius factorization.

    Parameters
    ----------
    qtilde, j : weighted matrix and signature from :func:`build_weighted`.
    split : int
        Head size N0; the tail holds indices > N0.  ``split == N``
        degenerates to the direct inversion.
    tail_bound : float, optional
        Precomputed p_{N0,L}(b) (see ``scatterers.tail_bound``).  When
        given, TailNotContractive is raised exactly when it is >= 1;
        otherwise the measured tail norm ||Qt_tail||_2 is used.

    Returns
    -------
    (gamma, SchurFactors)
    """
    n = qtilde.shape[0]
    if not 1 <= split <= n:
        raise BadParams(f"split {split} outside 1..{n}")
    a = qtilde + np.diag(np.asarray(j, dtype=float))
    if split == n:
        gamma = _checked_inv(a, "J + Qtilde")
        factors = SchurFactors(w_block=a, r_block=np.empty((0, 0), complex),
                               p_block=np.empty((0, split), complex),
                               w_ring=a.copy(), n0=split)
        return gamma, factors

    if tail_bound is not None:
        if tail_bound >= 1.0:
            raise TailNotContractive(
                f"tail bound p = {tail_bound:.6g} >= 1", bound=float(tail_bound))
    else:
        measured = float(np.linalg.norm(qtilde[split:, split:], 2))
        if measured >= 1.0:
            raise TailNotContractive(
                f"measured tail norm {measured:.6g} >= 1", bound=measured)

    w = a[:split, :split]
    r = a[split:, split:]
    p = qtilde[split:, :split]
    rinv = _checked_inv(r, "tail block R")
    w_ring = w - p.T @ rinv @ p
    wri = _checked_inv(w_ring, "Schur complement W_ring",
                       exc=SingularSchurComplement)
    g12 = -wri @ p.T @ rinv
    g21 = -rinv @ p @ wri
    g22 = rinv + rinv @ p @ wri @ p.T @ rinv
    gamma = np.block([[wri, g12], [g21, g22]])
    return gamma, SchurFactors(w_block=w, r_block=r, p_block=p,
                               w_ring=w_ring, n0=split)


def q_norm_bound(s, z):
    """A-priori bound p_L(z) = max_m (|sqrt z| + K0/eta_m^2 + K1) / (4 pi |w_m|).

    Reduces to |sqrt z| / (4 pi |w|) for a single scatterer (no pairs).
    """
    e = as_energy(z)
    absw = s.abs_weights
    if s.n == 1:
        return float(abs(e.sqrt_z) / (FOUR_PI * absw[0]))
    eta = eta_by_index(s)
    k0 = float(np.sum(1.0 / absw))
    k1 = float(np.sum(1.0 / (eta**2 * absw)))
    return float(np.max((abs(e.sqrt_z) + k0 / eta**2 + k1) / (FOUR_PI * absw)))


@dataclass(frozen=True)
class GramData:
    """Sphere Gram matrix G_N(lambda), its least eigenvalue mu, and lambda."""

    g: np.ndarray
    mu: float
    lam: float


def gram_matrix(lam, s):
    """Gram matrix of the plane-wave columns on the unit sphere.

    G_mm = sqrt(lambda)/(4 pi) on the diagonal and
    sin(sqrt(lambda) r)/(4 pi r) off it; equals Im Q(lambda + i0)
    entrywise.  Raises NonPositiveGram when the least eigenvalue is
    not positive beyond round-off.
    """
    if lam <= 0:
        raise BadParams("lambda must be positive")
    k = np.sqrt(lam)
    n = s.n
    g = np.full((n, n), k / FOUR_PI)
    if n > 1:
        d = s.distances()
        iu = np.triu_indices(n, 1)
        off = np.sin(k * d[iu]) / (FOUR_PI * d[iu])
        g[iu] = off
        g[(iu[1], iu[0])] = off
    mu = float(np.linalg.eigvalsh(g)[0])
    if mu <= -1e-12 * max(1.0, float(np.linalg.norm(g, 2))):
        raise NonPositiveGram(f"least Gram eigenvalue {mu:g} <= 0")
    return GramData(g=g, mu=mu, lam=float(lam))


def m_sampled(s, n, interval, grid=64):
    """Sampled sup of ||G_N(lambda)^{-1}||_2 over a log-spaced lambda grid.

    A lower estimate of the true supremum M_N([a, b]); the grid default
    is 64 points.
    """
    a, b = interval
    if not 0 < a < b:
        raise BadParams("interval must satisfy 0 < a < b")
    sub = s.prefix(n)
    lams = np.geomspace(a, b, int(grid))
    worst = 0.0
    for lam in lams:
        gd = gram_matrix(lam, sub)
        worst = max(worst, float(np.linalg.norm(np.linalg.inv(gd.g), 2)))
    return worst


def c_matrix(z, s):
    """Resolvent coefficient matrix C(z) = (Q(z) + 4 pi L)^{-1}."""
    q = build_q(z, s)
    return _checked_inv(q + FOUR_PI * np.diag(s.weights), "Q + 4 pi L")


@dataclass(frozen=True)
class KreinMatrices:
    """Bundle of the Krein-formula matrices at one spectral point."""

    energy: ComplexEnergy
    q: np.ndarray
    qtilde: np.ndarray
    j: np.ndarray
    gamma: np.ndarray
    c: np.ndarray


def krein_matrices(z, s):
    """Assemble Q, Qt, J, Gamma and C at a spectral point.

    The two inverses parameterize the perturbation with strengths w
    (Gamma route, used by the scattering matrix) and 4 pi w (C route,
    used by the resolvent kernel); D^{-1/2} Gamma D^{-1/2} equals
    (Q + L)^{-1}.
    """
    e = as_energy(z)
    q = build_q(e, s)
    qt, j = build_weighted(s, q)
    gamma = gamma_direct(qt, j)
    c = _checked_inv(q + FOUR_PI * np.diag(s.weights), "Q + 4 pi L")
    return KreinMatrices(energy=e, q=q, qtilde=qt, j=j, gamma=gamma, c=c)


def summability_surrogate(s, z):
    """Hilbert-Schmidt surrogate for the resolvent difference.

    Returns ``(lhs, rhs)`` where lhs = sum_n ||Gt(z) e_n||^2 computed
    from Im Qt(z)/Im z and rhs = (1/8 pi) sum_n (sum_m |b_nm|)^2 with
    b = diag(1/sqrt|w|).  The inequality lhs <= rhs requires
    Im sqrt(z) >= 1 (the 1/Im sqrt(z) factor is dropped in the rhs).
    """
    e = as_energy(z)
    if e.z.imag == 0:
        raise BadParams("summability surrogate needs Im z != 0")
    q = build_q(e, s)
    qt, _ = build_weighted(s, q)
    gram = (qt - qt.conj().T) / (2j * e.z.imag)
    lhs = float(np.sum(np.real(np.diag(gram))))
    rhs = float(np.sum(1.0 / s.abs_weights) / (8.0 * np.pi))
    return lhs, rhs
