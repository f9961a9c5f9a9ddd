"""Scattering matrix on the unit sphere and its unitarity checks.

S(lambda) is stored as identity plus a finite-rank correction: with
u_m(n) = e^{-i sqrt(lam) x_m . n} / sqrt|w_m| and the coefficient
matrix T = i sqrt(lam)/(8 pi^2) Gamma(lambda + i0),

    (S f)(n) = f(n) - sum_{m,m'} T_mm' u_m(n) <f, u_m'>.

The finite reduction of ||S* S - I|| used below was validated against
the brute-force quadrature oracle before being trusted (the sign of
the kernel prefactor is fixed so that S is unitary; see the tests).
"""

import io
from dataclasses import dataclass

import numpy as np

from .errors import BadParams, GridMismatch, SingularMatrix
from .krein import build_q, build_weighted, gamma_direct, gamma_schur, gram_matrix
from .spherical import default_grid, plane_wave_block, weighted_gram_target


@dataclass(frozen=True)
class SMatrixRep:
    """Finite-rank representation of S(lambda).

    ``coeff`` is the dimensionless matrix T = i sqrt(lam)/(8 pi^2) Gamma;
    the plane-wave weight factors 1/sqrt|w| are applied at evaluation
    time.  ``gamma_cond`` records the 2-norm condition number of Gamma.
    """

    lam: float
    coeff: np.ndarray
    scatterers: object
    gamma_cond: float = np.nan


def smatrix(lam, s, n=None, split=None, tail_bound=None):
    """Assemble the scattering-matrix representation at lambda > 0.

    Parameters
    ----------
    lam : float
        Spectral parameter (boundary value from above).
    s : ScattererSet
    n : int, optional
        Truncation; uses the first ``n`` scatterers.
    split : int, optional
        When given, Gamma is computed through the Schur-Frobenius
        route with this head size (propagates TailNotContractive).
    """
    if lam <= 0:
        raise BadParams("lambda must be positive")
    sub = s.prefix(n) if n is not None else s
    q = build_q(lam, sub)
    qt, j = build_weighted(sub, q)
    if split is None:
        gamma = gamma_direct(qt, j)
    else:
        gamma, _ = gamma_schur(qt, j, split, tail_bound=tail_bound)
    coeff = 1j * np.sqrt(lam) / (8.0 * np.pi**2) * gamma
    return SMatrixRep(lam=float(lam), coeff=coeff, scatterers=sub,
                      gamma_cond=float(np.linalg.cond(gamma)))


@dataclass(frozen=True)
class SphereFunction:
    """Complex samples on a sphere grid, with quadrature inner products."""

    values: np.ndarray
    grid: object

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.grid.size,):
            raise GridMismatch(
                f"values shape {v.shape} does not match grid size {self.grid.size}")
        object.__setattr__(self, "values", v)

    def inner(self, other):
        self._check(other)
        return complex(np.sum(self.grid.qweights * self.values
                              * np.conj(other.values)))

    def norm(self):
        return float(np.sqrt(np.sum(self.grid.qweights
                                    * np.abs(self.values) ** 2)))

    def _check(self, other):
        if other.grid is not self.grid and (
            other.grid.size != self.grid.size
            or not np.array_equal(other.grid.nodes, self.grid.nodes)
        ):
            raise GridMismatch("sphere functions live on different grids")


def _apply(rep, f, coeff):
    u = plane_wave_block(rep.lam, rep.scatterers, f.grid).u
    v = (u.conj() * f.grid.qweights) @ f.values
    out = f.values - u.T @ (coeff @ v)
    return SphereFunction(values=out, grid=f.grid)


def apply_smatrix(rep, f):
    """Apply S to a sphere function through quadrature inner products."""
    return _apply(rep, f, rep.coeff)


def apply_smatrix_adjoint(rep, f):
    """Apply S* (the coefficient matrix is conjugate-transposed)."""
    return _apply(rep, f, rep.coeff.conj().T)


def kernel_correction(rep, dirs_out, dirs_in):
    """Values of S(n, n') - delta(n - n') at direction pairs.

    ``dirs_out`` and ``dirs_in`` are arrays of unit vectors with shapes
    (a, 3) and (b, 3); returns the (a, b) matrix
    -sum T_mm' u_m(n) conj(u_m'(n')).
    """
    s = rep.scatterers
    k = np.sqrt(rep.lam)
    rootw = np.sqrt(s.abs_weights)
    u_out = np.exp(-1j * k * (s.points @ np.atleast_2d(dirs_out).T)) / rootw[:, None]
    u_in = np.exp(-1j * k * (s.points @ np.atleast_2d(dirs_in).T)) / rootw[:, None]
    return -(u_out.T @ rep.coeff @ u_in.conj())


def unitarity_defect_reduced(lam, s, n=None):
    """Exact finite-matrix reduction of ||S* S - I||.

    With a = sqrt(lam)/(8 pi^2) and B the exact plane-wave overlap
    matrix, the coefficient matrix of S*S - I is

        ia (Gamma^H - Gamma) + a^2 Gamma^H B Gamma,

    whose spectral norm is returned (zero in exact arithmetic).
    """
    sub = s.prefix(n) if n is not None else s
    q = build_q(lam, sub)
    qt, j = build_weighted(sub, q)
    gamma = gamma_direct(qt, j)
    a = np.sqrt(lam) / (8.0 * np.pi**2)
    b = weighted_gram_target(lam, sub)
    defect = 1j * a * (gamma.conj().T - gamma) + a**2 * gamma.conj().T @ b @ gamma
    return float(np.linalg.norm(defect, 2))


def unitarity_defect_quadrature(rep, grid, trials=8, seed=0):
    """Brute-force unitarity defect max ||S*Sf - f|| / ||f|| over random f.

    Half of the trials are drawn inside the span of the plane-wave
    columns (where the finite-rank defect lives), the rest are raw
    nodal noise.
    """
    if trials < 1:
        raise BadParams("trials must be >= 1")
    rng = np.random.default_rng(seed)
    u = plane_wave_block(rep.lam, rep.scatterers, grid).u
    worst = 0.0
    for t in range(trials):
        if t % 2 == 0:
            c = rng.standard_normal(u.shape[0]) + 1j * rng.standard_normal(u.shape[0])
            vals = u.T @ c
        else:
            vals = rng.standard_normal(grid.size) + 1j * rng.standard_normal(grid.size)
        f = SphereFunction(values=vals, grid=grid)
        nf = f.norm()
        if nf == 0.0:
            continue
        g = apply_smatrix_adjoint(rep, apply_smatrix(rep, f))
        worst = max(worst, float(np.sqrt(np.sum(grid.qweights
                                                * np.abs(g.values - f.values) ** 2))) / nf)
    return worst


def smatrix_minus_identity_norm(rep):
    """Operator norm of S - I on L^2(S_2), exact for the finite-rank part.

    Equals ||B^{1/2} T B^{1/2}||_2 with B the exact plane-wave overlap.
    """
    b = weighted_gram_target(rep.lam, rep.scatterers)
    vals, vecs = np.linalg.eigh(b)
    root = vecs @ np.diag(np.sqrt(np.clip(vals, 0.0, None))) @ vecs.conj().T
    return float(np.linalg.norm(root @ rep.coeff @ root, 2))


def omega_unitary(upsilon, lam_mat):
    """Gram-metric unitary Omega = I - 2i (Lambda + i Upsilon)^{-1} Upsilon.

    ``upsilon`` is the Hermitian positive Gram matrix of the frame,
    ``lam_mat`` any Hermitian matrix with Lambda + i Upsilon invertible.
    The result satisfies Omega^H Upsilon Omega = Upsilon.
    """
    upsilon = np.asarray(upsilon, dtype=complex)
    lam_mat = np.asarray(lam_mat, dtype=complex)
    a = lam_mat + 1j * upsilon
    sv = np.linalg.svd(a, compute_uv=False)
    rcond = float(sv[-1] / sv[0]) if sv[0] > 0 else 0.0
    if rcond < 1e-14:
        raise SingularMatrix("Lambda + i Upsilon is numerically singular",
                             rcond=rcond)
    n = upsilon.shape[0]
    return np.eye(n) - 2j * np.linalg.solve(a, upsilon)


def cross_section(rep, incident, grid=None):
    """Angular pattern |sum T_mm' u_m(n) conj(u_m'(incident))|^2.

    A plotting aid for the magnitude of the S - I kernel against a
    fixed incident direction; returns a SphereFunction of real values.
    """
    if grid is None:
        grid = default_grid(rep.lam, rep.scatterers)
    incident = np.asarray(incident, dtype=float)
    incident = incident / np.linalg.norm(incident)
    amp = kernel_correction(rep, grid.nodes, incident[None, :])[:, 0]
    return SphereFunction(values=np.abs(amp) ** 2 + 0j, grid=grid)


@dataclass(frozen=True)
class ContinuityScan:
    """Finite differences of Gamma along a lambda grid."""

    lambdas: np.ndarray
    increments: np.ndarray
    flagged: np.ndarray

    @property
    def max_increment(self):
        return float(np.max(self.increments))

    def rows(self):
        return list(zip(self.lambdas.tolist(), self.increments.tolist()))


def gamma_continuity_scan(s, n, interval, points, jump_factor=10.0):
    """Scan ||Gamma(lam_{k+1}) - Gamma(lam_k)||_2 on a uniform grid.

    Parameters
    ----------
    points : int
        Number of lambda samples (>= 2); ``points = 2`` yields a single
        difference.
    jump_factor : float
        An increment is flagged when it exceeds ``jump_factor`` times
        the median increment (relative jump detection on a fixed grid).

    Inversion failures are re-raised with the offending lambda attached.
    """
    a, b = interval
    if not 0 < a < b:
        raise BadParams("interval must satisfy 0 < a < b")
    if points < 2:
        raise BadParams("need at least two lambda samples")
    sub = s.prefix(n) if n is not None else s
    lams = np.linspace(a, b, int(points))
    gammas = []
    for lam in lams:
        q = build_q(lam, sub)
        qt, j = build_weighted(sub, q)
        try:
            gammas.append(gamma_direct(qt, j))
        except SingularMatrix as exc:
            raise SingularMatrix(f"Gamma inversion failed at lambda={lam:g}: {exc}",
                                 rcond=exc.rcond) from exc
    inc = np.array([np.linalg.norm(gammas[k + 1] - gammas[k], 2)
                    for k in range(len(gammas) - 1)])
    med = float(np.median(inc)) if len(inc) else 0.0
    flagged = inc > jump_factor * med if med > 0 else np.zeros(len(inc), bool)
    return ContinuityScan(lambdas=lams[1:], increments=inc, flagged=flagged)


def _write(out, text):
    if hasattr(out, "write"):
        out.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


KERNEL_CSV_HEADER = "theta,phi,theta_p,phi_p,re_s,im_s"
DEFECT_CSV_HEADER = "lambda,defect_reduced,gamma_norm,gamma_cond,mu"
CROSS_SECTION_CSV_HEADER = "theta,phi,value"


def write_kernel_csv(rep, dirs_out, dirs_in, out):
    """CSV of the S - delta kernel at all (out, in) direction pairs."""

    def ang(v):
        return (np.arccos(np.clip(v[2], -1, 1)),
                np.mod(np.arctan2(v[1], v[0]), 2 * np.pi))

    vals = kernel_correction(rep, dirs_out, dirs_in)
    buf = io.StringIO()
    buf.write(KERNEL_CSV_HEADER + "\n")
    for i, no in enumerate(np.atleast_2d(dirs_out)):
        to, po = ang(no)
        for j, ni in enumerate(np.atleast_2d(dirs_in)):
            ti, pi = ang(ni)
            buf.write(f"{to:.17g},{po:.17g},{ti:.17g},{pi:.17g},"
                      f"{vals[i, j].real:.17g},{vals[i, j].imag:.17g}\n")
    _write(out, buf.getvalue())


def write_cross_section_csv(pattern, out):
    theta, phi = pattern.grid.thetas_phis()
    buf = io.StringIO()
    buf.write(CROSS_SECTION_CSV_HEADER + "\n")
    for t, p, v in zip(theta, phi, pattern.values.real):
        buf.write(f"{t:.17g},{p:.17g},{v:.17g}\n")
    _write(out, buf.getvalue())


def write_defect_csv(s, lambdas, out):
    """Defect-vs-lambda table: unitarity defect, Gamma norms, Gram mu."""
    buf = io.StringIO()
    buf.write(DEFECT_CSV_HEADER + "\n")
    for lam in np.asarray(lambdas, dtype=float):
        q = build_q(lam, s)
        qt, j = build_weighted(s, q)
        gamma = gamma_direct(qt, j)
        buf.write(f"{lam:.17g},{unitarity_defect_reduced(lam, s):.17g},"
                  f"{np.linalg.norm(gamma, 2):.17g},"
                  f"{np.linalg.cond(gamma):.17g},"
                  f"{gram_matrix(lam, s).mu:.17g}\n")
    _write(out, buf.getvalue())
