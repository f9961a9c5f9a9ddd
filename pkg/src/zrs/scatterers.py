"""Scatterer configurations and admissibility diagnostics.

A configuration is a finite list of distinct points in R^3 with nonzero
real coupling weights.  Infinite families are represented by a named
generator truncated to N sites; the summability conditions

    K0 = sum_m 1/|w_m| < inf,    K1 = sum_m 1/(eta_m^2 |w_m|) < inf,

are assessed on partial sums, where eta_m is the minimum pairwise
distance among the first m points (eta_1 aliases eta_2 so that every
site contributes a term).
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import BadParams, DuplicatePoint

DUPLICATE_EPS = 1e-12

_FAMILY_KINDS = ("uniform-line", "cubic-lattice-ball", "clustering")


def _freeze(a):
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class ScattererSet:
    """Positions x_m in R^3 and nonzero real weights w_m.

    Points must be pairwise distinct (separation above ``eps``); the
    arrays are stored read-only so instances can be shared freely.
    """

    points: np.ndarray
    weights: np.ndarray
    eps: float = DUPLICATE_EPS

    def __post_init__(self):
        pts = np.atleast_2d(np.array(self.points, dtype=float))
        w = np.atleast_1d(np.array(self.weights, dtype=float))
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise BadParams(f"points must be (N, 3), got {pts.shape}")
        if w.shape != (pts.shape[0],):
            raise BadParams("points and weights must have equal length")
        if pts.shape[0] < 1:
            raise BadParams("at least one scatterer is required")
        if np.any(w == 0.0) or not np.all(np.isfinite(w)):
            raise BadParams("weights must be nonzero finite reals")
        if not np.all(np.isfinite(pts)):
            raise BadParams("points must be finite")
        d = pairwise_distances(pts)
        n = pts.shape[0]
        if n > 1:
            dmin = np.min(d[np.triu_indices(n, 1)])
            if dmin <= self.eps:
                raise DuplicatePoint(
                    f"two points are within {self.eps:g} (min distance {dmin:g})"
                )
        object.__setattr__(self, "points", _freeze(pts))
        object.__setattr__(self, "weights", _freeze(w))

    @property
    def n(self):
        return self.points.shape[0]

    @property
    def abs_weights(self):
        return np.abs(self.weights)

    @property
    def signs(self):
        return np.sign(self.weights)

    def prefix(self, n):
        """First ``n`` scatterers (truncation of a generated family)."""
        if n is None or n == self.n:
            return self
        if not 1 <= n <= self.n:
            raise BadParams(f"prefix length {n} outside 1..{self.n}")
        return ScattererSet(self.points[:n], self.weights[:n], eps=self.eps)

    def distances(self):
        return pairwise_distances(self.points)

    def diameter(self):
        if self.n == 1:
            return 0.0
        d = self.distances()
        return float(np.max(d))

    def to_dict(self):
        return {"points": self.points.tolist(), "weights": self.weights.tolist()}

    @classmethod
    def from_dict(cls, data):
        return from_config(data)


def pairwise_distances(points):
    pts = np.asarray(points, dtype=float)
    return np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1)


@dataclass(frozen=True)
class SeparationProfile:
    """Prefix minima of pairwise distances.

    ``eta[i]`` is the minimum pairwise distance among the first ``i + 2``
    points, so the list has length N - 1 and is nonincreasing.
    """

    eta: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "eta", _freeze(np.atleast_1d(self.eta)))


def separation_profile(s):
    """Prefix separation minima eta of a scatterer set.

    Returns
    -------
    SeparationProfile
        ``eta`` of length N - 1; empty for a single scatterer.
    """
    d = s.distances()
    n = s.n
    eta = np.empty(max(n - 1, 0))
    running = np.inf
    for m in range(1, n):
        # only distances from the newly added point can lower the minimum
        running = min(running, float(np.min(d[m, :m])))
        if running <= s.eps:
            raise DuplicatePoint(f"points {m} and an earlier one coincide")
        eta[m - 1] = running
    return SeparationProfile(eta=eta)


def eta_by_index(s, profile=None):
    """Per-site separation eta_m, m = 1..N, with eta_1 aliased to eta_2.

    eta_m is the minimum pairwise distance among the first max(m, 2)
    points; this is the quantity entering the K1 sum and the norm
    bounds.  Returns an empty array for N = 1 (no pairs).
    """
    if s.n == 1:
        return np.empty(0)
    if profile is None:
        profile = separation_profile(s)
    eta = np.empty(s.n)
    eta[0] = profile.eta[0]
    eta[1:] = profile.eta
    return eta


@dataclass(frozen=True)
class AdmissibilityReport:
    """Summability diagnostics for a (possibly truncated) family.

    ``tail[j]`` is tau_j = sum_{m > j+1} of the K1 terms, j = 0..N-1,
    so the last entry is zero.  ``p_tail`` is the tail norm bound
    p_{N0,L}(b).  The convergence flags are partial-sum diagnostics
    (geometric-mean ratio of successive terms below 1), meaningful for
    generated families; short lists (N < 8) pass by convention and the
    verdict carries no information for unordered finite sets.
    """

    k0: float
    k1: float
    tail: np.ndarray
    p_tail: float
    n0: int
    b: float
    k0_converges: bool
    k1_converges: bool
    tail_contractive: bool
    terms_k0: np.ndarray = field(repr=False, default=None)
    terms_k1: np.ndarray = field(repr=False, default=None)

    @property
    def passed(self):
        return self.k0_converges and self.k1_converges

    def to_dict(self):
        return {
            "K0": self.k0,
            "K1": self.k1,
            "tail": np.asarray(self.tail).tolist(),
            "p_tail": self.p_tail,
            "n0": self.n0,
            "b": self.b,
            "k0_converges": self.k0_converges,
            "k1_converges": self.k1_converges,
            "tail_contractive": self.tail_contractive,
            "verdict": "pass" if self.passed else "fail",
        }


def _ratio_converges(terms):
    # geometric-mean ratio of successive terms over the trailing half;
    # < 1 is taken as evidence the partial sums converge.  Too-short
    # sequences pass by convention (nothing to diagnose).
    terms = np.asarray(terms, dtype=float)
    n = len(terms)
    if n < 8:
        return True
    start = max(1, n // 2)
    ratio = (terms[-1] / terms[start]) ** (1.0 / (n - 1 - start))
    return bool(ratio < 1.0)


def tail_bound(s, n0, b, eta=None):
    """Tail norm bound p_{N0,L}(b) = max_{m>N0} (sqrt(b) + K0/eta_m^2 + K1) / (4 pi |w_m|).

    K0 and K1 are taken over the retained scatterers.  Returns 0.0 for
    an empty tail (N0 = N).
    """
    if b <= 0:
        raise BadParams("b must be positive")
    if not 0 <= n0 <= s.n:
        raise BadParams(f"n0 = {n0} outside 0..{s.n}")
    if n0 == s.n:
        return 0.0
    if eta is None:
        eta = eta_by_index(s)
    absw = s.abs_weights
    if s.n == 1:
        return float(np.sqrt(b) / (4.0 * np.pi * absw[0]))
    k0 = float(np.sum(1.0 / absw))
    k1 = float(np.sum(1.0 / (eta**2 * absw)))
    m = np.arange(n0, s.n)
    vals = (np.sqrt(b) + k0 / eta[m] ** 2 + k1) / (4.0 * np.pi * absw[m])
    return float(np.max(vals))


def check_admissibility(s, b, n0=None):
    """Evaluate the summability conditions on a scatterer set.

    Parameters
    ----------
    s : ScattererSet
    b : float
        Upper end of the spectral window (used in the tail bound).
    n0 : int, optional
        Head size for the tail bound p_{N0,L}(b); defaults to N // 2
        (at least 1).

    Returns
    -------
    AdmissibilityReport
        Carries flags, never raises on a failing condition.
    """
    if b <= 0:
        raise BadParams("b must be positive")
    if n0 is None:
        n0 = max(1, s.n // 2)
    absw = s.abs_weights
    terms_k0 = 1.0 / absw
    k0 = float(np.sum(terms_k0))
    if s.n == 1:
        terms_k1 = np.empty(0)
        k1 = 0.0
        tail = np.zeros(1)
    else:
        eta = eta_by_index(s)
        terms_k1 = 1.0 / (eta**2 * absw)
        k1 = float(np.sum(terms_k1))
        # tail[j] = sum of K1 terms with index m > j+1 (1-based)
        tail = np.concatenate([np.cumsum(terms_k1[::-1])[::-1][1:], [0.0]])
    p = tail_bound(s, n0, b)
    return AdmissibilityReport(
        k0=k0,
        k1=k1,
        tail=_freeze(tail),
        p_tail=p,
        n0=n0,
        b=b,
        k0_converges=_ratio_converges(terms_k0),
        k1_converges=_ratio_converges(terms_k1) if s.n > 1 else True,
        tail_contractive=bool(p < 1.0),
        terms_k0=_freeze(terms_k0),
        terms_k1=_freeze(terms_k1),
    )


def generate_family(kind, params, n, strict=False):
    """Deterministic point/weight families truncated to ``n`` sites.

    Kinds
    -----
    uniform-line
        Points m*d on the x axis, constant weight.  Params: ``spacing``
        (default 1), ``weight`` (default 1).
    cubic-lattice-ball
        Cubic lattice of the given spacing, sites sorted by distance
        from the origin (ties broken lexicographically), constant
        weight.  Params: ``spacing`` (default 1), ``weight`` (default 1).
    clustering
        Points on the x axis accumulating at the origin with gap
        m^(-p), so eta_m ~ m^(-p), and weights w0 * m^q.  Satisfies the
        summability conditions iff q > 2p + 1 and q > 1; with
        ``strict=True`` parameters violating that raise BadParams.
        Params: ``p``, ``q``, ``w0`` (default 1).
    """
    if n < 1:
        raise BadParams("n must be >= 1")
    if kind == "uniform-line":
        d = float(params.get("spacing", 1.0))
        w = float(params.get("weight", 1.0))
        if d <= 0:
            raise BadParams("spacing must be positive")
        pts = np.zeros((n, 3))
        pts[:, 0] = d * np.arange(n)
        return ScattererSet(pts, np.full(n, w))

    if kind == "cubic-lattice-ball":
        d = float(params.get("spacing", 1.0))
        w = float(params.get("weight", 1.0))
        if d <= 0:
            raise BadParams("spacing must be positive")
        k = 1
        while (2 * k + 1) ** 3 < n:
            k += 1
        g = np.arange(-k, k + 1)
        xx, yy, zz = np.meshgrid(g, g, g, indexing="ij")
        sites = np.stack([xx.ravel(), yy.ravel(), zz.ravel()], axis=1)
        order = np.lexsort((sites[:, 2], sites[:, 1], sites[:, 0],
                            np.sum(sites**2, axis=1)))
        pts = d * sites[order[:n]].astype(float)
        return ScattererSet(pts, np.full(n, w))

    if kind == "clustering":
        try:
            p = float(params["p"])
            q = float(params["q"])
        except KeyError as exc:
            raise BadParams(f"clustering family needs parameter {exc}") from exc
        w0 = float(params.get("w0", 1.0))
        if w0 == 0:
            raise BadParams("w0 must be nonzero")
        if strict and not (q > 2 * p + 1 and q > 1):
            raise BadParams(
                f"clustering exponents p={p}, q={q} violate q > 2p+1 and q > 1"
            )
        m = np.arange(1, n + 1, dtype=float)
        gaps = m**(-p)
        # x_m = sum of gaps from m to n, so consecutive gaps are m^(-p)
        x = np.cumsum(gaps[::-1])[::-1]
        pts = np.zeros((n, 3))
        pts[:, 0] = x
        return ScattererSet(pts, w0 * m**q)

    raise BadParams(f"unknown family kind {kind!r}; expected one of {_FAMILY_KINDS}")


def from_config(data):
    """Build a ScattererSet from the JSON scatterer schema.

    Accepts ``{"points": [[x,y,z],...], "weights": [w,...]}`` or
    ``{"family": {"kind": ..., "params": {...}, "N": n}}``.
    """
    if "family" in data:
        fam = data["family"]
        try:
            kind = fam["kind"]
            n = int(fam["N"])
        except KeyError as exc:
            raise BadParams(f"family section needs key {exc}") from exc
        return generate_family(kind, fam.get("params", {}), n,
                               strict=bool(fam.get("strict", False)))
    try:
        return ScattererSet(data["points"], data["weights"])
    except KeyError as exc:
        raise BadParams(f"scatterer config needs key {exc}") from exc


def load_scatterers(path):
    """Read a scatterer JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        return from_config(json.load(fh))
