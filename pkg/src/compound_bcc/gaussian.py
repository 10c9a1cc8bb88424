"""Null-space beamforming with Gaussian superposition for the constant model.

The transmit signal is x = V0 u0 + V1 u1 + V2 u2: a common stream plus one
confidential stream per user. V1 lies in the common null space of every
state of user 2 (and vice versa), so each confidential stream is received
by its intended user only, whichever states are realized; V0 spans the
orthogonal complement of [V1 V2]. Worst-case rates minimize over states.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ConstructionError, FeasibilityError, InvalidInputError
from .linalg import DEFAULT_TOL, logdet2_hpd, null_space_basis, numerical_rank
from .regions import RateRegion, region_from_inequalities, time_share
from .sdof import (
    DEFAULT_SNR_GRID_DB,
    check_snr_grid,
    estimate_sdof_series,
    snr_db_to_power,
)

__all__ = [
    "BeamformerSet",
    "PowerAllocation",
    "RateTriple",
    "confidential_stream_bounds",
    "build_confidential_beamformers",
    "build_common_beamformer",
    "build_beamformers",
    "equal_power",
    "rate_common",
    "rate_confidential",
    "rate_leakage",
    "max_leakage",
    "worst_case_rates",
    "equal_power_slopes",
    "common_slope_target",
    "gaussian_sdof_region",
    "gaussian_confidential_region",
]

CERT_RTOL = 1e-9


@dataclass(frozen=True)
class BeamformerSet:
    """Beamformers for the superposition scheme.

    v1 (M x r1) and v2 (M x r2) carry the confidential streams; v0 (M x K)
    carries the common stream and is None until build_common_beamformer has
    run. All blocks have orthonormal columns and v0 is orthogonal to
    [v1 v2].
    """

    v1: np.ndarray
    v2: np.ndarray
    v0: np.ndarray | None = None

    @property
    def r1(self):
        return self.v1.shape[1]

    @property
    def r2(self):
        return self.v2.shape[1]

    @property
    def K(self):
        return self.v0.shape[1] if self.v0 is not None else 0

    def confidential(self, k):
        if k == 1:
            return self.v1
        if k == 2:
            return self.v2
        raise InvalidInputError(f"user index must be 1 or 2, got {k}")


def confidential_stream_bounds(M, N1, N2, J1, J2):
    """Largest feasible confidential stream counts (r1_max, r2_max).

    Stream k must fit in both the intended receiver (N_k) and the common
    null space of the other user's stacked states (M - J_k' * N_k'); a
    non-positive null-space dimension forces zero streams.
    """
    b1 = max(0, min(N1, M - J2 * N2))
    b2 = max(0, min(N2, M - J1 * N1))
    return b1, b2


def _check_orthonormal(v, what):
    if v.shape[1] == 0:
        return
    gram = v.conj().T @ v
    resid = np.linalg.norm(gram - np.eye(v.shape[1]))
    if resid > CERT_RTOL:
        raise ConstructionError(f"{what} is not orthonormal (residual {resid:.3e})")


def build_confidential_beamformers(ch, r1, r2, tol=DEFAULT_TOL):
    """Confidential beamformers from the cross-user null spaces.

    v_k is the first r_k columns of the deterministic null-space basis of
    the other user's stacked states. Infeasible stream counts raise
    FeasibilityError quoting the violated bound; the returned beamformers
    are certified (exact nulling at the unintended user, full rank at the
    intended one) and a certificate failure raises ConstructionError.
    """
    b1, b2 = confidential_stream_bounds(ch.M, ch.N1, ch.N2, ch.J1, ch.J2)
    for name, r, b, nk, js in (
        ("r1", r1, b1, ch.N1, ch.J2 * ch.N2),
        ("r2", r2, b2, ch.N2, ch.J1 * ch.N1),
    ):
        if r < 0:
            raise FeasibilityError(f"{name} must be nonnegative, got {r}")
        if r > b:
            raise FeasibilityError(
                f"{name} = {r} violates {name} <= min(N_k, M - sum of the other "
                f"user's stacked rows) = min({nk}, {ch.M} - {js}) = {b}"
            )
    null2 = null_space_basis(np.vstack(ch.h2), tol)
    null1 = null_space_basis(np.vstack(ch.h1), tol)
    v1 = null2[:, :r1]
    v2 = null1[:, :r2]
    bf = BeamformerSet(v1=v1, v2=v2)
    certify_confidential(ch, bf, tol)
    return bf


def certify_confidential(ch, bf, tol=DEFAULT_TOL):
    """Numerical certificates for the confidential beamformers."""
    _check_orthonormal(bf.v1, "v1")
    _check_orthonormal(bf.v2, "v2")
    for k, v, r in ((1, bf.v1, bf.r1), (2, bf.v2, bf.r2)):
        if r == 0:
            continue
        other = 3 - k
        for j, h in enumerate(ch.states(other), start=1):
            resid = np.linalg.norm(h @ v)
            limit = CERT_RTOL * np.linalg.norm(h)
            if resid > limit:
                raise ConstructionError(
                    f"v{k} leaks into H_{other}_{j}: residual {resid:.3e} "
                    f"exceeds {limit:.3e}"
                )
        for j, h in enumerate(ch.states(k), start=1):
            got = numerical_rank(h @ v, tol)
            if got != r:
                raise ConstructionError(
                    f"H_{k}_{j} @ v{k} has rank {got}, expected {r}"
                )


def build_common_beamformer(bf, M, tol=DEFAULT_TOL):
    """Complete a beamformer set with the common part.

    v0 is the deterministic orthonormal basis of the orthogonal complement
    of [v1 v2]; K = M minus the rank of [v1 v2]. With no confidential
    streams v0 is the M x M identity basis.
    """
    stacked = np.hstack([bf.v1, bf.v2])
    if stacked.shape[0] != M:
        raise InvalidInputError(
            f"beamformers have {stacked.shape[0]} rows, expected M = {M}"
        )
    v0 = null_space_basis(stacked.conj().T, tol)
    out = BeamformerSet(v1=bf.v1, v2=bf.v2, v0=v0)
    _check_orthonormal(v0, "v0")
    if v0.shape[1]:
        resid = np.linalg.norm(v0.conj().T @ stacked)
        if resid > CERT_RTOL:
            raise ConstructionError(
                f"v0 is not orthogonal to [v1 v2] (residual {resid:.3e})"
            )
    expected_k = M - numerical_rank(stacked, tol)
    if out.K != expected_k:
        raise ConstructionError(f"common subspace has {out.K} columns, expected {expected_k}")
    return out


def build_beamformers(ch, r1, r2, tol=DEFAULT_TOL):
    """Confidential and common beamformers in one call."""
    return build_common_beamformer(build_confidential_beamformers(ch, r1, r2, tol), ch.M, tol)


@dataclass(frozen=True)
class PowerAllocation:
    """Per-stream powers for (common, user 1, user 2) streams.

    The total over all streams must not exceed ``total`` (up to rounding).
    """

    total: float
    p0: np.ndarray
    p1: np.ndarray
    p2: np.ndarray

    def __post_init__(self):
        for name in ("p0", "p1", "p2"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.ndim != 1 or (arr.size and arr.min() < 0):
                raise InvalidInputError(f"{name} must be a 1-D nonnegative array")
            object.__setattr__(self, name, arr)
        if self.total < 0:
            raise InvalidInputError("total power must be nonnegative")
        spent = self.p0.sum() + self.p1.sum() + self.p2.sum()
        if spent > self.total * (1 + 1e-12) + 1e-300:
            raise InvalidInputError(
                f"allocated power {spent!r} exceeds budget {self.total!r}"
            )

    def confidential(self, k):
        if k == 1:
            return self.p1
        if k == 2:
            return self.p2
        raise InvalidInputError(f"user index must be 1 or 2, got {k}")


def equal_power(bf, total):
    """Split the budget uniformly over all K + r1 + r2 streams."""
    n = bf.K + bf.r1 + bf.r2
    share = total / n if n else 0.0
    return PowerAllocation(
        total=total,
        p0=np.full(bf.K, share),
        p1=np.full(bf.r1, share),
        p2=np.full(bf.r2, share),
    )


@dataclass(frozen=True)
class RateTriple:
    """Worst-case rates in bits: common, user 1 confidential, user 2 confidential."""

    r0: float
    r1: float
    r2: float

    def as_tuple(self):
        return (self.r0, self.r1, self.r2)


def _received_gram(h, v, p):
    """(h v) diag(p) (h v)^H, explicitly Hermitian.

    The channel is applied before the powers so that a beamformer lying in
    the null space of h keeps its ~1e-16 projection residual; scaling a
    covariance by a large power first would bury that cancellation under
    rounding proportional to the power.
    """
    w = h @ v
    g = (w * p) @ w.conj().T
    return (g + g.conj().T) / 2.0


def _logdet_i_plus(gram):
    return logdet2_hpd(np.eye(gram.shape[0]) + gram)


def rate_common(ch, bf, pa, k, j):
    """Common-stream rate at user k, state j, decoding u_k first as noise.

    Zero when there is no common subspace or no common power.
    """
    if bf.v0 is None:
        raise InvalidInputError("beamformer set has no common part; run build_common_beamformer")
    h = ch.state(k, j)
    g0 = _received_gram(h, bf.v0, pa.p0)
    gk = _received_gram(h, bf.confidential(k), pa.confidential(k))
    num = _logdet_i_plus(g0 + gk)
    den = _logdet_i_plus(gk)
    return max(0.0, num - den)


def rate_confidential(ch, bf, pa, k, j):
    """Confidential-stream rate at the intended user k in state j."""
    h = ch.state(k, j)
    return _logdet_i_plus(_received_gram(h, bf.confidential(k), pa.confidential(k)))


def rate_leakage(ch, bf, pa, k, l):
    """Rate of user k's stream observed at the other user's state l.

    Vanishes (below 1e-8 at any sane power) for certified beamformers.
    """
    h = ch.state(3 - k, l)
    return _logdet_i_plus(_received_gram(h, bf.confidential(k), pa.confidential(k)))


def max_leakage(ch, bf, pa):
    """Largest leakage over both streams and all unintended states."""
    worst = 0.0
    for k in (1, 2):
        other = 3 - k
        for l in range(1, len(ch.states(other)) + 1):
            worst = max(worst, rate_leakage(ch, bf, pa, k, l))
    return worst


def worst_case_rates(ch, bf, pa):
    """Rates guaranteed over every state combination.

    The common rate is the minimum of rate_common over both users and all
    their states; each confidential rate is the worst intended-state rate
    minus the worst-case leakage, clamped at zero.
    """
    if bf.K == 0 or pa.p0.sum() == 0.0:
        r0 = 0.0
    else:
        r0 = min(
            rate_common(ch, bf, pa, k, j)
            for k in (1, 2)
            for j in range(1, len(ch.states(k)) + 1)
        )
    conf = {}
    for k in (1, 2):
        if bf.confidential(k).shape[1] == 0:
            conf[k] = 0.0
            continue
        best = min(
            rate_confidential(ch, bf, pa, k, j)
            for j in range(1, len(ch.states(k)) + 1)
        )
        other = 3 - k
        leak = max(
            rate_leakage(ch, bf, pa, k, l)
            for l in range(1, len(ch.states(other)) + 1)
        )
        conf[k] = max(0.0, best - leak)
    return RateTriple(r0=r0, r1=conf[1], r2=conf[2])


def equal_power_slopes(ch, bf, snr_db_grid=DEFAULT_SNR_GRID_DB):
    """Slope estimates of the three worst-case rates under equal power.

    Returns (triples, estimates): the RateTriple at each grid point and an
    SdofEstimate per message component.
    """
    grid = check_snr_grid(snr_db_grid)
    triples = [
        worst_case_rates(ch, bf, equal_power(bf, float(p)))
        for p in snr_db_to_power(grid)
    ]
    ests = tuple(
        estimate_sdof_series(grid, [t.as_tuple()[i] for t in triples])
        for i in range(3)
    )
    return triples, ests


def common_slope_target(N1, N2, r1, r2, K):
    """Expected high-SNR slope of the worst-case common rate.

    At user k the common stream rides on K + r_k generic beam directions of
    which r_k are spent on the confidential stream, so its rate grows like
    min(N_k, K + r_k) - r_k; the worst case takes the smaller user.
    """
    return min(min(N1, K + r1) - r1, min(N2, K + r2) - r2)


def gaussian_sdof_region(M, N1, N2, J1, J2):
    """Achievable (d0, d1, d2) degrees-of-freedom region, exact.

    The shape depends on whether each user's stacked states still leave a
    null space (J_k * N_k < M). When neither does, only the common message
    survives, with d0 up to min(M, N1, N2).
    """
    for name, v in (("M", M), ("N1", N1), ("N2", N2), ("J1", J1), ("J2", J2)):
        if not isinstance(v, int) or v < 1:
            raise InvalidInputError(f"{name} must be a positive integer, got {v!r}")
    zero = Fraction(0)
    one = Fraction(1)
    nonneg = [
        ((-one, zero, zero), zero),
        ((zero, -one, zero), zero),
        ((zero, zero, -one), zero),
    ]
    b1, b2 = confidential_stream_bounds(M, N1, N2, J1, J2)
    room1 = J1 * N1 < M
    room2 = J2 * N2 < M
    if room1 and room2:
        ineqs = [
            ((zero, one, zero), Fraction(b1)),
            ((zero, zero, one), Fraction(b2)),
            ((one, one, zero), Fraction(N1)),
            ((one, zero, one), Fraction(N2)),
        ]
    elif room1:
        # user 2's states exhaust the space: no stream for user 1
        ineqs = [
            ((zero, one, zero), zero),
            ((zero, zero, one), Fraction(b2)),
            ((one, zero, zero), Fraction(N1)),
            ((one, zero, one), Fraction(N2)),
        ]
    elif room2:
        ineqs = [
            ((zero, zero, one), zero),
            ((zero, one, zero), Fraction(b1)),
            ((one, zero, zero), Fraction(N2)),
            ((one, one, zero), Fraction(N1)),
        ]
    else:
        ineqs = [
            ((zero, one, zero), zero),
            ((zero, zero, one), zero),
            ((one, zero, zero), Fraction(min(M, N1, N2))),
        ]
    return region_from_inequalities(nonneg + ineqs, 3)


def gaussian_confidential_region(M, N1, N2, J1, J2):
    """The (d1, d2) slice of the region with no common message, exact 2-D."""
    b1, b2 = confidential_stream_bounds(M, N1, N2, J1, J2)
    return time_share([(Fraction(b1), Fraction(b2))])
