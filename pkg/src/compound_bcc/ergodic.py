"""Per-block zero-forcing over a finite-state ergodic fading model.

Each fading block draws a common transmitter-side state (the channel
realization H[t], uniform over a small finite alphabet) and, independently,
one state index per user (A_k[t], uniform over its J_k candidates). The
transmitter points each user's beam into the null space of the first
min(J_other, M-1) candidate vectors of the other user, sends at the rate
decodable in every own-state, and gives up the part of the rate that the
worst-case other-state could observe. Secrecy rates are accounted per
block and averaged.
"""

from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelGenSpec, generate_compound
from .errors import (
    ConstructionError,
    DegenerateBlockError,
    InvalidInputError,
)
from .linalg import DEFAULT_TOL, null_space_basis
from .regions import RateRegion, time_share
from .sdof import check_snr_grid, estimate_sdof_series, snr_db_to_power

from fractions import Fraction

__all__ = [
    "FadingProcess",
    "BlockState",
    "ZfBlockGains",
    "BlockRateRecord",
    "PowerPolicy",
    "ErgodicRunStats",
    "sample_block",
    "zf_beamformers",
    "block_gains",
    "tx_rate",
    "leakage",
    "block_secrecy_rates",
    "averaged_secrecy_rates",
    "simulate_blocks",
    "ergodic_slope_estimates",
    "policy_slope_targets",
    "symmetric_point_margin",
    "ergodic_sdof_region",
]

DIRECT_GAIN_MIN = 1e-9
NULLED_GAIN_MAX = 1e-9


class FadingProcess:
    """Finite-alphabet fading model shared by transmitter and receivers.

    For each of ``common_state_count`` common states the process holds one
    length-M vector per user state (J1 + J2 vectors), drawn i.i.d. CN(0,1)
    and verified to satisfy the generic rank condition; degenerate draws
    are resampled exactly as for compound channel sets. Immutable after
    construction; per-state beamformers are cached lazily.
    """

    def __init__(
        self,
        M,
        J1,
        J2,
        common_state_count=4,
        block_count=10_000,
        seed=0,
        tol=DEFAULT_TOL,
        states=None,
        verify=True,
    ):
        for name, v in (
            ("M", M),
            ("J1", J1),
            ("J2", J2),
            ("common_state_count", common_state_count),
            ("block_count", block_count),
        ):
            if not isinstance(v, int) or v < 1:
                raise InvalidInputError(f"{name} must be a positive integer, got {v!r}")
        self.M = M
        self.J1 = J1
        self.J2 = J2
        self.common_state_count = common_state_count
        self.block_count = block_count
        self.seed = seed
        self.tol = tol
        if states is None:
            states = tuple(
                generate_compound(
                    ChannelGenSpec(M, 1, 1, J1, J2, seed=self._state_seed(s)), tol
                )
                for s in range(1, common_state_count + 1)
            )
        else:
            states = tuple(states)
            if len(states) != common_state_count:
                raise InvalidInputError(
                    f"got {len(states)} state channel sets, expected {common_state_count}"
                )
            for st in states:
                if (st.M, st.N1, st.N2, st.J1, st.J2) != (M, 1, 1, J1, J2):
                    raise InvalidInputError(
                        "state channel sets must have N1 = N2 = 1 and matching M, J1, J2"
                    )
            if verify:
                from .channel import verify_rank_condition

                for s, st in enumerate(states, start=1):
                    report = verify_rank_condition(st, tol)
                    if not report.passed:
                        raise InvalidInputError(
                            f"common state {s} violates the rank condition: "
                            f"{report.failure_labels[0]}"
                        )
        self.states = states
        self._block_key = np.random.SeedSequence(seed, spawn_key=(1,)).generate_state(
            2, np.uint64
        )
        self._zf_cache = {}

    def _state_seed(self, s):
        ss = np.random.SeedSequence(self.seed, spawn_key=(0, s))
        return int(ss.generate_state(1, np.uint64)[0])

    def state_channel(self, s):
        """Channel set of common state s (1-based)."""
        return self.states[s - 1]


@dataclass(frozen=True)
class BlockState:
    """Realized state of one fading block (all indices 1-based)."""

    t: int
    h_state: int
    a1: int
    a2: int
    h1: np.ndarray
    h2: np.ndarray


@dataclass(frozen=True)
class ZfBlockGains:
    """Scalar gains of both streams at both users for one common state.

    phi1[j-1, i-1] is the gain of stream i at user 1's state j (and phi2
    likewise at user 2). nulled1 = min(J1, M-1) is the number of user 1's
    leading states in which the other stream is forced to zero; states
    beyond it see it as interference (and, swapped, as leakage).
    """

    phi1: np.ndarray
    phi2: np.ndarray
    nulled1: int
    nulled2: int

    def phi(self, k):
        if k == 1:
            return self.phi1
        if k == 2:
            return self.phi2
        raise InvalidInputError(f"user index must be 1 or 2, got {k}")

    def nulled(self, k):
        if k == 1:
            return self.nulled1
        if k == 2:
            return self.nulled2
        raise InvalidInputError(f"user index must be 1 or 2, got {k}")


def sample_block(fp, t):
    """State of block t: a pure function of (process seed, t).

    Uses a counter-based generator keyed by the process seed with the block
    index in the counter's high word, so blocks can be sampled in any order
    or in parallel and always reproduce the same draw. Draw order within a
    block: common state, then A1, then A2; each marginal is uniform and the
    three are independent.
    """
    if not isinstance(t, int) or not (1 <= t <= fp.block_count):
        raise InvalidInputError(
            f"block index must be in 1..{fp.block_count}, got {t!r}"
        )
    bitgen = np.random.Philox(counter=int(t) << 192, key=fp._block_key)
    rng = np.random.Generator(bitgen)
    s = int(rng.integers(1, fp.common_state_count + 1))
    a1 = int(rng.integers(1, fp.J1 + 1))
    a2 = int(rng.integers(1, fp.J2 + 1))
    ch = fp.state_channel(s)
    return BlockState(
        t=t, h_state=s, a1=a1, a2=a2,
        h1=ch.state(1, a1)[0], h2=ch.state(2, a2)[0],
    )


def _state_zf(fp, s):
    """Beamformers and gains for common state s, cached on the process."""
    cached = fp._zf_cache.get(s)
    if cached is not None:
        return cached
    ch = fp.state_channel(s)
    tol = fp.tol
    n1 = min(fp.J1, fp.M - 1)
    n2 = min(fp.J2, fp.M - 1)

    def pick_beam(nulled_rows, own_states):
        basis = null_space_basis(nulled_rows, tol)
        if basis.shape[1] == 0:
            raise DegenerateBlockError(
                f"common state {s}: nulled rows span the whole space"
            )
        candidates = [basis[:, 0]]
        if basis.shape[1] >= 2:
            mixed = basis.sum(axis=1)
            candidates.append(mixed / np.linalg.norm(mixed))
        for v in candidates:
            gains = np.array([h[0] @ v for h in own_states])
            if np.all(np.abs(gains) > DIRECT_GAIN_MIN):
                return v
        raise DegenerateBlockError(
            f"common state {s}: a direct gain stays below {DIRECT_GAIN_MIN:g} "
            "after the deterministic null-space rotation"
        )

    v1 = pick_beam(
        np.vstack([ch.state(2, j) for j in range(1, n2 + 1)])
        if n2
        else np.zeros((0, fp.M), dtype=complex),
        ch.states(1),
    )
    v2 = pick_beam(
        np.vstack([ch.state(1, j) for j in range(1, n1 + 1)])
        if n1
        else np.zeros((0, fp.M), dtype=complex),
        ch.states(2),
    )
    vs = np.column_stack([v1, v2])
    phi1 = np.array([h[0] @ vs for h in ch.states(1)])
    phi2 = np.array([h[0] @ vs for h in ch.states(2)])
    for phi, nulled, k, i in ((phi1, n1, 1, 2), (phi2, n2, 2, 1)):
        bad = np.abs(phi[:nulled, i - 1])
        if bad.size and bad.max() > NULLED_GAIN_MAX:
            raise ConstructionError(
                f"common state {s}: stream {i} not nulled at user {k} "
                f"(gain {bad.max():.3e})"
            )
    gains = ZfBlockGains(phi1=phi1, phi2=phi2, nulled1=n1, nulled2=n2)
    fp._zf_cache[s] = (v1, v2, gains)
    return fp._zf_cache[s]


def zf_beamformers(fp, t):
    """Unit-norm beam vectors (v1, v2) for the common state of block t."""
    s = sample_block(fp, t).h_state
    v1, v2, _ = _state_zf(fp, s)
    return v1, v2


def block_gains(fp, t):
    """ZfBlockGains for the common state realized in block t."""
    s = sample_block(fp, t).h_state
    return _state_zf(fp, s)[2]


def tx_rate(gains, k, powers):
    """Rate decodable by user k in every own-state, averaged over them.

    powers = (p1, p2). States where the other stream is nulled are clean;
    the rest see it as noise.
    """
    pk = powers[k - 1]
    po = powers[2 - k]
    phi = gains.phi(k)
    own = np.abs(phi[:, k - 1]) ** 2
    cross = np.abs(phi[:, 2 - k]) ** 2
    denom = np.ones(phi.shape[0])
    nulled = gains.nulled(k)
    denom[nulled:] += po * cross[nulled:]
    return float(np.mean(np.log2(1.0 + pk * own / denom)))


def leakage(gains, k, powers):
    """Rate of stream k observable at the other user, averaged over its states.

    Only the other user's non-nulled states contribute; identically zero
    when they are all nulled (J_other <= M-1).
    """
    pk = powers[k - 1]
    other = 3 - k
    phi = gains.phi(other)
    nulled = gains.nulled(other)
    total = phi.shape[0]
    if nulled >= total:
        return 0.0
    cross = np.abs(phi[nulled:, k - 1]) ** 2
    return float(np.sum(np.log2(1.0 + pk * cross)) / total)


@dataclass(frozen=True)
class BlockRateRecord:
    """Rates of one block: transmission, leakage, and clamped secrecy, per user."""

    t: int
    tx: tuple
    leak: tuple
    secrecy: tuple


def block_secrecy_rates(gains, p1, p2, t=0):
    """Per-block secrecy rates [tx - leakage]+ for both users."""
    powers = (p1, p2)
    tx = tuple(tx_rate(gains, k, powers) for k in (1, 2))
    lk = tuple(leakage(gains, k, powers) for k in (1, 2))
    sec = tuple(max(0.0, a - b) for a, b in zip(tx, lk))
    return BlockRateRecord(t=t, tx=tx, leak=lk, secrecy=sec)


@dataclass(frozen=True)
class PowerPolicy:
    """Constant per-block power split; p1 + p2 equals the total budget.

    kind is one of 'full1', 'full2', 'equal', 'split'; split uses p1_frac.
    """

    kind: str
    total: float
    p1_frac: float | None = None

    _FRACS = {"full1": 1.0, "full2": 0.0, "equal": 0.5}

    def __post_init__(self):
        if self.kind not in ("full1", "full2", "equal", "split"):
            raise InvalidInputError(f"unknown power policy {self.kind!r}")
        if self.total < 0:
            raise InvalidInputError("total power must be nonnegative")
        if self.kind == "split":
            if self.p1_frac is None or not (0.0 <= self.p1_frac <= 1.0):
                raise InvalidInputError(
                    f"split policy needs p1_frac in [0, 1], got {self.p1_frac!r}"
                )

    @classmethod
    def make(cls, kind, total, p1_frac=None):
        return cls(kind=kind, total=float(total), p1_frac=p1_frac)

    def powers(self):
        frac = self._FRACS.get(self.kind, self.p1_frac)
        return (frac * self.total, (1.0 - frac) * self.total)


@dataclass(frozen=True)
class ErgodicRunStats:
    """Averaged secrecy rates plus the per-block and per-state detail.

    leak_violation_freq is the fraction of blocks where pre-clamp leakage
    exceeded the transmission rate for at least one user; it is reported,
    never asserted away. analytic_r1/r2 are the exact uniform averages over
    the finite common-state alphabet under the same powers.
    """

    m: int
    r1_mean: float
    r2_mean: float
    leak_violation_freq: float
    r1_blocks: np.ndarray
    r2_blocks: np.ndarray
    state_records: tuple
    analytic_r1: float
    analytic_r2: float


def state_records(fp, policy):
    """BlockRateRecord per common state under a fixed power split."""
    p1, p2 = policy.powers()
    out = []
    for s in range(1, fp.common_state_count + 1):
        _, _, gains = _state_zf(fp, s)
        out.append(block_secrecy_rates(gains, p1, p2, t=0))
    return tuple(out)


def simulate_blocks(fp, policy, m=None):
    """Sample m blocks in index order and average their secrecy rates.

    The per-block rate depends on the realized common state only (the
    accounting already averages over each user's state uncertainty), so
    per-state rates are computed once and looked up per block. Fixed
    summation order makes reruns bit-identical.
    """
    if m is None:
        m = fp.block_count
    if not (1 <= m <= fp.block_count):
        raise InvalidInputError(
            f"block horizon must be in 1..{fp.block_count}, got {m}"
        )
    recs = state_records(fp, policy)
    r1_by_state = np.array([r.secrecy[0] for r in recs])
    r2_by_state = np.array([r.secrecy[1] for r in recs])
    violated = np.array(
        [(r.leak[0] > r.tx[0]) or (r.leak[1] > r.tx[1]) for r in recs]
    )
    idx = np.empty(m, dtype=np.intp)
    for t in range(1, m + 1):
        idx[t - 1] = sample_block(fp, t).h_state - 1
    r1_blocks = r1_by_state[idx]
    r2_blocks = r2_by_state[idx]
    return ErgodicRunStats(
        m=m,
        r1_mean=float(np.mean(r1_blocks)),
        r2_mean=float(np.mean(r2_blocks)),
        leak_violation_freq=float(np.mean(violated[idx])),
        r1_blocks=r1_blocks,
        r2_blocks=r2_blocks,
        state_records=recs,
        analytic_r1=float(np.mean(r1_by_state)),
        analytic_r2=float(np.mean(r2_by_state)),
    )


def averaged_secrecy_rates(fp, policy, m=None):
    """Block-averaged secrecy rate pair (R1, R2) in bits."""
    stats = simulate_blocks(fp, policy, m)
    return stats.r1_mean, stats.r2_mean


def ergodic_slope_estimates(fp, policy_kind, snr_db_grid, m=None, p1_frac=None):
    """Simulated rates over the SNR grid and their slope fits.

    Returns (stats_list, (est1, est2)). The same block sequence is reused
    at every grid point, so the fit sees a smooth function of power.
    """
    grid = check_snr_grid(snr_db_grid)
    stats = [
        simulate_blocks(fp, PowerPolicy.make(policy_kind, float(p), p1_frac), m)
        for p in snr_db_to_power(grid)
    ]
    est1 = estimate_sdof_series(grid, [st.r1_mean for st in stats])
    est2 = estimate_sdof_series(grid, [st.r2_mean for st in stats])
    return stats, (est1, est2)


def symmetric_point_margin(M, J1, J2):
    """Margin of the symmetric equal-power point over the time-sharing line.

    Exact rational. Requires both state counts to be at least M (below
    that the equal-power point saturates the unit square instead). The
    returned flag says whether the symmetric point (r_s, r_s) with
    r_s = (M-1)/J1 + (M-1)/J2 - 1 lies strictly outside the segment
    between the two single-user corners, which happens iff the margin is
    positive.
    """
    _check_counts(M, J1, J2)
    if J1 < M or J2 < M:
        raise InvalidInputError(
            f"symmetric point margin needs J1, J2 >= M, got J1={J1}, J2={J2}, M={M}"
        )
    f = (
        Fraction(M - 1, J1)
        + Fraction(M - 1, J2)
        - 1
        - Fraction(M - 1, J1 + J2)
    )
    return f, f > 0


def _check_counts(M, J1, J2):
    for name, v in (("M", M), ("J1", J1), ("J2", J2)):
        if not isinstance(v, int) or v < 1:
            raise InvalidInputError(f"{name} must be a positive integer, got {v!r}")


def ergodic_sdof_region(M, J1, J2):
    """Achievable (d1, d2) region of the block-fading scheme, exact.

    Built by time sharing between the power policies' high-SNR operating
    points. With both state counts below M the scheme is interference- and
    leakage-free and fills the unit square; with one large state count the
    constrained user pays the leakage price (M-1)/J; with both large, the
    symmetric equal-power point joins the two corners iff its margin is
    positive.
    """
    _check_counts(M, J1, J2)
    one = Fraction(1)
    zero = Fraction(0)
    if J1 < M and J2 < M:
        points = [(one, one)]
    elif J1 < M <= J2:
        a = Fraction(M - 1, J2)
        points = [(zero, one), (a, a), (a, zero)]
    elif J2 < M <= J1:
        b = Fraction(M - 1, J1)
        points = [(one, zero), (b, b), (zero, b)]
    else:
        corner1 = Fraction(M - 1, J2)
        corner2 = Fraction(M - 1, J1)
        points = [(corner1, zero), (zero, corner2)]
        f, advantage = symmetric_point_margin(M, J1, J2)
        rs = Fraction(M - 1, J1) + Fraction(M - 1, J2) - 1
        if advantage:
            points.append((rs, rs))
    return time_share(points)


def policy_slope_targets(M, J1, J2, policy_kind):
    """Analytic high-SNR slope pair for a named policy; None for 'split'."""
    _check_counts(M, J1, J2)
    if policy_kind == "split":
        return None
    if policy_kind not in ("full1", "full2", "equal"):
        raise InvalidInputError(f"unknown power policy {policy_kind!r}")
    leak1 = Fraction(max(J2 - (M - 1), 0), J2)  # slope lost by user 1 to leakage
    leak2 = Fraction(max(J1 - (M - 1), 0), J1)
    interf1 = Fraction(max(J1 - (M - 1), 0), J1)  # user 1's interfered states
    interf2 = Fraction(max(J2 - (M - 1), 0), J2)
    if policy_kind == "full1":
        return (max(Fraction(0), 1 - leak1), Fraction(0))
    if policy_kind == "full2":
        return (Fraction(0), max(Fraction(0), 1 - leak2))
    t1 = max(Fraction(0), (1 - interf1) - leak1)
    t2 = max(Fraction(0), (1 - interf2) - leak2)
    return (t1, t2)
