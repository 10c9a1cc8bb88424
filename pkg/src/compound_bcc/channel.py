"""Compound channel sets: generation, genericity verification, persistence.

A compound channel set holds, for each of two users, a finite collection of
candidate channel matrices (states). User k has J_k states, each an N_k x M
complex matrix; the transmitter knows the collection but not which state is
realized. Noise variance is 1 by convention throughout the package, so
transmit power doubles as SNR.
"""

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ChannelFormatError, GenerationError, InvalidInputError
from .linalg import DEFAULT_TOL, as_matrix, numerical_rank

__all__ = [
    "CompoundChannelSet",
    "ChannelGenSpec",
    "RankConditionReport",
    "generate_compound",
    "verify_rank_condition",
    "save_channel",
    "load_channel",
    "swap_users",
]

# Above this many stacked rows, rank verification samples subsets instead of
# enumerating them all.
EXHAUSTIVE_ROW_LIMIT = 24
SAMPLED_SUBSET_COUNT = 10_000
# Fixed seed for the sampled verification path, so reports are reproducible.
SAMPLE_SEED = 0


@dataclass(frozen=True)
class CompoundChannelSet:
    """Finite collection of channel states for a two-user broadcast setting.

    h1 and h2 hold the states of user 1 and user 2; h1[j] is the N1 x M
    matrix of user 1's (j+1)-th state. Construction validates shapes and
    finiteness only; the generic rank condition is checked by
    verify_rank_condition, not assumed.
    """

    M: int
    N1: int
    N2: int
    J1: int
    J2: int
    h1: tuple
    h2: tuple

    def __post_init__(self):
        for name in ("M", "N1", "N2", "J1", "J2"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise InvalidInputError(f"{name} must be a positive integer, got {v!r}")
        if len(self.h1) != self.J1 or len(self.h2) != self.J2:
            raise InvalidInputError(
                f"expected {self.J1}+{self.J2} states, got {len(self.h1)}+{len(self.h2)}"
            )
        h1 = tuple(as_matrix(m, f"H_1_{j + 1}") for j, m in enumerate(self.h1))
        h2 = tuple(as_matrix(m, f"H_2_{j + 1}") for j, m in enumerate(self.h2))
        for k, states, n in ((1, h1, self.N1), (2, h2, self.N2)):
            for j, m in enumerate(states):
                if m.shape != (n, self.M):
                    raise InvalidInputError(
                        f"H_{k}_{j + 1} has shape {m.shape}, expected ({n}, {self.M})"
                    )
        object.__setattr__(self, "h1", h1)
        object.__setattr__(self, "h2", h2)

    def state(self, k, j):
        """State matrix H_k^j (k in {1,2}, j 1-based)."""
        if k == 1:
            return self.h1[j - 1]
        if k == 2:
            return self.h2[j - 1]
        raise InvalidInputError(f"user index must be 1 or 2, got {k}")

    def states(self, k):
        """All states of user k, in order."""
        if k == 1:
            return self.h1
        if k == 2:
            return self.h2
        raise InvalidInputError(f"user index must be 1 or 2, got {k}")

    def stacked_rows(self):
        """All rows of all states stacked: (J1*N1 + J2*N2) x M."""
        return np.vstack([*self.h1, *self.h2])

    def row_label(self, i):
        """Human-readable label of stacked row i: matrix name plus local row."""
        if i < self.J1 * self.N1:
            j, r = divmod(i, self.N1)
            return f"H_1_{j + 1}[{r}]"
        i -= self.J1 * self.N1
        j, r = divmod(i, self.N2)
        return f"H_2_{j + 1}[{r}]"


@dataclass(frozen=True)
class ChannelGenSpec:
    """Parameters for seeded channel generation."""

    M: int
    N1: int
    N2: int
    J1: int
    J2: int
    seed: int
    max_resamples: int = 8


@dataclass(frozen=True)
class RankConditionReport:
    """Outcome of the generic rank check.

    failures lists the offending row subsets (tuples of stacked-row indices)
    together with their labels; exhaustive says whether every M-subset was
    checked or a fixed-seed sample of SAMPLED_SUBSET_COUNT subsets was used.
    """

    passed: bool
    checked: int
    exhaustive: bool
    failures: tuple = field(default_factory=tuple)
    failure_labels: tuple = field(default_factory=tuple)


def attempt_seed(seed, attempt):
    """Sub-seed for resampling attempt ``attempt``; injective in (seed, attempt)."""
    return np.random.SeedSequence(seed, spawn_key=(attempt,))


def generate_compound(spec, tol=DEFAULT_TOL):
    """Draw a compound channel set with i.i.d. CN(0,1) entries.

    Entries are circularly symmetric complex Gaussian with unit variance.
    The generic rank condition (every selection of M stacked rows has rank
    M) is verified on each draw; failing draws are resampled with a fresh
    sub-seed derived from (seed, attempt). After max_resamples failed
    attempts a GenerationError is raised. Identical specs produce
    bit-identical channel sets.
    """
    if spec.max_resamples < 1:
        raise InvalidInputError("max_resamples must be at least 1")
    for attempt in range(spec.max_resamples):
        rng = np.random.default_rng(attempt_seed(spec.seed, attempt))

        def draw(n):
            re = rng.standard_normal((n, spec.M))
            im = rng.standard_normal((n, spec.M))
            return (re + 1j * im) / np.sqrt(2.0)

        h1 = tuple(draw(spec.N1) for _ in range(spec.J1))
        h2 = tuple(draw(spec.N2) for _ in range(spec.J2))
        ch = CompoundChannelSet(spec.M, spec.N1, spec.N2, spec.J1, spec.J2, h1, h2)
        report = verify_rank_condition(ch, tol)
        if report.passed:
            return ch
    raise GenerationError(
        f"rank condition still failing after {spec.max_resamples} attempts "
        f"(seed {spec.seed}); the requested dimensions are degenerate for this tolerance"
    )


def verify_rank_condition(ch, tol=DEFAULT_TOL):
    """Check that every selection of M stacked rows has numerical rank M.

    With at most EXHAUSTIVE_ROW_LIMIT stacked rows all C(rows, M) subsets
    are enumerated; otherwise a deterministic sample of SAMPLED_SUBSET_COUNT
    subsets is drawn with a fixed-seed generator (seed SAMPLE_SEED), so the
    report is reproducible. Fewer than M stacked rows means there is
    nothing to check and the condition holds vacuously.
    """
    rows = ch.stacked_rows()
    total = rows.shape[0]
    if total < ch.M:
        return RankConditionReport(passed=True, checked=0, exhaustive=True)
    if total <= EXHAUSTIVE_ROW_LIMIT:
        subsets = itertools.combinations(range(total), ch.M)
        exhaustive = True
    else:
        rng = np.random.default_rng(SAMPLE_SEED)
        subsets = (
            tuple(sorted(rng.choice(total, size=ch.M, replace=False)))
            for _ in range(SAMPLED_SUBSET_COUNT)
        )
        exhaustive = False
    failures = []
    checked = 0
    for subset in subsets:
        checked += 1
        sub = rows[list(subset)]
        if numerical_rank(sub, tol) != ch.M:
            failures.append(tuple(subset))
    labels = tuple(tuple(ch.row_label(i) for i in s) for s in failures)
    return RankConditionReport(
        passed=not failures,
        checked=checked,
        exhaustive=exhaustive,
        failures=tuple(failures),
        failure_labels=labels,
    )


def _matrix_to_pairs(m):
    flat = np.asarray(m, dtype=complex).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in flat]


def channel_to_dict(ch):
    """JSON-ready dict: dimensions plus 'H_k_j' -> row-major [re, im] pairs."""
    matrices = {}
    for k in (1, 2):
        for j, m in enumerate(ch.states(k), start=1):
            matrices[f"H_{k}_{j}"] = _matrix_to_pairs(m)
    return {
        "M": ch.M,
        "N1": ch.N1,
        "N2": ch.N2,
        "J1": ch.J1,
        "J2": ch.J2,
        "matrices": matrices,
    }


def save_channel(ch, path):
    """Write a channel set as JSON. Round-trips entries bit for bit."""
    with open(path, "w") as fh:
        json.dump(channel_to_dict(ch), fh, indent=1)
        fh.write("\n")


def _pairs_to_matrix(pairs, n, m, name):
    if not isinstance(pairs, list) or len(pairs) != n * m:
        got = len(pairs) if isinstance(pairs, list) else type(pairs).__name__
        raise ChannelFormatError(f"{name}: expected {n * m} [re, im] pairs, got {got}")
    out = np.empty(n * m, dtype=complex)
    for i, pair in enumerate(pairs):
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(x, (int, float)) for x in pair)
        ):
            raise ChannelFormatError(f"{name}: entry {i} is not a [re, im] pair")
        out[i] = complex(pair[0], pair[1])
    return out.reshape(n, m)


def channel_from_dict(data):
    """Inverse of channel_to_dict, with field-level diagnostics."""
    if not isinstance(data, dict):
        raise ChannelFormatError("channel file must contain a JSON object")
    dims = {}
    for name in ("M", "N1", "N2", "J1", "J2"):
        if name not in data:
            raise ChannelFormatError(f"missing field {name!r}")
        v = data[name]
        if not isinstance(v, int) or v < 1:
            raise ChannelFormatError(f"field {name!r} must be a positive integer, got {v!r}")
        dims[name] = v
    matrices = data.get("matrices")
    if not isinstance(matrices, dict):
        raise ChannelFormatError("missing or malformed field 'matrices'")
    expected = [
        (k, j, dims[f"N{k}"])
        for k in (1, 2)
        for j in range(1, dims[f"J{k}"] + 1)
    ]
    states = {1: [], 2: []}
    for k, j, n in expected:
        key = f"H_{k}_{j}"
        if key not in matrices:
            raise ChannelFormatError(f"missing matrix {key!r}")
        states[k].append(_pairs_to_matrix(matrices[key], n, dims["M"], key))
    extra = set(matrices) - {f"H_{k}_{j}" for k, j, _ in expected}
    if extra:
        raise ChannelFormatError(f"unexpected matrix keys: {sorted(extra)}")
    return CompoundChannelSet(
        dims["M"], dims["N1"], dims["N2"], dims["J1"], dims["J2"],
        tuple(states[1]), tuple(states[2]),
    )


def load_channel(path):
    """Read a channel set written by save_channel."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as e:
        raise ChannelFormatError(
            f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}"
        ) from e
    return channel_from_dict(data)


def swap_users(ch):
    """The same channel set with the two users' roles exchanged."""
    return CompoundChannelSet(ch.M, ch.N2, ch.N1, ch.J2, ch.J1, ch.h2, ch.h1)
