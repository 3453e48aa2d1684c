"""Born-rule Monte Carlo of the optimal discriminator on pure inputs.

Trials are split into fixed-size streams. Stream ``i`` draws from a PCG64
generator seeded by ``SeedSequence(seed).spawn(n)[i]``, so the tallies depend
only on the seed and the trial count, never on the number of worker threads.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .discrimination import (
    Povm,
    optimal_average_probability,
    pure_state_success,
    total_povm,
)
from .states import TWO_PI, Priors, check_theta, total_input_kets

RNG_NAME = "numpy PCG64 via SeedSequence.spawn"
STREAM_TRIALS = 1 << 17
SUM_TOL = 1e-10
CLIP_TOL = 1e-12

IDENTIFY_1, IDENTIFY_2, INCONCLUSIVE = 0, 1, 2


class SimulationError(RuntimeError):
    """Outcome probabilities are inconsistent with a valid measurement."""


@dataclass(frozen=True)
class SimConfig:
    theta: float
    eta1: float
    trials: int
    seed: int = 0
    phase_mode: str = "uniform"
    phi1: float = 0.0
    phi2: float = 0.0

    def __post_init__(self):
        check_theta(self.theta)
        Priors(self.eta1)
        if int(self.trials) != self.trials or self.trials < 1:
            raise ValueError(f"trials must be a positive integer, got {self.trials!r}")
        if not (0 <= int(self.seed) < 2**64):
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if self.phase_mode not in ("uniform", "fixed"):
            raise ValueError(f"phase_mode must be 'uniform' or 'fixed', got {self.phase_mode!r}")


@dataclass(frozen=True)
class SimReport:
    n_correct_1: int
    n_correct_2: int
    n_wrong: int
    n_inconclusive: int
    trials: int
    empirical_success: float
    predicted_success: float
    z_score: float
    rng: str = RNG_NAME

    @property
    def counts(self) -> tuple[int, int, int, int]:
        return self.n_correct_1, self.n_correct_2, self.n_wrong, self.n_inconclusive

    def to_dict(self) -> dict:
        return asdict(self)


def outcome_probabilities(povm: Povm, kets) -> np.ndarray:
    """Born-rule probabilities ``<psi|Pi_k|psi>`` for a batch of kets, shape ``(n, 3)``.

    Values in ``[-1e-12, 0)`` are roundoff and clipped to zero; anything more
    negative, or rows not summing to one within 1e-10, raise
    :class:`SimulationError`.
    """
    kets = np.atleast_2d(np.asarray(kets, dtype=complex))
    q = np.stack(
        [np.einsum("ni,ij,nj->n", kets.conj(), e, kets).real for e in povm.elements],
        axis=-1,
    )
    if np.any(q < -CLIP_TOL):
        raise SimulationError(f"negative outcome probability {q.min():.3e}")
    q = np.maximum(q, 0.0)
    total = q.sum(axis=-1)
    if np.any(np.abs(total - 1.0) > SUM_TOL):
        raise SimulationError(
            f"outcome probabilities sum to {total[np.argmax(np.abs(total - 1))]!r}"
        )
    return q / total[:, None]


def _inverse_cdf(q: np.ndarray, u: np.ndarray) -> np.ndarray:
    cdf = np.cumsum(q, axis=-1)
    out = np.full(u.shape, INCONCLUSIVE, dtype=np.int64)
    out[u < cdf[:, 1]] = IDENTIFY_2
    out[u < cdf[:, 0]] = IDENTIFY_1
    return out


def sample_outcome(povm: Povm, state, rng: np.random.Generator) -> int:
    """Sample one outcome index (0: identify-1, 1: identify-2, 2: inconclusive)."""
    q = outcome_probabilities(povm, state)
    return int(_inverse_cdf(q, np.array([rng.random()]))[0])


def _run_stream(cfg: SimConfig, povm: Povm, seed_seq: np.random.SeedSequence, n: int):
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    # columns: phase 1, phase 2, label, outcome
    u = rng.random((n, 4))
    if cfg.phase_mode == "uniform":
        phi1, phi2 = TWO_PI * u[:, 0], TWO_PI * u[:, 1]
    else:
        phi1, phi2 = np.full(n, cfg.phi1), np.full(n, cfg.phi2)
    is_one = u[:, 2] < cfg.eta1
    kets = np.where(
        is_one[:, None],
        total_input_kets(1, cfg.theta, phi1, phi2),
        total_input_kets(2, cfg.theta, phi1, phi2),
    )
    outcome = _inverse_cdf(outcome_probabilities(povm, kets), u[:, 3])
    correct_1 = int(np.count_nonzero(is_one & (outcome == IDENTIFY_1)))
    correct_2 = int(np.count_nonzero(~is_one & (outcome == IDENTIFY_2)))
    wrong = int(
        np.count_nonzero(is_one & (outcome == IDENTIFY_2))
        + np.count_nonzero(~is_one & (outcome == IDENTIFY_1))
    )
    inconclusive = int(np.count_nonzero(outcome == INCONCLUSIVE))
    return np.array([correct_1, correct_2, wrong, inconclusive], dtype=np.int64)


def predicted_success(cfg: SimConfig) -> float:
    priors = Priors(cfg.eta1)
    if cfg.phase_mode == "uniform":
        return optimal_average_probability(cfg.theta, priors)
    return pure_state_success(cfg.theta, cfg.phi1, cfg.phi2, priors)


def z_score(empirical: float, predicted: float, trials: int) -> float:
    var = predicted * (1 - predicted) / trials
    if var <= 0.0:
        # a deterministic prediction: any departure at all is infinitely unlikely
        return 0.0 if empirical == predicted else math.copysign(math.inf, empirical - predicted)
    return (empirical - predicted) / math.sqrt(var)


def run_simulation(cfg: SimConfig, workers: int = 1, povm: Povm | None = None) -> SimReport:
    povm = total_povm(Priors(cfg.eta1)) if povm is None else povm
    n_streams = -(-cfg.trials // STREAM_TRIALS)
    seeds = np.random.SeedSequence(int(cfg.seed)).spawn(n_streams)
    sizes = [STREAM_TRIALS] * (n_streams - 1) + [cfg.trials - STREAM_TRIALS * (n_streams - 1)]
    jobs = list(zip(seeds, sizes))

    def run(job):
        return _run_stream(cfg, povm, *job)

    if workers > 1 and n_streams > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            tallies = list(pool.map(run, jobs))
    else:
        tallies = [run(job) for job in jobs]
    c1, c2, wrong, inconclusive = (int(x) for x in np.sum(tallies, axis=0))

    empirical = (c1 + c2) / cfg.trials
    predicted = predicted_success(cfg)
    return SimReport(
        n_correct_1=c1,
        n_correct_2=c2,
        n_wrong=wrong,
        n_inconclusive=inconclusive,
        trials=cfg.trials,
        empirical_success=empirical,
        predicted_success=predicted,
        z_score=z_score(empirical, predicted, cfg.trials),
    )
