"""Wall-clock measurement policy.

The default mirrors the one-shot accounting used by the tuning tables:
no warm-up, a single measured run, monotonic clock.  Raise
``measured_runs`` and pick ``median`` on noisy hosts; results are then
aggregated across runs.
"""

import statistics
import time
from dataclasses import dataclass, field

from .errors import MeasurementError

_AGGREGATORS = {
    "median": statistics.median,
    "min": min,
    "mean": statistics.fmean,
}


@dataclass
class TimingPolicy:
    warmup_runs: int = 0
    measured_runs: int = 1
    aggregator: str = "median"
    clock: object = field(default=time.perf_counter, repr=False)

    def __post_init__(self):
        if self.measured_runs < 1:
            raise ValueError("measured_runs must be >= 1")
        if self.warmup_runs < 0:
            raise ValueError("warmup_runs must be >= 0")
        if self.aggregator not in _AGGREGATORS:
            raise ValueError(f"unknown aggregator {self.aggregator!r}")


def measure(fn, policy, setup=None):
    """Elapsed seconds for ``fn()`` under ``policy``.

    ``setup`` runs before every sample, outside the timed region (used to
    re-zero output buffers so allocation and reset never pollute timings).
    """
    clock = policy.clock
    for _ in range(policy.warmup_runs):
        if setup is not None:
            setup()
        fn()
    samples = []
    for _ in range(policy.measured_runs):
        if setup is not None:
            setup()
        t0 = clock()
        fn()
        elapsed = clock() - t0
        if elapsed <= 0.0:
            raise MeasurementError(f"non-positive elapsed time {elapsed!r}")
        samples.append(elapsed)
    return _AGGREGATORS[policy.aggregator](samples)
