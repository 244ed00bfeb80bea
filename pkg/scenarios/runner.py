# scenarios/runner.py
import logging
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from django.conf import settings
from django.utils.translation import gettext_lazy as _

from channel.wire import MessageKind
from kem.bench import BenchMode, KemOp, bench_op
from netsim.costs import CryptoCostModel
from netsim.engine import ScriptOp, handshake_script, run
from netsim.links import preset_for
from pqcpslab.exceptions import ConfigurationError
from pqcpslab.seeding import derive_seed

from .scenarios import NODE_A, NODE_B

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KindStats:
    max_us: float
    min_us: float
    avg_us: float

    @classmethod
    def from_values(cls, values):
        if not values:
            raise ConfigurationError(_("No samples to summarise."))
        return cls(max_us=max(values), min_us=min(values), avg_us=statistics.fmean(values))

    def stat(self, name):
        return {'max': self.max_us, 'min': self.min_us, 'avg': self.avg_us}[name]


@dataclass(frozen=True)
class MetricsReport:
    scenario: object
    runs: int
    delays: dict
    timings: list
    handshake_completion_us: KindStats
    seed: int = None
    trace: object = field(default=None, repr=False, compare=False)


def _crypto_for(scenario):
    """Timings for the report plus the cost model the simulator charges"""
    iterations = 1 if scenario.crypto_mode == BenchMode.INJECTED else max(1, getattr(settings, 'PQCPSLAB_TIMING_ITERATIONS', 60))
    timings = [bench_op(scenario.variant, op, iterations, scenario.crypto_mode) for op in KemOp.values]
    if scenario.crypto_mode == BenchMode.INJECTED:
        return timings, CryptoCostModel.injected()
    costs = {(scenario.variant, t.op): t.mean_us for t in timings}
    return timings, CryptoCostModel(mode=BenchMode.MEASURED, costs=costs)


def _run_once(scenario, crypto, master_seed, index):
    run_seed = derive_seed(master_seed, index)
    mobilities = {
        NODE_A: scenario.mobility_a.build(derive_seed(run_seed, NODE_A)),
        NODE_B: scenario.mobility_b.build(derive_seed(run_seed, NODE_B)),
    }
    script = handshake_script(scenario.variant, scenario.initiator, scenario.responder, scenario.data_message_bytes)
    return run(script, preset_for(scenario.medium), mobilities, crypto, seed=run_seed)


def run_scenario(scenario, seed, workers=None):
    """Run ``scenario.runs`` independent simulations and aggregate them in run order"""
    workers = workers if workers is not None else getattr(settings, 'PQCPSLAB_SCENARIO_WORKERS', 1)
    timings, crypto = _crypto_for(scenario)

    indices = range(scenario.runs)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = {i: pool.submit(_run_once, scenario, crypto, seed, i) for i in indices}
            traces = {i: futures[i].result() for i in indices}
    else:
        traces = {i: _run_once(scenario, crypto, seed, i) for i in indices}

    samples = {kind: [] for kind in MessageKind.values}
    completions = []
    for i in indices:
        for kind, delays in traces[i].delays_by_kind().items():
            samples[kind].extend(delays)
        completions.append(traces[i].finish_time(ScriptOp.DECAPS, scenario.initiator))

    report = MetricsReport(
        scenario=scenario,
        runs=scenario.runs,
        delays={kind: KindStats.from_values(values) for kind, values in samples.items()},
        timings=timings,
        handshake_completion_us=KindStats.from_values(completions),
        seed=seed,
        trace=traces[0],
    )
    logger.info(
        f"Scenario {scenario.id} {scenario.variant}: {scenario.runs} run(s), "
        f"pk avg {report.delays[MessageKind.PUBLIC_KEY].avg_us:.4f} us"
    )
    return report
