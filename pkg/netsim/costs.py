# netsim/costs.py
import logging
from dataclasses import dataclass, field

from django.db import models
from django.utils.translation import gettext_lazy as _

from kem.bench import INJECTED_TIMINGS, BenchMode, KemOp, bench_op
from kem.params import KemVariant, coerce_variant
from pqcpslab.exceptions import ConfigurationError

logger = logging.getLogger(__name__)


class ComputeOp(models.TextChoices):
    KEYGEN = 'keygen', 'Key Generation'
    ENCAPS = 'encaps', 'Encapsulation'
    DECAPS = 'decaps', 'Decapsulation'
    SEAL = 'seal', 'Seal'
    OPEN = 'open', 'Open'


@dataclass(frozen=True)
class CryptoCostModel:
    """Compute cost in microseconds per (variant, op).

    Ops without an entry (AEAD seal/open unless given) cost nothing.
    """
    mode: str
    costs: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.mode not in BenchMode.values:
            raise ConfigurationError(_("Unknown crypto mode: {mode}").format(mode=self.mode))
        for key, value in self.costs.items():
            if value < 0:
                raise ConfigurationError(_("Crypto cost for {key} is negative.").format(key=key))

    @classmethod
    def injected(cls, extra=None):
        costs = {
            (variant, op): float(time_us)
            for variant, ops in INJECTED_TIMINGS.items()
            for op, (_cycles, time_us) in ops.items()
        }
        costs.update(extra or {})
        return cls(mode=BenchMode.INJECTED, costs=costs)

    @classmethod
    def measured(cls, variants=None, iterations=5):
        """Host means from bench_op for the requested variants"""
        variants = [coerce_variant(v) for v in (variants or KemVariant.values)]
        costs = {}
        for variant in variants:
            for op in KemOp.values:
                costs[(variant, op)] = bench_op(variant, op, iterations, BenchMode.MEASURED).mean_us
        logger.info(f"Measured crypto costs for {len(variants)} variant(s)")
        return cls(mode=BenchMode.MEASURED, costs=costs)

    def cost(self, variant, op):
        if op not in ComputeOp.values:
            raise ConfigurationError(_("Unknown compute op: {op}").format(op=op))
        if variant is None:
            return 0.0
        return self.costs.get((coerce_variant(variant), op), 0.0)
