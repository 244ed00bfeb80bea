# scenarios/scenarios.py
from dataclasses import dataclass

from django.conf import settings
from django.utils.translation import gettext_lazy as _

from kem.bench import BenchMode
from kem.params import coerce_variant
from netsim.links import Medium
from netsim.mobility import LinearWaypoint, Static
from pqcpslab.base_serializers import validated_or_raise
from pqcpslab.exceptions import ConfigurationError

from .models import Layout
from .serializers import ScenarioConfigSerializer

NODE_A = 'A'
NODE_B = 'B'


@dataclass(frozen=True)
class MobilitySpec:
    """Recipe for a node's mobility; each run builds a fresh model from it"""
    kind: str
    x: float = 0.0
    y: float = 0.0
    box_side: float = None
    speed: float = None

    def build(self, rng_seed):
        if self.kind == Static.kind:
            return Static((self.x, self.y))
        return LinearWaypoint(self.box_side, self.speed, rng_seed)

    def describe(self):
        if self.kind == Static.kind:
            return f"static at ({self.x:g}, {self.y:g})"
        return f"waypoint in {self.box_side:g} m box at {self.speed:g} m/s"


@dataclass(frozen=True)
class Scenario:
    id: int
    medium: str
    layout: str
    mobility_a: MobilitySpec
    mobility_b: MobilitySpec
    variant: str
    crypto_mode: str = BenchMode.INJECTED
    runs: int = 5
    data_message_bytes: int = 32
    initiator: str = NODE_A

    @property
    def responder(self):
        return NODE_B if self.initiator == NODE_A else NODE_A


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: Scenario
    seed: int
    threshold_us: int


# ==================== EVALUATION SCENARIOS ====================

def build_evaluation_scenario(id, variant, crypto_mode=BenchMode.INJECTED, runs=None, data_message_bytes=None,
                         initiator=NODE_A):
    """One of the four evaluation scenarios, fully resolved"""
    separation = getattr(settings, 'PQCPSLAB_STATIC_SEPARATION_M', 1350.0)
    speed = getattr(settings, 'PQCPSLAB_NODE_SPEED_MPS', 40.0)
    runs = runs if runs is not None else getattr(settings, 'PQCPSLAB_RUNS', 5)
    if data_message_bytes is None:
        data_message_bytes = getattr(settings, 'PQCPSLAB_DATA_MESSAGE_BYTES', 32)

    static_pair = (MobilitySpec(Static.kind, 0.0, 0.0), MobilitySpec(Static.kind, separation, 0.0))
    # both boxes cap the node separation at about 1350 m
    big_box, small_box = 1910.0, 955.0
    layouts = {
        1: (Medium.WIRED, Layout.STATIC_STATIC, static_pair),
        2: (Medium.WIRELESS_ADHOC, Layout.STATIC_STATIC, static_pair),
        3: (Medium.WIRELESS_ADHOC, Layout.STATIC_DYNAMIC, (
            MobilitySpec(Static.kind, big_box / 2, big_box / 2),
            MobilitySpec(LinearWaypoint.kind, box_side=big_box, speed=speed),
        )),
        4: (Medium.WIRELESS_ADHOC, Layout.DYNAMIC_DYNAMIC, (
            MobilitySpec(LinearWaypoint.kind, box_side=small_box, speed=speed),
            MobilitySpec(LinearWaypoint.kind, box_side=small_box, speed=speed),
        )),
    }
    try:
        medium, layout, (mobility_a, mobility_b) = layouts[int(id)]
    except (KeyError, TypeError, ValueError):
        raise ConfigurationError(_("Scenario id must be 1-4, got {id}.").format(id=id))
    if crypto_mode not in BenchMode.values:
        raise ConfigurationError(_("Unknown crypto mode: {mode}").format(mode=crypto_mode))
    if runs < 1:
        raise ConfigurationError(_("A scenario needs at least one run."))
    if int(data_message_bytes) < 0:
        raise ConfigurationError(_("Data message size cannot be negative."))
    if initiator not in (NODE_A, NODE_B):
        raise ConfigurationError(_("Initiator must be node A or B."))

    return Scenario(
        id=int(id), medium=medium, layout=layout,
        mobility_a=mobility_a, mobility_b=mobility_b,
        variant=coerce_variant(variant), crypto_mode=BenchMode(crypto_mode),
        runs=int(runs), data_message_bytes=int(data_message_bytes), initiator=initiator,
    )


def scenario_from_config(mapping):
    """Validate a scenario config document and resolve it"""
    data = validated_or_raise(ScenarioConfigSerializer(data=mapping), ConfigurationError)
    scenario = build_evaluation_scenario(
        data['id'], data['variant'], data['crypto_mode'], data['runs'],
        data['data_message_bytes'], data['initiator'],
    )
    return ScenarioConfig(scenario=scenario, seed=data['seed'], threshold_us=data['threshold_us'])
