# netsim/engine.py
"""Discrete-event engine for two-party message schedules.

Each node runs its script steps in order. Compute steps take the crypto
cost, sends are charged ``link_delay`` at the distance sampled at send
time, and a step that consumes a message (encaps, decaps, open) waits
until one has been delivered to its node.
"""
import heapq
import logging
from collections import deque
from dataclasses import dataclass, field

from django.db import models
from django.utils.translation import gettext_lazy as _
from rest_framework.renderers import JSONRenderer

from channel.wire import ENCRYPTED_OVERHEAD_BYTES, MessageKind
from kem.params import params_for
from pqcpslab.exceptions import ConfigurationError

from .costs import ComputeOp
from .links import LinkModel, link_delay
from .mobility import distance_at
from .serializers import TraceRecordSerializer

logger = logging.getLogger(__name__)


class ScriptOp(models.TextChoices):
    KEYGEN = 'keygen', 'Key Generation'
    ENCAPS = 'encaps', 'Encapsulation'
    DECAPS = 'decaps', 'Decapsulation'
    SEAL = 'seal', 'Seal'
    OPEN = 'open', 'Open'
    SEND = 'send', 'Send'


CONSUMING_OPS = {ScriptOp.ENCAPS, ScriptOp.DECAPS, ScriptOp.OPEN}


class EventAction(models.TextChoices):
    STEP = 'step', 'Step'
    FINISH = 'finish', 'Finish'
    DELIVER = 'deliver', 'Deliver'


@dataclass(frozen=True)
class ScriptStep:
    node: str
    op: str
    msg_kind: str = None
    size_bytes: int = 0
    peer: str = None
    variant: str = None


@dataclass(frozen=True, order=True)
class SimEvent:
    time_us: float
    seq: int
    node: str = field(compare=False)
    action: str = field(compare=False)
    msg_kind: str = field(default=None, compare=False)
    size_bytes: int = field(default=0, compare=False)
    delay_us: float = field(default=0.0, compare=False)


@dataclass(frozen=True)
class TraceRecord:
    time_us: float
    node: str
    action: str
    msg_kind: str
    size_bytes: int
    delay_us: float


class Trace:
    def __init__(self, records=None, seed=None):
        self.records = list(records or [])
        self.seed = seed

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __eq__(self, other):
        return isinstance(other, Trace) and self.records == other.records

    def deliveries(self, kind=None):
        return [r for r in self.records if r.action == EventAction.DELIVER and (kind is None or r.msg_kind == kind)]

    def delays_by_kind(self):
        delays = {kind: [] for kind in MessageKind.values}
        for record in self.deliveries():
            delays[record.msg_kind].append(record.delay_us)
        return delays

    def finish_time(self, action, node=None):
        """Completion time of the first ``action`` record, or None"""
        for record in self.records:
            if record.action == action and (node is None or record.node == node):
                return record.time_us
        return None

    def to_ndjson(self):
        renderer = JSONRenderer()
        lines = [renderer.render(TraceRecordSerializer(r).data).decode('utf-8') for r in self.records]
        return ''.join(f"{line}\n" for line in lines)


# ==================== ENGINE ====================

def _link_between(links, a, b):
    if isinstance(links, LinkModel):
        return links
    for key in (frozenset((a, b)), (a, b), (b, a)):
        if key in links:
            return links[key]
    raise ConfigurationError(_("No link configured between {a} and {b}.").format(a=a, b=b))


class _Simulation:

    def __init__(self, script, links, mobilities, crypto):
        self.links = links
        self.mobilities = mobilities
        self.crypto = crypto
        self.steps = {}
        for step in script:
            for name in (step.node, step.peer):
                if name is not None and name not in mobilities:
                    raise ConfigurationError(_("Script references unknown node: {node}").format(node=name))
            if step.op not in ScriptOp.values:
                raise ConfigurationError(_("Unknown script op: {op}").format(op=step.op))
            if step.op == ScriptOp.SEND and (step.peer is None or step.msg_kind not in MessageKind.values):
                raise ConfigurationError(_("A send step needs a peer and a message kind."))
            self.steps.setdefault(step.node, deque()).append(step)
        self.inbox = {node: deque() for node in mobilities}
        self.waiting = set()
        self.queue = []
        self.seq = 0
        self.records = []

    def push(self, time_us, node, action, **extra):
        heapq.heappush(self.queue, SimEvent(time_us, self.seq, node, action, **extra))
        self.seq += 1

    def record(self, time_us, node, action, msg_kind=None, size_bytes=0, delay_us=0.0):
        self.records.append(TraceRecord(time_us, node, action, msg_kind, size_bytes, delay_us))

    def run(self):
        for node in self.steps:
            self.push(0.0, node, EventAction.STEP)
        while self.queue:
            event = heapq.heappop(self.queue)
            if event.action == EventAction.DELIVER:
                self.record(event.time_us, event.node, EventAction.DELIVER, event.msg_kind, event.size_bytes, event.delay_us)
                self.inbox[event.node].append(event.msg_kind)
                if event.node in self.waiting:
                    self.waiting.discard(event.node)
                    self.push(event.time_us, event.node, EventAction.STEP)
            elif event.action == EventAction.FINISH:
                self.record(event.time_us, event.node, event.msg_kind, delay_us=event.delay_us)
                self.push(event.time_us, event.node, EventAction.STEP)
            else:
                self.advance(event.node, event.time_us)

        stuck = [node for node, steps in self.steps.items() if steps]
        if stuck:
            raise ConfigurationError(
                _("Script cannot finish; nodes waiting for messages: {nodes}").format(nodes=', '.join(stuck))
            )
        return self.records

    def advance(self, node, now):
        steps = self.steps.get(node)
        if not steps:
            return
        step = steps[0]
        if step.op in CONSUMING_OPS:
            if not self.inbox[node]:
                self.waiting.add(node)
                return
            self.inbox[node].popleft()
        steps.popleft()

        if step.op == ScriptOp.SEND:
            distance = distance_at(self.mobilities[node], self.mobilities[step.peer], now / 1e6)
            link = _link_between(self.links, node, step.peer)
            moving = sum(1 for name in (node, step.peer) if getattr(self.mobilities[name], 'mobile', False))
            delay = link_delay(link, step.size_bytes, distance, step.msg_kind, moving)
            self.record(now, node, ScriptOp.SEND, step.msg_kind, step.size_bytes, delay)
            self.push(now + delay, step.peer, EventAction.DELIVER,
                      msg_kind=step.msg_kind, size_bytes=step.size_bytes, delay_us=delay)
            self.push(now, node, EventAction.STEP)
        else:
            cost = self.crypto.cost(step.variant, ComputeOp(step.op))
            self.push(now + cost, node, EventAction.FINISH, msg_kind=step.op, delay_us=cost)


def run(script, links, mobilities, crypto, seed=None):
    """Simulate ``script`` and return its time-ordered trace"""
    records = _Simulation(list(script), links, mobilities, crypto).run()
    logger.debug(f"Simulated {len(records)} trace records")
    return Trace(records, seed=seed)


def handshake_script(variant, initiator, responder, data_message_bytes=32):
    """Key exchange then one encrypted data message in each direction"""
    params = params_for(variant)
    data_size = data_message_bytes + ENCRYPTED_OVERHEAD_BYTES
    a, b, v = initiator, responder, params.variant
    return [
        ScriptStep(a, ScriptOp.KEYGEN, variant=v),
        ScriptStep(a, ScriptOp.SEND, MessageKind.PUBLIC_KEY, params.pk_len, peer=b),
        ScriptStep(b, ScriptOp.ENCAPS, variant=v),
        ScriptStep(b, ScriptOp.SEND, MessageKind.CIPHERTEXT, params.ct_len, peer=a),
        ScriptStep(a, ScriptOp.DECAPS, variant=v),
        ScriptStep(a, ScriptOp.SEAL, variant=v),
        ScriptStep(a, ScriptOp.SEND, MessageKind.ENCRYPTED_DATA, data_size, peer=b),
        ScriptStep(b, ScriptOp.OPEN, variant=v),
        ScriptStep(b, ScriptOp.SEAL, variant=v),
        ScriptStep(b, ScriptOp.SEND, MessageKind.ENCRYPTED_DATA, data_size, peer=a),
        ScriptStep(a, ScriptOp.OPEN, variant=v),
    ]
