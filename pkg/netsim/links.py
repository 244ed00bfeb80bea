# netsim/links.py
import math
from dataclasses import dataclass, field

from django.conf import settings
from django.db import models
from django.utils.translation import gettext_lazy as _

from pqcpslab.exceptions import InputError


class Medium(models.TextChoices):
    WIRED = 'wired', 'Ethernet'
    WIRELESS_ADHOC = 'wireless_adhoc', 'ADHOC LTE'


@dataclass(frozen=True)
class LinkModel:
    """Per-message delay = transmission + propagation + fixed access overhead"""
    medium: str
    bandwidth_bps: float
    propagation_speed: float
    fixed_overhead_us: float
    overhead_by_kind: dict = field(default_factory=dict)
    mtu_bytes: int = None
    header_bytes: int = 0
    # extra access latency per endpoint that is moving
    mobility_overhead_us: float = 0.0

    def __post_init__(self):
        if self.medium not in Medium.values:
            raise InputError(_("Unknown medium: {medium}").format(medium=self.medium))
        if not self.bandwidth_bps > 0:
            raise InputError(_("Bandwidth must be positive."))
        if not self.propagation_speed > 0:
            raise InputError(_("Propagation speed must be positive."))
        if self.fixed_overhead_us < 0 or self.mobility_overhead_us < 0 or any(v < 0 for v in self.overhead_by_kind.values()):
            raise InputError(_("Overheads cannot be negative."))
        if self.mtu_bytes is not None and self.mtu_bytes <= 0:
            raise InputError(_("MTU must be positive when set."))
        if self.header_bytes < 0:
            raise InputError(_("Header size cannot be negative."))

    def overhead_for(self, kind):
        return self.overhead_by_kind.get(kind, self.fixed_overhead_us)


def wired_default(**overrides):
    """100 Gbps Ethernet preset"""
    values = {
        'medium': Medium.WIRED,
        'bandwidth_bps': getattr(settings, 'PQCPSLAB_WIRED_BANDWIDTH_BPS', 100e9),
        'propagation_speed': getattr(settings, 'PQCPSLAB_PROPAGATION_SPEED_MPS', 3e8),
        'fixed_overhead_us': getattr(settings, 'PQCPSLAB_WIRED_OVERHEAD_US', 0.44),
    }
    values.update(overrides)
    return LinkModel(**values)


def wireless_default(**overrides):
    """54 Mbps ad hoc LTE preset"""
    values = {
        'medium': Medium.WIRELESS_ADHOC,
        'bandwidth_bps': getattr(settings, 'PQCPSLAB_WIRELESS_BANDWIDTH_BPS', 54e6),
        'propagation_speed': getattr(settings, 'PQCPSLAB_PROPAGATION_SPEED_MPS', 3e8),
        'fixed_overhead_us': getattr(settings, 'PQCPSLAB_WIRELESS_OVERHEAD_US', 1000.0),
        'mobility_overhead_us': getattr(settings, 'PQCPSLAB_WIRELESS_MOBILITY_OVERHEAD_US', 3.11),
    }
    values.update(overrides)
    return LinkModel(**values)


def preset_for(medium, **overrides):
    if medium == Medium.WIRED:
        return wired_default(**overrides)
    return wireless_default(**overrides)


def link_delay(link, size_bytes, distance_m, kind=None, moving_endpoints=0):
    """One-way delay in microseconds for a message of ``size_bytes``"""
    if size_bytes < 0 or distance_m < 0:
        raise InputError(_("Size and distance must be non-negative."))
    wire_bytes = size_bytes
    if link.mtu_bytes:
        fragments = math.ceil(size_bytes / link.mtu_bytes)
        wire_bytes += fragments * link.header_bytes
    transmission_us = 8 * wire_bytes / link.bandwidth_bps * 1e6
    propagation_us = distance_m / link.propagation_speed * 1e6
    access_us = link.overhead_for(kind) + moving_endpoints * link.mobility_overhead_us
    return transmission_us + propagation_us + access_us
