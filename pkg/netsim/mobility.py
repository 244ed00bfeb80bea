# netsim/mobility.py
"""Node positions over time: static nodes and linear-waypoint motion."""
import math
import random
from dataclasses import dataclass

from django.utils.translation import gettext_lazy as _

from pqcpslab.exceptions import InputError


@dataclass(frozen=True)
class Position:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InputError(_("Position coordinates must be finite."))

    def distance_to(self, other):
        return math.hypot(self.x - other.x, self.y - other.y)

    def inside(self, box_side, tolerance=1e-9):
        return -tolerance <= self.x <= box_side + tolerance and -tolerance <= self.y <= box_side + tolerance


@dataclass(frozen=True)
class Leg:
    t_start: float
    t_end: float
    origin: Position
    target: Position

    def position_at(self, t):
        if self.t_end <= self.t_start:
            return self.target
        fraction = (t - self.t_start) / (self.t_end - self.t_start)
        return Position(
            self.origin.x + (self.target.x - self.origin.x) * fraction,
            self.origin.y + (self.target.y - self.origin.y) * fraction,
        )


class Static:
    kind = 'static'
    mobile = False

    def __init__(self, pos):
        self.pos = pos if isinstance(pos, Position) else Position(*pos)

    def position_at(self, t):
        return self.pos

    def __repr__(self):
        return f"Static({self.pos.x:g}, {self.pos.y:g})"


class LinearWaypoint:
    """Constant-speed travel between waypoints drawn uniformly in a square box.

    Explicit ``waypoints`` are visited first; afterwards targets come from
    ``random.Random(rng_seed)``, which also picks the start when none is given.
    """
    kind = 'linear_waypoint'
    mobile = True

    def __init__(self, box_side, speed, rng_seed, start=None, waypoints=None):
        if not box_side > 0:
            raise InputError(_("Waypoint box side must be positive."))
        if not speed > 0:
            raise InputError(_("Waypoint speed must be positive."))
        self.box_side = float(box_side)
        self.speed = float(speed)
        self.rng_seed = rng_seed
        self._rng = random.Random(rng_seed)
        self._pending = [p if isinstance(p, Position) else Position(*p) for p in (waypoints or [])]
        if start is None:
            start = self._draw()
        self.start = start if isinstance(start, Position) else Position(*start)
        for point in [self.start, *self._pending]:
            if not point.inside(self.box_side):
                raise InputError(_("Waypoint ({x}, {y}) lies outside the box.").format(x=point.x, y=point.y))
        self.legs = []

    def __repr__(self):
        return f"LinearWaypoint(box_side={self.box_side:g}, speed={self.speed:g}, rng_seed={self.rng_seed})"

    def _draw(self):
        return Position(self._rng.uniform(0, self.box_side), self._rng.uniform(0, self.box_side))

    def _next_target(self):
        if self._pending:
            return self._pending.pop(0)
        return self._draw()

    def _extend_to(self, t):
        while not self.legs or self.legs[-1].t_end < t:
            origin = self.legs[-1].target if self.legs else self.start
            t_start = self.legs[-1].t_end if self.legs else 0.0
            target = self._next_target()
            duration = origin.distance_to(target) / self.speed
            if duration == 0:
                continue
            self.legs.append(Leg(t_start, t_start + duration, origin, target))

    def leg_at(self, t):
        self._extend_to(t)
        for leg in self.legs:
            if t <= leg.t_end:
                return leg
        return self.legs[-1]

    def position_at(self, t):
        return self.leg_at(t).position_at(t)


def position_at(mobility, t):
    """Position of a node ``t`` seconds after the start"""
    if t < 0:
        raise InputError(_("Time must be non-negative."))
    return mobility.position_at(float(t))


def distance_at(a, b, t):
    return position_at(a, t).distance_to(position_at(b, t))
