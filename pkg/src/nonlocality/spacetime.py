"""Minkowski geometry in d spatial dimensions, natural units (c = 1).

Events are points (x_1 .. x_d, t). Light cones are closed sets, and all
classifications use a symmetric tolerance band so that points numerically
on a cone surface are reported as boundary rather than flipping sides.
The default geometric tolerance is 1e-9 and can be overridden with the
``NONLOCALITY_TOL`` environment variable.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

GEOMETRIC_TOL = 1e-9
TOL_ENV_VAR = "NONLOCALITY_TOL"

TIMELIKE = "timelike"
SPACELIKE = "spacelike"
NULL = "null"

FUTURE = "future"
PAST = "past"

INSIDE = "inside"
BOUNDARY = "boundary"
OUTSIDE = "outside"


def default_tol() -> float:
    """Geometric tolerance, overridable via the NONLOCALITY_TOL env var."""
    return float(os.environ.get(TOL_ENV_VAR, GEOMETRIC_TOL))


def _as_float_tuple(values) -> tuple[float, ...]:
    out = tuple(float(v) for v in values)
    if not all(math.isfinite(v) for v in out):
        raise ValueError(f"coordinates must be finite, got {out}")
    return out


@dataclass(frozen=True)
class Event:
    """A point in (d+1)-dimensional Minkowski spacetime."""

    x: tuple[float, ...]
    t: float

    def __post_init__(self):
        object.__setattr__(self, "x", _as_float_tuple(self.x))
        object.__setattr__(self, "t", float(self.t))
        if len(self.x) < 1:
            raise ValueError("spatial dimension must be at least 1")
        if not math.isfinite(self.t):
            raise ValueError(f"time coordinate must be finite, got {self.t}")

    @property
    def d(self) -> int:
        return len(self.x)

    def xvec(self) -> np.ndarray:
        return np.asarray(self.x, dtype=float)

    def to_json(self) -> list[float]:
        """Serialize as [x_1, ..., x_d, t]."""
        return [*self.x, self.t]

    @classmethod
    def from_json(cls, data) -> "Event":
        coords = [float(v) for v in data]
        if len(coords) < 2:
            raise ValueError("event JSON needs at least [x, t]")
        return cls(x=tuple(coords[:-1]), t=coords[-1])


@dataclass(frozen=True)
class Boost:
    """A Lorentz boost with velocity strictly below light speed."""

    v: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "v", _as_float_tuple(self.v))
        if self.speed >= 1.0:
            raise ValueError(f"boost speed must be < 1, got {self.speed}")

    @property
    def d(self) -> int:
        return len(self.v)

    @property
    def speed(self) -> float:
        return math.sqrt(sum(c * c for c in self.v))

    @property
    def gamma(self) -> float:
        return 1.0 / math.sqrt(1.0 - self.speed**2)

    def inverse(self) -> "Boost":
        return Boost(tuple(-c for c in self.v))

    @classmethod
    def zero(cls, d: int) -> "Boost":
        return cls((0.0,) * d)

    def to_json(self) -> dict:
        return {"v": list(self.v)}

    @classmethod
    def from_json(cls, data) -> "Boost":
        return cls(tuple(float(c) for c in data["v"]))


@dataclass(frozen=True)
class IntervalClass:
    """Separation class of an event pair, with s^2 = dt^2 - |dx|^2."""

    kind: str
    squared: float


@dataclass(frozen=True)
class LightCone:
    apex: Event
    orientation: str = FUTURE

    def __post_init__(self):
        if self.orientation not in (FUTURE, PAST):
            raise ValueError(f"orientation must be '{FUTURE}' or '{PAST}'")


def _require_same_dimension(*events: Event) -> int:
    dims = {e.d for e in events}
    if len(dims) != 1:
        raise ValueError(f"events have mismatched dimensions: {sorted(dims)}")
    return dims.pop()


def interval(e1: Event, e2: Event, tol: float | None = None) -> IntervalClass:
    """Classify the interval between two events; symmetric in its arguments."""
    _require_same_dimension(e1, e2)
    if tol is None:
        tol = default_tol()
    dt = e2.t - e1.t
    dx = e2.xvec() - e1.xvec()
    s2 = dt * dt - float(dx @ dx)
    if s2 > tol:
        kind = TIMELIKE
    elif s2 < -tol:
        kind = SPACELIKE
    else:
        kind = NULL
    return IntervalClass(kind=kind, squared=s2)


def boost(e: Event, b: Boost) -> Event:
    """Apply a Lorentz boost to an event.

    The component of x along v maps to gamma*(x_par - v t), orthogonal
    components are unchanged, and t' = gamma*(t - v.x).
    """
    _require_same_dimension(e, Event(b.v, 0.0))
    v = np.asarray(b.v, dtype=float)
    v2 = float(v @ v)
    if v2 == 0.0:
        return e
    x = e.xvec()
    g = b.gamma
    vdotx = float(v @ x)
    t_new = g * (e.t - vdotx)
    x_new = x + ((g - 1.0) * vdotx / v2 - g * e.t) * v
    return Event(tuple(x_new), t_new)


def cone_slack(e: Event, cone: LightCone) -> float:
    """Signed distance-to-surface proxy: positive inside, negative outside.

    For a future cone this is (e.t - apex.t) - |e.x - apex.x|; the mirror
    expression for a past cone. Membership in the closed cone is slack >= 0
    up to tolerance.
    """
    _require_same_dimension(e, cone.apex)
    dist = float(np.linalg.norm(e.xvec() - cone.apex.xvec()))
    if cone.orientation == FUTURE:
        return (e.t - cone.apex.t) - dist
    return (cone.apex.t - e.t) - dist


def in_future_cone(e: Event, cone: LightCone, tol: float | None = None) -> str:
    """Classify an event against a (closed) light cone: inside/boundary/outside."""
    if tol is None:
        tol = default_tol()
    slack = cone_slack(e, cone)
    if slack > tol:
        return INSIDE
    if slack < -tol:
        return OUTSIDE
    return BOUNDARY


@dataclass(frozen=True)
class FrameMap:
    """Composite coordinate change: boost, translation, orthogonal spatial
    alignment, then uniform positive scaling of all coordinates.

    Each step maps light cones to light cones (the scaling conformally), so
    cone-containment questions are invariant under the map. It is invertible
    via :meth:`apply_inverse`.
    """

    boost_velocity: tuple[float, ...]
    shift_x: tuple[float, ...]  # added to spatial coords after the boost
    shift_t: float
    alignment: tuple[tuple[float, ...], ...]  # orthogonal matrix, rows
    scale: float

    def _matrix(self) -> np.ndarray:
        return np.asarray(self.alignment, dtype=float)

    def apply(self, e: Event) -> Event:
        e1 = boost(e, Boost(self.boost_velocity))
        x = e1.xvec() + np.asarray(self.shift_x)
        t = e1.t + self.shift_t
        x = self._matrix() @ x
        return Event(tuple(self.scale * x), self.scale * t)

    def apply_inverse(self, e: Event) -> Event:
        x = e.xvec() / self.scale
        t = e.t / self.scale
        x = self._matrix().T @ x
        x = x - np.asarray(self.shift_x)
        t = t - self.shift_t
        return boost(Event(tuple(x), t), Boost(self.boost_velocity).inverse())


def _alignment_to_first_axis(u: np.ndarray) -> np.ndarray:
    """Orthogonal matrix Q with Q @ u = e1 for a unit vector u.

    Householder reflection; for u already equal to e1 returns the identity.
    """
    d = u.shape[0]
    e1 = np.zeros(d)
    e1[0] = 1.0
    w = u - e1
    wnorm2 = float(w @ w)
    if wnorm2 < 1e-30:
        return np.eye(d)
    return np.eye(d) - 2.0 * np.outer(w, w) / wnorm2


def canonicalize_pair(
    a: Event, b: Event, tol: float | None = None
) -> tuple[FrameMap, Event, Event]:
    """Construct the frame in which a spacelike pair sits at (-1, 0...; 0)
    and (+1, 0...; 0).

    Combines a boost to simultaneity, a translation of the midpoint to the
    origin, an orthogonal alignment of the separation axis with x_1, and a
    uniform scaling to separation 2. Raises if the pair is not spacelike.
    """
    if tol is None:
        tol = default_tol()
    iv = interval(a, b, tol=tol)
    if iv.kind != SPACELIKE:
        raise ValueError(f"canonicalize_pair requires a spacelike pair, got {iv.kind}")
    dx = b.xvec() - a.xvec()
    dt = b.t - a.t
    sep = float(np.linalg.norm(dx))
    if dt != 0.0:
        vel = (dt / sep) * (dx / sep)  # |vel| = |dt|/sep < 1 since spacelike
    else:
        vel = np.zeros(a.d)
    bst = Boost(tuple(vel))
    a1 = boost(a, bst)
    b1 = boost(b, bst)
    mid_x = (a1.xvec() + b1.xvec()) / 2.0
    mid_t = (a1.t + b1.t) / 2.0
    sep1 = b1.xvec() - a1.xvec()
    u = sep1 / np.linalg.norm(sep1)
    q = _alignment_to_first_axis(u)
    scale = 2.0 / float(np.linalg.norm(sep1))
    fm = FrameMap(
        boost_velocity=tuple(float(v) for v in vel),
        shift_x=tuple(float(v) for v in -mid_x),
        shift_t=float(-mid_t),
        alignment=tuple(tuple(float(v) for v in row) for row in q),
        scale=float(scale),
    )
    return fm, fm.apply(a), fm.apply(b)


@dataclass(frozen=True)
class VelocityGrid:
    """Sampling grid of boost velocities: speeds crossed with directions.

    Completeness of any ordering search is only up to this resolution.
    """

    speeds: tuple[float, ...]
    directions: tuple[tuple[float, ...], ...]

    @classmethod
    def for_dimension(
        cls,
        d: int,
        speed_step: float = 0.01,
        max_speed: float = 0.99,
        n_directions: int = 24,
        seed: int = 7,
    ) -> "VelocityGrid":
        if not 0.0 < max_speed < 1.0:
            raise ValueError(f"max_speed must lie in (0, 1), got {max_speed}")
        raw = np.arange(0.0, max_speed + speed_step / 2, speed_step)
        speeds = tuple(float(s) for s in raw[raw <= max_speed])
        if d == 1:
            dirs = ((1.0,), (-1.0,))
        elif d == 2:
            angles = np.linspace(0.0, 2.0 * np.pi, n_directions, endpoint=False)
            dirs = tuple((math.cos(a), math.sin(a)) for a in angles)
        else:
            rng = np.random.default_rng(seed)
            raw = rng.normal(size=(n_directions, d))
            raw /= np.linalg.norm(raw, axis=1, keepdims=True)
            dirs = tuple(tuple(row) for row in raw)
        return cls(speeds=speeds, directions=dirs)

    def velocities(self):
        yield Boost((0.0,) * len(self.directions[0]))
        for s in self.speeds:
            if s == 0.0:
                continue
            for u in self.directions:
                yield Boost(tuple(s * c for c in u))


def achievable_orderings(
    events: list[Event],
    grid: VelocityGrid | None = None,
    tie_tol: float = 1e-12,
) -> dict[tuple[int, ...], Boost]:
    """Enumerate strict time orderings of mutually spacelike events reachable
    by sampled boosts.

    Returns a map from index permutation (earliest first) to a witness boost.
    Samples with any two boosted times closer than ``tie_tol`` are skipped,
    so only strict orderings are reported. Coverage is limited to the grid.
    """
    if len(events) < 2:
        raise ValueError("need at least two events")
    d = _require_same_dimension(*events)
    for i in range(len(events)):
        for k in range(i + 1, len(events)):
            iv = interval(events[i], events[k])
            if iv.kind != SPACELIKE:
                raise ValueError(
                    f"events {i} and {k} are {iv.kind}, not spacelike; "
                    "their order is frame-independent"
                )
    if grid is None:
        grid = VelocityGrid.for_dimension(d)
    found: dict[tuple[int, ...], Boost] = {}
    for bst in grid.velocities():
        times = [boost(e, bst).t for e in events]
        order = tuple(sorted(range(len(events)), key=lambda i: times[i]))
        sorted_times = sorted(times)
        if any(
            sorted_times[i + 1] - sorted_times[i] < tie_tol
            for i in range(len(sorted_times) - 1)
        ):
            continue
        found.setdefault(order, bst)
    return found
