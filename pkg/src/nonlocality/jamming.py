"""Nonlocal jamming of correlations under relativistic causality.

A jamming configuration is a triple of mutually spacelike events: two
measurement events a and b, and a jammer event j that destroys the
correlations between them. Causality imposes two constraints:

* unary: jamming must leave each party's local statistics untouched, so
  no one-party record reveals whether the jammer acted;
* binary: the overlap of the forward light cones of a and b, the only
  region where the two records can be compared, must lie entirely within
  the forward light cone of j, so a light signal from j can reach every
  comparison point.

All cone containment is decided on closed sets: the extremal placement of
the jammer, where the cone-overlap surface is asymptotically tangent to
the jammer's cone, counts as satisfying the condition. Mutual spacelike
separation is enforced strictly (squared interval below -tol), so
boundary placements of j are excluded from valid configurations.

In one space dimension the overlap of the two forward cones is itself a
cone and the jammer may act up to one light-crossing time after both
measurements (in canonical units, t = 1, not attained). In two or more
space dimensions the critical set is the intersection of the two cone
surfaces, which recedes to infinity, and the jammer can never act after
both measurements: the latest canonical-frame time is 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .correlations import PROB_TOL, NoSignallingBox
from .spacetime import (
    FUTURE,
    NULL,
    SPACELIKE,
    Event,
    IntervalClass,
    LightCone,
    canonicalize_pair,
    cone_slack,
    default_tol,
    interval,
)


@dataclass(frozen=True)
class JammingConfiguration:
    """Measurement events a, b and jammer event j in d spatial dimensions."""

    a: Event
    b: Event
    j: Event

    def __post_init__(self):
        dims = {self.a.d, self.b.d, self.j.d}
        if len(dims) != 1:
            raise ValueError(f"events have mismatched dimensions: {sorted(dims)}")

    @property
    def d(self) -> int:
        return self.a.d

    def to_json(self) -> dict:
        return {
            "a": self.a.to_json(),
            "b": self.b.to_json(),
            "j": self.j.to_json(),
            "d": self.d,
        }

    @classmethod
    def from_json(cls, data) -> "JammingConfiguration":
        cfg = cls(
            a=Event.from_json(data["a"]),
            b=Event.from_json(data["b"]),
            j=Event.from_json(data["j"]),
        )
        if "d" in data and int(data["d"]) != cfg.d:
            raise ValueError(
                f"declared dimension {data['d']} does not match coordinates ({cfg.d})"
            )
        return cfg


@dataclass(frozen=True)
class ConfigurationValidation:
    """Pairwise interval classes; valid iff all three strictly spacelike."""

    ab: IntervalClass
    aj: IntervalClass
    bj: IntervalClass
    valid: bool
    on_boundary: bool  # j null-separated from a or b: edge of the allowed region

    def to_json(self) -> dict:
        return {
            "ab": {"kind": self.ab.kind, "squared": self.ab.squared},
            "aj": {"kind": self.aj.kind, "squared": self.aj.squared},
            "bj": {"kind": self.bj.kind, "squared": self.bj.squared},
            "valid": self.valid,
            "on_boundary": self.on_boundary,
        }


def validate_configuration(
    cfg: JammingConfiguration, tol: float | None = None
) -> ConfigurationValidation:
    if tol is None:
        tol = default_tol()
    ab = interval(cfg.a, cfg.b, tol=tol)
    aj = interval(cfg.a, cfg.j, tol=tol)
    bj = interval(cfg.b, cfg.j, tol=tol)
    valid = all(iv.kind == SPACELIKE for iv in (ab, aj, bj))
    on_boundary = aj.kind == NULL or bj.kind == NULL
    return ConfigurationValidation(ab=ab, aj=aj, bj=bj, valid=valid, on_boundary=on_boundary)


@dataclass(frozen=True)
class BinaryVerdict:
    """Outcome of the cone-containment check.

    ``margin`` is the minimum containment slack (t - j_t) - |x - j| over the
    critical set, measured in the canonical frame where the measurement
    events sit at (-1, 0...; 0) and (+1, 0...; 0). ``witness`` is a point of
    the cone overlap outside the jammer's cone (original coordinates) when
    the condition fails.
    """

    holds: bool
    margin: float
    witness: Event | None = None

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "margin": self.margin,
            "witness": None if self.witness is None else self.witness.to_json(),
        }


def _ridge_slack(t: float, j1: float, wnorm: float, jt: float) -> float:
    """Containment slack of the worst cone-surface-intersection point at time t.

    The intersection of the two cone surfaces at canonical time t >= 1 is a
    sphere of radius sqrt(t^2 - 1) in the subspace orthogonal to the
    measurement axis; the farthest point from the jammer's spatial position
    (axis offset j1, orthogonal offset wnorm) sits opposite its orthogonal
    component. Written in a form stable for very large t.
    """
    r = math.sqrt((t - 1.0) * (t + 1.0))
    u = r + wnorm
    dd = math.hypot(j1, u)
    tail = 0.0 if j1 == 0.0 else (j1 * j1) / (dd + u)
    return 1.0 / (t + r) - jt - wnorm - tail


def _ridge_slack_vec(ts: np.ndarray, j1: float, wnorm: float, jt: float) -> np.ndarray:
    r = np.sqrt((ts - 1.0) * (ts + 1.0))
    u = r + wnorm
    dd = np.hypot(j1, u)
    with np.errstate(divide="ignore", invalid="ignore"):
        tail = np.where(dd + u > 0.0, (j1 * j1) / (dd + u), 0.0)
    return 1.0 / (ts + r) - jt - wnorm - tail


def _golden_min(f, lo: float, hi: float, max_iter: int = 120):
    """Golden-section minimum of f on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= 1e-9 * (1.0 + abs(a)):
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


_RIDGE_T_MAX = 1e12
_RIDGE_GRID_POINTS = 480
_ridge_grid_cache: np.ndarray | None = None


def _ridge_grid() -> np.ndarray:
    global _ridge_grid_cache
    if _ridge_grid_cache is None:
        offsets = np.geomspace(1e-12, _RIDGE_T_MAX - 1.0, _RIDGE_GRID_POINTS)
        grid = np.concatenate(([1.0], 1.0 + offsets))
        grid.setflags(write=False)
        _ridge_grid_cache = grid
    return _ridge_grid_cache


def _is_canonical_pair(a: Event, b: Event) -> bool:
    # exact equality: the fast path must be bit-identical to canonicalizing
    return (
        a.t == 0.0
        and b.t == 0.0
        and a.x[0] == -1.0
        and b.x[0] == 1.0
        and all(c == 0.0 for c in a.x[1:])
        and all(c == 0.0 for c in b.x[1:])
    )


def binary_condition(cfg: JammingConfiguration, tol: float | None = None) -> BinaryVerdict:
    """Decide whether the overlap of the forward cones of a and b lies
    within the forward cone of j (closed sets).

    The pair (a, b) is mapped to the canonical frame and j transformed
    along. In one space dimension the overlap is the forward cone with
    apex (0; 1) and containment reduces to the apex slack. In d >= 2 the
    slack is minimized over the cone-surface intersection: a bracketing
    grid on t plus golden-section refinement, with the t -> infinity limit
    -(j_t + |orthogonal offset|) included analytically so the asymptotic
    extremal case is decided exactly.
    """
    if tol is None:
        tol = default_tol()
    val = validate_configuration(cfg, tol=tol)
    if not val.valid:
        raise ValueError(
            "binary condition requires mutually spacelike a, b, j; got "
            f"ab={val.ab.kind}, aj={val.aj.kind}, bj={val.bj.kind}"
        )
    if _is_canonical_pair(cfg.a, cfg.b):
        fm = None
        jc = cfg.j
    else:
        fm, _, _ = canonicalize_pair(cfg.a, cfg.b, tol=tol)
        jc = fm.apply(cfg.j)
    j1 = jc.x[0]
    w = np.asarray(jc.x[1:], dtype=float)
    wnorm = float(np.linalg.norm(w)) if w.size else 0.0
    jt = jc.t

    if cfg.d == 1:
        margin = _ridge_slack(1.0, j1, 0.0, jt)
        witness_t = 1.0
    else:
        ts = _ridge_grid()
        slacks = _ridge_slack_vec(ts, j1, wnorm, jt)
        i = int(np.argmin(slacks))
        lo = ts[max(i - 1, 0)]
        hi = ts[min(i + 1, len(ts) - 1)]
        _, refined = _golden_min(lambda t: _ridge_slack(t, j1, wnorm, jt), lo, hi)
        finite_min = min(float(slacks[i]), refined)
        asymptote = -(jt + wnorm)
        margin = min(finite_min, asymptote) + 0.0  # normalize -0.0
        below = np.nonzero(slacks <= -tol)[0]
        witness_t = float(ts[below[0]]) if below.size else float(ts[i])

    if margin >= -tol:
        return BinaryVerdict(holds=True, margin=margin)

    # witness: worst intersection-surface point at witness_t, mapped back
    r = math.sqrt((witness_t - 1.0) * (witness_t + 1.0))
    if cfg.d == 1:
        spatial = (0.0,)
    else:
        if wnorm > 0.0:
            direction = -w / wnorm
        else:
            direction = np.zeros(cfg.d - 1)
            direction[0] = 1.0
        spatial = (0.0, *(r * direction))
    witness = Event(spatial, witness_t)
    if fm is not None:
        witness = fm.apply_inverse(witness)
    return BinaryVerdict(holds=False, margin=margin, witness=witness)


@dataclass(frozen=True)
class LatestJammerResult:
    """Supremum of valid jammer times at a fixed spatial position."""

    time: float
    attained: bool
    d: int
    position: tuple[float, ...]

    def to_json(self) -> dict:
        return {
            "time": self.time,
            "attained": self.attained,
            "d": self.d,
            "position": list(self.position),
        }


def latest_jammer_time(
    d: int,
    position=None,
    bracket: tuple[float, float] = (-3.0, 3.0),
    resolution: float = 1e-9,
    tol: float | None = None,
) -> LatestJammerResult:
    """Latest jammer time consistent with validity and the binary condition.

    Measurement events are fixed at the canonical (-1, 0...; 0) and
    (+1, 0...; 0); the jammer sits at ``position`` (default: the spatial
    midpoint). The supremum over j_t is located by a coarse scan of the
    bracket followed by bisection down to ``resolution``. Attainment is
    evaluated at the supremum rounded to the scan resolution: in d = 1 the
    extremal time 1 is excluded (the jammer would be null-separated from
    both measurements), while in d >= 2 the extremal time 0 satisfies the
    closed-cone containment and is reported as attained.
    """
    if tol is None:
        tol = default_tol()
    if position is None:
        position = (0.0,) * d
    position = tuple(float(p) for p in position)
    if len(position) != d:
        raise ValueError(f"position has dimension {len(position)}, expected {d}")
    a = Event((-1.0,) + (0.0,) * (d - 1), 0.0)
    b = Event((+1.0,) + (0.0,) * (d - 1), 0.0)

    def ok(jt: float) -> bool:
        cfg = JammingConfiguration(a=a, b=b, j=Event(position, jt))
        if not validate_configuration(cfg, tol=tol).valid:
            return False
        return binary_condition(cfg, tol=tol).holds

    lo_b, hi_b = bracket
    grid = np.arange(lo_b, hi_b + 5e-3, 0.01)
    ok_idx = None
    for i in range(len(grid) - 1, -1, -1):
        if ok(float(grid[i])):
            ok_idx = i
            break
    if ok_idx is None:
        raise ValueError(f"no valid jammer time in bracket {bracket} at {position}")
    lo = float(grid[ok_idx])
    if ok_idx == len(grid) - 1:
        return LatestJammerResult(time=lo, attained=True, d=d, position=position)
    hi = float(grid[ok_idx + 1])
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    sup = 0.5 * (lo + hi)
    attained = ok(round(sup, 8))
    return LatestJammerResult(time=sup, attained=attained, d=d, position=position)


# --------------------------------------------------------------------------
# Action on boxes


def apply_jamming(box: NoSignallingBox, strength: float = 1.0) -> NoSignallingBox:
    """Replace correlations by the product of the single-party marginals.

    Marginals are preserved exactly per setting pair, so the unary condition
    holds by construction, and the fully jammed box is a product box with
    |CHSH| <= 2. ``strength`` mixes the jammed box with the original
    (1 = full jamming). The jammer gets no access to outcomes, so selective
    jamming is impossible by construction.
    """
    if not 0.0 <= strength <= 1.0:
        raise ValueError(f"strength must lie in [0, 1], got {strength}")
    probs = np.empty((2, 2, 2, 2))
    for x in (0, 1):
        for y in (0, 1):
            probs[x, y] = np.outer(box.marginal_a(x, y), box.marginal_b(x, y))
    mixed = strength * probs + (1.0 - strength) * box.probs
    return NoSignallingBox(mixed)


@dataclass(frozen=True)
class UnaryReport:
    holds: bool
    max_deviation: float
    tol: float

    def to_json(self) -> dict:
        return {"holds": self.holds, "max_deviation": self.max_deviation, "tol": self.tol}


def check_unary(
    original: NoSignallingBox, jammed: NoSignallingBox, tol: float = PROB_TOL
) -> UnaryReport:
    """No single-party statistic may reveal jamming: compare all marginals."""
    dev = 0.0
    for x in (0, 1):
        for y in (0, 1):
            dev = max(dev, float(np.max(np.abs(original.marginal_a(x, y) - jammed.marginal_a(x, y)))))
            dev = max(dev, float(np.max(np.abs(original.marginal_b(x, y) - jammed.marginal_b(x, y)))))
    return UnaryReport(holds=dev <= tol, max_deviation=dev, tol=tol)


# --------------------------------------------------------------------------
# Multi-jammer scenarios


@dataclass(frozen=True)
class JamScenario:
    configurations: tuple[JammingConfiguration, ...]

    def __post_init__(self):
        if not self.configurations:
            raise ValueError("scenario needs at least one configuration")
        object.__setattr__(self, "configurations", tuple(self.configurations))
        dims = {c.d for c in self.configurations}
        if len(dims) != 1:
            raise ValueError(f"configurations have mismatched dimensions: {sorted(dims)}")

    @property
    def d(self) -> int:
        return self.configurations[0].d

    def to_json(self) -> list:
        return [c.to_json() for c in self.configurations]

    @classmethod
    def from_json(cls, data) -> "JamScenario":
        return cls(tuple(JammingConfiguration.from_json(item) for item in data))


@dataclass(frozen=True)
class LoopReport:
    acyclic: bool
    cycle: tuple[int, ...] | None
    edges: tuple[tuple[int, int], ...]

    def to_json(self) -> dict:
        return {
            "acyclic": self.acyclic,
            "cycle": None if self.cycle is None else list(self.cycle),
            "edges": [list(e) for e in self.edges],
        }


def influence_edges(scenario: JamScenario, tol: float | None = None) -> list[tuple[int, int]]:
    """Edge i -> k iff jammer k sits in the closed cone overlap of pair i.

    That overlap is the only region where configuration i's effect is
    readable, so it is the weakest relation under which one jamming event
    can influence another.
    """
    if tol is None:
        tol = default_tol()
    edges = []
    cones = [
        (LightCone(c.a, FUTURE), LightCone(c.b, FUTURE)) for c in scenario.configurations
    ]
    for i, (cone_a, cone_b) in enumerate(cones):
        for k, cfg_k in enumerate(scenario.configurations):
            if i == k:
                continue
            if (
                cone_slack(cfg_k.j, cone_a) >= -tol
                and cone_slack(cfg_k.j, cone_b) >= -tol
            ):
                edges.append((i, k))
    return edges


def _find_cycle(n: int, adj: list[list[int]]) -> tuple[int, ...] | None:
    color = [0] * n  # 0 white, 1 gray, 2 black
    parent: dict[int, int] = {}
    for s in range(n):
        if color[s]:
            continue
        color[s] = 1
        stack = [(s, iter(adj[s]))]
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[node] = 2
                stack.pop()
                continue
            if color[nxt] == 0:
                color[nxt] = 1
                parent[nxt] = node
                stack.append((nxt, iter(adj[nxt])))
            elif color[nxt] == 1:
                path = [node]
                cur = node
                while cur != nxt:
                    cur = parent[cur]
                    path.append(cur)
                return tuple(reversed(path))
    return None


def detect_causal_loops(scenario: JamScenario, tol: float | None = None) -> LoopReport:
    """Cycle detection on the influence graph of a multi-jammer scenario.

    Raises if any configuration is not mutually spacelike. When every
    configuration satisfies the binary condition, each edge target lies in
    the strict causal future of the source jammer, so the graph embeds in a
    partial order and no cycle can occur; this function verifies that claim
    mechanically for concrete scenarios.
    """
    if tol is None:
        tol = default_tol()
    for idx, cfg in enumerate(scenario.configurations):
        if not validate_configuration(cfg, tol=tol).valid:
            raise ValueError(f"configuration {idx} is not mutually spacelike")
    edges = influence_edges(scenario, tol=tol)
    n = len(scenario.configurations)
    adj: list[list[int]] = [[] for _ in range(n)]
    for i, k in edges:
        adj[i].append(k)
    cycle = _find_cycle(n, adj)
    return LoopReport(acyclic=cycle is None, cycle=cycle, edges=tuple(edges))
