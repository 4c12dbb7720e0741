"""No-signalling boxes and correlation-function models for two-party,
binary-setting, binary-outcome measurements.

Outcomes are encoded as +1/-1 (index 0 is +1). A box stores the joint
distribution P(a, b | x, y) for settings x, y in {0, 1}; the four CHSH
correlations are E(x, y) = sum_ab a*b*P(a, b | x, y) and the CHSH sum is

    E(0,0) + E(0,1) + E(1,0) - E(1,1)

bounded by 2 for local deterministic strategies, 2*sqrt(2) for the singlet
correlation E(theta) = -cos(theta), and 4 algebraically. The superquantum
model reaches 4 while keeping uniform single-party marginals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

PROB_TOL = 1e-12
CLASSICAL_BOUND = 2.0
QUANTUM_BOUND = 2.0 * math.sqrt(2.0)
ALGEBRAIC_BOUND = 4.0

OUTCOMES = (+1, -1)  # outcome value at index 0 and 1


def reduce_angle(theta: float) -> float:
    """Fold any finite angle into [0, pi] using E(t) = E(-t) = E(2*pi - t)."""
    theta = float(theta)
    if not math.isfinite(theta):
        raise ValueError(f"angle must be finite, got {theta}")
    t = math.fmod(abs(theta), 2.0 * math.pi)
    if t > math.pi:
        t = 2.0 * math.pi - t
    return t


class NoSignallingBox:
    """Joint outcome table P(a, b | x, y), indexed probs[x, y, ia, ib].

    Construction validates nonnegativity and per-setting normalization.
    The no-signalling property itself is checked, never assumed; see
    :func:`check_no_signalling`.
    """

    __slots__ = ("probs",)

    def __init__(self, probs):
        arr = np.array(probs, dtype=float)
        if arr.shape != (2, 2, 2, 2):
            raise ValueError(f"box table must have shape (2,2,2,2), got {arr.shape}")
        if np.any(arr < -PROB_TOL):
            raise ValueError("box has negative probabilities")
        sums = arr.sum(axis=(2, 3))
        if np.any(np.abs(sums - 1.0) > PROB_TOL):
            raise ValueError(f"box not normalized per setting pair: sums {sums}")
        arr = np.clip(arr, 0.0, None)
        arr.setflags(write=False)
        self.probs = arr

    def correlation(self, x: int, y: int) -> float:
        p = self.probs[x, y]
        return float(p[0, 0] + p[1, 1] - p[0, 1] - p[1, 0])

    def correlations(self) -> np.ndarray:
        return np.array([[self.correlation(x, y) for y in (0, 1)] for x in (0, 1)])

    def marginal_a(self, x: int, y: int) -> np.ndarray:
        """Alice's outcome distribution (P(+1), P(-1)) for settings (x, y)."""
        return self.probs[x, y].sum(axis=1)

    def marginal_b(self, x: int, y: int) -> np.ndarray:
        return self.probs[x, y].sum(axis=0)

    def to_json(self) -> dict:
        """Index order (x, y, a, b), outcome +1 before -1."""
        return {"P": self.probs.tolist()}

    @classmethod
    def from_json(cls, data) -> "NoSignallingBox":
        if "P" not in data:
            raise ValueError("box JSON must contain key 'P'")
        return cls(data["P"])

    def __repr__(self):
        e = self.correlations()
        return f"NoSignallingBox(correlations={e.tolist()})"


def box_from_correlation(e) -> NoSignallingBox:
    """Lift correlations to a box with uniform single-party marginals.

    ``e`` is a scalar (same correlation for all setting pairs) or a 2x2
    array indexed [x][y]. Equal outcomes get probability (1+E)/4 each and
    unequal ones (1-E)/4, so each party sees 1/2 for either outcome and the
    result is no-signalling by construction.
    """
    arr = np.asarray(e, dtype=float)
    if arr.ndim == 0:
        arr = np.full((2, 2), float(arr))
    if arr.shape != (2, 2):
        raise ValueError(f"need a scalar or 2x2 correlations, got shape {arr.shape}")
    if np.any(np.abs(arr) > 1.0 + PROB_TOL):
        raise ValueError(f"correlations must lie in [-1, 1], got {arr.tolist()}")
    probs = np.empty((2, 2, 2, 2))
    for x in (0, 1):
        for y in (0, 1):
            same = (1.0 + arr[x, y]) / 4.0
            diff = (1.0 - arr[x, y]) / 4.0
            probs[x, y] = [[same, diff], [diff, same]]
    return NoSignallingBox(probs)


def product_box(p_plus_a, p_plus_b) -> NoSignallingBox:
    """Uncorrelated box from per-setting P(outcome = +1) for each party."""
    pa = [np.array([p, 1.0 - p]) for p in map(float, p_plus_a)]
    pb = [np.array([p, 1.0 - p]) for p in map(float, p_plus_b)]
    probs = np.empty((2, 2, 2, 2))
    for x in (0, 1):
        for y in (0, 1):
            probs[x, y] = np.outer(pa[x], pb[y])
    return NoSignallingBox(probs)


@dataclass(frozen=True)
class NoSignallingReport:
    passed: bool
    max_deviation: float
    tol: float

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "max_deviation": self.max_deviation,
            "tol": self.tol,
        }


def check_no_signalling(box: NoSignallingBox, tol: float = PROB_TOL) -> NoSignallingReport:
    """Largest dependence of one party's marginals on the other's setting."""
    dev = 0.0
    for x in (0, 1):
        dev = max(dev, float(np.max(np.abs(box.marginal_a(x, 0) - box.marginal_a(x, 1)))))
    for y in (0, 1):
        dev = max(dev, float(np.max(np.abs(box.marginal_b(0, y) - box.marginal_b(1, y)))))
    return NoSignallingReport(passed=dev <= tol, max_deviation=dev, tol=tol)


@dataclass(frozen=True)
class ChshResult:
    """CHSH value with its four-term breakdown E(A,B), E(A,B'), E(A',B), E(A',B')."""

    value: float
    terms: tuple[float, float, float, float]
    angles: tuple[float, float, float, float] | None = None

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "terms": list(self.terms),
            "angles": None if self.angles is None else list(self.angles),
        }


def chsh(box: NoSignallingBox) -> ChshResult:
    e00 = box.correlation(0, 0)
    e01 = box.correlation(0, 1)
    e10 = box.correlation(1, 0)
    e11 = box.correlation(1, 1)
    return ChshResult(value=e00 + e01 + e10 - e11, terms=(e00, e01, e10, e11))


def classify_chsh(value: float, tol: float = 1e-6) -> str:
    """Place |value| against the classical, quantum and algebraic bounds."""
    a = abs(value)
    if a <= CLASSICAL_BOUND + tol:
        return "classical"
    if abs(a - QUANTUM_BOUND) <= tol:
        return "quantum-maximal"
    if a < QUANTUM_BOUND:
        return "quantum"
    if a <= ALGEBRAIC_BOUND + tol:
        return "superquantum"
    return "exceeds-algebraic-bound"


# --------------------------------------------------------------------------
# Correlation models E(theta)


class CorrelationModel:
    """A correlation function of the relative measurement angle."""

    kind = "abstract"

    def correlation(self, theta: float) -> float:
        return self._corr(reduce_angle(theta))

    def _corr(self, theta: float) -> float:
        raise NotImplementedError

    def to_json(self) -> dict:
        return {"kind": self.kind}


class SingletModel(CorrelationModel):
    """Two spin-1/2 particles in the singlet state: E(theta) = -cos(theta)."""

    kind = "singlet"

    def _corr(self, theta: float) -> float:
        return -math.cos(theta)


def _default_interpolant(theta: float) -> float:
    # sin(2*theta) == cos(2*theta - pi/2): strictly decreasing on
    # (pi/4, 3*pi/4), hits +1 and -1 at the endpoints, and is odd about
    # theta = pi/2 so the antisymmetry E(pi - theta) = -E(theta) is exact.
    return math.sin(2.0 * theta)


class SuperquantumModel(CorrelationModel):
    """Maximally nonlocal no-signalling correlation family.

    E(theta) = 1 up to pi/4, -1 from 3*pi/4, and a smooth strictly monotone
    interpolant in between. The interpolant is pluggable; the default keeps
    the antisymmetry E(pi - theta) = -E(theta) exactly.
    """

    kind = "superquantum"

    def __init__(self, interpolant: Callable[[float], float] | None = None):
        self.interpolant = interpolant or _default_interpolant

    def _corr(self, theta: float) -> float:
        if theta <= math.pi / 4.0:
            return 1.0
        if theta >= 3.0 * math.pi / 4.0:
            return -1.0
        return self.interpolant(theta)


class DeterministicModel(CorrelationModel):
    """Local deterministic strategy, id 0..15.

    The id encodes fixed outcomes (msb to lsb): Alice at setting 0 and 1,
    Bob at setting 0 and 1, with bit 0 meaning outcome +1. As a function of
    relative angle the strategy contributes a constant correlation (taken as
    the product of the two setting-0 outcomes); its full per-setting
    structure lives in :func:`enumerate_deterministic`.
    """

    kind = "classical"

    def __init__(self, strategy_id: int):
        if not 0 <= int(strategy_id) <= 15:
            raise ValueError(f"strategy id must be in 0..15, got {strategy_id}")
        self.strategy_id = int(strategy_id)
        bits = [(self.strategy_id >> k) & 1 for k in (3, 2, 1, 0)]
        self.alice = (OUTCOMES[bits[0]], OUTCOMES[bits[1]])
        self.bob = (OUTCOMES[bits[2]], OUTCOMES[bits[3]])

    def _corr(self, theta: float) -> float:
        return float(self.alice[0] * self.bob[0])

    def to_json(self) -> dict:
        return {"kind": self.kind, "strategy": self.strategy_id}


class TableModel(CorrelationModel):
    """Custom correlation model, linearly interpolated from (theta, E) pairs."""

    kind = "table"

    def __init__(self, thetas, values):
        th = np.asarray(thetas, dtype=float)
        va = np.asarray(values, dtype=float)
        if th.ndim != 1 or th.shape != va.shape or th.size < 2:
            raise ValueError("need matching 1-d theta/value arrays with >= 2 points")
        if np.any(np.diff(th) <= 0) or th[0] < 0 or th[-1] > math.pi:
            raise ValueError("thetas must be strictly increasing within [0, pi]")
        if np.any(np.abs(va) > 1.0 + PROB_TOL):
            raise ValueError("correlation values must lie in [-1, 1]")
        self.thetas = th
        self.values = va

    def _corr(self, theta: float) -> float:
        return float(np.interp(theta, self.thetas, self.values))

    def to_json(self) -> dict:
        return {"kind": self.kind, "thetas": self.thetas.tolist(), "values": self.values.tolist()}


def eval_correlation(model: CorrelationModel, theta: float) -> float:
    """Evaluate E(theta); angles outside [0, pi] are folded by symmetry."""
    return model.correlation(theta)


def model_from_json(data) -> CorrelationModel:
    kind = data.get("kind")
    if kind == "singlet":
        return SingletModel()
    if kind == "superquantum":
        return SuperquantumModel()
    if kind == "classical":
        return DeterministicModel(data["strategy"])
    if kind == "table":
        return TableModel(data["thetas"], data["values"])
    raise ValueError(f"unknown model kind {kind!r}")


# Measurement axes a, a', b, b' for chsh_at_angles. The "eq2" preset is the
# coplanar configuration a' = 0, b = pi/4, a = pi/2, b' = 3*pi/4 (successive
# 45 degree separations), which drives the superquantum model to the
# algebraic maximum 3*E(pi/4) - E(3*pi/4) = 4.
ANGLE_PRESETS: dict[str, tuple[float, float, float, float]] = {
    "eq2": (math.pi / 2.0, 0.0, math.pi / 4.0, 3.0 * math.pi / 4.0),
    "singlet-optimal": (0.0, math.pi / 2.0, math.pi / 4.0, -math.pi / 4.0),
}


def chsh_at_angles(
    model: CorrelationModel, a: float, a_prime: float, b: float, b_prime: float
) -> ChshResult:
    """CHSH sum for measurements along four axes, via relative angles."""
    e_ab = model.correlation(a - b)
    e_abp = model.correlation(a - b_prime)
    e_apb = model.correlation(a_prime - b)
    e_apbp = model.correlation(a_prime - b_prime)
    return ChshResult(
        value=e_ab + e_abp + e_apb - e_apbp,
        terms=(e_ab, e_abp, e_apb, e_apbp),
        angles=(a, a_prime, b, b_prime),
    )


def box_from_model(
    model: CorrelationModel, a: float, a_prime: float, b: float, b_prime: float
) -> NoSignallingBox:
    """Box whose setting pairs realize the model correlations at four axes."""
    alice = (a, a_prime)
    bob = (b, b_prime)
    e = [[model.correlation(alice[x] - bob[y]) for y in (0, 1)] for x in (0, 1)]
    return box_from_correlation(e)


@dataclass(frozen=True)
class DeterministicStrategy:
    strategy_id: int
    alice: tuple[int, int]  # outcome per Alice setting
    bob: tuple[int, int]  # outcome per Bob setting
    box: NoSignallingBox
    result: ChshResult


def enumerate_deterministic() -> list[DeterministicStrategy]:
    """All 16 local deterministic strategies with their boxes and CHSH values."""
    out = []
    for sid in range(16):
        model = DeterministicModel(sid)
        probs = np.zeros((2, 2, 2, 2))
        for x in (0, 1):
            for y in (0, 1):
                ia = OUTCOMES.index(model.alice[x])
                ib = OUTCOMES.index(model.bob[y])
                probs[x, y, ia, ib] = 1.0
        box = NoSignallingBox(probs)
        out.append(
            DeterministicStrategy(
                strategy_id=sid,
                alice=model.alice,
                bob=model.bob,
                box=box,
                result=chsh(box),
            )
        )
    return out


@dataclass(frozen=True)
class ChshOptimum:
    """Best CHSH magnitude found by search: a heuristic lower bound on the
    true maximum (exact for the built-in models at their known optima)."""

    angles: tuple[float, float, float, float]
    value: float  # max |CHSH| found
    result: ChshResult  # signed breakdown at those angles


def maximize_chsh(
    model: CorrelationModel,
    coarse_step: float = math.pi / 180.0,
    final_step: float = 1e-8,
    extra_starts: int = 4,
    seed: int = 0,
) -> ChshOptimum:
    """Maximize |CHSH| over the four measurement angles.

    Per-coordinate exhaustive search at ``coarse_step``, then shrinking-step
    coordinate descent until the step drops below ``final_step``. Runs from
    the known-good presets plus a few seeded random starts so custom models
    are not at the mercy of a single basin.
    """

    def objective(angles):
        return abs(chsh_at_angles(model, *angles).value)

    two_pi = 2.0 * math.pi
    starts = [ANGLE_PRESETS["eq2"], ANGLE_PRESETS["singlet-optimal"], (0.0,) * 4]
    rng = np.random.default_rng(seed)
    starts += [tuple(rng.uniform(0.0, two_pi, size=4)) for _ in range(extra_starts)]

    best_angles = starts[0]
    best_val = objective(best_angles)
    line = np.arange(0.0, two_pi, coarse_step)
    for start in starts:
        angles = list(start)
        val = objective(angles)
        # coarse per-coordinate sweeps
        for _ in range(4):
            changed = False
            for i in range(4):
                orig = angles[i]
                for cand in line:
                    angles[i] = cand
                    v = objective(angles)
                    if v > val:
                        val = v
                        orig = cand
                        changed = True
                angles[i] = orig
            if not changed:
                break
        # shrinking-step refinement
        step = coarse_step
        while step >= final_step:
            improved = False
            for i in range(4):
                for delta in (step, -step):
                    trial = angles[i] + delta
                    angles[i] = trial
                    v = objective(angles)
                    if v > val:
                        val = v
                        improved = True
                    else:
                        angles[i] = trial - delta
            if not improved:
                step /= 2.0
        if val > best_val:
            best_val = val
            best_angles = tuple(angles)
    return ChshOptimum(
        angles=tuple(best_angles),
        value=best_val,
        result=chsh_at_angles(model, *best_angles),
    )


# --------------------------------------------------------------------------
# Finite statistics


@dataclass(frozen=True)
class SampleReport:
    """Seeded Monte Carlo estimate of the CHSH sum from per-pair counts."""

    n_per_pair: int
    seed: int
    counts: tuple  # counts[x][y][ia][ib], each pair summing to n_per_pair
    correlations: tuple  # empirical E(x, y)
    chsh_estimate: float
    std_error: float

    def to_json(self) -> dict:
        return {
            "n_per_pair": self.n_per_pair,
            "seed": self.seed,
            "counts": [[list(map(list, self.counts[x][y])) for y in (0, 1)] for x in (0, 1)],
            "correlations": [list(self.correlations[x]) for x in (0, 1)],
            "chsh_estimate": self.chsh_estimate,
            "std_error": self.std_error,
        }


def sample_outcomes(box: NoSignallingBox, n: int, seed: int) -> SampleReport:
    """Draw n outcome pairs per setting pair and estimate the CHSH sum.

    Uses numpy's PCG64 generator, so reports are reproducible across
    platforms for a fixed seed. The standard error combines the binomial
    variance of each correlation term.
    """
    if n < 1:
        raise ValueError(f"sample size must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    counts = np.empty((2, 2, 2, 2), dtype=np.int64)
    for x in (0, 1):
        for y in (0, 1):
            counts[x, y] = rng.multinomial(n, box.probs[x, y].ravel()).reshape(2, 2)
    corr = np.empty((2, 2))
    var = np.empty((2, 2))
    for x in (0, 1):
        for y in (0, 1):
            c = counts[x, y]
            p_same = (c[0, 0] + c[1, 1]) / n
            corr[x, y] = 2.0 * p_same - 1.0
            var[x, y] = 4.0 * p_same * (1.0 - p_same) / n
    estimate = corr[0, 0] + corr[0, 1] + corr[1, 0] - corr[1, 1]
    return SampleReport(
        n_per_pair=int(n),
        seed=int(seed),
        counts=tuple(
            tuple(tuple(map(tuple, counts[x, y].tolist())) for y in (0, 1)) for x in (0, 1)
        ),
        correlations=tuple(tuple(corr[x].tolist()) for x in (0, 1)),
        chsh_estimate=float(estimate),
        std_error=float(math.sqrt(var.sum())),
    )


# --------------------------------------------------------------------------
# Built-in boxes


def _builtin_factories() -> dict[str, Callable[[], NoSignallingBox]]:
    eq2 = ANGLE_PRESETS["eq2"]
    opt = ANGLE_PRESETS["singlet-optimal"]
    return {
        "uniform": lambda: box_from_correlation(0.0),
        "perfect": lambda: box_from_correlation(1.0),
        "anticorrelated": lambda: box_from_correlation(-1.0),
        "superquantum-eq2": lambda: box_from_model(SuperquantumModel(), *eq2),
        "singlet-eq2": lambda: box_from_model(SingletModel(), *eq2),
        "singlet-optimal": lambda: box_from_model(SingletModel(), *opt),
    }


BUILTIN_BOXES = _builtin_factories()


def builtin_box(name: str) -> NoSignallingBox:
    try:
        return BUILTIN_BOXES[name]()
    except KeyError:
        raise ValueError(
            f"unknown builtin box {name!r}; available: {sorted(BUILTIN_BOXES)}"
        ) from None
