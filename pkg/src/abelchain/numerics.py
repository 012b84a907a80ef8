"""Numerical integration of the hierarchy systems and drift of the exact integrals."""

from __future__ import annotations

import csv
import enum
import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .dynamics import chain_polynomials
from .hierarchy import OperatorKind, force
from .integrals import j_integrals
from .polycore import DEFAULT_MAX_ORDER, JetPolynomial, K, T, X, is_jet, jet_index


class ImmediateSingularity(ValueError):
    pass


class Method(str, enum.Enum):
    RK4 = "rk4"
    RKF45 = "rkf45"


class _NotApplicable:
    def __repr__(self):
        return "NOT_APPLICABLE"


NOT_APPLICABLE = _NotApplicable()


@dataclass(frozen=True)
class IntegratorConfig:
    method: Method = Method.RKF45
    step: float = 0.01
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    t_span: tuple = (0.0, 1.0)
    singular_guard: float = 1e-6
    blowup_norm: float = 1e12
    max_steps: int = 1_000_000

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        if self.step <= 0:
            raise ValueError("step must be positive")
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        t0, t1 = self.t_span
        if not t1 > t0:
            raise ValueError("t_span must satisfy t1 > t0")


@dataclass
class Trajectory:
    kind: OperatorKind
    n: int
    k_value: float
    t: np.ndarray
    states: np.ndarray
    truncated: bool = False
    reason: str | None = None

    def __post_init__(self):
        if len(self.t) < 2:
            raise ValueError("trajectory needs at least two samples")
        if np.any(np.diff(self.t) <= 0):
            raise ValueError("sample times must be strictly increasing")

    def to_csv(self, path) -> None:
        path = Path(path)
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t"] + [f"x{i}" for i in range(1, self.n + 1)])
            for t, row in zip(self.t, self.states):
                writer.writerow([repr(float(t))] + [repr(float(v)) for v in row])


def compile_polynomial(p: JetPolynomial) -> Callable:
    """Float evaluator ``f(t, k, xs)`` generated from the term list."""
    terms = []
    for mono, c in p:
        factors = [repr(float(c))]
        for var, e in mono:
            if var == T:
                name = "t"
            elif var == K:
                name = "k"
            else:
                name = f"xs[{jet_index(var) - 1}]"
            factors.append(name if e == 1 else f"{name}**{e}")
        terms.append("*".join(factors))
    src = "lambda t, k, xs: " + (" + ".join(terms) if terms else "0.0")
    return eval(compile(src, "<polynomial>", "eval"), {})


@lru_cache(maxsize=None)
def _system(kind: OperatorKind, n: int):
    top = compile_polynomial(force(kind, n))
    guard = compile_polynomial(chain_polynomials(kind, n)[-1])

    def rhs(t, y, k):
        out = np.empty(n)
        out[:-1] = y[1:]
        out[-1] = top(t, k, y)
        return out

    return rhs, guard


def _guard_reason(y, t, k, guard, cfg: IntegratorConfig) -> str | None:
    if not np.all(np.isfinite(y)) or np.max(np.abs(y)) > cfg.blowup_norm:
        return "blow-up"
    if abs(guard(t, k, y)) < cfg.singular_guard:
        return "singular-surface"
    return None


def _rk4_step(rhs, t, y, h, k):
    k1 = rhs(t, y, k)
    k2 = rhs(t + h / 2, y + h / 2 * k1, k)
    k3 = rhs(t + h / 2, y + h / 2 * k2, k)
    k4 = rhs(t + h, y + h * k3, k)
    return y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


# Fehlberg 4(5) tableau
_C = (0.0, 1 / 4, 3 / 8, 12 / 13, 1.0, 1 / 2)
_A = (
    (),
    (1 / 4,),
    (3 / 32, 9 / 32),
    (1932 / 2197, -7200 / 2197, 7296 / 2197),
    (439 / 216, -8.0, 3680 / 513, -845 / 4104),
    (-8 / 27, 2.0, -3544 / 2565, 1859 / 4104, -11 / 40),
)
_B4 = np.array([25 / 216, 0.0, 1408 / 2565, 2197 / 4104, -1 / 5, 0.0])
_B5 = np.array([16 / 135, 0.0, 6656 / 12825, 28561 / 56430, -9 / 50, 2 / 55])
_ERR = np.array([1 / 360, 0.0, -128 / 4275, -2197 / 75240, 1 / 50, 2 / 55])


def _rkf45_step(rhs, t, y, h, k):
    # local extrapolation: advance with the 5th-order weights, the embedded
    # 4th-order solution only feeds the error estimate
    stages = []
    for c, row in zip(_C, _A):
        yi = y + h * sum((a * s for a, s in zip(row, stages)), np.zeros_like(y))
        stages.append(rhs(t + c * h, yi, k))
    ks = np.array(stages)
    return y + h * (_B5 @ ks), h * (_ERR @ ks)


def integrate(
    kind: "OperatorKind | str",
    n: int,
    k: float,
    x0: Sequence[float],
    cfg: IntegratorConfig = IntegratorConfig(),
) -> Trajectory:
    """Solve ``x_i' = x_{i+1}``, ``x_n' = F_n``.

    Stops early, with ``truncated=True``, on the singular surface
    ``|P_{n-1}| < singular_guard`` or when the state norm exceeds
    ``blowup_norm``.
    """
    kind = OperatorKind.parse(kind)
    y = np.asarray(x0, dtype=float)
    if y.shape != (n,):
        raise ValueError(f"initial state must have length {n}")
    if not np.all(np.isfinite(y)):
        raise ValueError("initial state must be finite")
    if n + 1 > DEFAULT_MAX_ORDER:
        raise ValueError(f"order {n} exceeds the jet bound")
    rhs, guard = _system(kind, n)
    t0, t1 = map(float, cfg.t_span)
    k = float(k)
    reason = _guard_reason(y, t0, k, guard, cfg)
    if reason:
        raise ImmediateSingularity(f"initial state violates the {reason} guard")

    ts, ys = [t0], [y.copy()]
    t = t0
    if cfg.method is Method.RK4:
        steps = max(1, round((t1 - t0) / cfg.step))
        h = (t1 - t0) / steps
        for i in range(steps):
            y = _rk4_step(rhs, t, y, h, k)
            t = t0 + (i + 1) * h
            ts.append(t)
            ys.append(y.copy())
            reason = _guard_reason(y, t, k, guard, cfg)
            if reason:
                break
    else:
        h = min(cfg.step, t1 - t0)
        for _ in range(cfg.max_steps):
            if t >= t1:
                break
            h = min(h, t1 - t)
            y_new, err = _rkf45_step(rhs, t, y, h, k)
            scale = cfg.abs_tol + cfg.rel_tol * np.maximum(np.abs(y), np.abs(y_new))
            ratio = float(np.max(np.abs(err) / scale)) if np.all(np.isfinite(err)) else math.inf
            if ratio <= 1.0:
                t = t1 if t1 - (t + h) < 1e-14 * max(1.0, abs(t1)) else t + h
                y = y_new
                ts.append(t)
                ys.append(y.copy())
                reason = _guard_reason(y, t, k, guard, cfg)
                if reason:
                    break
            factor = 5.0 if ratio == 0 else 0.9 * ratio ** -0.2
            h *= min(5.0, max(0.2, factor))
            if h < 1e-14 * max(1.0, abs(t)):
                reason = "step-underflow"
                break
        else:
            reason = "max-steps"
    return Trajectory(kind, n, k, np.array(ts), np.array(ys), bool(reason), reason)


@dataclass
class IntegralDrift:
    name: str
    initial: float
    max_deviation: float
    worst_t: float


@dataclass
class DriftReport:
    kind: str
    n: int
    k_value: float
    samples: int
    truncated: bool
    reason: str | None
    integrals: list = field(default_factory=list)

    @property
    def max_drift(self) -> float:
        return max((d.max_deviation for d in self.integrals), default=0.0)

    def drift(self, name: str) -> float:
        return next(d.max_deviation for d in self.integrals if d.name == name)

    def to_json(self) -> dict:
        return asdict(self)

    def dump(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n")


@lru_cache(maxsize=None)
def _integral_evaluators(kind: OperatorKind, n: int) -> tuple:
    out = []
    if n >= 2:
        for r, integral in enumerate(j_integrals(n, kind), start=1):
            s = integral.as_surface()
            out.append((f"J_t{r}", compile_polynomial(s.numerator), compile_polynomial(s.denominator)))
    if kind is OperatorKind.ABEL and n == 2:
        # E = -(3v + k x^3) / (v + k x^3)^3
        from .lagrangian2 import P1, Q1

        out.append(("E_LA", compile_polynomial(-Q1), compile_polynomial(P1**3)))
    return tuple(out)


def drift_report(traj: Trajectory) -> DriftReport:
    """Maximum deviation of every exact integral from its initial value."""
    report = DriftReport(
        traj.kind.value, traj.n, traj.k_value, len(traj.t), traj.truncated, traj.reason
    )
    for name, num, den in _integral_evaluators(traj.kind, traj.n):
        values = np.array(
            [num(t, traj.k_value, y) / den(t, traj.k_value, y) for t, y in zip(traj.t, traj.states)]
        )
        dev = np.abs(values - values[0])
        worst = int(np.argmax(dev))
        report.integrals.append(
            IntegralDrift(name, float(values[0]), float(dev[worst]), float(traj.t[worst]))
        )
    return report


def random_initial_states(
    kind: "OperatorKind | str",
    n: int,
    k: float,
    count: int,
    seed: int = 0,
    margin: float = 0.1,
) -> np.ndarray:
    """Seeded states uniform in ``[-1, 1]^n`` with ``|P_{n-1}(x0)| >= margin``."""
    kind = OperatorKind.parse(kind)
    _, guard = _system(kind, n)
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        x0 = rng.uniform(-1.0, 1.0, n)
        if abs(guard(0.0, float(k), x0)) >= margin:
            out.append(x0)
    return np.array(out)


def convergence_order(
    kind: "OperatorKind | str",
    n: int,
    k: float,
    x0: Sequence[float],
    base_step: float,
    t1: float = 1.0,
):
    """Observed RK4 order from final-time errors at steps h/2 and h/4
    against an RKF45 reference at tolerance 1e-12."""
    ref_cfg = IntegratorConfig(Method.RKF45, step=base_step / 8, abs_tol=1e-12, rel_tol=1e-12, t_span=(0.0, t1))
    ref = integrate(kind, n, k, x0, ref_cfg)
    if ref.truncated:
        raise ValueError(f"reference run truncated ({ref.reason})")
    errors = []
    for h in (base_step, base_step / 2, base_step / 4):
        run = integrate(kind, n, k, x0, IntegratorConfig(Method.RK4, step=h, t_span=(0.0, t1)))
        if run.truncated:
            raise ValueError(f"RK4 run truncated ({run.reason})")
        errors.append(float(np.max(np.abs(run.states[-1] - ref.states[-1]))))
    if min(errors[1:]) < 1e-11:
        return NOT_APPLICABLE
    return math.log2(errors[1] / errors[2])


def fixed_step_drift(kind, n, k, x0, step, t1=1.0) -> float:
    run = integrate(kind, n, k, x0, IntegratorConfig(Method.RK4, step=step, t_span=(0.0, t1)))
    return drift_report(run).max_drift
