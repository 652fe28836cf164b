"""
Classical_Transform.py (Transformações do Espaço Clássico)

Família de translações dependentes do tempo x_i -> x_i + a_i(t) (eixos 1 e 2):

    a(t) = a cosh(u) + v tau sinh(u) + 2 b tau^2 (cosh(u) - 1) + 6 c tau^3 (sinh(u) - u)

com u = t/tau, e no limite tau -> infinito:

    a(t) = a + v t + b t^2 + c t^3

A lei de Newton transformada ganha a força H_i(t) = F_i + m ä_i(t).
O eixo 3 nunca é transformado.
"""

import dataclasses
from typing import Any, Dict, Tuple

import numpy as np

from deformation import INFINITE_TAU, Tau, format_tau, parse_tau
from dynamics import ForceField, Scenario, Trajectory, Treatment, rk4, uniform_motion
from errors import InvalidArgumentError, UnsupportedOriginError
from utils import ArrayLike, finite_output, require_finite, require_positive, sinh_tail_ratio, sinhc

# Ordem dos coeficientes na serialização (registro plano)
COEFFICIENT_NAMES = ("a1", "v1", "b1", "c1", "a2", "v2", "b2", "c2")


@dataclasses.dataclass(frozen=True)
class TransformFamily:
    """Coeficientes (a, v, b, c) dos eixos 1 e 2, mais tau (ou INFINITE_TAU)."""

    a1: float = 0.0
    v1: float = 0.0
    b1: float = 0.0
    c1: float = 0.0
    a2: float = 0.0
    v2: float = 0.0
    b2: float = 0.0
    c2: float = 0.0
    tau: Tau = INFINITE_TAU

    def __post_init__(self):
        for name in COEFFICIENT_NAMES:
            value = getattr(self, name)
            try:
                value = float(value)
            except (TypeError, ValueError) as e:
                raise InvalidArgumentError(f"coeficiente {name} inválido: {value!r}") from e
            if not np.isfinite(value):
                raise InvalidArgumentError(f"coeficiente {name} deve ser finito")
            object.__setattr__(self, name, value)
        object.__setattr__(self, "tau", parse_tau(self.tau))

    @property
    def is_limit(self) -> bool:
        return self.tau is INFINITE_TAU

    def coefficients(self, axis: int) -> Tuple[float, float, float, float]:
        """(a, v, b, c) do eixo 1 ou 2."""
        if axis == 1:
            return self.a1, self.v1, self.b1, self.c1
        if axis == 2:
            return self.a2, self.v2, self.b2, self.c2
        raise InvalidArgumentError(f"eixo inválido: {axis!r} (somente 1 ou 2; a3(t) = 0)")

    def to_record(self) -> Dict[str, Any]:
        record: Dict[str, Any] = {name: getattr(self, name) for name in COEFFICIENT_NAMES}
        record["tau"] = format_tau(self.tau)
        return record

    @classmethod
    def from_record(cls, record: Dict[str, Any]) -> "TransformFamily":
        values = {name: record.get(name, 0.0) for name in COEFFICIENT_NAMES}
        return cls(**values, tau=record.get("tau", "inf"))


# =============================================================================
# === a(t) E DERIVADAS ===
# =============================================================================
# Como em deformation: tau^n nunca é formado (tau grande estouraria).
#   S = tau sinh(u) = t sinhc(u),  D = 2 tau sinh(u/2) = t sinhc(u/2),
#   2 tau^2 (cosh u - 1) = D^2,  6 tau^3 (sinh u - u) = 6 t^3 sinh_tail_ratio(u, 1)

def _scaled(t: np.ndarray, u: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    return t * sinhc(u), t * sinhc(u / 2.0)


def eval_a(tf: TransformFamily, axis: int, t: ArrayLike) -> ArrayLike:
    """a_i(t) (unidade: comprimento)."""
    a, v, b, c = tf.coefficients(axis)
    require_finite(t, "t")
    t = np.asarray(t, dtype=float)

    if tf.is_limit:
        return finite_output(a + v * t + b * t ** 2 + c * t ** 3, "a")

    T = np.float64(tf.tau)
    with np.errstate(over="ignore", invalid="ignore"):
        u = t / T
        S, D = _scaled(t, u)
        value = (a * np.cosh(u) + v * S
                 + b * D ** 2
                 + 6.0 * c * t ** 3 * sinh_tail_ratio(u, 1))
    return finite_output(value, "a")


def eval_a_dot(tf: TransformFamily, axis: int, t: ArrayLike) -> ArrayLike:
    """Derivada primeira exata da_i/dt."""
    a, v, b, c = tf.coefficients(axis)
    require_finite(t, "t")
    t = np.asarray(t, dtype=float)

    if tf.is_limit:
        return finite_output(v + 2.0 * b * t + 3.0 * c * t ** 2, "a_dot")

    T = np.float64(tf.tau)
    with np.errstate(over="ignore", invalid="ignore"):
        u = t / T
        S, D = _scaled(t, u)
        value = ((a / T) * np.sinh(u) + v * np.cosh(u)
                 + 2.0 * b * S
                 + 3.0 * c * D ** 2)
    return finite_output(value, "a_dot")


def eval_a_ddot(tf: TransformFamily, axis: int, t: ArrayLike) -> ArrayLike:
    """Derivada segunda exata ä_i(t) (a força extra por unidade de massa)."""
    a, v, b, c = tf.coefficients(axis)
    require_finite(t, "t")
    t = np.asarray(t, dtype=float)

    if tf.is_limit:
        return finite_output(2.0 * b + 6.0 * c * t, "a_ddot")

    T = np.float64(tf.tau)
    with np.errstate(over="ignore", invalid="ignore"):
        u = t / T
        value = ((a / T / T) * np.cosh(u) + (v / T) * np.sinh(u)
                 + 2.0 * b * np.cosh(u)
                 + 6.0 * c * t * sinhc(u))
    return finite_output(value, "a_ddot")


def displacement(tf: TransformFamily, t: ArrayLike) -> np.ndarray:
    """Vetor (a1(t), a2(t), 0), forma (3,) ou (N, 3)."""
    a1 = np.asarray(eval_a(tf, 1, t), dtype=float)
    a2 = np.asarray(eval_a(tf, 2, t), dtype=float)
    return np.stack([a1, a2, 0.0 * a1], axis=-1)


def displacement_rate(tf: TransformFamily, t: ArrayLike) -> np.ndarray:
    """Vetor (ȧ1(t), ȧ2(t), 0)."""
    a1 = np.asarray(eval_a_dot(tf, 1, t), dtype=float)
    a2 = np.asarray(eval_a_dot(tf, 2, t), dtype=float)
    return np.stack([a1, a2, 0.0 * a1], axis=-1)


# =============================================================================
# === FORÇA GERADA E SOLUÇÕES ===
# =============================================================================

def generated_force_H(t: ArrayLike, tf: TransformFamily, force: ForceField, mass: float) -> np.ndarray:
    """
    H1 = F1 + m ä1(t),  H2 = F2 + m ä2(t),  H3 = F3.
    Aceita t escalar (retorna (3,)) ou array (retorna (N, 3)).
    """
    mass = require_positive(mass, "mass")
    F = force.F if isinstance(force, ForceField) else ForceField(force).F

    a1 = np.asarray(eval_a_ddot(tf, 1, t), dtype=float)
    a2 = np.asarray(eval_a_ddot(tf, 2, t), dtype=float)
    return np.stack([F[0] + mass * a1, F[1] + mass * a2, F[2] + 0.0 * a1], axis=-1)


def analytic_solution_cl(t: ArrayLike, tf: TransformFamily, scenario: Scenario) -> np.ndarray:
    """
    Posição fechada do tratamento clássico (t0 = 0):
        x_i(t) = F_i t^2/2m + v0_i t + x0_i + a_i(t)   (i = 1, 2)
        x3(t)  = F3 t^2/2m + v0_3 t + x0_3

    :raises UnsupportedOriginError: se o cenário não começa em t = 0.
    """
    if scenario.initial.t != 0.0:
        raise UnsupportedOriginError(f"solução analítica exige t0 = 0 (recebido {scenario.initial.t})")
    require_finite(t, "t")
    return uniform_motion(t, scenario) + displacement(tf, t)


def integrate_classical(scenario: Scenario, tf: TransformFamily) -> Trajectory:
    """
    Integra m ẍ = H(t) com RK4 (mesmo núcleo do tratamento não-comutativo).

    O estado inicial já está no referencial transformado:
        x(t0) = x0 + a(t0),   p(t0) = m (v0 + ȧ(t0)).
    A família de deformação do cenário é ignorada aqui.
    """
    t0, t1 = scenario.t_span
    x_start = scenario.x0 + displacement(tf, t0)
    p_start = scenario.mass * (scenario.v0 + displacement_rate(tf, t0))

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        H = generated_force_H(t, tf, scenario.force, scenario.mass)
        return np.concatenate([y[3:] / scenario.mass, H])

    times, states = rk4(rhs, np.concatenate([x_start, p_start]), t0, t1, scenario.step)
    return Trajectory(times, states[:, :3], states[:, 3:], scenario, Treatment.CLASSICAL)
