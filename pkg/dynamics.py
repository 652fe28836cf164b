"""
Dynamics.py (Dinâmica da Partícula)

Partícula não relativística sob força constante F, no espaço de fase
deformado representado por Bopp. Contém:

- o Hamiltoniano dependente do tempo,
- as equações de Hamilton (ẋ, ṗ),
- a força gerada G(t) que aparece na lei de Newton,
- o integrador Runge-Kutta de 4ª ordem de passo fixo (compartilhado
  com o tratamento clássico em `classical_transform`),
- a solução analítica fechada (com x0 em todos os eixos e v0_3 no eixo 3).
"""

import dataclasses
import enum
import math
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from deformation import DeformationFamily, eval_f, eval_f_dot, eval_f_integral
from errors import DivergenceError, InvalidArgumentError, NumericalFailureError, UnsupportedOriginError
from nc_phase_space import PhaseState
from utils import ArrayLike, as_vector3, require_finite, require_positive

# Tolerância para decidir se (t1 - t0) é múltiplo inteiro do passo
_STEP_COUNT_SLACK = 1e-9


class Treatment(str, enum.Enum):
    """Rótulo do tratamento que gerou uma trajetória."""

    NONCOMMUTATIVE = "noncommutative"
    UNDEFORMED = "undeformed"
    CLASSICAL = "classical"


# =============================================================================
# === TIPOS ===
# =============================================================================

@dataclasses.dataclass(frozen=True)
class ForceField:
    """Força externa constante (pode ser o vetor nulo)."""

    F: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "F", as_vector3(self.F, "force"))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ForceField):
            return NotImplemented
        return np.array_equal(self.F, other.F)

    def __hash__(self) -> int:
        return hash(tuple(self.F))


@dataclasses.dataclass(frozen=True)
class Scenario:
    """
    Cenário de simulação. O momento inicial é a variável primária;
    a velocidade v0 = p0 / m é derivada.
    """

    mass: float
    force: ForceField
    initial: PhaseState
    t_end: float
    step: float
    family: Optional[DeformationFamily] = None

    def __post_init__(self):
        object.__setattr__(self, "mass", require_positive(self.mass, "mass"))
        object.__setattr__(self, "step", require_positive(self.step, "step"))
        if not isinstance(self.force, ForceField):
            object.__setattr__(self, "force", ForceField(self.force))

        require_finite(self.t_end, "t_end")
        object.__setattr__(self, "t_end", float(self.t_end))

        if self.t_end <= self.initial.t:
            raise InvalidArgumentError(f"t_end ({self.t_end}) deve ser maior que t0 ({self.initial.t})")
        if self.step > self.t_end - self.initial.t:
            raise InvalidArgumentError(f"step ({self.step}) maior que o intervalo de tempo")

    @classmethod
    def from_kinematics(cls, mass: float, force: Sequence[float], x0: Sequence[float],
                        v0: Sequence[float], t_end: float, step: float,
                        family: Optional[DeformationFamily] = None,
                        t_start: float = 0.0) -> "Scenario":
        """Monta o cenário a partir de posição e velocidade iniciais (p0 = m v0)."""
        mass = require_positive(mass, "mass")
        initial = PhaseState(t_start, x0, mass * as_vector3(v0, "v0"))
        return cls(mass, ForceField(force), initial, t_end, step, family)

    @property
    def t_span(self) -> Tuple[float, float]:
        return self.initial.t, self.t_end

    @property
    def x0(self) -> np.ndarray:
        return self.initial.x

    @property
    def v0(self) -> np.ndarray:
        return self.initial.p / self.mass

    def with_family(self, family: Optional[DeformationFamily]) -> "Scenario":
        return dataclasses.replace(self, family=family)


@dataclasses.dataclass(frozen=True, eq=False)
class Trajectory:
    """
    Amostras ordenadas (t estritamente crescente) de uma integração,
    guardadas como arrays: t (N), x (N, 3), p (N, 3).

    `scenario` é o cenário de entrada, sem alteração. No tratamento clássico a
    primeira amostra é o estado transformado x0 + a(t0), m (v0 + ȧ(t0)), que
    difere de `scenario.initial` quando a transformação não se anula em t0.
    """

    t: np.ndarray
    x: np.ndarray
    p: np.ndarray
    scenario: Scenario
    treatment: Treatment

    def __len__(self) -> int:
        return len(self.t)

    def sample(self, index: int) -> PhaseState:
        return PhaseState(self.t[index], self.x[index], self.p[index])

    @property
    def samples(self) -> List[PhaseState]:
        return [self.sample(i) for i in range(len(self))]

    def max_position_deviation(self, other: "Trajectory") -> float:
        """Maior |x_self(t) - x_other(t)| (norma do máximo) nas mesmas amostras de tempo."""
        if len(self) != len(other) or not np.array_equal(self.t, other.t):
            raise InvalidArgumentError("as trajetórias não têm as mesmas amostras de tempo")
        return float(np.max(np.abs(self.x - other.x)))


# =============================================================================
# === HAMILTONIANO E EQUAÇÕES DE MOVIMENTO ===
# =============================================================================

def _f(scenario: Scenario, t: ArrayLike) -> ArrayLike:
    return eval_f(scenario.family, t) if scenario.family is not None else 0.0


def hamiltonian(state: PhaseState, scenario: Scenario) -> float:
    """
    H = |p|^2 / 2m - sum F_i x_i + F1 (f/2) p2 - F2 (f/2) p1.
    """
    F = scenario.force.F
    half_f = _f(scenario, state.t) / 2.0
    p = state.p

    kinetic = float(p @ p) / (2.0 * scenario.mass)
    potential = -float(F @ state.x)
    return kinetic + potential + F[0] * half_f * p[1] - F[1] * half_f * p[0]


def _rhs_array(t: float, y: np.ndarray, scenario: Scenario) -> np.ndarray:
    F = scenario.force.F
    half_f = _f(scenario, t) / 2.0

    x_dot = y[3:] / scenario.mass + np.array([-half_f * F[1], half_f * F[0], 0.0])
    return np.concatenate([x_dot, F])


def eom_rhs(state: PhaseState, scenario: Scenario) -> np.ndarray:
    """
    Derivada temporal do estado, como vetor (ẋ1, ẋ2, ẋ3, ṗ1, ṗ2, ṗ3):
        ẋ1 = p1/m - (f/2) F2,  ẋ2 = p2/m + (f/2) F1,  ẋ3 = p3/m,  ṗi = Fi.
    """
    return _rhs_array(state.t, state.as_array(), scenario)


def newton_force_G(t: ArrayLike, family: Optional[DeformationFamily], force: ForceField,
                   mass: float) -> np.ndarray:
    """
    Força efetiva da lei de Newton m ẍ = G(t):
        G1 = F1 - (m ḟ/2) F2,  G2 = F2 + (m ḟ/2) F1,  G3 = F3.
    Aceita t escalar (retorna (3,)) ou array (retorna (N, 3)).
    """
    mass = require_positive(mass, "mass")
    F = force.F if isinstance(force, ForceField) else ForceField(force).F
    require_finite(t, "t")

    if family is None:
        f_dot = 0.0 * np.asarray(t, dtype=float)
    else:
        f_dot = np.asarray(eval_f_dot(family, t), dtype=float)
    half = mass * f_dot / 2.0

    return np.stack([F[0] - half * F[1], F[1] + half * F[0], F[2] + 0.0 * half], axis=-1)


def generated_force_G(t: ArrayLike, scenario: Scenario) -> np.ndarray:
    """G(t) com a família, força e massa do cenário."""
    return newton_force_G(t, scenario.family, scenario.force, scenario.mass)


# =============================================================================
# === INTEGRADOR RK4 (PASSO FIXO) ===
# =============================================================================

def time_grid(t0: float, t1: float, step: float) -> np.ndarray:
    """
    Instantes t0, t0 + h, t0 + 2h, ... e exatamente t1 no final
    (o último passo é encurtado se necessário).
    """
    n_steps = max(1, math.ceil((t1 - t0) / step - _STEP_COUNT_SLACK))
    times = t0 + step * np.arange(n_steps + 1, dtype=float)
    times[-1] = t1
    return times


def rk4(rhs: Callable[[float, np.ndarray], np.ndarray], y0: np.ndarray,
        t0: float, t1: float, step: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Runge-Kutta clássico de 4ª ordem, passo fixo.

    :return: (times, states) com states de forma (N, len(y0)).
    :raises DivergenceError: estado (ou lado direito) não finito.
    """
    times = time_grid(t0, t1, step)
    states = np.empty((len(times), len(y0)), dtype=float)
    states[0] = y0

    y = np.array(y0, dtype=float)
    for i in range(len(times) - 1):
        t, h = times[i], times[i + 1] - times[i]
        try:
            k1 = rhs(t, y)
            k2 = rhs(t + h / 2.0, y + (h / 2.0) * k1)
            k3 = rhs(t + h / 2.0, y + (h / 2.0) * k2)
            k4 = rhs(t + h, y + h * k3)
        except NumericalFailureError as e:
            raise DivergenceError(f"falha numérica perto de t={t}: {e}", time=float(t)) from e

        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(y)):
            raise DivergenceError(f"estado não finito em t={times[i + 1]}", time=float(times[i + 1]))
        states[i + 1] = y

    return times, states


def integrate(scenario: Scenario, treatment: Treatment = Treatment.NONCOMMUTATIVE) -> Trajectory:
    """
    Integra as equações de Hamilton de t0 até t1 com RK4.
    'undeformed' ignora a família do cenário (f = 0).
    """
    treatment = Treatment(treatment)
    if treatment is Treatment.CLASSICAL:
        raise InvalidArgumentError("tratamento clássico: use classical_transform.integrate_classical")

    run = scenario if treatment is Treatment.NONCOMMUTATIVE else scenario.with_family(None)
    t0, t1 = scenario.t_span

    times, states = rk4(lambda t, y: _rhs_array(t, y, run), scenario.initial.as_array(), t0, t1, scenario.step)
    return Trajectory(times, states[:, :3], states[:, 3:], scenario, treatment)


# =============================================================================
# === SOLUÇÃO ANALÍTICA ===
# =============================================================================

def uniform_motion(t: ArrayLike, scenario: Scenario) -> np.ndarray:
    """F t^2 / 2m + v0 t + x0 (movimento uniformemente acelerado), forma (3,) ou (N, 3)."""
    t_col = np.asarray(t, dtype=float)[..., np.newaxis]
    F = scenario.force.F
    return F * t_col ** 2 / (2.0 * scenario.mass) + scenario.v0 * t_col + scenario.x0


def analytic_solution_nc(t: ArrayLike, scenario: Scenario) -> np.ndarray:
    """
    Posição fechada do tratamento não-comutativo (t0 = 0):
        x1 = F1 t^2/2m + v0_1 t + x0_1 - (F2/2) int_0^t f
        x2 = F2 t^2/2m + v0_2 t + x0_2 + (F1/2) int_0^t f
        x3 = F3 t^2/2m + v0_3 t + x0_3

    :raises UnsupportedOriginError: se o cenário não começa em t = 0.
    """
    if scenario.initial.t != 0.0:
        raise UnsupportedOriginError(f"solução analítica exige t0 = 0 (recebido {scenario.initial.t})")
    require_finite(t, "t")

    x = uniform_motion(t, scenario)
    if scenario.family is None:
        return x

    F = scenario.force.F
    integral = np.asarray(eval_f_integral(scenario.family, t), dtype=float)
    shift = np.stack([-F[1] / 2.0 * integral, F[0] / 2.0 * integral, 0.0 * integral], axis=-1)
    return x + shift
