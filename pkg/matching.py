"""
Matching.py (Comparação dos Dois Tratamentos)

Decide quando a força gerada pela não-comutatividade, G(t), coincide com a
força gerada por uma transformação clássica do espaço, H(t):

    ä1(t) = -(ḟ(t)/2) F2,    ä2(t) = (ḟ(t)/2) F1.

A decisão é exata (comparação de bases): no limite tau -> infinito, ä só
gera {1, t}; com tau finito, ä só gera {cosh u, sinh u}. Uma grade de
prova confirma numericamente o veredito.
"""

import dataclasses
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from app_logger import log_action
from classical_transform import (TransformFamily, displacement, displacement_rate,
                                 eval_a_ddot, generated_force_H)
from deformation import (DeformationFamily, FamilyId, INFINITE_TAU, eval_f, eval_f_dot,
                         f_dot_harmonics, f_dot_polynomial)
from dynamics import ForceField, Scenario, newton_force_G
from errors import InvalidArgumentError, NoMatchError, NumericalFailureError
from nc_phase_space import PhaseState
from utils import ArrayLike, require_positive

# Grade de amostras: t em [0, 10], passo 0.01
SAMPLE_GRID = np.linspace(0.0, 10.0, 1001)

# Tolerância (relativa à escala da força exigida) para aceitar um casamento
MATCH_TOLERANCE = 1e-10

# Etiquetas das soluções
TAG_TRIVIAL = "trivial"
TAG_QUADRATIC = "quadratic-transform"
TAG_CUBIC = "cubic-transform"
TAG_NO_MATCH = "no-match"
TAG_NO_MATCH_FINITE_TAU = "no-match-finite-tau"


@dataclasses.dataclass(frozen=True)
class MatchResult:
    """Veredito de existência e, se existir, a transformação que iguala G e H."""

    exists: bool
    tf: Optional[TransformFamily]
    matched_family: DeformationFamily
    residual_bound: float
    tolerance: float
    tag: str
    notes: str

    def __post_init__(self):
        if self.exists and self.tf is None:
            raise InvalidArgumentError("MatchResult com exists=True exige tf")
        if not self.exists and self.tf is not None:
            raise InvalidArgumentError("MatchResult com exists=False não pode ter tf")

    def to_record(self) -> Dict[str, Any]:
        return {
            "family": self.matched_family.family_id.value,
            "kappa": self.matched_family.kappa,
            "tau": self.matched_family.to_record()["tau"],
            "exists": self.exists,
            "coefficients": self.tf.to_record() if self.tf else None,
            "residual_bound": self.residual_bound,
            "tag": self.tag,
        }


@dataclasses.dataclass(frozen=True)
class EqualityReport:
    """Desvios máximos entre G, H e a forma fechada esperada, nas amostras de tempo."""

    family: DeformationFamily
    tag: str
    time_count: int
    max_g_minus_h: float
    max_g_minus_expected: float
    max_h_minus_expected: float

    @property
    def max_deviation(self) -> float:
        return max(self.max_g_minus_h, self.max_g_minus_expected, self.max_h_minus_expected)

    def to_record(self) -> Dict[str, Any]:
        return {
            "family": self.family.family_id.value,
            "tag": self.tag,
            "times": self.time_count,
            "max|G-H|": self.max_g_minus_h,
            "max|G-expected|": self.max_g_minus_expected,
            "max|H-expected|": self.max_h_minus_expected,
        }


# =============================================================================
# === RESÍDUO DO CASAMENTO ===
# =============================================================================

def match_residual(family: DeformationFamily, tf: TransformFamily, force: ForceField,
                   mass: float, t: ArrayLike) -> np.ndarray:
    """
    (ä1 + (ḟ/2) F2,  ä2 - (ḟ/2) F1): as duas componentes são zero
    exatamente quando os tratamentos concordam no instante t.
    """
    require_positive(mass, "mass")
    F = _force_vector(force)

    half_f_dot = np.asarray(eval_f_dot(family, t), dtype=float) / 2.0
    r1 = np.asarray(eval_a_ddot(tf, 1, t), dtype=float) + half_f_dot * F[1]
    r2 = np.asarray(eval_a_ddot(tf, 2, t), dtype=float) - half_f_dot * F[0]
    return np.stack([r1, r2], axis=-1)


def _force_vector(force) -> np.ndarray:
    return force.F if isinstance(force, ForceField) else ForceField(force).F


def _best_fit_residual(target: np.ndarray, basis: Sequence[np.ndarray]) -> float:
    """Maior resíduo do ajuste por mínimos quadrados de `target` na base dada."""
    A = np.stack(basis, axis=1)
    coeffs, *_ = np.linalg.lstsq(A, target, rcond=None)
    return float(np.max(np.abs(A @ coeffs - target)))


def _sampled_f_dot(family: DeformationFamily) -> Optional[np.ndarray]:
    """ḟ na grade de amostras; None se cosh/sinh estouram (tau muito pequeno)."""
    try:
        return np.asarray(eval_f_dot(family, SAMPLE_GRID), dtype=float)
    except NumericalFailureError:
        log_action(f"AVISO [matching]: ḟ não finito na grade de amostras ({family.family_id.value}, "
                   f"tau={family.to_record()['tau']})")
        return None


# =============================================================================
# === SOLUÇÃO DO CASAMENTO ===
# =============================================================================

def solve_match(family: DeformationFamily, force: ForceField, mass: float) -> MatchResult:
    """
    Resolve ä1 = -(ḟ/2) F2, ä2 = (ḟ/2) F1 dentro da família de transformações.
    Os coeficientes a_i e v_i da resposta são sempre 0 (só ä é restringido).

    Limite tau -> infinito: K1 trivial, K2 quadrática (b), K3/K5 cúbica (c),
    K4/K6 sem solução. Tau finito: sem solução (ḟ tem harmônicos em 2u).

    residual_bound está em unidades de força: max |G - H| na grade de amostras
    (para veredito negativo, o do melhor ajuste possível).
    """
    mass = require_positive(mass, "mass")
    F = _force_vector(force)
    s1, s2 = -F[1] / 2.0, F[0] / 2.0  # ä1 = s1 ḟ,  ä2 = s2 ḟ

    f_dot = _sampled_f_dot(family)
    # Escala da força exigida, para a tolerância relativa
    scale = mass * max(abs(s1), abs(s2)) * (float(np.max(np.abs(f_dot))) if f_dot is not None else 0.0)
    tolerance = MATCH_TOLERANCE * (1.0 + scale)

    # Lado direito identicamente nulo: qualquer família casa com a transformação nula
    if family.kappa == 0.0 or (F[0] == 0.0 and F[1] == 0.0):
        tf = TransformFamily()  # a transformação nula não depende de tau
        bound = mass * float(np.max(np.abs(match_residual(family, tf, force, mass, SAMPLE_GRID)))) \
            if f_dot is not None else 0.0
        return MatchResult(True, tf, family, bound, tolerance, TAG_TRIVIAL,
                           "ä exigido é identicamente zero (kappa = 0 ou F1 = F2 = 0): transformação nula")

    if not family.is_limit:
        return _no_match_finite_tau(family, mass, s1, s2, f_dot, tolerance)

    coef = f_dot_polynomial(family).coef
    if np.any(coef[2:] != 0.0):
        degree = int(np.max(np.nonzero(coef)[0]))
        basis = [np.ones_like(SAMPLE_GRID), SAMPLE_GRID]
        bound = mass * max(_best_fit_residual(s1 * f_dot, basis), _best_fit_residual(s2 * f_dot, basis))
        return MatchResult(False, None, family, bound, tolerance, TAG_NO_MATCH,
                           f"ḟ tem grau {degree}; ä de uma transformação só gera {{1, t}} "
                           f"(exigiria a(t) de grau {degree + 2})")

    c0 = coef[0]
    c1 = coef[1] if len(coef) > 1 else 0.0
    tf = TransformFamily(b1=s1 * c0 / 2.0, c1=s1 * c1 / 6.0,
                         b2=s2 * c0 / 2.0, c2=s2 * c1 / 6.0, tau=INFINITE_TAU)
    bound = mass * float(np.max(np.abs(match_residual(family, tf, force, mass, SAMPLE_GRID))))

    if c0 == 0.0 and c1 == 0.0:
        tag, notes = TAG_TRIVIAL, "ḟ = 0: nenhuma força extra, transformação nula"
    elif c1 == 0.0:
        tag, notes = TAG_QUADRATIC, "a(t) quadrática: b1 = -kappa F2 / 4, b2 = kappa F1 / 4 (ḟ constante)"
    else:
        tag, notes = TAG_CUBIC, ("a(t) cúbica: c1 = -kappa F2 / 6, c2 = kappa F1 / 6 "
                                 "(ḟ = 2 kappa t, kappa = kappa3 = kappa5 / 2)")
    return MatchResult(True, tf, family, bound, tolerance, tag, notes)


def _no_match_finite_tau(family: DeformationFamily, mass: float, s1: float, s2: float,
                         f_dot: Optional[np.ndarray], tolerance: float) -> MatchResult:
    harmonics = f_dot_harmonics(family)
    outside = [name for name in ("1", "cosh_2u", "sinh_2u") if harmonics[name] != 0.0]

    if f_dot is None:
        bound = float("inf")
    else:
        u = SAMPLE_GRID / float(family.tau)
        basis = [np.cosh(u), np.sinh(u)]
        bound = mass * max(_best_fit_residual(s1 * f_dot, basis), _best_fit_residual(s2 * f_dot, basis))

    return MatchResult(False, None, family, bound, tolerance, TAG_NO_MATCH_FINITE_TAU,
                       f"tau finito: ḟ contém {', '.join(outside)}, fora da base {{cosh u, sinh u}} de ä; "
                       "o casamento só existe no limite tau -> infinito")


# =============================================================================
# === IGUALDADES DAS FORÇAS ===
# =============================================================================

def _expected_force(result: MatchResult, F: np.ndarray, mass: float, t: np.ndarray) -> np.ndarray:
    """Forma fechada comum de G = H para cada tipo de solução."""
    family = result.matched_family
    ones = np.ones_like(t)

    if result.tag == TAG_QUADRATIC:
        k = family.kappa
        return np.stack([(F[0] - mass * k / 2.0 * F[1]) * ones,
                         (F[1] + mass * k / 2.0 * F[0]) * ones,
                         F[2] * ones], axis=-1)

    if result.tag == TAG_CUBIC:
        # kappa comum: kappa3 = kappa, kappa5 = 2 kappa
        k = family.kappa if family.family_id is FamilyId.K3 else family.kappa / 2.0
        return np.stack([F[0] - mass * k * F[1] * t,
                         F[1] + mass * k * F[0] * t,
                         F[2] * ones], axis=-1)

    # trivial: nenhuma força extra
    return np.stack([F[0] * ones, F[1] * ones, F[2] * ones], axis=-1)


def verify_equalities(family: DeformationFamily, force: ForceField, mass: float,
                      sample_times: Sequence[float]) -> EqualityReport:
    """
    Confere G(t) = H(t) = forma fechada esperada em cada instante dado.

    :raises NoMatchError: se não existe transformação que case com a família.
    """
    result = solve_match(family, force, mass)
    if not result.exists:
        raise NoMatchError(f"não há casamento para {family.family_id.value} ({result.notes})")

    t = np.asarray(sample_times, dtype=float).reshape(-1)
    if t.size == 0:
        raise InvalidArgumentError("sample_times não pode ser vazio")

    F = _force_vector(force)
    G = newton_force_G(t, family, ForceField(F), mass)
    H = generated_force_H(t, result.tf, ForceField(F), mass)
    expected = _expected_force(result, F, mass, t)

    return EqualityReport(
        family=family,
        tag=result.tag,
        time_count=int(t.size),
        max_g_minus_h=float(np.max(np.abs(G - H))),
        max_g_minus_expected=float(np.max(np.abs(G - expected))),
        max_h_minus_expected=float(np.max(np.abs(H - expected))),
    )


def zero_force_contrast(family: Optional[DeformationFamily], tf: TransformFamily,
                        mass: float, t: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
    """
    Com F = 0: G se anula (a deformação precisa de força para agir),
    mas H = (m ä1, m ä2, 0) continua presente.
    """
    zero = ForceField([0.0, 0.0, 0.0])
    G = newton_force_G(t, family, zero, mass)
    H = generated_force_H(t, tf, zero, mass)
    return G, H


# =============================================================================
# === ALINHAMENTO DAS CONDIÇÕES INICIAIS ===
# =============================================================================

def align_classical_initial(scenario: Scenario, tf: TransformFamily) -> Scenario:
    """
    Cenário do tratamento clássico cuja posição e velocidade físicas iniciais
    são as mesmas do tratamento não-comutativo:

        x0_B = x0 - a(t0),    v0_B = ẋ_A(t0) - ȧ(t0),
        ẋ_A(t0) = v0 + (-F2 f(t0)/2, F1 f(t0)/2, 0).

    A família do cenário devolvido é None (o tratamento clássico não a usa).
    """
    t0 = scenario.initial.t
    F = scenario.force.F
    f0 = float(eval_f(scenario.family, t0)) if scenario.family is not None else 0.0

    velocity_a = scenario.v0 + np.array([-F[1] * f0 / 2.0, F[0] * f0 / 2.0, 0.0])
    x0_b = scenario.x0 - displacement(tf, t0)
    v0_b = velocity_a - displacement_rate(tf, t0)

    initial = PhaseState(t0, x0_b, scenario.mass * v0_b)
    return dataclasses.replace(scenario, initial=initial, family=None)


def enumerate_limit_matches(kappa: float, force: ForceField, mass: float) -> List[MatchResult]:
    """solve_match para as seis famílias no limite tau -> infinito, na ordem K1..K6."""
    return [solve_match(DeformationFamily(fid, kappa, INFINITE_TAU), force, mass) for fid in FamilyId]
