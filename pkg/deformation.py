"""
Deformation.py (Funções de Deformação)

Avalia as seis famílias de funções de não-comutatividade f(t)
que aparecem no parêntese {x̄1, x̄2} = f(t), com parâmetros (kappa, tau):

    K1: kappa * cosh^2(u)                      -> kappa
    K2: kappa * tau * cosh(u) * sinh(u)        -> kappa * t
    K3: kappa * tau^2 * sinh^2(u)              -> kappa * t^2
    K4: 4 * kappa * tau^4 * (cosh(u) - 1)^2    -> kappa * t^4
    K5: kappa * tau^2 * (cosh(u) - 1) cosh(u)  -> kappa * t^2 / 2
    K6: kappa * tau^3 * (cosh(u) - 1) sinh(u)  -> kappa * t^3 / 2

com u = t / tau. A coluna da direita é o limite tau -> infinito,
selecionado pelo valor especial INFINITE_TAU (nunca por um float enorme).

Todas as funções aceitam t escalar ou array numpy e são puras.
"""

import dataclasses
import enum
import math
from typing import Any, Callable, Dict, Tuple, Union

import numpy as np
from numpy.polynomial import Polynomial

from errors import InvalidArgumentError
from utils import ArrayLike, finite_output, require_finite, sinh_tail_ratio, sinhc


class FamilyId(str, enum.Enum):
    """Identificadores das seis famílias (serializados como 'k1'..'k6')."""

    K1 = "k1"
    K2 = "k2"
    K3 = "k3"
    K4 = "k4"
    K5 = "k5"
    K6 = "k6"


class _InfiniteTau(enum.Enum):
    """Marcador do limite tau -> infinito."""

    INFINITE = "inf"

    def __repr__(self) -> str:
        return "INFINITE_TAU"


INFINITE_TAU = _InfiniteTau.INFINITE

Tau = Union[float, _InfiniteTau]


# =============================================================================
# === TAU: PARSE E FORMATAÇÃO ===
# =============================================================================

def parse_tau(value: Any) -> Tau:
    """
    Converte um valor de tau (número positivo, 'inf' ou INFINITE_TAU).
    float('inf') também é aceito e vira INFINITE_TAU.
    """
    if value is INFINITE_TAU:
        return INFINITE_TAU
    if isinstance(value, str) and value.strip().lower() in ("inf", "infinity"):
        return INFINITE_TAU

    try:
        tau = float(value)
    except (TypeError, ValueError) as e:
        raise InvalidArgumentError(f"tau inválido: {value!r}") from e

    if tau == math.inf:
        return INFINITE_TAU
    if math.isnan(tau) or tau <= 0.0:
        raise InvalidArgumentError(f"tau deve ser positivo, recebido {value!r}")
    return tau


def format_tau(tau: Tau) -> str:
    """Serializa tau como decimal positivo ou a string literal 'inf'."""
    if tau is INFINITE_TAU:
        return "inf"
    return np.format_float_positional(float(tau), trim="-")


def is_limit(tau: Tau) -> bool:
    return tau is INFINITE_TAU


# =============================================================================
# === FAMÍLIA DE DEFORMAÇÃO ===
# =============================================================================

@dataclasses.dataclass(frozen=True)
class DeformationFamily:
    """Uma das seis famílias f(t), com kappa e tau (ou INFINITE_TAU)."""

    family_id: FamilyId
    kappa: float
    tau: Tau = INFINITE_TAU

    def __post_init__(self):
        try:
            family_id = FamilyId(str(getattr(self.family_id, "value", self.family_id)).lower())
        except ValueError as e:
            raise InvalidArgumentError(f"família desconhecida: {self.family_id!r} (use k1..k6)") from e

        try:
            kappa = float(self.kappa)
        except (TypeError, ValueError) as e:
            raise InvalidArgumentError(f"kappa inválido: {self.kappa!r}") from e
        if not math.isfinite(kappa):
            raise InvalidArgumentError(f"kappa deve ser finito, recebido {self.kappa!r}")

        object.__setattr__(self, "family_id", family_id)
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "tau", parse_tau(self.tau))

    @property
    def is_limit(self) -> bool:
        return self.tau is INFINITE_TAU

    def to_record(self) -> Dict[str, Any]:
        return {"id": self.family_id.value, "kappa": self.kappa, "tau": format_tau(self.tau)}

    @classmethod
    def from_record(cls, record: Dict[str, Any]) -> "DeformationFamily":
        return cls(record["id"], record["kappa"], record.get("tau", "inf"))


# =============================================================================
# === FORMAS HIPERBÓLICAS (tau finito) ===
# =============================================================================
# Cada função recebe (kappa, tau, t) e usa u = t / tau.
# Nenhuma potência de tau é formada: tau^n vem sempre junto do fator
# hiperbólico pequeno, como t^n vezes uma razão limitada (sinhc, sinh_tail_ratio):
#   S = tau sinh(u)       = t sinhc(u)
#   D = 2 tau sinh(u/2)   = t sinhc(u/2),   tau^2 (cosh u - 1) = D^2 / 2

def _scaled(t: np.ndarray, u: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    return t * sinhc(u), t * sinhc(u / 2.0)


def _hyperbolic_f(fid: FamilyId, k: float, T: float, t: np.ndarray) -> np.ndarray:
    u = t / T
    S, D = _scaled(t, u)
    if fid is FamilyId.K1:
        return k * np.cosh(u) ** 2
    if fid is FamilyId.K2:
        return k * S * np.cosh(u)
    if fid is FamilyId.K3:
        return k * S ** 2
    if fid is FamilyId.K4:
        # 4 tau^4 (cosh u - 1)^2 = D^4
        return k * D ** 4
    if fid is FamilyId.K5:
        return 0.5 * k * D ** 2 * np.cosh(u)
    return 0.5 * k * D ** 2 * S


def _hyperbolic_f_dot(fid: FamilyId, k: float, T: float, t: np.ndarray) -> np.ndarray:
    u = t / T
    S, D = _scaled(t, u)
    if fid is FamilyId.K1:
        return (k / T) * np.sinh(2.0 * u)
    if fid is FamilyId.K2:
        return k * np.cosh(2.0 * u)
    if fid is FamilyId.K3:
        # tau sinh 2u = 2 t sinhc(2u)
        return 2.0 * k * t * sinhc(2.0 * u)
    if fid is FamilyId.K4:
        return 4.0 * k * D ** 2 * S
    if fid is FamilyId.K5:
        return k * S * (2.0 * np.cosh(u) - 1.0)
    # tau^2 (cosh 2u - cosh u) = tau^2 (cosh 2u - 1) - tau^2 (cosh u - 1) = 2 S^2 - D^2 / 2
    return k * (2.0 * S ** 2 - 0.5 * D ** 2)


def _hyperbolic_f_integral(fid: FamilyId, k: float, T: float, t: np.ndarray) -> np.ndarray:
    u = t / T
    S, D = _scaled(t, u)
    if fid is FamilyId.K1:
        # t/2 + tau sinh(2u)/4
        return 0.5 * k * t * (1.0 + sinhc(2.0 * u))
    if fid is FamilyId.K2:
        return 0.5 * k * S ** 2
    if fid is FamilyId.K3:
        # tau^3 S1(2u) / 4 = 2 t^3 R1(2u)
        return 2.0 * k * t ** 3 * sinh_tail_ratio(2.0 * u, 1)
    if fid is FamilyId.K4:
        # 4 tau^5 (S3(2u)/4 - 2 S3(u)) = 4 t^5 (8 R3(2u) - 2 R3(u))
        return 4.0 * k * t ** 5 * (8.0 * sinh_tail_ratio(2.0 * u, 3) - 2.0 * sinh_tail_ratio(u, 3))
    if fid is FamilyId.K5:
        # tau^3 (S1(2u)/4 - S1(u)) = t^3 (2 R1(2u) - R1(u))
        return k * t ** 3 * (2.0 * sinh_tail_ratio(2.0 * u, 1) - sinh_tail_ratio(u, 1))
    # tau^4 (cosh u - 1)^2 / 2 = D^4 / 8
    return 0.125 * k * D ** 4


# =============================================================================
# === FORMAS LIMITE (tau -> infinito) ===
# =============================================================================

_LIMIT_F: Dict[FamilyId, Callable[[float, np.ndarray], np.ndarray]] = {
    FamilyId.K1: lambda k, t: k + 0.0 * t,
    FamilyId.K2: lambda k, t: k * t,
    FamilyId.K3: lambda k, t: k * t ** 2,
    FamilyId.K4: lambda k, t: k * t ** 4,
    FamilyId.K5: lambda k, t: 0.5 * k * t ** 2,
    FamilyId.K6: lambda k, t: 0.5 * k * t ** 3,
}

_LIMIT_F_DOT: Dict[FamilyId, Callable[[float, np.ndarray], np.ndarray]] = {
    FamilyId.K1: lambda k, t: 0.0 * t,
    FamilyId.K2: lambda k, t: k + 0.0 * t,
    FamilyId.K3: lambda k, t: 2.0 * k * t,
    FamilyId.K4: lambda k, t: 4.0 * k * t ** 3,
    FamilyId.K5: lambda k, t: k * t,
    FamilyId.K6: lambda k, t: 1.5 * k * t ** 2,
}

_LIMIT_F_INTEGRAL: Dict[FamilyId, Callable[[float, np.ndarray], np.ndarray]] = {
    FamilyId.K1: lambda k, t: k * t,
    FamilyId.K2: lambda k, t: k * t ** 2 / 2.0,
    FamilyId.K3: lambda k, t: k * t ** 3 / 3.0,
    FamilyId.K4: lambda k, t: k * t ** 5 / 5.0,
    FamilyId.K5: lambda k, t: k * t ** 3 / 6.0,
    FamilyId.K6: lambda k, t: k * t ** 4 / 8.0,
}

# Coeficientes (grau crescente) de f'(t) no limite
_LIMIT_F_DOT_COEFFS: Dict[FamilyId, Callable[[float], list]] = {
    FamilyId.K1: lambda k: [0.0],
    FamilyId.K2: lambda k: [k],
    FamilyId.K3: lambda k: [0.0, 2.0 * k],
    FamilyId.K4: lambda k: [0.0, 0.0, 0.0, 4.0 * k],
    FamilyId.K5: lambda k: [0.0, k],
    FamilyId.K6: lambda k: [0.0, 0.0, 1.5 * k],
}


# =============================================================================
# === OPERAÇÕES PÚBLICAS ===
# =============================================================================

def _evaluate(family: DeformationFamily, t: ArrayLike, limit_table, hyperbolic, what: str) -> ArrayLike:
    require_finite(t, "t")
    t_arr = np.asarray(t, dtype=float)

    # Limite clássico: exatamente zero, mesmo onde cosh/sinh estourariam
    if family.kappa == 0.0:
        return finite_output(np.zeros_like(t_arr), what)

    if family.is_limit:
        value = limit_table[family.family_id](family.kappa, t_arr)
    else:
        with np.errstate(over="ignore", invalid="ignore"):
            value = hyperbolic(family.family_id, family.kappa, np.float64(family.tau), t_arr)
    return finite_output(value, f"{what}({family.family_id.value})")


def eval_f(family: DeformationFamily, t: ArrayLike) -> ArrayLike:
    """
    Valor de f(t) da família (unidade: comprimento^2).

    :raises InvalidArgumentError: t não finito.
    :raises NumericalFailureError: overflow das funções hiperbólicas.
    """
    return _evaluate(family, t, _LIMIT_F, _hyperbolic_f, "f")


def eval_f_dot(family: DeformationFamily, t: ArrayLike) -> ArrayLike:
    """Derivada analítica exata df/dt (nunca diferença finita)."""
    return _evaluate(family, t, _LIMIT_F_DOT, _hyperbolic_f_dot, "f_dot")


def eval_f_integral(family: DeformationFamily, t: ArrayLike) -> ArrayLike:
    """Integral definida de 0 até t de f(t') dt' (forma fechada, zero em t=0)."""
    return _evaluate(family, t, _LIMIT_F_INTEGRAL, _hyperbolic_f_integral, "f_integral")


def limit_form(family: DeformationFamily) -> DeformationFamily:
    """Mesma família com INFINITE_TAU. Idempotente."""
    if family.is_limit:
        return family
    return dataclasses.replace(family, tau=INFINITE_TAU)


def with_tau(family: DeformationFamily, tau: Tau) -> DeformationFamily:
    """Mesma família e kappa, outro tau (usado na varredura de tau)."""
    return dataclasses.replace(family, tau=tau)


def f_dot_polynomial(family: DeformationFamily) -> Polynomial:
    """
    f'(t) exato como polinômio em t (somente no limite tau -> infinito).
    Usado na comparação exata de bases do módulo `matching`.
    """
    if not family.is_limit:
        raise InvalidArgumentError("f_dot_polynomial exige INFINITE_TAU; use f_dot_harmonics")
    return Polynomial(_LIMIT_F_DOT_COEFFS[family.family_id](family.kappa))


def f_dot_harmonics(family: DeformationFamily) -> Dict[str, float]:
    """
    f'(t) exato na base {1, cosh u, sinh u, cosh 2u, sinh 2u}, u = t/tau
    (somente para tau finito). Para tau enorme um coeficiente pode ser inf.
    """
    if family.is_limit:
        raise InvalidArgumentError("f_dot_harmonics exige tau finito; use f_dot_polynomial")

    k, T = np.float64(family.kappa), np.float64(family.tau)
    coeffs = {"1": 0.0, "cosh_u": 0.0, "sinh_u": 0.0, "cosh_2u": 0.0, "sinh_2u": 0.0}
    fid = family.family_id

    with np.errstate(over="ignore"):
        if fid is FamilyId.K1:
            coeffs["sinh_2u"] = k / T
        elif fid is FamilyId.K2:
            coeffs["cosh_2u"] = k
        elif fid is FamilyId.K3:
            coeffs["sinh_2u"] = k * T
        elif fid is FamilyId.K4:
            coeffs["sinh_2u"] = 4.0 * k * T ** 3
            coeffs["sinh_u"] = -8.0 * k * T ** 3
        elif fid is FamilyId.K5:
            coeffs["sinh_2u"] = k * T
            coeffs["sinh_u"] = -k * T
        else:
            coeffs["cosh_2u"] = k * T ** 2
            coeffs["cosh_u"] = -k * T ** 2

    return {name: float(value) for name, value in coeffs.items()}
