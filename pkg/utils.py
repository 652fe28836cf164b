"""
Utils.py (Funções Utilitárias)

Contém funções auxiliares usadas em várias partes do aplicativo:
validação de vetores e tempos, funções hiperbólicas estáveis
(sem cancelamento catastrófico) e passos de diferenças finitas.
"""

import math
from typing import Iterable, Union

import numpy as np

from errors import InvalidArgumentError, NumericalFailureError

# Aceita escalar ou array numpy em quase todas as funções numéricas
ArrayLike = Union[float, np.ndarray]

# Abaixo deste |x| as "caudas" de sinh são calculadas pela série de Taylor
SERIES_THRESHOLD = 1.0

# Número de termos da série usados na cauda (erro de truncamento < 1e-14 relativo para |x| < 1)
SERIES_TERMS = 9

# Passo relativo padrão das diferenças finitas
FD_RELATIVE_STEP = 1e-6


# =============================================================================
# === VALIDAÇÃO ===
# =============================================================================

def as_vector3(values: Iterable[float], name: str = "vector") -> np.ndarray:
    """
    Converte uma sequência em um vetor numpy de 3 componentes finitas.

    :param values: Sequência com exatamente 3 números.
    :param name: Nome usado na mensagem de erro.
    :raises InvalidArgumentError: se o formato ou algum valor for inválido.
    """
    try:
        vec = np.array(values, dtype=float).reshape(-1)
    except (TypeError, ValueError) as e:
        raise InvalidArgumentError(f"{name}: valores não numéricos ({e})") from e

    if vec.shape != (3,):
        raise InvalidArgumentError(f"{name}: esperado 3 componentes, recebido {vec.size}")
    if not np.all(np.isfinite(vec)):
        raise InvalidArgumentError(f"{name}: todas as componentes devem ser finitas")

    vec.setflags(write=False)  # imutável
    return vec


def require_finite(value: ArrayLike, name: str = "t") -> ArrayLike:
    """Garante que um escalar (ou todos os elementos de um array) seja finito."""
    arr = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise InvalidArgumentError(f"{name} deve ser finito, recebido {value!r}")
    return value


def require_positive(value: float, name: str) -> float:
    """Garante um real finito e estritamente positivo (massa, tau, passo...)."""
    try:
        value = float(value)
    except (TypeError, ValueError) as e:
        raise InvalidArgumentError(f"{name} deve ser um número, recebido {value!r}") from e
    if not math.isfinite(value) or value <= 0.0:
        raise InvalidArgumentError(f"{name} deve ser positivo e finito, recebido {value!r}")
    return value


def finite_output(value: ArrayLike, what: str) -> ArrayLike:
    """
    Converte o resultado (0-d vira float) e falha se houver valores não finitos.
    Usado na saída das funções hiperbólicas, que estouram para |t/tau| grande.
    """
    arr = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise NumericalFailureError(f"{what}: resultado não finito (overflow de cosh/sinh?)")
    if arr.ndim == 0:
        return float(arr)
    return arr


# =============================================================================
# === FUNÇÕES HIPERBÓLICAS ESTÁVEIS ===
# =============================================================================

def _sinh_taylor(x: np.ndarray, degree: int) -> np.ndarray:
    """Polinômio de Taylor de sinh até o grau (ímpar) `degree`."""
    total = np.zeros_like(x)
    for k in range(1, degree + 1, 2):
        total = total + x ** k / math.factorial(k)
    return total


def _check_tail_degree(degree: int):
    if degree < 1 or degree % 2 == 0:
        raise InvalidArgumentError(f"degree deve ser ímpar e >= 1, recebido {degree}")


def sinh_tail(x: ArrayLike, degree: int) -> np.ndarray:
    """
    sinh(x) menos o seu polinômio de Taylor até o grau `degree` (ímpar).

    Ex: sinh_tail(x, 1) = sinh(x) - x
        sinh_tail(x, 3) = sinh(x) - x - x^3/6

    Para |x| pequeno a subtração direta perde todos os dígitos;
    nesse caso somamos a série a partir do primeiro termo omitido.
    """
    _check_tail_degree(degree)
    x = np.asarray(x, dtype=float)

    with np.errstate(over="ignore", invalid="ignore"):
        series = np.zeros_like(x)
        for k in range(degree + 2, degree + 2 + 2 * SERIES_TERMS, 2):
            series = series + x ** k / math.factorial(k)

        direct = np.sinh(x) - _sinh_taylor(x, degree)

    return np.where(np.abs(x) < SERIES_THRESHOLD, series, direct)


def sinh_tail_ratio(x: ArrayLike, degree: int) -> np.ndarray:
    """
    sinh_tail(x, degree) / x^(degree + 2), que vale 1/(degree + 2)! em x = 0.

    Permite escrever tau^n * cauda(t/tau) como t^n * razão(t/tau)
    sem nunca formar a potência tau^n (que estoura para tau grande).
    """
    _check_tail_degree(degree)
    x = np.asarray(x, dtype=float)
    first = degree + 2

    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        series = np.zeros_like(x)
        for j in range(SERIES_TERMS):
            series = series + x ** (2 * j) / math.factorial(first + 2 * j)

        direct = sinh_tail(x, degree) / x ** first

    return np.where(np.abs(x) < SERIES_THRESHOLD, series, direct)


def sinhc(x: ArrayLike) -> np.ndarray:
    """sinh(x) / x, com valor 1 em x = 0."""
    x = np.asarray(x, dtype=float)

    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        series = np.zeros_like(x)
        for j in range(SERIES_TERMS):
            series = series + x ** (2 * j) / math.factorial(2 * j + 1)

        direct = np.sinh(x) / x

    return np.where(np.abs(x) < SERIES_THRESHOLD, series, direct)


# =============================================================================
# === DIFERENÇAS FINITAS ===
# =============================================================================

def fd_step(value: float, relative: float = FD_RELATIVE_STEP) -> float:
    """Passo h = relative * (1 + |valor|), proporcional à magnitude da coordenada."""
    return relative * (1.0 + abs(float(value)))


def central_second_difference(values: np.ndarray, h: float) -> np.ndarray:
    """
    Segunda derivada por diferença central em amostras igualmente espaçadas.
    Retorna um array com os pontos interiores (len - 2).
    """
    values = np.asarray(values, dtype=float)
    return (values[2:] - 2.0 * values[1:-1] + values[:-2]) / (h * h)
