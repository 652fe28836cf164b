"""
Errors.py (Exceções da Aplicação)

Define a hierarquia de exceções usada por todas as camadas.
As camadas de cálculo apenas levantam (raise) estes erros;
quem decide a mensagem e o código de saída é o `main.py` (controlador).
"""

from typing import Optional


class SimulationError(Exception):
    """Base de todos os erros da aplicação."""

    # Código de saída usado pelo controlador (main.py)
    exit_code: int = 1


class InvalidArgumentError(SimulationError, ValueError):
    """Argumento inválido: tempo não finito, eixo errado, massa <= 0, tau <= 0, etc."""

    exit_code = 4


class NumericalFailureError(SimulationError, ArithmeticError):
    """
    Falha numérica (derivada parcial ou valor de função não finito).

    :param index: Índice da coordenada culpada (0..5 = x1..x3, p1..p3), se houver.
    """

    exit_code = 3

    def __init__(self, message: str, index: Optional[int] = None):
        super().__init__(message)
        self.index = index


class DivergenceError(SimulationError, ArithmeticError):
    """
    O integrador encontrou um estado não finito.

    :param time: Instante em que o estado deixou de ser finito.
    """

    exit_code = 3

    def __init__(self, message: str, time: float):
        super().__init__(message)
        self.time = time


class UnsupportedOriginError(SimulationError, ValueError):
    """Solução analítica pedida com t0 != 0 (as fórmulas fechadas integram a partir de 0)."""

    exit_code = 4


class NoMatchError(SimulationError):
    """Não existe transformação clássica que iguale as duas forças geradas."""

    exit_code = 1


class ScenarioParseError(SimulationError, ValueError):
    """
    Arquivo de cenário ilegível, chave ausente ou tipo errado.

    :param key: A chave (com pontos, ex: 'family.kappa') que causou o erro.
    """

    exit_code = 2

    def __init__(self, message: str, key: Optional[str] = None):
        super().__init__(message)
        self.key = key
