"""
NC_Phase_Space.py (Espaço de Fase Não-Comutativo)

Representa a estrutura de Poisson deformada

    {x̄1, x̄2} = f(t),   {x̄1, x̄3} = {x̄2, x̄3} = 0,
    {x̄i, p̄j} = delta_ij,   {p̄i, p̄j} = 0,

através da representação de Bopp sobre o espaço de fase canônico (x, p):

    x̄1 = x1 - f(t)/2 * p2,   x̄2 = x2 + f(t)/2 * p1,   x̄3 = x3,   p̄i = pi.

Os parênteses são calculados numericamente (diferenças centrais) sobre
observáveis arbitrários. O tempo t é um parâmetro externo: nunca é
argumento do parêntese.
"""

import dataclasses
import itertools
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from deformation import DeformationFamily, eval_f
from errors import InvalidArgumentError, NumericalFailureError
from utils import as_vector3, fd_step, require_finite

# Nomes das coordenadas canônicas, na ordem do vetor de estado (x1..x3, p1..p3)
COORDINATE_NAMES = ("x1", "x2", "x3", "p1", "p2", "p3")

# Nomes das variáveis não-comutativas (mesma ordem)
BOPP_NAMES = ("xbar1", "xbar2", "xbar3", "pbar1", "pbar2", "pbar3")

# Passo relativo do parêntese simples e da camada externa dos parênteses aninhados
BRACKET_RELATIVE_STEP = 1e-6
NESTED_RELATIVE_STEP = 1e-4

# Forma simplética canônica: {A, B} = grad(A) . OMEGA . grad(B)
SYMPLECTIC = np.block([
    [np.zeros((3, 3)), np.eye(3)],
    [-np.eye(3), np.zeros((3, 3))],
])


# =============================================================================
# === TIPOS ===
# =============================================================================

@dataclasses.dataclass(frozen=True)
class PhaseState:
    """Ponto do espaço de fase canônico no instante t."""

    t: float
    x: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        require_finite(self.t, "t")
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "x", as_vector3(self.x, "x"))
        object.__setattr__(self, "p", as_vector3(self.p, "p"))

    def as_array(self) -> np.ndarray:
        """Vetor de 6 componentes (x1, x2, x3, p1, p2, p3)."""
        return np.concatenate([self.x, self.p])

    @classmethod
    def from_array(cls, t: float, y: Sequence[float]) -> "PhaseState":
        y = np.asarray(y, dtype=float)
        return cls(t, y[:3], y[3:])

    def to_record(self) -> Dict[str, float]:
        record = {"t": self.t}
        record.update({name: float(v) for name, v in zip(COORDINATE_NAMES, self.as_array())})
        return record

    def __eq__(self, other) -> bool:
        if not isinstance(other, PhaseState):
            return NotImplemented
        return (self.t == other.t
                and np.array_equal(self.x, other.x)
                and np.array_equal(self.p, other.p))

    def __hash__(self) -> int:
        return hash((self.t, tuple(self.x), tuple(self.p)))


@dataclasses.dataclass(frozen=True)
class NCCoordinates:
    """Variáveis não-comutativas (x̄, p̄)."""

    xbar: np.ndarray
    pbar: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "xbar", as_vector3(self.xbar, "xbar"))
        object.__setattr__(self, "pbar", as_vector3(self.pbar, "pbar"))

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.xbar, self.pbar])


# Observável escalar A(x, p, t) e sua versão vetorial
ScalarObservable = Callable[[PhaseState], float]
VectorObservable = Callable[[PhaseState], np.ndarray]


@dataclasses.dataclass(frozen=True)
class SampleBox:
    """Caixa compacta onde os pontos de teste são sorteados."""

    x_range: Tuple[float, float] = (-5.0, 5.0)
    p_range: Tuple[float, float] = (-5.0, 5.0)
    t_range: Tuple[float, float] = (0.0, 2.0)

    def describe(self) -> str:
        return f"x in {list(self.x_range)}^3, p in {list(self.p_range)}^3, t in {list(self.t_range)}"


@dataclasses.dataclass(frozen=True)
class RelationResidual:
    """Maior resíduo de uma relação e o ponto onde ocorreu."""

    name: str
    max_residual: float
    max_relative: float
    argmax_point: Optional[PhaseState]

    def to_record(self) -> Dict[str, object]:
        record: Dict[str, object] = {
            "relation": self.name,
            "max_residual": self.max_residual,
            "max_relative": self.max_relative,
        }
        if self.argmax_point is not None:
            record.update(self.argmax_point.to_record())
        return record


@dataclasses.dataclass(frozen=True)
class BracketReport:
    """Resíduos máximos por relação, para uma família e um conjunto de amostras."""

    family: DeformationFamily
    sample_count: int
    box: Optional[SampleBox]
    relations: Dict[str, RelationResidual]

    def to_records(self) -> List[Dict[str, object]]:
        records = []
        for relation in self.relations.values():
            record = {"family": self.family.family_id.value, "tau": self.family.to_record()["tau"]}
            record.update(relation.to_record())
            record["box"] = self.box.describe() if self.box else ""
            records.append(record)
        return records


# =============================================================================
# === OBSERVÁVEIS ===
# =============================================================================

def coordinate(name: str) -> ScalarObservable:
    """Observável que devolve uma coordenada canônica ('x1'..'p3')."""
    try:
        index = COORDINATE_NAMES.index(name)
    except ValueError as e:
        raise InvalidArgumentError(f"coordenada desconhecida: {name!r}") from e
    return lambda state: float(state.as_array()[index])


def bopp_map(state: PhaseState, family: Optional[DeformationFamily]) -> NCCoordinates:
    """
    Representação de Bopp: (x, p, t) -> (x̄, p̄).
    Sem família (ou kappa = 0) é a identidade, bit a bit.
    """
    f = eval_f(family, state.t) if family is not None else 0.0
    half_f = f / 2.0

    x1, x2, x3 = state.x
    p1, p2, _ = state.p

    xbar = (x1 - half_f * p2, x2 + half_f * p1, x3)
    return NCCoordinates(xbar, state.p)


def bopp_vector(family: Optional[DeformationFamily]) -> VectorObservable:
    """As seis variáveis (x̄1..x̄3, p̄1..p̄3) como um único observável vetorial."""
    return lambda state: bopp_map(state, family).as_array()


def bopp_observable(name: str, family: Optional[DeformationFamily]) -> ScalarObservable:
    """Observável escalar x̄i ou p̄i ('xbar1'..'pbar3') composto com o mapa de Bopp."""
    try:
        index = BOPP_NAMES.index(name)
    except ValueError as e:
        raise InvalidArgumentError(f"variável não-comutativa desconhecida: {name!r}") from e
    return lambda state: float(bopp_map(state, family).as_array()[index])


def random_samples(box: SampleBox, n: int, seed: Union[int, np.random.Generator] = 0) -> List[PhaseState]:
    """Sorteia n pontos uniformes na caixa (reprodutível pela semente)."""
    if n <= 0:
        raise InvalidArgumentError("n deve ser positivo")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)

    xs = rng.uniform(*box.x_range, size=(n, 3))
    ps = rng.uniform(*box.p_range, size=(n, 3))
    ts = rng.uniform(*box.t_range, size=n)
    return [PhaseState(t, x, p) for t, x, p in zip(ts, xs, ps)]


# =============================================================================
# === PARÊNTESES DE POISSON NUMÉRICOS ===
# =============================================================================

def _jacobian(func: VectorObservable, point: PhaseState,
              relative_step: float = BRACKET_RELATIVE_STEP) -> np.ndarray:
    """
    Matriz (m x 6) das derivadas parciais de um observável (escalar ou vetorial)
    em relação a (x1..x3, p1..p3), por diferenças centrais.
    """
    y = point.as_array()
    columns = []

    for index in range(6):
        h = fd_step(y[index], relative_step)
        y_up, y_down = y.copy(), y.copy()
        y_up[index] += h
        y_down[index] -= h
        # passo efetivamente representado em ponto flutuante
        denom = y_up[index] - y_down[index]

        try:
            up = np.atleast_1d(np.asarray(func(PhaseState.from_array(point.t, y_up)), dtype=float))
            down = np.atleast_1d(np.asarray(func(PhaseState.from_array(point.t, y_down)), dtype=float))
        except NumericalFailureError as e:
            raise NumericalFailureError(str(e), index=index) from e

        column = (up - down) / denom
        if not np.all(np.isfinite(column)):
            raise NumericalFailureError(
                f"derivada parcial não finita em relação a {COORDINATE_NAMES[index]}", index=index)
        columns.append(column)

    return np.stack(columns, axis=1)


def poisson_bracket(A: ScalarObservable, B: ScalarObservable, point: PhaseState,
                    relative_step: float = BRACKET_RELATIVE_STEP) -> float:
    """
    {A, B} = sum_i (dA/dxi dB/dpi - dA/dpi dB/dxi) no ponto dado.

    :raises NumericalFailureError: derivada não finita (com o índice da coordenada).
    """
    grad_a = _jacobian(A, point, relative_step)[0]
    grad_b = _jacobian(B, point, relative_step)[0]
    return float(grad_a @ SYMPLECTIC @ grad_b)


def bracket_observable(A: ScalarObservable, B: ScalarObservable) -> ScalarObservable:
    """O próprio parêntese {A, B} como um novo observável (para parênteses aninhados)."""
    return lambda state: poisson_bracket(A, B, state)


def bracket_matrix(func: VectorObservable, point: PhaseState,
                   relative_step: float = BRACKET_RELATIVE_STEP) -> np.ndarray:
    """Matriz P[a, b] = {y_a, y_b} de todos os pares de componentes de um observável vetorial."""
    J = _jacobian(func, point, relative_step)
    return J @ SYMPLECTIC @ J.T


# =============================================================================
# === VERIFICAÇÃO DAS RELAÇÕES ===
# =============================================================================

class _Tracker:
    """Acumula o maior resíduo (absoluto e relativo) de uma relação."""

    def __init__(self, name: str):
        self.name = name
        self.max_residual = 0.0
        self.max_relative = 0.0
        self.argmax: Optional[PhaseState] = None

    def update(self, residual: float, reference: float, point: PhaseState):
        residual = abs(residual)
        relative = residual / (1.0 + abs(reference))
        if self.argmax is None or residual > self.max_residual:
            self.max_residual = residual
            self.argmax = point
        self.max_relative = max(self.max_relative, relative)

    def result(self) -> RelationResidual:
        return RelationResidual(self.name, self.max_residual, self.max_relative, self.argmax)


def verify_bracket_relations(family: DeformationFamily, samples: Sequence[PhaseState],
                             box: Optional[SampleBox] = None) -> BracketReport:
    """
    Confere, em cada amostra, todas as relações do espaço de fase deformado
    pela representação de Bopp. Retorna o maior resíduo por relação.
    """
    if not samples:
        raise InvalidArgumentError("a lista de amostras não pode ser vazia")

    trackers = {name: _Tracker(name) for name in (
        "{xbar1,xbar2}-f", "{xbar1,xbar3}", "{xbar2,xbar3}", "{xbar_i,pbar_j}-delta", "{pbar_i,pbar_j}")}
    vector = bopp_vector(family)

    for point in samples:
        P = bracket_matrix(vector, point)
        f = eval_f(family, point.t)

        trackers["{xbar1,xbar2}-f"].update(P[0, 1] - f, f, point)
        trackers["{xbar1,xbar3}"].update(P[0, 2], 0.0, point)
        trackers["{xbar2,xbar3}"].update(P[1, 2], 0.0, point)

        mixed = P[:3, 3:] - np.eye(3)
        trackers["{xbar_i,pbar_j}-delta"].update(float(np.max(np.abs(mixed))), 1.0, point)

        momenta = P[3:, 3:]
        trackers["{pbar_i,pbar_j}"].update(float(np.max(np.abs(momenta))), 0.0, point)

    return BracketReport(family, len(samples), box, {name: tr.result() for name, tr in trackers.items()})


def _resolve(item: Union[str, ScalarObservable], family: Optional[DeformationFamily]) -> ScalarObservable:
    if isinstance(item, str):
        if item in BOPP_NAMES:
            return bopp_observable(item, family)
        return coordinate(item)
    return item


def jacobi_residual(family: Optional[DeformationFamily],
                    triple: Sequence[Union[str, ScalarObservable]],
                    point: PhaseState) -> float:
    """
    |{{A,B},C} + {{B,C},A} + {{C,A},B}| com parênteses numéricos aninhados.

    Os elementos do trio podem ser observáveis ou nomes ('xbar1', 'p2', ...);
    nomes de variáveis barradas são representados via Bopp com a família dada.
    A camada externa usa um passo maior (NESTED_RELATIVE_STEP).
    """
    if len(triple) != 3:
        raise InvalidArgumentError("o trio deve ter exatamente 3 observáveis")
    A, B, C = (_resolve(item, family) for item in triple)

    total = 0.0
    for first, second, third in ((A, B, C), (B, C, A), (C, A, B)):
        total += poisson_bracket(bracket_observable(first, second), third, point, NESTED_RELATIVE_STEP)
    return abs(total)


def jacobi_suite(family: Optional[DeformationFamily], samples: Sequence[PhaseState]) -> RelationResidual:
    """
    Maior resíduo de Jacobi sobre todos os trios de coordenadas barradas
    (x̄1..p̄3), em todas as amostras.

    Em vez de repetir parênteses aninhados trio a trio, deriva numericamente
    a matriz P = {y_a, y_b} inteira uma vez por amostra:
        {{a, b}, c} = grad(P_ab) . OMEGA . grad(y_c)
    """
    if not samples:
        raise InvalidArgumentError("a lista de amostras não pode ser vazia")

    vector = bopp_vector(family)
    tracker = _Tracker("jacobi")
    triples = list(itertools.combinations(range(6), 3))

    for point in samples:
        J = _jacobian(vector, point)
        dP = _jacobian(lambda state: bracket_matrix(vector, state).ravel(), point, NESTED_RELATIVE_STEP)
        nested = dP.reshape(6, 6, 6) @ SYMPLECTIC @ J.T  # nested[a, b, c] = {{a, b}, c}

        worst = max(abs(nested[a, b, c] + nested[b, c, a] + nested[c, a, b]) for a, b, c in triples)
        tracker.update(worst, 0.0, point)

    return tracker.result()
