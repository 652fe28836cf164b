"""
Scenario_IO.py (Leitura dos Arquivos de Cenário)

Lê um arquivo de cenário TOML e monta os objetos de domínio
(Scenario, DeformationFamily, TransformFamily). O formato está
documentado em scenarios/README.md.

Erros de formato (arquivo ilegível, chave ausente, tipo errado) viram
ScenarioParseError com a chave culpada; valores fisicamente inválidos
(massa <= 0, passo <= 0, tau <= 0...) seguem como InvalidArgumentError.
"""

import dataclasses
import enum
import pathlib

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from typing import Any, Dict, List, Mapping, Optional, Union

from classical_transform import COEFFICIENT_NAMES, TransformFamily
from deformation import DeformationFamily, FamilyId
from dynamics import Scenario
from errors import ScenarioParseError

PathLike = Union[str, pathlib.Path]

_TOP_LEVEL_KEYS = {"treatment", "mass", "force", "x0", "v0", "t_start", "t_end", "step", "output",
                   "family", "transform"}
_FAMILY_KEYS = {"id", "kappa", "tau"}
_TRANSFORM_KEYS = set(COEFFICIENT_NAMES) | {"tau"}


class TreatmentChoice(str, enum.Enum):
    """Tratamento(s) pedido(s) pelo arquivo de cenário."""

    NC = "nc"
    CLASSICAL = "classical"
    BOTH = "both"


@dataclasses.dataclass(frozen=True)
class ScenarioFile:
    """Conteúdo validado de um arquivo de cenário."""

    source: pathlib.Path
    treatment: TreatmentChoice
    scenario: Scenario
    transform: Optional[TransformFamily]
    output: pathlib.Path

    def output_paths(self) -> Dict[str, pathlib.Path]:
        """
        Caminhos dos CSV de saída por tratamento ('nc' e/ou 'cl').
        Em 'both', o '.csv' final é trocado pelos sufixos '.nc.csv' e '.cl.csv'.
        """
        if self.treatment is TreatmentChoice.NC:
            return {"nc": self.output}
        if self.treatment is TreatmentChoice.CLASSICAL:
            return {"cl": self.output}

        base = str(self.output)
        if base.lower().endswith(".csv"):
            base = base[:-4]
        return {"nc": pathlib.Path(base + ".nc.csv"), "cl": pathlib.Path(base + ".cl.csv")}

    def with_output(self, output: PathLike) -> "ScenarioFile":
        """Troca o caminho de saída (opção -o da linha de comando, relativo ao diretório atual)."""
        return dataclasses.replace(self, output=pathlib.Path(output))


# =============================================================================
# === LEITURA DE CAMPOS ===
# =============================================================================

def _require(table: Mapping[str, Any], key: str, prefix: str = "") -> Any:
    if key not in table:
        raise ScenarioParseError(f"chave obrigatória ausente: '{prefix}{key}'", key=f"{prefix}{key}")
    return table[key]


def _number(value: Any, key: str) -> float:
    # bool é subclasse de int no Python, mas 'true' não é um número válido aqui
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioParseError(f"'{key}' deve ser um número, recebido {value!r}", key=key)
    return float(value)


def _vector(value: Any, key: str) -> List[float]:
    if not isinstance(value, list) or len(value) != 3:
        raise ScenarioParseError(f"'{key}' deve ser uma lista de 3 números, recebido {value!r}", key=key)
    return [_number(v, f"{key}[{i}]") for i, v in enumerate(value)]


def _tau(value: Any, key: str) -> Union[float, str]:
    if isinstance(value, str):
        if value.strip().lower() not in ("inf", "infinity"):
            raise ScenarioParseError(f"'{key}' deve ser um número positivo ou \"inf\", recebido {value!r}",
                                     key=key)
        return "inf"
    return _number(value, key)


def _table(document: Mapping[str, Any], key: str) -> Optional[Mapping[str, Any]]:
    table = document.get(key)
    if table is None:
        return None
    if not isinstance(table, dict):
        raise ScenarioParseError(f"'{key}' deve ser uma tabela [{key}]", key=key)
    return table


def _check_unknown(table: Mapping[str, Any], allowed: set, prefix: str = "") -> None:
    unknown = sorted(set(table) - allowed)
    if unknown:
        raise ScenarioParseError(f"chave desconhecida: '{prefix}{unknown[0]}'", key=f"{prefix}{unknown[0]}")


# =============================================================================
# === PARSE ===
# =============================================================================

def parse_family(table: Mapping[str, Any]) -> DeformationFamily:
    """Tabela [family] -> DeformationFamily."""
    _check_unknown(table, _FAMILY_KEYS, "family.")

    family_id = _require(table, "id", "family.")
    valid_ids = [fid.value for fid in FamilyId]
    if not isinstance(family_id, str) or family_id.lower() not in valid_ids:
        raise ScenarioParseError(f"'family.id' deve ser um de {valid_ids}, recebido {family_id!r}",
                                 key="family.id")

    kappa = _number(_require(table, "kappa", "family."), "family.kappa")
    tau = _tau(table.get("tau", "inf"), "family.tau")
    return DeformationFamily(family_id.lower(), kappa, tau)


def parse_transform(table: Mapping[str, Any]) -> TransformFamily:
    """Tabela [transform] -> TransformFamily (coeficientes ausentes valem 0)."""
    _check_unknown(table, _TRANSFORM_KEYS, "transform.")

    values = {name: _number(table[name], f"transform.{name}") for name in COEFFICIENT_NAMES if name in table}
    tau = _tau(table.get("tau", "inf"), "transform.tau")
    return TransformFamily(**values, tau=tau)


def parse_scenario(document: Mapping[str, Any], base_dir: PathLike = ".",
                   source: PathLike = "<memória>") -> ScenarioFile:
    """
    Valida o documento já decodificado e monta o ScenarioFile.

    :param base_dir: Diretório usado para resolver um 'output' relativo.
    :raises ScenarioParseError: chave ausente, desconhecida ou de tipo errado.
    :raises InvalidArgumentError: parâmetros físicos inválidos.
    """
    _check_unknown(document, _TOP_LEVEL_KEYS)

    raw_treatment = _require(document, "treatment")
    try:
        treatment = TreatmentChoice(raw_treatment)
    except ValueError as e:
        raise ScenarioParseError(
            f"'treatment' deve ser \"nc\", \"classical\" ou \"both\", recebido {raw_treatment!r}",
            key="treatment") from e

    mass = _number(_require(document, "mass"), "mass")
    force = _vector(_require(document, "force"), "force")
    x0 = _vector(_require(document, "x0"), "x0")
    v0 = _vector(_require(document, "v0"), "v0")
    t_start = _number(document.get("t_start", 0.0), "t_start")
    t_end = _number(_require(document, "t_end"), "t_end")
    step = _number(_require(document, "step"), "step")

    output = _require(document, "output")
    if not isinstance(output, str) or not output.strip():
        raise ScenarioParseError(f"'output' deve ser um caminho, recebido {output!r}", key="output")

    family_table = _table(document, "family")
    family = parse_family(family_table) if family_table is not None else None

    transform_table = _table(document, "transform")
    transform = parse_transform(transform_table) if transform_table is not None else None
    if transform is None and treatment is not TreatmentChoice.NC:
        raise ScenarioParseError(f"tratamento \"{treatment.value}\" exige a tabela [transform]",
                                 key="transform")

    scenario = Scenario.from_kinematics(mass, force, x0, v0, t_end, step, family=family, t_start=t_start)

    output_path = pathlib.Path(output)
    if not output_path.is_absolute():
        output_path = pathlib.Path(base_dir) / output_path

    return ScenarioFile(pathlib.Path(source), treatment, scenario, transform, output_path)


def load_scenario(path: PathLike) -> ScenarioFile:
    """
    Lê e valida um arquivo de cenário TOML.

    :raises ScenarioParseError: arquivo ilegível, fora de UTF-8 ou TOML inválido.
    """
    path = pathlib.Path(path)
    try:
        with open(path, "rb") as f:
            document = tomllib.load(f)
    except OSError as e:
        raise ScenarioParseError(f"não foi possível ler o cenário '{path}': {e}") from e
    except tomllib.TOMLDecodeError as e:
        raise ScenarioParseError(f"TOML inválido em '{path}': {e}") from e
    except UnicodeDecodeError as e:
        raise ScenarioParseError(f"o cenário '{path}' não está em UTF-8: {e}") from e

    return parse_scenario(document, base_dir=path.parent, source=path)
