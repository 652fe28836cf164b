"""
Main.py (Controlador)

Este é o ponto de entrada principal do aplicativo (linha de comando).
Ele age como o "controlador": lê os argumentos, chama as camadas de
cálculo (dynamics, classical_transform, matching, verification) e
converte os resultados e erros em saída de texto e códigos de saída.

Subcomandos:
    run <cenário> [-o saída]
    match <família> <kappa> <F1> <F2> <F3> <massa> [--tau v|inf] [--pdf arquivo]
    sweep-tau <cenário> --taus 10,20,40 [--workers N] [--pdf arquivo]
    verify [--samples N] [--seed S] [--pdf arquivo]
    history [--clear]

Códigos de saída:
    run / sweep-tau: 0 ok, 2 erro no cenário, 3 divergência numérica, 4 parâmetro físico inválido
    match:           0 casamento existe, 1 não existe, 4 parâmetro inválido
    verify:          0 todas as verificações passaram, 1 alguma falhou
"""

import argparse
import math
import sys
from typing import List, Optional, Sequence

import app_logger
import export_utils
from classical_transform import integrate_classical
from deformation import DeformationFamily, FamilyId, parse_tau
from dynamics import ForceField, Treatment, integrate
from errors import InvalidArgumentError, ScenarioParseError, SimulationError
from matching import align_classical_initial, solve_match
from scenario_io import ScenarioFile, TreatmentChoice, load_scenario
from verification import DEFAULT_SWEEP_WORKERS, SUITE_SAMPLES, SUITE_SEED, run_verification, sweep_tau

EXIT_OK = 0
EXIT_NO_MATCH = 1
EXIT_VERIFY_FAILED = 1


# =============================================================================
# === CLASSE PRINCIPAL DA APLICAÇÃO (CONTROLADOR) ===
# =============================================================================

class App:
    """
    Controlador da linha de comando. Cada método 'cmd_*' executa um
    subcomando e devolve o código de saída; mensagens de erro vão para stderr.
    """

    def __init__(self, out=None, err=None):
        self.out = out if out is not None else sys.stdout
        self.err = err if err is not None else sys.stderr

    def echo(self, text: str = ""):
        print(text, file=self.out)

    def fail(self, where: str, error: Exception) -> int:
        """Mostra e registra o erro; devolve o código de saída correspondente."""
        code = getattr(error, "exit_code", 1)
        key = getattr(error, "key", None)
        detail = f" (chave: {key})" if key else ""
        print(f"erro: {error}{detail}", file=self.err)
        app_logger.log_action(f"Falha em {where} (código {code}): {error}{detail}")
        return code

    # --- run ---

    def cmd_run(self, scenario_path: str, output: Optional[str] = None) -> int:
        """Integra o(s) tratamento(s) do cenário e grava os CSV."""
        try:
            scenario_file = load_scenario(scenario_path)
            if output is not None:
                scenario_file = scenario_file.with_output(output)

            written = self._run_scenario(scenario_file)
            app_logger.log_action(f"Simulação '{scenario_path}' ({scenario_file.treatment.value}): "
                                  f"{', '.join(written)}")
            return EXIT_OK

        except SimulationError as e:
            return self.fail(f"run '{scenario_path}'", e)
        except OSError as e:
            error = ScenarioParseError(f"não foi possível gravar a saída '{e.filename or output}': {e.strerror or e}",
                                       key="output")
            return self.fail(f"run '{scenario_path}'", error)

    def _run_scenario(self, scenario_file: ScenarioFile) -> List[str]:
        scenario = scenario_file.scenario
        tf = scenario_file.transform
        paths = scenario_file.output_paths()
        trajectories = {}

        if scenario_file.treatment in (TreatmentChoice.NC, TreatmentChoice.BOTH):
            treatment = Treatment.NONCOMMUTATIVE if scenario.family is not None else Treatment.UNDEFORMED
            trajectories["nc"] = integrate(scenario, treatment)

        if scenario_file.treatment is TreatmentChoice.CLASSICAL:
            trajectories["cl"] = integrate_classical(scenario, tf)
        elif scenario_file.treatment is TreatmentChoice.BOTH:
            # mesma posição e velocidade físicas iniciais do tratamento não-comutativo
            trajectories["cl"] = integrate_classical(align_classical_initial(scenario, tf), tf)

        written = []
        for name, trajectory in trajectories.items():
            written.append(export_utils.write_trajectory_csv(trajectory, paths[name]))
            self.echo(f"{name}: {len(trajectory)} amostras -> {paths[name]}")

        if len(trajectories) == 2:
            deviation = trajectories["nc"].max_position_deviation(trajectories["cl"])
            self.echo(f"max |x_nc - x_cl| = {deviation:.6e}")
        return written

    # --- match ---

    def cmd_match(self, family_id: str, numbers: Sequence[str], tau: str = "inf",
                  pdf: Optional[str] = None) -> int:
        """Resolve o casamento e imprime o veredito (0 existe, 1 não existe)."""
        try:
            kappa, F1, F2, F3, mass = (_decimal(value, name) for value, name in
                                       zip(numbers, ("kappa", "F1", "F2", "F3", "mass")))
            family = DeformationFamily(_family_id(family_id), kappa, parse_tau(tau))
            result = solve_match(family, ForceField([F1, F2, F3]), mass)
        except SimulationError as e:
            return self.fail(f"match {family_id}", e)

        record = result.to_record()
        self.echo(f"família: {record['family']}  kappa: {record['kappa']:g}  tau: {record['tau']}")
        self.echo(f"veredito: {'existe' if result.exists else 'não existe'} ({result.tag})")
        self.echo(f"resíduo máximo |G - H|: {result.residual_bound:.3e} (tolerância {result.tolerance:.1e})")
        self.echo(f"nota: {result.notes}")

        rows = [[name, value] for name, value in (record["coefficients"] or {}).items()]
        if rows:
            self.echo()
            self.echo(export_utils.format_table(("coeficiente", "valor"), rows))

        if pdf:
            self._export_pdf(f"Casamento {record['family']}", ("coeficiente", "valor"), rows, pdf,
                             [f"veredito: {result.tag}", f"resíduo: {result.residual_bound:.3e}"])

        app_logger.log_action(f"Casamento {record['family']} (kappa={record['kappa']:g}, "
                              f"tau={record['tau']}): {result.tag}")
        return EXIT_OK if result.exists else EXIT_NO_MATCH

    # --- sweep-tau ---

    def cmd_sweep_tau(self, scenario_path: str, taus: str, workers: int = DEFAULT_SWEEP_WORKERS,
                      pdf: Optional[str] = None) -> int:
        """Tabela de desvio (tau finito contra o limite) por tau, com a ordem ajustada."""
        try:
            tau_list = _tau_list(taus)
            scenario_file = load_scenario(scenario_path)
            result = sweep_tau(scenario_file.scenario, tau_list, workers)
        except SimulationError as e:
            return self.fail(f"sweep-tau '{scenario_path}'", e)

        order = "-" if result.order is None else f"{result.order:.4f}"
        self.echo(f"família: {result.family.family_id.value}  kappa: {result.family.kappa:g}")
        self.echo(export_utils.format_table(result.HEADERS, result.table_rows()))
        self.echo(f"ordem de convergência ajustada: {order}")

        if pdf:
            self._export_pdf("Varredura em tau", result.HEADERS, result.table_rows(), pdf,
                             [f"ordem de convergência ajustada: {order}"])
        return EXIT_OK

    # --- verify ---

    def cmd_verify(self, samples: int = SUITE_SAMPLES, seed: int = SUITE_SEED,
                   pdf: Optional[str] = None) -> int:
        """Roda a suíte de propriedades (0 se tudo passar, 1 caso contrário)."""
        try:
            report = run_verification(samples=samples, seed=seed)
        except SimulationError as e:
            self.fail("verify", e)
            return EXIT_VERIFY_FAILED

        self.echo(export_utils.format_table(report.HEADERS, report.rows()))
        summary = f"{len(report.checks) - len(report.failures)}/{len(report.checks)} verificações passaram"
        self.echo()
        self.echo(summary)

        if pdf:
            self._export_pdf("Verificacao", report.HEADERS, report.rows(), pdf, [summary])
        return EXIT_OK if report.passed else EXIT_VERIFY_FAILED

    # --- history ---

    def cmd_history(self, clear: bool = False) -> int:
        """Mostra o histórico de ações (mais novo primeiro) ou o limpa."""
        if clear:
            try:
                app_logger.clear_log()
            except OSError as e:
                print(f"erro: não foi possível limpar o histórico: {e}", file=self.err)
                return 1
            self.echo("Histórico de logs limpo com sucesso.")
            return EXIT_OK

        self.echo(app_logger.read_log().rstrip("\n"))
        return EXIT_OK

    def _export_pdf(self, title: str, headers, rows, path: str, footer: Sequence[str]):
        # falha no PDF não muda o veredito do comando
        try:
            filepath = export_utils.export_table_to_pdf(title, headers, rows, path, footer)
            self.echo(f"PDF exportado: {filepath}")
            app_logger.log_action(f"Relatório '{title}' exportado para PDF: {filepath}")
        except Exception as e:
            print(f"erro: não foi possível exportar o PDF: {e}", file=self.err)


# =============================================================================
# === CONVERSÃO DE ARGUMENTOS ===
# =============================================================================

def _decimal(value: str, name: str) -> float:
    """Número decimal finito (erro de parâmetro -> código 4)."""
    try:
        number = float(value)
    except ValueError as e:
        raise InvalidArgumentError(f"{name} deve ser um número decimal, recebido {value!r}") from e
    if not math.isfinite(number):
        raise InvalidArgumentError(f"{name} deve ser finito, recebido {value!r}")
    return number


def _family_id(value: str) -> FamilyId:
    try:
        return FamilyId(value.lower())
    except ValueError as e:
        raise InvalidArgumentError(f"família desconhecida: {value!r} (use k1..k6)") from e


def _tau_list(text: str) -> List[float]:
    taus = []
    for item in text.split(","):
        taus.append(parse_tau(_decimal(item.strip(), "tau")))
    return taus


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ncdyn",
        description="Partícula sob força constante em espaço de fase não-comutativo "
                    "dependente do tempo, comparada com transformações clássicas.")
    subparsers = parser.add_subparsers(dest="command", required=True)

    run = subparsers.add_parser("run", help="integra um cenário e grava os CSV")
    run.add_argument("scenario", help="arquivo de cenário TOML")
    run.add_argument("-o", "--output", help="substitui o caminho de saída do cenário")

    match = subparsers.add_parser("match", help="procura a transformação que iguala G e H")
    match.add_argument("family", help="k1..k6")
    match.add_argument("numbers", nargs=5, metavar="N", help="kappa F1 F2 F3 massa")
    match.add_argument("--tau", default="inf", help="tau positivo ou 'inf' (padrão)")
    match.add_argument("--pdf", help="exporta o relatório em PDF")

    sweep = subparsers.add_parser("sweep-tau", help="convergência para o limite tau -> infinito")
    sweep.add_argument("scenario", help="arquivo de cenário TOML (com [family])")
    sweep.add_argument("--taus", required=True, help="lista crescente separada por vírgulas")
    sweep.add_argument("--workers", type=int, default=DEFAULT_SWEEP_WORKERS,
                       help=f"integrações simultâneas (padrão {DEFAULT_SWEEP_WORKERS})")
    sweep.add_argument("--pdf", help="exporta a tabela em PDF")

    verify = subparsers.add_parser("verify", help="roda a suíte de propriedades")
    verify.add_argument("--samples", type=int, default=SUITE_SAMPLES, help="pontos por família")
    verify.add_argument("--seed", type=int, default=SUITE_SEED, help="semente dos pontos")
    verify.add_argument("--pdf", help="exporta o relatório em PDF")

    history = subparsers.add_parser("history", help="mostra o histórico de ações")
    history.add_argument("--clear", action="store_true", help="limpa o histórico")

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Ponto de entrada; devolve o código de saída (não chama sys.exit)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # uso incorreto: argparse já imprimiu a mensagem (código 2)
        return int(e.code or 0)

    app = App()
    if args.command == "run":
        return app.cmd_run(args.scenario, args.output)
    if args.command == "match":
        return app.cmd_match(args.family, args.numbers, args.tau, args.pdf)
    if args.command == "sweep-tau":
        return app.cmd_sweep_tau(args.scenario, args.taus, args.workers, args.pdf)
    if args.command == "verify":
        return app.cmd_verify(args.samples, args.seed, args.pdf)
    return app.cmd_history(args.clear)


# =============================================================================
# === PONTO DE ENTRADA ===
# =============================================================================

if __name__ == "__main__":
    sys.exit(main())
