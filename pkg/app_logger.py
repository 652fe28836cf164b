"""
App_Logger.py

Este módulo centraliza toda a lógica de logging da aplicação.
Configura o logger para escrever em '<NCDYN_LOG_DIR ou logs>/app.log' e
fornece funções para ler e limpar o arquivo de log (comando 'history').
"""

import logging
import os
import pathlib
import sys

# Diretório padrão do log; a variável de ambiente é lida a cada chamada
DEFAULT_LOG_DIR = "logs"
LOG_DIR_ENV = "NCDYN_LOG_DIR"
LOG_FILENAME = "app.log"

LOGGER_NAME = "NCDynamicsLogger"

# Mensagens com estas etiquetas também vão para stderr
_STDERR_TAGS = ("ERRO", "AVISO")


def log_file_path() -> pathlib.Path:
    """Caminho atual do arquivo de log."""
    return pathlib.Path(os.environ.get(LOG_DIR_ENV, DEFAULT_LOG_DIR)) / LOG_FILENAME


def _setup_logger() -> logging.Logger:
    """
    Configura e retorna o logger principal da aplicação.
    Se o diretório de log mudou desde a última chamada, o handler é trocado.
    """
    path = log_file_path()
    logger = logging.getLogger(LOGGER_NAME)

    # Previne handlers duplicados (e reaproveita o handler do mesmo arquivo)
    for handler in list(logger.handlers):
        if isinstance(handler, logging.FileHandler):
            if pathlib.Path(handler.baseFilename) == path.absolute():
                return logger
            logger.removeHandler(handler)
            handler.close()

    path.parent.mkdir(parents=True, exist_ok=True)
    logger.setLevel(logging.INFO)
    logger.propagate = False

    # 'a' (append) - 'utf-8' (para caracteres especiais)
    handler = logging.FileHandler(path, mode='a', encoding='utf-8')
    handler.setFormatter(logging.Formatter(
        '%(asctime)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    ))
    logger.addHandler(handler)

    return logger


# --- Funções Públicas ---

def log_action(message: str):
    """
    Registra uma ação no arquivo de log. Mensagens 'ERRO [...]' e
    'AVISO [...]' são repetidas em stderr (stdout fica só com a saída do comando).

    Falhas de escrita nunca interrompem o comando.
    """
    if message.startswith(_STDERR_TAGS):
        print(message, file=sys.stderr)

    try:
        _setup_logger().info(message)
    except Exception as e:
        print(f"ERRO [app_logger]: Falha ao registrar log: {e}", file=sys.stderr)


def read_log() -> str:
    """
    Lê todo o conteúdo do arquivo de log, linha mais nova primeiro.
    Retorna um aviso se o arquivo não existir.
    """
    path = log_file_path()
    try:
        if path.exists():
            with open(path, 'r', encoding='utf-8') as f:
                linhas = f.readlines()
                return "".join(reversed(linhas))
        return "Nenhum histórico de log encontrado."

    except OSError as e:
        print(f"ERRO [app_logger]: Falha ao ler log: {e}", file=sys.stderr)
        return f"Erro ao ler o arquivo de log: {e}"


def clear_log() -> None:
    """
    Limpa o arquivo de log (trunca o arquivo) e registra a limpeza.
    """
    path = log_file_path()
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        # Abrir em modo 'w' trunca o arquivo
        with open(path, 'w', encoding='utf-8'):
            pass

        log_action("Histórico de logs limpo.")

    except OSError as e:
        print(f"ERRO [app_logger]: Falha ao limpar log: {e}", file=sys.stderr)
        raise  # Re-levanta o erro para o main.py
