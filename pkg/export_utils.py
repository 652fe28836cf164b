"""
Export_Utils.py (Camada de Utilitários de Exportação)

Contém a lógica para gravar trajetórias em CSV, formatar os relatórios
textuais dos comandos e exportá-los em PDF (usando reportlab).
"""

import csv
import datetime
import os
import pathlib
from typing import List, Optional, Sequence, Union

# Importações do ReportLab
from reportlab.lib import colors
from reportlab.lib.pagesizes import A4
from reportlab.lib.units import cm
from reportlab.pdfgen import canvas
from reportlab.platypus import Table, TableStyle

import app_logger
from dynamics import Trajectory

PathLike = Union[str, pathlib.Path]

TRAJECTORY_HEADER = ["t", "x1", "x2", "x3", "p1", "p2", "p3"]

# 17 dígitos significativos: o float é reproduzido exatamente
CSV_FLOAT_FORMAT = ".17g"


# =============================================================================
# === HELPER PARA GERENCIAR ARQUIVOS ===
# =============================================================================

def _get_export_filepath(prefix: str, extension: str, export_dir: PathLike = "exports") -> str:
    """
    Cria um caminho de arquivo padronizado na pasta 'exports'
    com um timestamp.
    Ex: exports/Verificacao_20251111_153045.pdf
    """
    pathlib.Path(export_dir).mkdir(parents=True, exist_ok=True)

    timestamp = datetime.datetime.now().strftime("%Y%m%d_%H%M%S")
    filename = f"{prefix}_{timestamp}.{extension}"

    return os.path.join(export_dir, filename)


# =============================================================================
# === TRAJETÓRIAS (CSV) ===
# =============================================================================

def write_trajectory_csv(trajectory: Trajectory, filepath: PathLike) -> str:
    """
    Grava a trajetória em CSV: cabeçalho 't,x1,x2,x3,p1,p2,p3',
    uma amostra por linha, separador ',' e fim de linha LF.

    A saída é determinística (mesma trajetória -> mesmos bytes).

    :return: O caminho do arquivo gerado.
    """
    filepath = pathlib.Path(filepath)

    try:
        filepath.parent.mkdir(parents=True, exist_ok=True)
        with open(filepath, 'w', newline='', encoding='utf-8') as f:
            writer = csv.writer(f, delimiter=',', lineterminator='\n')
            writer.writerow(TRAJECTORY_HEADER)

            for t, x, p in zip(trajectory.t, trajectory.x, trajectory.p):
                writer.writerow([format(float(v), CSV_FLOAT_FORMAT) for v in (t, *x, *p)])

        return str(filepath)

    except OSError as e:
        app_logger.log_action(f"ERRO [export_utils.write_trajectory_csv]: {e}")
        raise  # Re-levanta o erro para o main.py


# =============================================================================
# === RELATÓRIOS (TEXTO E PDF) ===
# =============================================================================

def format_value(value) -> str:
    """Formatação curta usada nas tabelas (números com 6 dígitos significativos)."""
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "sim" if value else "não"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def format_table(headers: Sequence[str], rows: Sequence[Sequence]) -> str:
    """
    Monta uma tabela de texto alinhada (colunas separadas por dois espaços).
    """
    cells = [[str(h) for h in headers]] + [[format_value(v) for v in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(headers))]

    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def export_table_to_pdf(title: str, headers: Sequence[str], rows: Sequence[Sequence],
                        filepath: Optional[PathLike] = None,
                        footer_lines: Sequence[str] = ()) -> str:
    """
    Exporta uma tabela de relatório para um PDF simples (A4, uma página).

    :param title: Título impresso no topo.
    :param filepath: Destino; se None, usa exports/<título>_<timestamp>.pdf.
    :param footer_lines: Linhas de texto abaixo da tabela (ex: ordem de convergência).
    :return: O caminho do arquivo gerado.
    """
    if filepath is None:
        filepath = _get_export_filepath(title.replace(" ", "_"), "pdf")
    filepath = str(filepath)
    pathlib.Path(filepath).parent.mkdir(parents=True, exist_ok=True)

    try:
        c = canvas.Canvas(filepath, pagesize=A4)
        width, height = A4
        y = height - 2 * cm
        margin_left = 2 * cm

        # --- Título ---
        c.setFont("Helvetica-Bold", 16)
        c.drawString(margin_left, y, title)
        y -= 0.8 * cm

        c.setFont("Helvetica", 9)
        c.drawString(margin_left, y, datetime.datetime.now().strftime("Gerado em %Y-%m-%d %H:%M:%S"))
        y -= 1.0 * cm

        # --- Tabela ---
        data: List[List[str]] = [[str(h) for h in headers]]
        data += [[format_value(v) for v in row] for row in rows]

        table = Table(data, repeatRows=1)
        table.setStyle(TableStyle([
            ('BACKGROUND', (0, 0), (-1, 0), colors.lightgrey),
            ('FONTNAME', (0, 0), (-1, 0), 'Helvetica-Bold'),
            ('GRID', (0, 0), (-1, -1), 0.5, colors.grey),
            ('FONTSIZE', (0, 0), (-1, -1), 8),  # Fonte menor para caber
            ('VALIGN', (0, 0), (-1, -1), 'TOP'),
            ('ALIGN', (1, 1), (-1, -1), 'RIGHT'),
        ]))

        # Desenha a tabela
        _, table_height = table.wrapOn(c, width - (2 * margin_left), height)
        table.drawOn(c, margin_left, y - table_height)
        y -= table_height + 0.8 * cm

        c.setFont("Helvetica", 10)
        for line in footer_lines:
            c.drawString(margin_left, y, line)
            y -= 0.5 * cm

        c.save()
        return filepath

    except Exception as e:
        app_logger.log_action(f"ERRO [export_utils.export_table_to_pdf]: {e}")
        raise
