"""
Componentes Rich de la línea de comandos.
Paneles e informes de ejecución, tablas de etapas y mensajes de estado.
"""
from rich.console import Console
from rich.table import Table
from rich.panel import Panel

console = Console()

# (color, icono) de cada tipo de mensaje
STATUS_STYLES = {
    'success': ("green", "✓"),
    'error': ("red", "✗"),
    'warning': ("yellow", "⚠"),
    'info': ("cyan", "ℹ"),
}

# ============================================================================
# PANELES
# ============================================================================

def create_header(title, subtitle=None, border_style="cyan"):
    """
    Panel de cabecera de un comando.

    Args:
        title: Nombre del comando o del informe
        subtitle: Línea con la entrada o los parámetros
        border_style: Color del borde

    Returns:
        Panel: Cabecera
    """
    lines = [f"[bold {border_style}]{title}[/bold {border_style}]"]
    if subtitle:
        lines.append(subtitle)
    return Panel("\n".join(lines), border_style=border_style)


def create_report_panel(report):
    """
    Panel con las métricas de un RunReport.

    Los valores de etapas que no llegaron a ejecutarse se muestran como N/A.
    """
    m = report.metrics
    fields = [
        ("Q", m.Q if m else None),
        ("X", m.X if m else None),
        ("D", m.D if m else None),
        ("Tracks (escalera)", report.ladder_tracks or None),
        ("Tracks (layout)", report.track_count or None),
        ("Colas", report.queue_count or None),
        ("Volumen 3D", "x".join(map(str, report.volume)) if report.volume else None),
    ]
    body = "\n".join(
        f"[bold]{name}:[/bold] [cyan]{'N/A' if value is None else value}[/cyan]"
        for name, value in fields
    )
    border = "green" if report.passed else "red"
    return Panel(body, title=f"Informe {report.input_id}", border_style=border)


# ============================================================================
# TABLAS
# ============================================================================

def create_table(title, columns, rows=()):
    """
    Tabla Rich a partir de columnas (nombre[, estilo[, alineación]]) y filas.

    Returns:
        Table: Tabla con una fila por elemento de rows
    """
    table = Table(title=title, header_style="bold magenta")
    for name, *options in columns:
        style = options[0] if options else None
        justify = options[1] if len(options) > 1 else "left"
        table.add_column(name, style=style, justify=justify)
    for row in rows:
        table.add_row(*(str(cell) for cell in row))
    return table


def create_timings_table(timings):
    """Tiempo por etapa, con el total en la última fila"""
    table = create_table(
        "Etapas",
        [("Etapa", "cyan"), ("Tiempo", "yellow", "right")],
        [(stage, f"{seconds:.3f}s") for stage, seconds in timings.items()],
    )
    table.add_row("[bold]total[/bold]", f"[bold]{sum(timings.values()):.3f}s[/bold]")
    return table


def create_issues_table(title, items, style="yellow", width=70):
    """Violaciones o hallazgos numerados; los textos largos se recortan a width"""
    rows = [
        (i, item if len(item) <= width else item[:width - 3] + "...")
        for i, item in enumerate(items, 1)
    ]
    return create_table(title, [("#", "dim", "right"), ("Detalle", style)], rows)


def create_criteria_table(results):
    """Criterios de aceptación (nombre, cumplido, detalle) con su veredicto"""
    return create_table(
        "Criterios",
        [("Criterio", "cyan"), ("Estado", "bold"), ("Detalle", "dim")],
        [(name, verdict_cell(ok), detail) for name, ok, detail in results],
    )


def verdict_cell(ok):
    """Celda ✓/✗ coloreada"""
    color, icon = STATUS_STYLES['success' if ok else 'error']
    return f"[{color}]{icon}[/{color}]"


# ============================================================================
# MENSAJES
# ============================================================================

def show_status(kind, message):
    color, icon = STATUS_STYLES[kind]
    console.print(f"[{color}]{icon}[/{color}] {message}")


def show_success(message):
    show_status('success', message)


def show_error(message):
    show_status('error', message)


def show_warning(message):
    show_status('warning', message)


def show_info(message):
    show_status('info', message)
