"""
Console actions behind the CLI subcommands.

Each action returns the process exit code; errors of the pipeline are
raised as LadderError and translated by main().
"""
import logging
import os

from rich.console import Console

from config import Config
from console.ui import (
    create_header, create_issues_table, create_report_panel, create_table,
    create_timings_table, show_error, show_info, show_success, show_warning,
)
from ladder.drawing3d import to_obj, to_svg
from ladder.formats import dumps, read_graph, write_graph
from ladder.generators import generate
from ladder.pipeline import PipelineOptions, run_pipeline
from ladder.placement import PlacementConfig
from ladder.plane_graph import validate_embedding
from ladder.verify import min_queue_oracle

console = Console()
logger = logging.getLogger(__name__)


def _write(out_dir, name, text):
    """Escribe un fichero de salida y lo anuncia"""
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    with open(path, 'w', encoding='utf-8', newline='\n') as handle:
        handle.write(text)
    logger.info(f"[CLI] Wrote {path}")
    return path


def cmd_run(args):
    """
    Run the full pipeline on one graph file.

    Writes the JSON artifacts of every stage that ran, plus the SVG/OBJ
    renderings of the 3D drawing when requested.

    Returns:
        int: 0 when every validator passed, 2 otherwise
    """
    g = read_graph(args.input)
    input_id = os.path.splitext(os.path.basename(args.input))[0]
    config = PlacementConfig.parse(args.config) if args.config else None
    options = PipelineOptions(
        stop_after=args.stop_after,
        config=config,
        debug_verify=Config.is_debug_verify(),
        repair_limit_factor=Config.REPAIR_LIMIT_FACTOR,
    )

    console.print(create_header(
        "trackladder",
        f"Entrada: [yellow]{input_id}[/yellow] (n={g.vertex_count}, m={len(g.edges)})"
    ))
    result = run_pipeline(g, input_id, options)
    report = result.report

    out_dir = args.output or Config.OUTPUT_DIR
    for name, payload in result.artifacts().items():
        _write(out_dir, f"{input_id}.{name}", dumps(payload))
    if result.drawing is not None:
        if args.svg:
            _write(out_dir, f"{input_id}.svg", to_svg(result.drawing, result.final_edges))
        if args.obj:
            _write(out_dir, f"{input_id}.obj", to_obj(result.drawing, result.final_edges))
    elif args.svg or args.obj:
        show_warning("El pipeline se detuvo antes de embed3d; no se genera SVG/OBJ")

    console.print(create_timings_table(report.timings))
    console.print(create_report_panel(report))
    if report.findings:
        console.print(create_issues_table("Hallazgos", report.findings))
    if report.violations:
        console.print(create_issues_table("Violaciones", report.violations, style="red"))
        show_error(f"{len(report.violations)} validaciones fallidas")
        return 2

    show_success(f"Etapas completadas: {', '.join(report.stages_run)}")
    return 0


def cmd_gen(args):
    """
    Generate a graph (triangulation, grid or wheel) and write it.

    Returns:
        int: Exit code
    """
    seed = Config.DEFAULT_SEED if args.seed is None else args.seed
    g = generate(args.kind, args.n, seed)
    validate_embedding(g).raise_for_verdict()
    text = write_graph(g, args.format)
    if args.output:
        os.makedirs(os.path.dirname(os.path.abspath(args.output)), exist_ok=True)
        with open(args.output, 'w', encoding='utf-8', newline='\n') as handle:
            handle.write(text)
        show_success(f"{args.kind} n={g.vertex_count} m={len(g.edges)} -> {args.output}")
    else:
        console.print(text, end='', markup=False, highlight=False)
    return 0


def cmd_oracle(args):
    """
    Print the exact queue number of a small graph and a witness ordering.

    Returns:
        int: Exit code
    """
    g = read_graph(args.input)
    result = min_queue_oracle(g.edges, g.vertex_count, max_n=Config.ORACLE_MAX_N)
    console.print(create_table(
        "Oráculo de colas",
        [("Vértices", "cyan"), ("Aristas", "cyan"), ("Colas", "green", "right"), ("Orden", "yellow")],
        [(g.vertex_count, len(g.edges), result.value, ' '.join(map(str, result.order)))],
    ))
    show_info(f"Número de cola exacto: {result.value}")
    return 0
