#!/usr/bin/env python3
"""
Entry point for the trackladder command line.

Subcommands:
    run     Full pipeline on a graph file
    gen     Generate a triangulation, grid or wheel
    oracle  Exact queue number of a small graph
"""
import argparse
import logging
import logging.handlers
import os
import sys
import uuid

from rich.console import Console

from config import Config
from console.actions import cmd_gen, cmd_oracle, cmd_run
from console.ui import show_error
from ladder.errors import LadderError
from ladder.formats import FORMATS
from ladder.generators import KINDS
from ladder.pipeline import STAGES

console = Console()


def setup_logging(run_id):
    """Setup rotating file logger"""
    log_dir = Config.LOG_DIR
    if not os.path.exists(log_dir):
        os.makedirs(log_dir)

    log_format = logging.Formatter(
        fmt='[%(asctime)s] [Run-%(run_id)s] [%(levelname)s] [%(name)s] %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    root_logger = logging.getLogger()
    root_logger.setLevel(getattr(logging, Config.LOG_LEVEL.upper(), logging.INFO))

    file_handler = logging.handlers.RotatingFileHandler(
        filename=f'{log_dir}/trackladder.log',
        maxBytes=Config.LOG_MAX_BYTES,
        backupCount=Config.LOG_BACKUP_COUNT,
        encoding='utf-8'
    )
    file_handler.setLevel(logging.DEBUG)
    file_handler.setFormatter(log_format)

    class RunIdFilter(logging.Filter):
        def filter(self, record):
            record.run_id = run_id
            return True

    file_handler.addFilter(RunIdFilter())
    root_logger.addHandler(file_handler)


def build_parser():
    """Construye el parser de argumentos con sus tres subcomandos"""
    parser = argparse.ArgumentParser(
        prog='trackladder',
        description='Track layouts of plane graphs via ladder placement',
    )
    sub = parser.add_subparsers(dest='command', required=True)

    run = sub.add_parser('run', help='Run the pipeline on a graph file')
    run.add_argument('input', help='Graph file (text or JSON)')
    run.add_argument('--stop-after', choices=STAGES, default=None, help='Stop after this stage')
    run.add_argument('--config', default=None, help="Placement override, e.g. 'Z=3,J=1'")
    run.add_argument('--svg', action='store_true', help='Write the SVG projection of the 3D drawing')
    run.add_argument('--obj', action='store_true', help='Write the 3D drawing as OBJ')
    run.add_argument('--seed', type=int, default=None, help='Accepted for symmetry with gen; the run is seed-free')
    run.add_argument('--output', '-o', default=None, help='Output directory (default: OUTPUT_DIR)')
    run.set_defaults(handler=cmd_run)

    gen = sub.add_parser('gen', help='Generate a plane graph')
    gen.add_argument('kind', choices=KINDS)
    gen.add_argument('n', type=int, help="Vertex count (side length for 'grid')")
    gen.add_argument('--seed', type=int, default=None, help='Random seed (default: DEFAULT_SEED)')
    gen.add_argument('--format', choices=FORMATS, default='text')
    gen.add_argument('--output', '-o', default=None, help='Output file (default: stdout)')
    gen.set_defaults(handler=cmd_gen)

    oracle = sub.add_parser('oracle', help='Exact queue number of a small graph')
    oracle.add_argument('input', help='Graph file (text or JSON)')
    oracle.set_defaults(handler=cmd_oracle)

    return parser


def main(argv=None):
    """Main entry point"""
    args = build_parser().parse_args(argv)
    run_id = uuid.uuid4().hex[:8]
    setup_logging(run_id)
    logger = logging.getLogger(__name__)
    logger.info(f"[CLI] Command {args.command}")

    try:
        return args.handler(args)
    except LadderError as e:
        logger.error(f"[CLI] {e.describe()}")
        show_error(e.describe())
        return e.exit_code
    except Exception as e:
        logger.exception(f"[CLI] Unexpected failure: {e}")
        console.print(f"[red]✗ Error interno: {e}[/red]")
        return 3


if __name__ == '__main__':
    sys.exit(main())
