#!/usr/bin/env python3
"""
Script de aceptación sobre un corpus de triangulaciones aleatorias.

Genera CORPUS_SIZE triangulaciones con n entre CORPUS_MIN_N y CORPUS_MAX_N,
ejecuta el pipeline completo en paralelo y comprueba:

- validez de track layout, queue layout y dibujo 3D en cada caso
- cota de gap 2Z y plegado sin cambios en (Q, X)
- mediciones de reinsertión sin contraejemplos
- número de tracks estable entre n=50, 100 y 200
- determinismo: dos ejecuciones producen informes idénticos byte a byte
"""

import argparse
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor

# Agregar el directorio src al path para importar módulos
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from rich.console import Console

from config import Config
from console.ui import create_criteria_table, create_header, create_table, show_error, show_info, show_success
from ladder.errors import LadderError
from ladder.formats import dumps
from ladder.generators import random_triangulation
from ladder.pipeline import run_pipeline

console = Console()

CHECKPOINTS = (50, 100, 200)


def corpus_plan(size, min_n, max_n, seed):
    """
    Lista de (id, n, semilla). Los primeros casos cubren los tamaños de
    control que caen en el rango; el resto es uniforme.
    """
    rng = random.Random(seed)
    anchors = [n for n in CHECKPOINTS if min_n <= n <= max_n]
    per_anchor = max(1, size // 10) if anchors else 0
    sizes = [n for n in anchors for _ in range(per_anchor)][:size]
    while len(sizes) < size:
        sizes.append(rng.randint(min_n, max_n))
    return [(f"tri-{i:04d}-n{n}", n, rng.randrange(2 ** 31)) for i, n in enumerate(sizes)]


def run_instance(item):
    """Ejecuta un caso; los errores del pipeline quedan en el informe"""
    instance_id, n, seed = item
    try:
        g = random_triangulation(n, seed)
        report = run_pipeline(g, instance_id).report.to_dict()
    except LadderError as e:
        report = {'input': instance_id, 'error': e.describe(), 'passed': False}
    report['n'] = n
    report['seed'] = seed
    return report


def run_corpus(plan, workers):
    with ProcessPoolExecutor(max_workers=workers) as pool:
        reports = list(pool.map(run_instance, plan))
    return sorted(reports, key=lambda r: r['input'])


def evaluate(reports):
    """
    Criterios de aceptación sobre los informes.

    Returns:
        list: (criterio, aprobado, detalle)
    """
    failed = [r['input'] for r in reports if not r.get('passed')]
    gap = [r['input'] for r in reports if any('gap' in v for v in r.get('violations', []))]
    wrap = [r['input'] for r in reports if any('Wrap' in v or 'Wrapped' in v for v in r.get('violations', []))]
    reinsertion = [r['input'] for r in reports if r.get('reinsertion')]

    best = {}
    for r in reports:
        if r['n'] in CHECKPOINTS and 'track_count' in r:
            best[r['n']] = max(best.get(r['n'], 0), r['track_count'])
    if 50 in best and 200 in best:
        stable = best[200] <= best[50] + 2
        detail = f"max tracks por n: {dict(sorted(best.items()))}"
    else:
        stable = True
        detail = "sin casos n=50 y n=200 en el corpus"

    return [
        ("Validez del pipeline", not failed, f"{len(failed)} casos fallidos {failed[:5]}"),
        ("Gap <= 2Z", not gap, f"{len(gap)} casos {gap[:5]}"),
        ("Plegado en 2D tracks", not wrap, f"{len(wrap)} casos {wrap[:5]}"),
        ("Reinserción", not reinsertion, f"{len(reinsertion)} contraejemplos {reinsertion[:5]}"),
        ("Tracks independientes de n", stable, detail),
    ]


def track_distribution(reports):
    counts = {}
    for r in reports:
        if 'track_count' in r:
            counts[r['track_count']] = counts.get(r['track_count'], 0) + 1
    return dict(sorted(counts.items()))


def main():
    parser = argparse.ArgumentParser(description='Corpus acceptance run')
    parser.add_argument('--size', type=int, default=Config.CORPUS_SIZE)
    parser.add_argument('--min-n', type=int, default=Config.CORPUS_MIN_N)
    parser.add_argument('--max-n', type=int, default=Config.CORPUS_MAX_N)
    parser.add_argument('--seed', type=int, default=Config.DEFAULT_SEED)
    parser.add_argument('--workers', type=int, default=None)
    args = parser.parse_args()

    console.print(create_header(
        "Corpus de aceptación",
        f"{args.size} triangulaciones, n en [{args.min_n}, {args.max_n}], semilla {args.seed}"
    ))
    plan = corpus_plan(args.size, args.min_n, args.max_n, args.seed)

    reports = run_corpus(plan, args.workers)
    first = dumps(reports)
    deterministic = first == dumps(run_corpus(plan, args.workers))

    path = Config.output_path('corpus_report.json')
    with open(path, 'w', encoding='utf-8', newline='\n') as handle:
        handle.write(first)
    show_info(f"Informe escrito en {path}")

    for r in reports:
        if r.get('reinsertion'):
            with open(Config.output_path(f"counterexample_{r['input']}.json"), 'w', encoding='utf-8') as handle:
                handle.write(dumps(r))

    results = evaluate(reports)
    results.append(("Determinismo", deterministic, "informes idénticos" if deterministic else "los informes difieren"))
    console.print(create_criteria_table(results))
    console.print(create_table(
        "Distribución de tracks",
        [("Tracks", "cyan", "right"), ("Casos", "yellow", "right")],
        list(track_distribution(reports).items()),
    ))

    if all(ok for _, ok, _ in results):
        show_success("Todos los criterios se cumplen")
        return 0
    show_error("Hay criterios incumplidos")
    return 2


if __name__ == '__main__':
    sys.exit(main())
