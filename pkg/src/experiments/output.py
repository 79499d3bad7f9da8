"""
CSV output and gnuplot scripts for the experiment results.
"""

import csv
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence, Tuple, Union

import structlog

from ..common.errors import InvalidArgumentError, OutputError

logger = structlog.get_logger(__name__)

FIG1_COLUMNS = ['M', 'estimator', 'fading', 'mean_sum_se', 'std_error']
FIG2_COLUMNS = ['estimator', 'fading', 'M', 'se', 'cdf']
VALIDATE_COLUMNS = [
    'drop', 'fading', 'antennas', 'estimator', 'cell', 'ue', 'serving_bs',
    'closed_sinr', 'mc_sinr', 'mc_std_error', 'rel_error', 'passed', 'within_target',
]
PER_UE_COLUMNS = [
    'drop', 'cell', 'ue', 'serving_bs', 'antennas', 'estimator', 'fading', 'sinr', 'se', 'mse',
]

_LABELS = {'mmse': 'MMSE', 'ls': 'LS', 'rician': 'Rician', 'rayleigh': 'Rayleigh'}


def format_value(value: Any) -> str:
    """Text form of a CSV cell: floats with 12 significant digits, lowercase booleans."""
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def write_csv(path: Union[str, Path], columns: Sequence[str], rows: Iterable[Dict[str, Any]]) -> Path:
    """
    Write rows (dicts keyed by column) as UTF-8 CSV with a header row.

    Raises:
        OutputError: the file cannot be written
    """
    path = Path(path)
    count = 0
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', newline='', encoding='utf-8') as csvfile:
            writer = csv.DictWriter(csvfile, fieldnames=list(columns), lineterminator='\n')
            writer.writeheader()
            for row in rows:
                writer.writerow({key: format_value(row[key]) for key in columns})
                count += 1
    except OSError as e:
        raise OutputError(f"cannot write CSV: {e}", path=path) from e
    logger.info("csv written", path=str(path), rows=count)
    return path


def read_csv(path: Union[str, Path]) -> List[Dict[str, str]]:
    """Read back a CSV written by write_csv."""
    path = Path(path)
    try:
        with open(path, 'r', newline='', encoding='utf-8') as csvfile:
            return list(csv.DictReader(csvfile))
    except OSError as e:
        raise OutputError(f"cannot read CSV: {e}", path=path) from e


def _curve_title(*parts: Any) -> str:
    return ', '.join(_LABELS.get(str(p), f"M={p}" if isinstance(p, int) else str(p)) for p in parts)


def _fig1_script(csv_name: str, curves: Sequence[Tuple[Any, ...]]) -> List[str]:
    lines = [
        "set xlabel 'Number of BS antennas (M)'",
        "set ylabel 'Average UL sum SE [bit/s/Hz/cell]'",
        "set key left top",
        "set grid",
    ]
    plots = []
    for estimator, fading in curves:
        condition = f"strcol(2) eq '{estimator}' && strcol(3) eq '{fading}'"
        plots.append(
            f"'{csv_name}' skip 1 using (({condition}) ? $1 : 1/0):4:5 "
            f"with yerrorlines title '{_curve_title(estimator, fading)}'"
        )
    lines.append("plot " + ", \\\n     ".join(plots))
    return lines


def _fig2_script(csv_name: str, curves: Sequence[Tuple[Any, ...]]) -> List[str]:
    lines = [
        "set xlabel 'UL SE per UE [bit/s/Hz]'",
        "set ylabel 'CDF'",
        "set yrange [0:1]",
        "set key right bottom",
        "set grid",
    ]
    plots = []
    for estimator, fading, antennas in curves:
        condition = f"strcol(1) eq '{estimator}' && strcol(2) eq '{fading}' && $3 == {antennas}"
        plots.append(
            f"'{csv_name}' skip 1 using (({condition}) ? $4 : 1/0):5 "
            f"with steps title '{_curve_title(estimator, fading, antennas)}'"
        )
    lines.append("plot " + ", \\\n     ".join(plots))
    return lines


def emit_plot_script(
    csv_path: Union[str, Path],
    figure: str,
    curves: Sequence[Tuple[Any, ...]],
) -> Path:
    """
    Write a gnuplot script next to the CSV that renders it to PNG.

    Args:
        csv_path: CSV produced by run_fig1 ('fig1') or run_fig2 ('fig2')
        figure: 'fig1' or 'fig2'
        curves: (estimator, fading) pairs for fig1, (estimator, fading, M) for fig2

    Returns:
        Path of the .gp file (same stem as the CSV)
    """
    csv_path = Path(csv_path)
    if figure == 'fig1':
        body = _fig1_script(csv_path.name, curves)
    elif figure == 'fig2':
        body = _fig2_script(csv_path.name, curves)
    else:
        raise InvalidArgumentError(f"unknown figure {figure!r}")
    script = csv_path.with_suffix('.gp')
    header = [
        f"# gnuplot script for {csv_path.name}; run from its directory",
        "set datafile separator ','",
        "set terminal pngcairo size 800,600",
        f"set output '{csv_path.with_suffix('.png').name}'",
    ]
    try:
        script.write_text('\n'.join(header + body) + '\n', encoding='utf-8')
    except OSError as e:
        raise OutputError(f"cannot write plot script: {e}", path=script) from e
    logger.info("plot script written", path=str(script))
    return script
