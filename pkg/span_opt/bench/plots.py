"""
Plot-ready tables from trace CSVs: one shared abscissa column and one column
per method. Rendering is left to external tools.
"""

import os
from typing import Dict, List, Optional, Sequence

import pandas as pd

from ..config import Config
from ..errors import IncompatibleTraces
from ..utils.logger import setup_logger
from .schemas import PLOT_MODES

logger = setup_logger(__name__)

# mode -> (abscissa, ordinate)
AXES = {
    "loss_vs_time": ("wall_clock_s", "loss"),
    "loss_vs_iter": ("iteration", "loss"),
    "hessian_err": ("iteration", "hessian_err"),
}


def read_traces(paths: Sequence[str], labels: Optional[Sequence[str]] = None) -> Dict[str, pd.DataFrame]:
    """Load trace CSVs keyed by label (file stem by default)"""
    if not paths:
        raise IncompatibleTraces("no trace files given")
    labels = list(labels) if labels else [os.path.splitext(os.path.basename(p))[0] for p in paths]
    if len(labels) != len(paths):
        raise IncompatibleTraces(f"{len(labels)} labels for {len(paths)} traces")
    if len(set(labels)) != len(labels):
        raise IncompatibleTraces(f"trace labels must be unique, got {labels}")

    traces = {}
    for label, path in zip(labels, paths):
        frame = pd.read_csv(path)
        if list(frame.columns) != Config.TRACE_COLUMNS:
            raise IncompatibleTraces(f"{path} is not a trace file (columns {list(frame.columns)})")
        traces[label] = frame
    return traces


def _series(frame: pd.DataFrame, abscissa: str, ordinate: str, label: str) -> pd.Series:
    series = frame.set_index(abscissa)[ordinate].rename(label)
    return series[~series.index.duplicated(keep="last")]


def align_traces(traces: Dict[str, pd.DataFrame], mode: str, suboptimality: bool = False) -> pd.DataFrame:
    if mode not in PLOT_MODES:
        raise ValueError(f"mode must be one of {PLOT_MODES}, got {mode!r}")
    if suboptimality and mode == "hessian_err":
        raise IncompatibleTraces("suboptimality applies to loss plots only")
    abscissa, ordinate = AXES[mode]

    columns: List[pd.Series] = []
    for label, frame in traces.items():
        if frame[ordinate].isna().all():
            if mode == "hessian_err":
                logger.warning(f"⚠️ {label} has no Hessian error probes; column omitted")
                continue
            raise IncompatibleTraces(f"{label} has no {ordinate} values")
        columns.append(_series(frame, abscissa, ordinate, label))
    if not columns:
        raise IncompatibleTraces(f"no trace carries {ordinate} values")

    table = pd.concat(columns, axis=1, sort=True)
    if mode == "loss_vs_time":
        # last value carried forward over the union of time stamps
        table = table.ffill()
    if suboptimality:
        best = min(frame["loss"].min() for frame in traces.values())
        table = table - best
    table.index.name = abscissa
    return table.reset_index()


def emit_plot_data(
    paths: Sequence[str],
    mode: str,
    output: Optional[str] = None,
    suboptimality: bool = False,
    labels: Optional[Sequence[str]] = None,
) -> pd.DataFrame:
    """
    Align trace CSVs for one figure.

    Args:
        paths: trace CSV files of one objective
        mode: loss_vs_time, loss_vs_iter or hessian_err
        output: CSV to write, optional
        suboptimality: subtract the best loss seen across all traces
        labels: column names, file stems by default
    """
    table = align_traces(read_traces(paths, labels), mode, suboptimality)
    if output:
        table.to_csv(output, index=False, na_rep="")
        logger.info(f"📈 Wrote {mode} table ({len(table)} rows, {table.shape[1] - 1} methods) to {output}")
    return table
