"""Monte Carlo decoding harness for emitted syndrome-measurement circuits."""

from .ler import (
    CSV_HEADER,
    CircuitMetadata,
    LerRecord,
    default_shots,
    estimate_ler,
    load_circuit,
    read_csv,
    read_metadata,
    write_csv,
)
from .plots import (
    plot_ler,
    plot_metrics,
    plot_sweep,
    read_metrics_csv,
    split_regimes,
)

__all__ = [
    "CSV_HEADER",
    "CircuitMetadata",
    "LerRecord",
    "default_shots",
    "estimate_ler",
    "load_circuit",
    "read_csv",
    "read_metadata",
    "write_csv",
    "plot_ler",
    "plot_metrics",
    "plot_sweep",
    "read_metrics_csv",
    "split_regimes",
]
