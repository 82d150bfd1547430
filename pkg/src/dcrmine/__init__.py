"""Discovery of DCR Graphs from event logs, plus replay-based classification."""

from .dcr import DcrGraph, Marking, ModelError
from .log_io import EventLog, parse_txt, parse_xes
from .miner import MinerConfig, mine, run_pipeline

__all__ = [
    "DcrGraph",
    "EventLog",
    "Marking",
    "MinerConfig",
    "ModelError",
    "mine",
    "parse_txt",
    "parse_xes",
    "run_pipeline",
]
__version__ = "0.1.0"
