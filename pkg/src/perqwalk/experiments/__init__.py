from .run_config import RunConfig
from .runner import ExperimentRunner, run_command

__all__ = ["RunConfig", "ExperimentRunner", "run_command"]
