"""
Experiment registry.
Maps CLI command names to experiment classes so the command layer resolves
every subcommand in one place.
"""

import logging
from typing import Callable, Dict, List, Type

from .base import BaseExperiment
from .config import RunConfig
from .errors import UsageError

logger = logging.getLogger(__name__)


class ExperimentRegistry:
    """Central registry of experiment types"""

    _experiment_types: Dict[str, Type[BaseExperiment]] = {}

    @classmethod
    def register(cls, name: str) -> Callable[[Type[BaseExperiment]], Type[BaseExperiment]]:
        """Class decorator registering an experiment under a command name"""

        def decorator(experiment_class: Type[BaseExperiment]) -> Type[BaseExperiment]:
            experiment_class.name = name
            cls._experiment_types[name] = experiment_class
            logger.debug(f"Registered experiment type: {name}")
            return experiment_class

        return decorator

    @classmethod
    def create(cls, name: str, config: RunConfig) -> BaseExperiment:
        """Instantiate the experiment registered under `name`"""
        experiment_class = cls._experiment_types.get(name)
        if experiment_class is None:
            raise UsageError(f"unknown command: {name}")
        return experiment_class(config)

    @classmethod
    def list_experiments(cls) -> List[str]:
        return sorted(cls._experiment_types)

    @classmethod
    def unregister(cls, name: str) -> bool:
        if name in cls._experiment_types:
            del cls._experiment_types[name]
            return True
        return False
