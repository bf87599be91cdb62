"""
Base experiment class.
Every CLI command is an experiment: it receives the validated run
configuration, keeps an audit trail, and produces a JSON-ready payload.
"""

import logging
from abc import ABC, abstractmethod
from datetime import datetime
from typing import Any, Dict, List, Optional

from .config import RunConfig
from .errors import ConfigurationError

logger = logging.getLogger(__name__)


class BaseExperiment(ABC):
    """
    Base class for all spinbatt experiments.
    Subclasses set `name` and implement `run`, returning the command payload.
    """

    name: str = ""

    def __init__(self, config: RunConfig):
        if not self.name:
            raise ConfigurationError(f"{self.__class__.__name__} does not declare a command name")
        self.config = config
        self.logger = logging.getLogger(f"spinbatt.{self.name}")
        self.audit_log: List[Dict[str, Any]] = []
        self.initialization_time = datetime.now()
        self._audit("Experiment configured", {"config_hash": config.config_hash()})

    def _audit(self, event: str, details: Optional[Dict] = None) -> None:
        """Record a significant event in the audit trail"""
        audit_entry = {
            "timestamp": datetime.now().isoformat(),
            "experiment": self.name,
            "event": event,
            "details": details or {},
        }
        self.audit_log.append(audit_entry)
        self.logger.debug(f"[AUDIT] {event}")

    @abstractmethod
    async def run(self, **request: Any) -> Dict[str, Any]:
        """Execute the experiment and return its payload"""

    def series(self) -> Dict[str, Any]:
        """Plot-ready tables (pandas DataFrames) produced by the last run"""
        return {}

    def get_audit_trail(self) -> List[Dict[str, Any]]:
        return self.audit_log.copy()

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(name={self.name}, config={self.config.config_hash()})"
