"""
engine_agent.py

Agent wrapper around the Fock-space engine checks.
"""

import sys
from typing import Any, Dict

from src.agents.base_agent import BaseAgent
from src.pipeline.engine_checks import print_engine_results, validate_engine


class EngineCheckAgent(BaseAgent):
    def __init__(self) -> None:
        super().__init__(
            name="EngineCheckAgent",
            description="Checks the engine against the permanent oracle, norms and detection.",
        )

    def run(self, config: Dict[str, Any]) -> Dict[str, Any]:
        results = validate_engine(config)
        print_engine_results(results, file=sys.stderr)
        return results
