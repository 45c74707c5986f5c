"""
gate_agent.py

Agent wrapper around the NS / CS gate checks.
"""

import sys
from typing import Any, Dict

from src.agents.base_agent import BaseAgent
from src.pipeline.gate_checks import print_gate_results, validate_gates


class GateCheckAgent(BaseAgent):
    def __init__(self) -> None:
        super().__init__(
            name="GateCheckAgent",
            description="Checks NS and CS gate simulations against their closed forms.",
        )

    def run(self, config: Dict[str, Any]) -> Dict[str, Any]:
        results = validate_gates(config)
        print_gate_results(results, file=sys.stderr)
        return results
