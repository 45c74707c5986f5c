"""
analysis_agent.py

Agent wrapper around the solver, composite splitter and landscape checks.
"""

import sys
from typing import Any, Dict

from src.agents.base_agent import BaseAgent
from src.pipeline.analysis_checks import print_analysis_results, validate_analysis


class AnalysisCheckAgent(BaseAgent):
    def __init__(self) -> None:
        super().__init__(
            name="AnalysisCheckAgent",
            description="Checks the magic point, plate angles, composite splitter and fidelity sweep.",
        )

    def run(self, config: Dict[str, Any]) -> Dict[str, Any]:
        results = validate_analysis(config)
        print_analysis_results(results, file=sys.stderr)
        return results
