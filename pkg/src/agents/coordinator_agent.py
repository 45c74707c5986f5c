"""
coordinator_agent.py

High-level coordinator that runs the full verification pass
using the other agents.
"""

import sys
from typing import Any, Dict, Optional

from src.agents.analysis_agent import AnalysisCheckAgent
from src.agents.base_agent import BaseAgent
from src.agents.engine_agent import EngineCheckAgent
from src.agents.gate_agent import GateCheckAgent
from src.pipeline.run_pipeline import load_config
from src.pipeline.run_summary import build_run_summary, print_run_summary


class CoordinatorAgent(BaseAgent):
    def __init__(self) -> None:
        super().__init__(
            name="CoordinatorAgent",
            description="Coordinates engine, gate and analysis agents to run the full verification.",
        )
        self.engine_agent = EngineCheckAgent()
        self.gate_agent = GateCheckAgent()
        self.analysis_agent = AnalysisCheckAgent()

    def run(self, config_override: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        print("=== CoordinatorAgent: Starting verification run ===", file=sys.stderr)

        config = config_override if config_override is not None else load_config()

        engine_results = self.engine_agent.run(config=config)
        gate_results = self.gate_agent.run(config=config)
        analysis_results = self.analysis_agent.run(config=config)

        summary = build_run_summary(config, engine_results, gate_results, analysis_results)
        print_run_summary(summary, file=sys.stderr)

        return {"config": config, "summary": summary}
