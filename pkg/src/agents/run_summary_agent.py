from pathlib import Path
from typing import Any, Dict, Optional, Union

from src.agents.coordinator_agent import CoordinatorAgent
from src.pipeline.report_markdown import (
    build_markdown_from_summary,
    save_markdown_report,
)
from src.pipeline.run_pipeline import resolve_output_dir
from src.pipeline.run_summary import save_run_summary


def generate_verification_report(
    config_override: Optional[Dict[str, Any]] = None,
    out_path: Optional[Union[str, Path]] = None,
) -> Dict[str, Any]:
    """
    Run the full verification pass and save both the JSON summary and the
    markdown report.

    With out_path the summary is written there and the report next to it
    with a .md suffix; otherwise both go to the configured output directories.
    """
    result = CoordinatorAgent().run(config_override=config_override)
    config, summary = result["config"], result["summary"]
    timestamp = summary["metadata"]["generated_at_utc"].replace(":", "").replace("-", "")

    if out_path is not None:
        summary_path = Path(out_path)
        report_path = summary_path.with_suffix(".md")
        if report_path == summary_path:
            report_path = summary_path.with_name(summary_path.name + ".report.md")
    else:
        summary_path = resolve_output_dir(config, "run_summaries_dir") / f"run_summary_{timestamp}.json"
        report_path = resolve_output_dir(config, "reports_dir") / f"verification_report_{timestamp}.md"

    save_run_summary(summary, summary_path)
    markdown = build_markdown_from_summary(summary)
    save_markdown_report(markdown, report_path)

    return {
        "status": "success",
        "overall_passed": summary.get("overall_passed", False),
        "summary": summary,
        "report_path": str(report_path),
        "summary_path": str(summary_path),
        "markdown_preview": "\n".join(markdown.splitlines()[:40]),
    }
