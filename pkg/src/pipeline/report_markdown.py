# src/pipeline/report_markdown.py

from __future__ import annotations

from pathlib import Path
from typing import Any, Dict, List

FAMILY_TITLES = {
    "engine": "Engine: Fock Evolution and Permanent Oracle",
    "gates": "Gates: NS and CS Simulation",
    "analysis": "Analysis: Magic Point, Angles and Landscape",
}


def _format_metric(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.3e}"
    return str(value)


def build_markdown_from_summary(summary: Dict[str, Any]) -> str:
    """
    Convert a verification summary dict into a human-readable markdown report.
    Assumes the structure produced by build_run_summary.
    """

    overall_passed: bool = summary.get("overall_passed", False)
    checks = summary.get("checks", {})

    # Top-level status
    status = "✅ PASSED" if overall_passed else "❌ FAILED"

    lines: List[str] = []

    # Title + status
    lines.append("# CS Gate Verification Report")
    lines.append("")
    lines.append(f"**Overall Status:** {status}")
    lines.append("")
    lines.append(f"- **Run ID:** `{summary.get('run_id', 'unknown')}`")
    lines.append(f"- **Description:** {summary.get('description', 'N/A')}")
    generated = summary.get("metadata", {}).get("generated_at_utc")
    if generated:
        lines.append(f"- **Generated (UTC):** {generated}")
    lines.append("")

    failing: List[str] = []
    for family, title in FAMILY_TITLES.items():
        result = checks.get(family, {})
        lines.append(f"## {title}")
        lines.append(f"- **Status:** {'✅ Passed' if result.get('passed') else '❌ Failed'}")
        lines.append("")

        family_checks = result.get("checks") or []
        if not family_checks:
            lines.append("No checks were run.")
            lines.append("")
            continue

        lines.append("| Check | Status | Metric | Threshold |")
        lines.append("|---|---|---|---|")
        for check in family_checks:
            mark = "✅" if check.get("passed") else "❌"
            lines.append(
                f"| `{check.get('name')}` | {mark} | {_format_metric(check.get('metric'))} "
                f"| {_format_metric(check.get('threshold'))} |"
            )
            if not check.get("passed"):
                failing.append(f"{family}.{check.get('name')}")
        lines.append("")

    # Recommendations (very simple, driven by flags)
    lines.append("## Recommendations")
    lines.append("")
    if failing:
        lines.append("- Investigate the failing checks: " + ", ".join(f"`{name}`" for name in failing))
    if any(name.startswith("engine.") for name in failing):
        lines.append("- Engine failures invalidate every gate result; fix those first.")
    if not failing:
        lines.append("- All checks passed. Rerun after any change to element conventions or plates.")
    lines.append("")

    return "\n".join(lines)


def save_markdown_report(markdown: str, report_path: Path) -> Path:
    """Save the markdown report to report_path, creating parent directories."""
    report_path = Path(report_path)
    report_path.parent.mkdir(parents=True, exist_ok=True)
    report_path.write_text(markdown, encoding="utf-8")
    return report_path
