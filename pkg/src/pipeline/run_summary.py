# src/pipeline/run_summary.py

from __future__ import annotations

import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List

import numpy as np
import pandas as pd

SIGNIFICANT_DIGITS = 12
CHECK_FAMILIES = ("engine", "gates", "analysis")


def round_sig(x: float, digits: int = SIGNIFICANT_DIGITS) -> float:
    return float(f"{x:.{digits}g}") + 0.0


def _sanitize_for_json(obj: Any) -> Any:
    """
    Recursively convert numpy / complex values and containers into plain
    Python builtins that json.dump will accept.

    - numpy integer/bool -> int/bool
    - float / numpy floating -> float rounded to 12 significant digits
    - complex -> {"re": .., "im": ..}
    - numpy arrays -> lists
    - dict/list/tuple/set -> converted recursively
    """
    if obj is None:
        return None

    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return round_sig(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": round_sig(float(obj.real)), "im": round_sig(float(obj.imag))}

    if isinstance(obj, dict):
        return {str(k): _sanitize_for_json(v) for k, v in obj.items()}

    if isinstance(obj, (list, tuple, set)):
        return [_sanitize_for_json(x) for x in obj]

    if isinstance(obj, np.ndarray):
        return [_sanitize_for_json(x) for x in obj.tolist()]

    # default: leave as-is (json.dumps will raise if unhandled)
    return obj


def sanitize_payload(payload: Any) -> Any:
    return _sanitize_for_json(payload)


def build_run_summary(
    config: Dict[str, Any],
    engine_results: Dict[str, Any],
    gate_results: Dict[str, Any],
    analysis_results: Dict[str, Any],
) -> Dict[str, Any]:
    """
    Construct a normalized summary dictionary for a single verification run.

    This is the single source of truth for the summary structure used by:
      - CoordinatorAgent
      - Markdown report generation
      - the `verify` pass/fail table
    """
    summary: Dict[str, Any] = {
        "run_id": config.get("run_id"),
        "description": config.get("description", ""),
        "overall_passed": None,  # set below
        "checks": {
            "engine": dict(engine_results),
            "gates": dict(gate_results),
            "analysis": dict(analysis_results),
        },
        "metadata": {
            "generated_at_utc": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        },
    }

    # a family passes only if every check in it passes; missing flags count as failures
    for name in CHECK_FAMILIES:
        family = summary["checks"][name]
        checks = family.get("checks", [])
        family["passed"] = bool(family.get("passed")) and all(c.get("passed") for c in checks)

    summary["overall_passed"] = all(summary["checks"][name]["passed"] for name in CHECK_FAMILIES)
    return _sanitize_for_json(summary)


def checks_table(summary: Dict[str, Any]) -> pd.DataFrame:
    """One row per individual check: family, name, status, metric, threshold."""
    rows: List[Dict[str, Any]] = []
    for family, result in summary.get("checks", {}).items():
        for check in result.get("checks", []):
            rows.append(
                {
                    "family": family,
                    "check": check.get("name"),
                    "status": "PASS" if check.get("passed") else "FAIL",
                    "metric": check.get("metric"),
                    "threshold": check.get("threshold"),
                }
            )
    return pd.DataFrame(rows, columns=["family", "check", "status", "metric", "threshold"])


def save_run_summary(summary: dict, summary_path: Path) -> Path:
    """Save a JSON summary to summary_path, creating parent directories."""
    summary_path = Path(summary_path)
    summary_path.parent.mkdir(parents=True, exist_ok=True)

    def default(o):
        return str(o)

    with summary_path.open("w", encoding="utf-8") as f:
        json.dump(summary, f, indent=2, default=default)

    return summary_path


def print_run_summary(summary: Dict[str, Any], file=None) -> None:
    print("\n=== Verification Run Summary ===", file=file)

    for name in CHECK_FAMILIES:
        result = summary.get("checks", {}).get(name, {})
        status = "PASSED" if result.get("passed") else "FAILED"
        print(f"- {name}: {status}", file=file)
        for check in result.get("checks", []):
            c_status = "PASSED" if check.get("passed") else "FAILED"
            print(f"    - {check.get('name')}: {c_status}", file=file)

    overall = summary.get("overall_passed")
    print(f"\nOverall passed: {overall}", file=file)


def make_check(name: str, passed: bool, metric: Any = None, threshold: Any = None, **detail: Any) -> Dict[str, Any]:
    """One entry of a check family's "checks" list."""
    record: Dict[str, Any] = {
        "name": name,
        "passed": bool(passed),
        "metric": metric,
        "threshold": threshold,
    }
    record.update(detail)
    return record


def family_result(checks: List[Dict[str, Any]]) -> Dict[str, Any]:
    return {"passed": all(c["passed"] for c in checks), "checks": checks}


def print_check_family(title: str, results: Dict[str, Any], file=None) -> None:
    print(f"\n=== {title} ===", file=file)

    if results["passed"]:
        print("✓ All checks passed.", file=file)
    else:
        print("✗ Some checks failed.", file=file)

    for check in results["checks"]:
        mark = "✓" if check["passed"] else "✗"
        metric = check.get("metric")
        threshold = check.get("threshold")
        suffix = ""
        if metric is not None:
            suffix = f" (metric={metric:.3e}" if isinstance(metric, float) else f" (metric={metric}"
            suffix += f", threshold={threshold})" if threshold is not None else ")"
        print(f"  {mark} {check['name']}{suffix}", file=file)
