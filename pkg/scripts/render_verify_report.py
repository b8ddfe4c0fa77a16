#!/usr/bin/env python3
"""Render a human-readable report from `lambda-rlm verify --out` results.

Creates next to the input file:
- <name>.md: scoreboard per suite, then every check with measured vs predicted

Usage:
  uv run python scripts/render_verify_report.py data/verify.json
"""

from __future__ import annotations

import json
import re
import sys
from pathlib import Path
from typing import Any


def _read_json(path: Path) -> Any:
    return json.loads(path.read_text(encoding="utf-8"))


def _md_escape(text: str) -> str:
    # Minimal escaping for tables.
    return text.replace("|", "\\|")


def _one_line(value: Any) -> str:
    text = value if isinstance(value, str) else json.dumps(value, ensure_ascii=False)
    return re.sub(r"\s+", " ", text).strip()


def render(results: list[dict[str, Any]], source: str = "") -> str:
    lines: list[str] = ["# Verification Report\n"]
    if source:
        lines.append(f"Results file: {source}\n")

    lines.append("## Scoreboard")
    lines.append("| Suite | Passed | Checks |")
    lines.append("|---|---:|---:|")
    for suite in results:
        passed = "YES" if suite.get("passed") else "NO"
        lines.append(f"| {_md_escape(suite['suite'])} | {passed} | {suite.get('summary', '')} |")

    lines.append("\n## Details")
    for suite in results:
        lines.append(f"\n### {suite['suite']}")
        for note in suite.get("notes") or []:
            lines.append(f"- {_one_line(note)}")
        # failing checks only
        failed = [c for c in suite.get("checks") or [] if not c.get("passed")]
        if not failed:
            lines.append("- all checks passed")
            continue
        lines.append("\n| Check | Measured | Predicted |")
        lines.append("|---|---|---|")
        for check in failed:
            lines.append(
                "| "
                + " | ".join(
                    _md_escape(_one_line(check.get(key)))
                    for key in ("name", "measured", "predicted")
                )
                + " |"
            )
    return "\n".join(lines) + "\n"


def main() -> int:
    if len(sys.argv) != 2:
        raise SystemExit("Usage: render_verify_report.py <verify.json>")

    path = Path(sys.argv[1])
    if not path.exists():
        raise SystemExit(f"Missing {path}")
    results = _read_json(path)
    if not isinstance(results, list):
        raise SystemExit(f"{path.name} must be a list of suite results")

    report = path.with_suffix(".md")
    report.write_text(render(results, str(path)), encoding="utf-8")
    print(f"Wrote {report}")
    return 0 if all(s.get("passed") for s in results) else 1


if __name__ == "__main__":
    raise SystemExit(main())
