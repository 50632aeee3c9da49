"""Report output for the heatlog CLI."""

import sys
import json
from fractions import Fraction
from typing import Dict, Any, List, Optional, Sequence

from defusedcsv import csv
from rich.console import Console
from rich.table import Table

from .core.reports import FAILING, PASS, json_number

console = Console(stderr=True)
stdout_console = Console()


def sanitize(value: Any) -> Any:
    """JSON-ready copy: exact numbers become floats, infinities and NaN become strings."""
    if isinstance(value, dict):
        return {str(k): sanitize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [sanitize(v) for v in value]
    if isinstance(value, (float, Fraction)):
        return json_number(value)
    return value


def _cell(value: Any) -> Any:
    if value is None:
        return ""
    if isinstance(value, (dict, list, tuple)):
        return json.dumps(sanitize(value), sort_keys=True)
    if isinstance(value, Fraction):
        return float(value)
    return value


def _columns(rows: List[Dict[str, Any]], columns: Optional[Sequence[str]]) -> List[str]:
    if columns:
        return list(columns)
    seen: List[str] = []
    for row in rows:
        seen.extend(k for k in row if k not in seen)
    return seen


def output_results(
    results: List[Dict[str, Any]],
    output_file: Optional[str],
    format_type: str,
    run: Optional[Dict[str, Any]] = None,
    columns: Optional[Sequence[str]] = None,
    title: str = "Results",
    instances: Optional[List[Dict[str, Any]]] = None,
):
    """Output results in the specified format."""
    if format_type == "table":
        output_table(results, columns, title)
    elif format_type == "csv":
        output_csv(results, output_file, columns)
    else:  # default to json
        output_json(results, output_file, run, instances)


def output_table(
    results: List[Dict[str, Any]], columns: Optional[Sequence[str]] = None, title: str = "Results"
):
    """Output results as a table."""
    table = Table(title=title)
    names = _columns(results, columns)
    for name in names:
        table.add_column(name, style="cyan" if name in ("check", "instance") else None)

    for result in results:
        cells = []
        for name in names:
            value = result.get(name)
            text = str(_cell(value))
            if name == "verdict":
                style = "green" if value == PASS else "red" if value in FAILING else "yellow"
                text = f"[{style}]{text}[/]"
            cells.append(text)
        table.add_row(*cells)

    stdout_console.print(table)


def output_csv(
    results: List[Dict[str, Any]],
    output_file: Optional[str],
    columns: Optional[Sequence[str]] = None,
):
    """Output results as CSV with a header row."""
    output = sys.stdout if not output_file else open(output_file, "w", newline="")

    try:
        writer = csv.writer(output, lineterminator="\r\n")
        names = _columns(results, columns)
        writer.writerow(names)
        for result in results:
            writer.writerow([_cell(result.get(name)) for name in names])
    finally:
        if output_file:
            output.close()


def output_json(
    results: List[Dict[str, Any]],
    output_file: Optional[str],
    run: Optional[Dict[str, Any]] = None,
    instances: Optional[List[Dict[str, Any]]] = None,
):
    """Output results as JSON; keys sorted and no timestamps so reruns compare equal."""
    output_data = {"run": run or {}, "results": results}
    if instances is not None:
        output_data["instances"] = instances
    text = json.dumps(sanitize(output_data), indent=2, sort_keys=True, allow_nan=False)

    if output_file:
        with open(output_file, "w") as f:
            f.write(text + "\n")
    else:
        print(text)


def report_rows(reports) -> List[Dict[str, Any]]:
    """One summary row per report for the csv and table renderers."""
    return [
        {
            "check": r.check,
            "instance": r.instance,
            "verdict": r.verdict,
            "worst_slack": r.worst_slack,
            "steps": len(r.steps),
        }
        for r in reports
    ]

