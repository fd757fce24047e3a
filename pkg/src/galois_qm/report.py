"""Run reports and their text / JSON / CSV renderings.

A report is a list of flat records.  Each record names its ``section`` and
carries a ``provenance`` note: ``published`` for values that reproduce a
known published result, ``derived`` for values computed here with no
published counterpart.  Fractions are always rendered ``num/den``.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

FORMATS = ("text", "json", "csv")


@dataclass
class RunReport:
    command: str
    parameters: dict[str, str]
    records: list[dict[str, str]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    status: int = 0

    def add(self, section: str, provenance: str, **values) -> None:
        rec = {"section": section}
        for key, val in values.items():
            text = str(val)
            if text == "":
                raise ValueError(f"empty value for {key!r}")
            rec[key] = text
        rec["provenance"] = provenance
        self.records.append(rec)

    def section(self, name: str) -> list[dict[str, str]]:
        return [r for r in self.records if r["section"] == name]


def to_json(report: RunReport) -> str:
    doc = {
        "command": report.command,
        "parameters": report.parameters,
        "records": report.records,
        "notes": report.notes,
        "status": report.status,
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _columns(records: list[dict[str, str]]) -> list[str]:
    cols: list[str] = []
    for rec in records:
        for key in rec:
            if key not in cols and key != "provenance":
                cols.append(key)
    return cols + ["provenance"]


def to_csv(report: RunReport) -> str:
    buf = io.StringIO()
    buf.write(f"# command: {report.command}\n")
    for key, val in report.parameters.items():
        buf.write(f"# parameter: {key}={val}\n")
    for note in report.notes:
        buf.write(f"# note: {note}\n")
    buf.write(f"# status: {report.status}\n")
    writer = csv.DictWriter(buf, fieldnames=_columns(report.records), lineterminator="\n")
    writer.writeheader()
    for rec in report.records:
        writer.writerow(rec)
    return buf.getvalue()


def from_csv(text: str) -> RunReport:
    """Inverse of :func:`to_csv` (used to cross-check the two emitters)."""
    command, params, notes, status = "", {}, [], 0
    body = []
    for line in text.splitlines(keepends=True):
        if line.startswith("# command: "):
            command = line[len("# command: "):].rstrip("\n")
        elif line.startswith("# parameter: "):
            key, _, val = line[len("# parameter: "):].rstrip("\n").partition("=")
            params[key] = val
        elif line.startswith("# note: "):
            notes.append(line[len("# note: "):].rstrip("\n"))
        elif line.startswith("# status: "):
            status = int(line[len("# status: "):])
        else:
            body.append(line)
    records = [{k: v for k, v in row.items() if v != ""} for row in csv.DictReader(io.StringIO("".join(body)))]
    return RunReport(command, params, records, notes, status)


def from_json(text: str) -> RunReport:
    doc = json.loads(text)
    return RunReport(doc["command"], doc["parameters"], doc["records"], doc["notes"], doc["status"])


def to_text(report: RunReport) -> str:
    lines = [f"command: {report.command}"]
    if report.parameters:
        lines.append("parameters: " + ", ".join(f"{k}={v}" for k, v in report.parameters.items()))
    groups: list[tuple[str, list[dict[str, str]]]] = []
    for rec in report.records:
        if groups and groups[-1][0] == rec["section"]:
            groups[-1][1].append(rec)
        else:
            groups.append((rec["section"], [rec]))
    for name, recs in groups:
        lines.append("")
        lines.append(f"[{name}]")
        cols = [c for c in _columns(recs) if c != "section"]
        cells = [[rec.get(c, "") for c in cols] for rec in recs]
        widths = [max(len(c), *(len(row[k]) for row in cells)) for k, c in enumerate(cols)]
        lines.append("  " + "  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip())
        for row in cells:
            lines.append("  " + "  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())
    if report.notes:
        lines.append("")
        lines.extend(f"note: {n}" for n in report.notes)
    lines.append("")
    lines.append(f"status: {report.status}")
    return "\n".join(lines) + "\n"


def render(report: RunReport, fmt: str) -> str:
    if fmt == "json":
        return to_json(report)
    if fmt == "csv":
        return to_csv(report)
    return to_text(report)
