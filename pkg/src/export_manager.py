"""
Export Manager for permadd reports
Supports multiple export formats
"""

from __future__ import annotations

import csv
import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Any, Iterator

from jinja2 import Template

from .errors import ParameterError

logger = logging.getLogger(__name__)

TOOL = "permadd"
VERSION = "1.0"


def flatten(value: Any, prefix: str = "") -> Iterator[tuple[str, Any]]:
    """Dotted-path leaves of a nested report."""
    if isinstance(value, dict):
        for key in sorted(value):
            yield from flatten(value[key], f"{prefix}.{key}" if prefix else str(key))
    elif isinstance(value, list) and any(isinstance(v, (dict, list)) for v in value):
        for i, item in enumerate(value):
            yield from flatten(item, f"{prefix}[{i}]")
    else:
        yield prefix, value


class ExportManager:
    def __init__(self, stamp: bool = True):
        # stamp=False keeps exported files byte-identical across runs
        self.stamp = stamp

    def formats(self) -> dict:
        return {
            ".json": self.export_json,
            ".csv": self.export_csv,
            ".txt": self.export_txt,
            ".html": self.export_html,
            ".md": self.export_markdown,
        }

    def export(self, file_path, report: dict) -> Path:
        """Write ``report`` in the format named by the file suffix."""
        file_path = Path(file_path)
        writer = self.formats().get(file_path.suffix.lower())
        if writer is None:
            raise ParameterError(f"unsupported export format {file_path.suffix!r}; use one of {sorted(self.formats())}")
        writer(file_path, report)
        logger.info("Report exported to %s", file_path)
        return file_path

    def metadata(self) -> dict:
        meta = {"tool": TOOL, "version": VERSION}
        if self.stamp:
            meta["export_date"] = datetime.now().isoformat(timespec="seconds")
        return meta

    def _title(self, report: dict) -> str:
        return str(report.get("command", {}).get("name", "report"))

    def export_json(self, file_path, report):
        """Export to JSON format"""
        export_data = {"metadata": self.metadata(), "report": report}
        with open(file_path, "w", encoding="utf-8") as f:
            json.dump(export_data, f, indent=2, sort_keys=True, ensure_ascii=False)

    def export_csv(self, file_path, report):
        """Export to CSV format"""
        rows = []
        for section in ("command", "inputs", "result"):
            for key, value in flatten(report.get(section, {})):
                rows.append([section, key, json.dumps(value) if isinstance(value, list) else value])

        with open(file_path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f)
            writer.writerow(["Category", "Metric", "Value"])
            writer.writerows(rows)

    def export_txt(self, file_path, report):
        """Export to plain text format"""
        meta = self.metadata()
        with open(file_path, "w", encoding="utf-8") as f:
            f.write("=" * 60 + "\n")
            f.write(f"PERMADD - {self._title(report).upper()}\n")
            f.write("=" * 60 + "\n\n")
            if "export_date" in meta:
                f.write(f"Export Date: {meta['export_date']}\n\n")

            for section in ("command", "inputs", "result"):
                f.write(f"{section.upper()}:\n")
                f.write("-" * 40 + "\n")
                for key, value in flatten(report.get(section, {})):
                    f.write(f"  {key}: {value}\n")
                f.write("\n")

    def export_html(self, file_path, report):
        """Export to HTML format with styling"""
        html_template = """
        <!DOCTYPE html>
        <html>
        <head>
            <meta charset="UTF-8">
            <title>permadd - {{ title }}</title>
            <style>
                body {
                    font-family: 'Consolas', monospace;
                    background: #0a0a0a;
                    color: #00ff00;
                    margin: 40px;
                }
                .container {
                    max-width: 900px;
                    margin: 0 auto;
                    border: 1px solid #333;
                    padding: 20px;
                    background: #111;
                }
                h1 {
                    color: #00ff00;
                    border-bottom: 2px solid #333;
                    padding-bottom: 10px;
                }
                .stat {
                    margin: 6px 0;
                    padding: 6px 10px;
                    background: #1a1a1a;
                    border-left: 3px solid #00aa00;
                    word-break: break-all;
                }
                .highlight {
                    color: #00ffff;
                    font-weight: bold;
                }
            </style>
        </head>
        <body>
            <div class="container">
                <h1>permadd - {{ title }}</h1>
                {% if export_date %}<p>Generated: {{ export_date }}</p>{% endif %}
                {% for section, items in sections %}
                <h2>{{ section }}</h2>
                {% for key, value in items %}
                <div class="stat">
                    <strong>{{ key }}:</strong> <span class="highlight">{{ value }}</span>
                </div>
                {% endfor %}
                {% endfor %}
                <p><em>Report generated by {{ tool }} v{{ version }}</em></p>
            </div>
        </body>
        </html>
        """

        meta = self.metadata()
        template = Template(html_template, autoescape=True)
        html_content = template.render(
            title=self._title(report),
            export_date=meta.get("export_date"),
            sections=[(s, list(flatten(report.get(s, {})))) for s in ("command", "inputs", "result")],
            tool=meta["tool"],
            version=meta["version"],
        )

        with open(file_path, "w", encoding="utf-8") as f:
            f.write(html_content)

    def export_markdown(self, file_path, report):
        """Export to Markdown format"""
        meta = self.metadata()
        with open(file_path, "w", encoding="utf-8") as f:
            f.write(f"# permadd - {self._title(report)}\n\n")
            if "export_date" in meta:
                f.write(f"*Generated: {meta['export_date']}*\n\n")

            for section in ("command", "inputs", "result"):
                f.write(f"## {section.capitalize()}\n\n")
                for key, value in flatten(report.get(section, {})):
                    f.write(f"- **{key}**: `{value}`\n")
                f.write("\n")
            f.write(f"*--- Report generated by {meta['tool']} v{meta['version']} ---*\n")
