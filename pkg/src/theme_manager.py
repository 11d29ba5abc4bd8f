"""
Theme Manager for permadd terminal output
Supports multiple colour themes for --pretty reports
"""

from __future__ import annotations

from typing import Any

from colorama import Fore, Style, just_fix_windows_console

from .export_manager import flatten


class ThemeManager:
    THEMES = {
        "terminal": {
            "name": "Terminal Black",
            "colors": {
                "foreground": Fore.GREEN,
                "accent": Fore.CYAN + Style.BRIGHT,
                "muted": Style.DIM,
                "success": Fore.GREEN + Style.BRIGHT,
                "warning": Fore.YELLOW,
                "error": Fore.RED + Style.BRIGHT,
            },
        },
        "light": {
            "name": "Light Mode",
            "colors": {
                "foreground": Fore.BLACK,
                "accent": Fore.BLUE + Style.BRIGHT,
                "muted": Style.DIM,
                "success": Fore.GREEN,
                "warning": Fore.MAGENTA,
                "error": Fore.RED,
            },
        },
        "solarized": {
            "name": "Solarized",
            "colors": {
                "foreground": Fore.WHITE,
                "accent": Fore.CYAN,
                "muted": Fore.LIGHTBLACK_EX,
                "success": Fore.GREEN,
                "warning": Fore.YELLOW,
                "error": Fore.RED,
            },
        },
        "plain": {
            "name": "No Colour",
            "colors": {},
        },
    }

    @staticmethod
    def colors(theme_name: str = "terminal") -> dict:
        if theme_name not in ThemeManager.THEMES:
            theme_name = "terminal"
        return ThemeManager.THEMES[theme_name]["colors"]

    @staticmethod
    def paint(text: Any, role: str, theme_name: str = "terminal") -> str:
        code = ThemeManager.colors(theme_name).get(role, "")
        return f"{code}{text}{Style.RESET_ALL}" if code else str(text)

    @staticmethod
    def render_report(report: dict, theme_name: str = "terminal") -> str:
        """Human-readable summary of a report dict"""
        just_fix_windows_console()
        paint = lambda text, role: ThemeManager.paint(text, role, theme_name)  # noqa: E731

        result = report.get("result", {})
        title = report.get("command", {}).get("name", "report")
        lines = [paint("=" * 60, "muted"), paint(f"PERMADD - {str(title).upper()}", "accent"), paint("=" * 60, "muted")]

        for section in ("command", "inputs"):
            for key, value in flatten(report.get(section, {})):
                lines.append(f"{paint(key, 'muted')}: {value}")
        lines.append(paint("-" * 40, "muted"))

        for key, value in flatten(result):
            if key == "verified":
                value = paint("yes", "success") if value else paint("NO", "error")
            elif key.startswith("counterexample") and value is not None:
                value = paint(value, "warning")
            lines.append(f"{paint(key, 'accent')}: {value}")

        if "timing_seconds" in report:
            lines.append(paint(f"elapsed {report['timing_seconds']:.3f} s", "muted"))
        return "\n".join(lines)
