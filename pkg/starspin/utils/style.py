#!/usr/bin/env python3
"""
starspin Styling Module

Rich-based styling for the starspin command line. Provides the themed console,
panels for run summaries and errors, and compact previews of result tables.
"""

from pathlib import Path
from typing import Dict, List, Optional, Sequence

from rich.align import Align
from rich.box import DOUBLE, ROUNDED, SIMPLE
from rich.console import Console
from rich.panel import Panel
from rich.status import Status
from rich.table import Table
from rich.theme import Theme

# Palette: a cool blue/cyan scheme with an amber accent
STARSPIN_COLORS = {
    "primary": "#1f77b4",       # blue
    "secondary": "#17406d",     # dark blue
    "accent": "#f2a541",        # amber

    "success": "#2ca02c",
    "warning": "#f2a541",
    "error": "#d62728",
    "info": "#17becf",

    "muted": "#708090",
    "border": "#17406d",

    "experiment": "#1f77b4",
    "value": "#17406d",
    "command": "#6b8e23",
    "path": "#17becf",
}

STARSPIN_THEME = Theme({
    "primary": STARSPIN_COLORS["primary"],
    "secondary": STARSPIN_COLORS["secondary"],
    "accent": STARSPIN_COLORS["accent"],
    "success": STARSPIN_COLORS["success"],
    "warning": STARSPIN_COLORS["warning"],
    "error": STARSPIN_COLORS["error"],
    "info": STARSPIN_COLORS["info"],
    "muted": STARSPIN_COLORS["muted"],
    "border": STARSPIN_COLORS["border"],

    "experiment": f"bold {STARSPIN_COLORS['experiment']}",
    "value": f"bold {STARSPIN_COLORS['value']}",
    "command": f"bold {STARSPIN_COLORS['command']}",
    "path": STARSPIN_COLORS["path"],

    "status.success": f"bold {STARSPIN_COLORS['success']}",
    "status.warning": f"bold {STARSPIN_COLORS['warning']}",
    "status.error": f"bold {STARSPIN_COLORS['error']}",
    "status.info": f"bold {STARSPIN_COLORS['info']}",

    "header": f"bold {STARSPIN_COLORS['primary']}",
    "table.header": f"bold {STARSPIN_COLORS['primary']}",
})

# Human-facing output goes to stdout; logging goes to stderr.
console = Console(theme=STARSPIN_THEME, width=120)


class StarStyle:
    """Styling utilities for starspin."""

    @staticmethod
    def create_header(title: str, subtitle: str = "") -> Panel:
        """Create a styled header panel."""
        content = f"[header]{title}[/header]"
        if subtitle:
            content += f"\n[muted]{subtitle}[/muted]"
        return Panel(Align.center(content), box=DOUBLE, border_style="primary", padding=(1, 2))

    @staticmethod
    def create_help_table(commands: List[Dict[str, str]]) -> Table:
        """Create a styled table of commands."""
        table = Table(
            title="[primary][bold]Available Commands[/bold][/primary]",
            box=ROUNDED,
            border_style="primary",
            header_style="table.header",
            show_lines=True,
        )
        table.add_column("Command", style="primary", no_wrap=True)
        table.add_column("Description", style="muted")
        table.add_column("Example", style="command")

        for cmd in commands:
            table.add_row(cmd["command"], cmd["description"], cmd.get("example", ""))
        return table

    @staticmethod
    def create_result_table(
        title: str,
        columns: Sequence[str],
        rows: Sequence[Sequence[float]],
        limit: Optional[int] = 10,
    ) -> Table:
        """Preview of an experiment result, first ``limit`` rows."""
        shown = list(rows if limit is None else rows[:limit])
        caption = f"{len(shown)} of {len(rows)} rows" if len(shown) < len(rows) else None
        table = Table(
            title=f"[header]{title}[/header]",
            caption=caption,
            box=SIMPLE,
            border_style="border",
            header_style="table.header",
        )
        for name in columns:
            table.add_column(name, style="value", justify="right")
        for row in shown:
            table.add_row(*(f"{value:.6g}" for value in row))
        return table

    @staticmethod
    def create_run_summary(experiment: str, files: Sequence[Path], n_rows: int, seed: int) -> Panel:
        """Summary panel shown after a successful run."""
        written = "\n".join(f"  [path]{path}[/path]" for path in files)
        content = (
            f"[status.success]✓ Experiment finished[/status.success]\n\n"
            f"[header]Experiment:[/header] [experiment]{experiment}[/experiment]\n"
            f"[header]Rows:[/header] [value]{n_rows}[/value]\n"
            f"[header]Seed:[/header] [value]{seed}[/value]\n"
            f"[header]Files:[/header]\n{written}"
        )
        return Panel(
            content,
            title="[status.success]Run Complete[/status.success]",
            box=ROUNDED,
            border_style="success",
            padding=(1, 2),
        )

    @staticmethod
    def create_error_panel(title: str, message: str, suggestion: str = "") -> Panel:
        """Create a styled error panel."""
        content = f"[status.error]✗ {message}[/status.error]"
        if suggestion:
            content += f"\n\n[header]Suggestion:[/header]\n[info]{suggestion}[/info]"
        return Panel(
            content,
            title=f"[status.error]{title}[/status.error]",
            box=ROUNDED,
            border_style="error",
            padding=(1, 2),
        )

    @staticmethod
    def create_version_info() -> str:
        """Get version information for display."""
        try:
            import importlib.metadata
            version = importlib.metadata.version("starspin")
        except Exception:
            from .. import __version__ as version
        return f"[header]starspin[/header] [value]{version}[/value]"

    @staticmethod
    def create_status(message: str) -> Status:
        """Create a styled status indicator."""
        return Status(message, spinner="dots", spinner_style="primary", console=console)


def print_header(title: str, subtitle: str = "") -> None:
    """Print a styled header."""
    console.print(StarStyle.create_header(title, subtitle))


def print_success(message: str) -> None:
    """Print a success message."""
    console.print(f"[status.success]✓ {message}[/status.success]")


def print_warning(message: str) -> None:
    """Print a warning message."""
    console.print(f"[status.warning]! {message}[/status.warning]")


def print_error(message: str) -> None:
    """Print an error message."""
    console.print(f"[status.error]✗ {message}[/status.error]")


def print_info(message: str) -> None:
    """Print an info message."""
    console.print(f"[status.info]{message}[/status.info]")


def print_rule(title: str = "", style: str = "primary") -> None:
    """Print a styled horizontal rule."""
    console.rule(title, style=style)


def print_version() -> None:
    """Print version information."""
    console.print(StarStyle.create_version_info())
