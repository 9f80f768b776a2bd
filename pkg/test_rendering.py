#!/usr/bin/env python3
"""Test the terminal rendering of usage, results and errors."""

from pathlib import Path

import pytest

from starspin.client.cli import USAGE
from starspin.utils.style import StarStyle, console, print_error, print_header, print_rule, print_version, print_warning


def _render(renderable) -> str:
    with console.capture() as capture:
        console.print(renderable)
    return capture.get()


def test_help_table_lists_commands():
    text = _render(StarStyle.create_help_table(USAGE))
    for entry in USAGE:
        assert entry["command"] in text
    assert "Available Commands" in text


def test_result_table_truncates():
    rows = [(float(i), i * 0.5) for i in range(25)]
    text = _render(StarStyle.create_result_table("hbac", ("n", "m_n"), rows, limit=10))
    assert "10 of 25 rows" in text
    assert "4.5" in text
    assert "12" not in text


def test_result_table_without_limit():
    rows = [(1.0, 2.0), (3.0, 4.0)]
    text = _render(StarStyle.create_result_table("qfi", ("n", "fisher"), rows, limit=None))
    assert "rows" not in text
    assert "fisher" in text


def test_run_summary():
    files = [Path("results/dtc.csv"), Path("results/dtc.meta")]
    text = _render(StarStyle.create_run_summary("dtc", files, 6, 7))
    assert "Run Complete" in text
    assert "results/dtc.meta" in text
    assert "Seed: 7" in text


def test_error_panel_with_suggestion():
    text = _render(StarStyle.create_error_panel("Configuration Error", "Unknown key 'jca'", "Did you mean 'j_ca'?"))
    assert "Configuration Error" in text
    assert "Unknown key 'jca'" in text
    assert "Suggestion:" in text


def test_print_helpers():
    with console.capture() as capture:
        print_header("starspin", "Star-topology spin-register simulator")
        print_rule("Command Usage")
        print_error("run failed")
        print_warning("Overwriting results/dtc.csv")
        print_version()
    text = capture.get()
    assert "Star-topology spin-register simulator" in text
    assert "✗ run failed" in text
    assert "! Overwriting results/dtc.csv" in text
    assert "starspin" in text


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
