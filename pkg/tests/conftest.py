"""Shared fixtures: corpus location, in-process CLI runner, criterion summary."""
from __future__ import annotations

import io
from contextlib import redirect_stderr, redirect_stdout
from pathlib import Path

import pytest

import pmodel

CORPUS_DIR = Path(pmodel.__file__).parent / "corpus"


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return CORPUS_DIR


def run_cli(*argv: str) -> tuple[int, str, str]:
    """Run the command line entry point in process, capturing both streams."""
    from pmodel import cli

    out, err = io.StringIO(), io.StringIO()
    try:
        with redirect_stdout(out), redirect_stderr(err):
            code = cli.main(list(argv))
    except SystemExit as exc:  # argparse usage errors
        code = exc.code if isinstance(exc.code, int) else 2
    return code, out.getvalue(), err.getvalue()


def pytest_collection_modifyitems(config, items):
    labels = {}
    for item in items:
        marker = item.get_closest_marker("criterion")
        if marker is not None:
            labels[item.nodeid] = (marker.args[0], marker.args[1])
    config._criterion_labels = labels


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    labels = getattr(config, "_criterion_labels", {})
    if not labels:
        return
    outcomes: dict[str, str] = {}
    for key in ("passed", "failed", "error", "skipped"):
        for report in terminalreporter.stats.get(key, ()):
            nodeid = getattr(report, "nodeid", None)
            if nodeid not in labels:
                continue
            if key == "passed" and getattr(report, "when", "call") != "call":
                continue
            outcomes.setdefault(nodeid, key)
    terminalreporter.section("acceptance criteria")
    for nodeid, (number, label) in sorted(labels.items(), key=lambda kv: kv[1][0]):
        got = outcomes.get(nodeid, "failed")
        word = {"passed": "PASS", "skipped": "SKIP"}.get(got, "FAIL")
        terminalreporter.write_line(f"criterion {number} {word}: {label}")
