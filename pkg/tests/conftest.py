"""Shared fixtures and the acceptance-summary reporting hook."""

from __future__ import annotations

import os
from pathlib import Path

# Pin BLAS threading before numpy loads anywhere in the test run, for the
# same reason the package does it: bit-stable reductions.
for _var in ("OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS",
             "OMP_NUM_THREADS", "NUMEXPR_NUM_THREADS"):
    os.environ.setdefault(_var, "1")

import numpy as np
import pytest

REPO_ROOT = Path(__file__).resolve().parent.parent
DATA_DIR = REPO_ROOT / "data"
CONFIG_DIR = REPO_ROOT / "configs"

ACCEPTANCE_PREFIX = "tests/test_acceptance.py::test_criterion_"


@pytest.fixture
def rng():
    return np.random.default_rng(1729)


@pytest.fixture
def mini_corpus_dir():
    return DATA_DIR / "mini_corpus"


@pytest.fixture
def mini_syntax_dir():
    return DATA_DIR / "mini_syntax"


def write_corpus(root: Path, docs: dict[str, str], language: str = "en",
                 tag: str = "TEST") -> Path:
    """Lay out a corpus directory with a manifest; returns the manifest
    path."""
    root.mkdir(parents=True, exist_ok=True)
    lines = ["text_id,path,language,dataset_tag"]
    for text_id, body in docs.items():
        (root / f"{text_id}.txt").write_text(body, encoding="utf-8")
        lines.append(f"{text_id},{text_id}.txt,{language},{tag}")
    manifest = root / "manifest.csv"
    manifest.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return manifest


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL/SKIP line per acceptance criterion at the end of
    the run."""
    rows = []
    for outcome, label in (("passed", "PASS"), ("failed", "FAIL"),
                           ("error", "FAIL"), ("skipped", "SKIP"),
                           ("xfailed", "SKIP"), ("xpassed", "PASS")):
        for report in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(report, "nodeid", "")
            if ACCEPTANCE_PREFIX not in nodeid.replace("\\", "/"):
                continue
            if report.when == "teardown":
                continue
            name = nodeid.split("::")[-1].replace("test_criterion_", "")
            rows.append((name, label))
    if not rows:
        return
    seen = {}
    for name, label in rows:
        if name not in seen or label == "FAIL":
            seen[name] = label
    terminalreporter.section("acceptance criteria")
    for name, label in seen.items():
        terminalreporter.write_line(f"{label}  {name.replace('_', ' ')}")
