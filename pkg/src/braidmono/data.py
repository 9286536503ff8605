"""Location of the shipped text fixtures (MONODROMY_FIXTURES overrides it)."""

from __future__ import annotations

import os
from importlib import resources
from pathlib import Path

ENV_VAR = "MONODROMY_FIXTURES"


def fixture_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path(str(resources.files("braidmono").joinpath("fixtures")))


def fixture_path(*parts: str) -> Path:
    return fixture_dir().joinpath(*parts)


def fixture_text(*parts: str) -> str:
    return fixture_path(*parts).read_text()
