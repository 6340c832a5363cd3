"""Cost bounds and equational laws for call-by-push-value programs."""

from __future__ import annotations

import json
from typing import Any

from . import _core
from ._core import (
    ParseError,
    TypeCheckError,
    format_program,
    library_names,
    library_source,
    laws,
    mutations,
    specs,
)

__all__ = [
    "ParseError",
    "TypeCheckError",
    "check",
    "evaluate",
    "format_program",
    "library_names",
    "library_source",
    "laws",
    "mutations",
    "specs",
]


def check(spec: str | None = None, *, mode: str = "cost", mutate: str | None = None,
          laws: bool = True, **options: Any) -> list[dict[str, Any]]:
    """Check corpus specs and laws; one report dict per check.

    `options` are the domain and trial settings: nat_max, list_len, elems,
    state_max, seed, trials.
    """
    return json.loads(_core.check(spec=spec, mode=mode, mutate=mutate, laws=laws, **options))


def evaluate(source: str, args: list[str] | None = None, *, mode: str = "cost",
             **domain: Any) -> list[tuple[list[str], str]]:
    """Evaluate a program given as file text.

    With `args`, returns the single row for those arguments; otherwise one
    row per argument tuple of the domain (nat_max, list_len, elems, state_max).
    """
    return _core.evaluate(source, args, mode=mode, **domain)
