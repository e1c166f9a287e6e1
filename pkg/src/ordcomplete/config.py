"""Size caps shared by the library and the CLI."""

from __future__ import annotations

import os
from dataclasses import dataclass

ENV_CAP_ELEMENTS = "ORDCOMPLETE_CAP_ELEMENTS"

DEFAULT_CAP_ELEMENTS = 4096
DEFAULT_CAP_CUTS = 200_000
# P(X) enumeration (Proposition-style exhaustive checks) is 2^n.
DEFAULT_CAP_POWERSET_BITS = 20


@dataclass(frozen=True)
class Caps:
    elements: int = DEFAULT_CAP_ELEMENTS
    cuts: int = DEFAULT_CAP_CUTS

    def __post_init__(self):
        if self.elements <= 0 or self.cuts <= 0:
            raise ValueError("caps must be positive")


def default_caps() -> Caps:
    raw = os.environ.get(ENV_CAP_ELEMENTS)
    if raw is None:
        return Caps()
    return Caps(elements=int(raw))
