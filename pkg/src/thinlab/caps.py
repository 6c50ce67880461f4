"""Size caps for generators and brute-force oracles.

Defaults can be overridden with the ``THINLAB_CAPS`` environment variable,
a comma-separated list of ``name=value`` pairs, e.g.
``THINLAB_CAPS="enum=10,oracle=800"``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

ENV_VAR = "THINLAB_CAPS"


class CapExceeded(RuntimeError):
    """An input is larger than the configured cap for an operation."""


@dataclass(frozen=True)
class Caps:
    # order-enumeration oracle (n! orders)
    enum: int = 9
    # characterization oracle
    oracle: int = 500
    # auxiliary graph / per-order minimum class count (quadratic)
    aux: int = 5000
    # enumerate_labeled_trees (n^(n-2) trees)
    labeled: int = 8
    # vertex count limit for generators
    size: int = 20_000_000

    def __post_init__(self) -> None:
        for f in fields(self):
            if getattr(self, f.name) < 1:
                raise ValueError(f"cap {f.name!r} must be >= 1")


def load_caps(spec: str | None = None) -> Caps:
    """Parse caps from ``spec`` (or the environment) on top of the defaults."""
    if spec is None:
        spec = os.environ.get(ENV_VAR, "")
    caps = Caps()
    names = {f.name for f in fields(Caps)}
    for item in filter(None, (s.strip() for s in spec.split(","))):
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in names:
            raise ValueError(f"bad {ENV_VAR} entry: {item!r}")
        caps = replace(caps, **{key: int(value)})
    return caps


def check_cap(what: str, value: int, cap: int) -> None:
    if value > cap:
        raise CapExceeded(f"{what}: {value} exceeds cap {cap}")
