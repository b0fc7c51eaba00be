"""Resource limits and their environment-variable overrides.

Library functions take explicit limit arguments with these defaults; the
CLI additionally honors the SOFICRANK_* environment variables below.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

DEFAULT_MAX_BALL_ELEMENTS = 10**6
DEFAULT_MAX_VERTICES = 10**4

ENV_MAX_BALL_ELEMENTS = "SOFICRANK_MAX_BALL_ELEMENTS"
ENV_MAX_VERTICES = "SOFICRANK_MAX_VERTICES"
ENV_MAX_KERNEL_RADIUS = "SOFICRANK_MAX_KERNEL_RADIUS"


def default_kernel_search_bound(support_radius: int) -> int:
    """Search bound for kernel-radius scans: 3 * support radius + 3.

    An unbounded scan cannot terminate when the kernel is trivial, so every
    search is capped; a miss is reported as "not found up to the bound",
    never as "kernel empty".
    """
    return 3 * support_radius + 3


@dataclass(frozen=True)
class Limits:
    max_ball_elements: int = DEFAULT_MAX_BALL_ELEMENTS
    max_vertices: int = DEFAULT_MAX_VERTICES
    max_kernel_radius: int | None = None  # None: use default_kernel_search_bound

    @classmethod
    def from_env(cls) -> "Limits":
        def _read(name: str, fallback):
            raw = os.environ.get(name)
            if raw is None:
                return fallback
            try:
                return int(raw)
            except ValueError:
                raise ValueError(f"environment variable {name} must be an integer, got {raw!r}")

        return cls(
            max_ball_elements=_read(ENV_MAX_BALL_ELEMENTS, DEFAULT_MAX_BALL_ELEMENTS),
            max_vertices=_read(ENV_MAX_VERTICES, DEFAULT_MAX_VERTICES),
            max_kernel_radius=_read(ENV_MAX_KERNEL_RADIUS, None),
        )
