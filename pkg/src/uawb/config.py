"""Resource limits."""
from __future__ import annotations

import os
from dataclasses import dataclass

ENV_MAX_SIZE = "UAWB_MAX_SIZE"


@dataclass(frozen=True)
class Limits:
    # universe elements of any algebra whose congruences get enumerated
    max_size: int = 1024
    # elements of the pair algebra {(x, y) : x alpha y} used for commutators
    max_pair_algebra: int = 8192
    # Con(A) is only computed to test modularity below this size
    max_modularity_check: int = 256

    @classmethod
    def from_env(cls, **overrides) -> "Limits":
        if ENV_MAX_SIZE in os.environ and "max_size" not in overrides:
            overrides["max_size"] = int(os.environ[ENV_MAX_SIZE])
        return cls(**overrides)


DEFAULT_LIMITS = Limits()
