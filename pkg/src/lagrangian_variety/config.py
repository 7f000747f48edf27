"""
Tunables shared by the library and the command line.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, replace

log = logging.getLogger(__name__)

THREADS_ENV = "LAGR_THREADS"
DEFAULT_SEED = 0xBD


@dataclass(frozen=True)
class Config:
    """Caps, seeds and sample sizes for one run."""

    rank_cap: int = 8
    """Largest total rank accepted by build_root_system"""
    oracle_cap: int = 4
    """Largest oracle size, max(rank, longest root string), accepted by the Chevalley oracle"""
    weyl_cap: int = 1152
    """Largest Weyl group enumerated"""
    seed: int = DEFAULT_SEED
    """Seed for every pseudo-random sample"""
    torus_samples: int = 5
    """Torus elements sampled besides the identity"""
    lagrangian_samples: int = 3
    """Random reflection graphs added to the canonical Lagrangians"""
    bruhat_samples: int = 256
    """Samples drawn by the double Bruhat cell certificate"""
    prime: int = 10007
    """Field size for the double Bruhat cell certificate"""
    threads: int = 1
    """Worker threads for verification sweeps"""
    output_format: str = "json"
    """One of json, csv, md"""

    def replace(self, **changes) -> Config:
        """Copy with some fields changed; None values are ignored."""
        return replace(self, **{key: value for key, value in changes.items() if value is not None})

    @classmethod
    def from_env(cls) -> Config:
        """Defaults, with the thread count taken from LAGR_THREADS when it is a positive integer."""
        raw = os.environ.get(THREADS_ENV)
        if not raw:
            return cls()
        try:
            threads = int(raw)
        except ValueError:
            log.warning(f"ignoring {THREADS_ENV}={raw!r}: not an integer")
            return cls()
        if threads < 1:
            log.warning(f"ignoring {THREADS_ENV}={raw!r}: must be positive")
            return cls()
        return cls(threads=threads)


DEFAULTS = Config()
