"""Min-max robust s-t paths: LP relaxations, dependent rounding and exact verification.

Instances travel as JSON strings in the same format the command-line tool reads.
Rationals come back as strings such as ``"7/2"``.
"""

from ._core import (
    RobustPathError,
    bench_csv,
    brute_force,
    gap_demo,
    generate,
    kz_instance,
    normalize_instance,
    solve,
    verify,
)

__all__ = [
    "RobustPathError",
    "bench_csv",
    "brute_force",
    "gap_demo",
    "generate",
    "kz_instance",
    "normalize_instance",
    "solve",
    "verify",
]
