"""Variable naming scheme and deterministic tie-break weights.

The names below are a public contract: LP exports, audit dumps and the
brute-force oracle all identify decision entities by these strings.  The
tie-break weights turn "any optimum" into "one well-defined optimum": after a
phase is solved to its optimal cost, the solution minimizing the weighted sum
of active entity names is selected.  Weights are stable integer hashes so the
planner (via two pinned follow-up solves) and the enumeration oracle resolve
ties identically.
"""

from __future__ import annotations

import hashlib

_WEIGHT_MODULUS = 1_000_003  # prime; sums over <=10^4 entities stay exact in float64


def wbeta(i: int, j: int, q: int) -> str:
    return f"wbeta_{i}_{j}_{q}"


def pbeta(i: int, j: int, q: int) -> str:
    return f"pbeta_{i}_{j}_{q}"


def wdelta(k: int, i: int, j: int, q: int) -> str:
    return f"wdelta_{k}_{i}_{j}_{q}"


def pdelta(k: int, i: int, j: int, q: int) -> str:
    return f"pdelta_{k}_{i}_{j}_{q}"


def wlam(lp: int, m: int, n: int) -> str:
    return f"wlam_{lp}_{m}_{n}"


def plam(lp: int, m: int, n: int) -> str:
    return f"plam_{lp}_{m}_{n}"


def wlam_integrated(i: int, j: int, q: int, m: int, n: int) -> str:
    return f"wlam_{i}_{j}_{q}_{m}_{n}"


def plam_integrated(i: int, j: int, q: int, m: int, n: int) -> str:
    return f"plam_{i}_{j}_{q}_{m}_{n}"


def tie_weight(name: str, level: int = 1) -> int:
    """Deterministic pseudo-random weight for an entity name.

    ``level`` selects independent weight families; two families make a
    collision between distinct equal-cost solutions vanishingly unlikely.
    """
    digest = hashlib.blake2b(f"{level}:{name}".encode("ascii"), digest_size=6).digest()
    return 1 + int.from_bytes(digest, "big") % _WEIGHT_MODULUS


def tie_score(names, level: int = 1) -> int:
    """Total tie-break weight of a collection of active entity names."""
    return sum(tie_weight(name, level) for name in names)
