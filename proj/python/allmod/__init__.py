"""Bit-exact modular reduction engines and their area/latency model."""

from ._core import *  # noqa: F401,F403
from ._core import AllmodError, Reduction, Scheme, Throughput

REDUCERS = ("lut", "iter", "hybrid")


def reduce(method: str, a: int, m: int, n: int, **kwargs) -> Reduction:
    """Dispatch to reduce_lut / reduce_iterative / reduce_hybrid by name."""
    if method == "lut":
        return reduce_lut(a, m, n, **kwargs)  # noqa: F405
    if method == "iter":
        return reduce_iterative(a, m, n, **kwargs)  # noqa: F405
    if method == "hybrid":
        return reduce_hybrid(a, m, n, **kwargs)  # noqa: F405
    raise ValueError(f"unknown method {method!r}, expected one of {REDUCERS}")
