"""Named test arrangements and weight sets."""
from __future__ import annotations

from fractions import Fraction

from .arrangement import Arrangement, Hyperplane
from .weights import Weights

PRIMES = (2, 3, 5, 7, 11, 13, 17, 19)


def point_on_line() -> Arrangement:
    return Arrangement(1, [Hyperplane((1,), 0)])


def two_lines() -> Arrangement:
    return Arrangement(2, [Hyperplane((1, 0)), Hyperplane((0, 1))])


def concurrent_lines(n: int) -> Arrangement:
    normals = [(1, 0), (0, 1), (1, 1), (1, 2), (1, 3), (2, 1), (1, -1), (2, 3)]
    if not 1 <= n <= len(normals):
        raise ValueError("unsupported number of lines")
    return Arrangement(2, [Hyperplane(v) for v in normals[:n]])


def triangle() -> Arrangement:
    return Arrangement(2, [Hyperplane((1, 0)), Hyperplane((0, 1)), Hyperplane((1, 1), -1)])


def figure() -> Arrangement:
    """y=1, y=x, y=-x, x=1, x=0."""
    return Arrangement(2, [Hyperplane((0, 1), -1), Hyperplane((-1, 1)), Hyperplane((1, 1)),
                           Hyperplane((1, 0), -1), Hyperplane((1, 0))])


def coordinate_planes() -> Arrangement:
    return Arrangement(3, [Hyperplane((1, 0, 0)), Hyperplane((0, 1, 0)), Hyperplane((0, 0, 1))])


def generic_weights(n: int) -> Weights:
    return Weights([Fraction(1, p) for p in PRIMES[:n]])


CORPUS = {
    "A1": point_on_line,
    "A2": two_lines,
    "A3": lambda: concurrent_lines(3),
    "A4": triangle,
    "A5": figure,
    "A6": coordinate_planes,
}


def corpus() -> dict[str, tuple[Arrangement, Weights]]:
    out = {}
    for name, make in CORPUS.items():
        arr = make()
        out[name] = (arr, generic_weights(len(arr)))
    return out


def resonant_controls() -> dict[str, tuple[Arrangement, Weights]]:
    return {
        "A1-zero": (point_on_line(), Weights([0])),
        "A2-integer": (two_lines(), Weights([1, 0])),
        "A3-half": (concurrent_lines(3), Weights([Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)])),
    }
