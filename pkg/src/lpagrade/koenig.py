"""Inverse limits of finite sets, truncated at a materialized depth.

A :class:`LevelSystem` is a sequence of finite sets ``X_1, X_2, ...`` with
maps ``g_n : X_{n+1} -> X_n``.  If every level is non-empty, a coherent
thread ``(x_1, x_2, ...)`` with ``g_n(x_{n+1}) = x_n`` exists.  It is built
from the cores ``Z_n = ⋂_m Y_n^m``, where ``Y_n^m`` is the image of
``X_{n+m}`` in ``X_n``.  The cores satisfy ``g_n(Z_{n+1}) = Z_n``, so each
choice of ``x_n`` in ``Z_n`` extends one level down.

Only levels up to ``n_max`` are ever generated.  The intersection therefore
runs over the materialized look-ahead, and a thread is certified coherent up
to that depth and no further.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Hashable, Iterable, Sequence


class KoenigError(Exception):
    pass


class EmptyLevelError(KoenigError):
    def __init__(self, level: int):
        self.level = level
        super().__init__(f"level {level} is empty")


class HorizonError(KoenigError):
    pass


@dataclass(frozen=True)
class LevelSystem:
    level: Callable[[int], Iterable[Hashable]]
    step: Callable[[int, Any], Any]  # step(n, x) = g_n(x) for x in X_{n+1}
    n_max: int
    key: Callable[[Any], Any] | None = None  # tie-break order; never inspects items otherwise


@dataclass(frozen=True)
class Thread:
    items: tuple

    def __len__(self) -> int:
        return len(self.items)

    def is_coherent(self, sys: LevelSystem) -> bool:
        return all(sys.step(n, self.items[n]) == self.items[n - 1] for n in range(1, len(self.items)))


def _materialize(sys: LevelSystem, need: int) -> list[frozenset]:
    """Levels 1..depth, where depth >= need is the deepest non-empty level within n_max.

    Raises EmptyLevelError if one of the first ``need`` levels is empty.
    """
    if need > sys.n_max:
        raise HorizonError(f"level {need} requested but only {sys.n_max} are materialized")
    levels: list[frozenset] = []
    for n in range(1, sys.n_max + 1):
        xs = frozenset(sys.level(n))
        if not xs:
            if n <= need:
                raise EmptyLevelError(n)
            break
        levels.append(xs)
    return levels


def _images(sys: LevelSystem, levels: Sequence[frozenset]) -> list[list[frozenset]]:
    """``Y[n][m]`` (1-based n, m >= 1) = (g_n ∘ ... ∘ g_{n+m-1})(X_{n+m})."""
    depth = len(levels)
    Y: list[list[frozenset]] = [[] for _ in range(depth + 1)]
    for top in range(2, depth + 1):
        cur = levels[top - 1]
        for n in range(top - 1, 0, -1):
            cur = frozenset(sys.step(n, x) for x in cur)
            Y[n].append(cur)  # m = top - n, appended in increasing m
    return Y


def stabilized_cores(sys: LevelSystem, n: int) -> list[frozenset]:
    """Cores ``Z_1..Z_n`` over the materialized look-ahead.

    Raises :class:`EmptyLevelError` when one of ``X_1..X_n`` is empty.
    """
    levels = _materialize(sys, n)
    depth = len(levels)
    Y = _images(sys, levels)
    cores: list[frozenset] = []
    for i in range(1, min(n + 1, depth) + 1):
        chain = Y[i]
        for a, b in zip(chain, chain[1:]):
            if not b <= a:  # Y_n^{m+1} ⊆ Y_n^m fails only for an ill-formed step map
                raise KoenigError(f"image chain at level {i} is not descending")
        z = levels[i - 1]
        for y in chain:
            z = z & y
        cores.append(z)
    for i in range(1, len(cores)):
        if frozenset(sys.step(i, x) for x in cores[i]) != cores[i - 1]:
            raise KoenigError(f"g_{i}(Z_{i + 1}) != Z_{i}")
    return cores[:n]


def extract_thread(sys: LevelSystem, N: int) -> Thread:
    """A thread ``(x_1, ..., x_N)``, least element first at every choice."""
    cores = stabilized_cores(sys, N)
    order = sys.key or (lambda x: x)
    items = [min(cores[0], key=order)]
    for m in range(1, N):
        fibre = [y for y in cores[m] if sys.step(m, y) == items[-1]]
        items.append(min(fibre, key=order))
    return Thread(tuple(items))


def emptiness_index(sys: LevelSystem) -> int | None:
    """Least ``n`` with ``X_n`` empty, or None if levels 1..n_max are all non-empty."""
    for n in range(1, sys.n_max + 1):
        if not any(True for _ in sys.level(n)):
            return n
    return None

