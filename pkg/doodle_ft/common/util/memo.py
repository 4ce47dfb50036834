"""Very small thread-safe memo table used by the rewriting code."""

import threading
from collections.abc import Callable, Hashable
from typing import Generic, TypeVar

V = TypeVar("V")


class Memo(Generic[V]):
    """
    Map with atomic get-or-insert semantics.

    The factory runs outside the lock so recursive lookups never deadlock;
    if two threads race on one key, the first stored value wins.
    """

    def __init__(self) -> None:
        self._table: dict[Hashable, V] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def get_or_compute(self, key: Hashable, factory: Callable[[], V]) -> V:
        with self._lock:
            if key in self._table:
                self.hits += 1
                return self._table[key]
            self.misses += 1

        value = factory()

        with self._lock:
            return self._table.setdefault(key, value)

    def clear(self) -> None:
        with self._lock:
            self._table.clear()
            self.hits = 0
            self.misses = 0

    def __len__(self) -> int:
        with self._lock:
            return len(self._table)
