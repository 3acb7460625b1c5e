"""Addressable max-priority queue over edge keys.

Built on ``heapq`` with lazy invalidation: ``delete`` detaches the live
entry for a key and leaves a stale tuple in the underlying list, which
``pop_highest`` skips.  All operations are O(log n) amortized.  Ordering is
priority descending, then tie_rank ascending, then key ascending.

One heap per engine run; instances may move between threads but must not
be shared mutably.
"""

from __future__ import annotations

import heapq

__all__ = ["AddressableMaxHeap"]


class AddressableMaxHeap:
    __slots__ = ("_entries", "_live", "_seq")

    def __init__(self):
        self._entries: list[tuple] = []
        # key -> (seq, priority); a heap tuple is live iff its seq matches
        self._live: dict[int, tuple[int, float]] = {}
        self._seq = 0

    def __len__(self) -> int:
        return len(self._live)

    def __bool__(self) -> bool:
        return bool(self._live)

    def __contains__(self, key) -> bool:
        return key in self._live

    def push(self, key, priority: float, tie_rank: int) -> None:
        """Insert an entry; the key must not already be present."""
        if key in self._live:
            raise ValueError(f"key {key!r} already in heap")
        seq = self._seq
        self._seq = seq + 1
        self._live[key] = (seq, priority)
        heapq.heappush(self._entries, (-priority, tie_rank, key, seq))

    def pop_highest(self) -> tuple:
        """Remove and return (key, priority) of the highest-priority entry.

        Among equal priorities the smallest tie_rank wins.  Raises
        IndexError on an empty heap.
        """
        live = self._live
        if not live:
            raise IndexError("pop from empty heap")
        entries = self._entries
        while True:
            neg, _tie, key, seq = heapq.heappop(entries)
            rec = live.get(key)
            if rec is not None and rec[0] == seq:
                del live[key]
                return key, -neg

    def delete(self, key):
        """Remove a key if present; returns its priority, or None if absent."""
        rec = self._live.pop(key, None)
        return None if rec is None else rec[1]

    def priority(self, key):
        """Current priority of a key, or None if absent."""
        rec = self._live.get(key)
        return None if rec is None else rec[1]
