"""Linkage criteria: per-edge statistics and pairwise combination rules.

A contracted edge between two clusters carries an :class:`EdgeStat`
aggregating every original edge joining them.  ``combine`` realizes each
linkage without rescanning original edges; for any combination tree over a
fixed edge multiset the resulting value equals the closed form computed
directly on that multiset (sum, multiplicity-weighted mean, max, min, or
the value of the largest-magnitude edge).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

from .graph import SignedEdge

__all__ = ["LinkageRule", "EdgeStat", "init_stat", "combine",
           "interaction_value"]


class LinkageRule(enum.Enum):
    SUM = "sum"
    ABSMAX = "absmax"
    AVERAGE = "average"
    MAX = "max"
    MIN = "min"

    @classmethod
    def parse(cls, name: str) -> "LinkageRule":
        try:
            return cls(name.strip().lower())
        except ValueError:
            valid = ", ".join(r.value for r in cls)
            raise ValueError(f"unknown linkage rule {name!r} (one of: {valid})")


@dataclass(frozen=True)
class EdgeStat:
    """Aggregate for one contracted edge.

    ``count`` is the number of original edges folded in (the weight of the
    running mean).  ``tie_rank`` makes magnitude ties deterministic: for
    absolute-maximum stats it is the id of the constituent edge realizing
    the value, for every other rule the minimal constituent id.  Either
    way it is unique per contracted edge.
    """

    value: float
    count: int = 1
    is_local: bool = True
    can_be_merged: bool = True
    tie_rank: int = 0


def init_stat(edge: SignedEdge) -> EdgeStat:
    """Fresh single-edge statistic: value w_plus - w_minus, count 1."""
    return EdgeStat(value=edge.w_plus - edge.w_minus, count=1,
                    is_local=edge.is_local, can_be_merged=True,
                    tie_rank=edge.id)


def combine(a: EdgeStat, b: EdgeStat, rule: LinkageRule) -> EdgeStat:
    """Fold two contracted-edge statistics into one.

    The value follows the linkage rule; multiplicity adds, locality ORs,
    and the mergeability flag ANDs (a constraint on either side constrains
    the result).  AbsMax keeps the operand with the larger magnitude,
    breaking exact ties toward the smaller tie_rank; its result is always
    the constituent with the highest |weight| and, among equals, the
    lowest id, regardless of combination order.
    """
    if rule is LinkageRule.ABSMAX:
        aa = abs(a.value)
        ab = abs(b.value)
        if aa > ab or (aa == ab and a.tie_rank < b.tie_rank):
            value, tie_rank = a.value, a.tie_rank
        else:
            value, tie_rank = b.value, b.tie_rank
    else:
        if rule is LinkageRule.SUM:
            value = a.value + b.value
        elif rule is LinkageRule.AVERAGE:
            value = (a.value * a.count + b.value * b.count) / (a.count + b.count)
        elif rule is LinkageRule.MAX:
            value = a.value if a.value >= b.value else b.value
        elif rule is LinkageRule.MIN:
            value = a.value if a.value <= b.value else b.value
        else:
            raise ValueError(f"unknown rule {rule!r}")
        tie_rank = min(a.tie_rank, b.tie_rank)
    return EdgeStat(value=value,
                    count=a.count + b.count,
                    is_local=a.is_local or b.is_local,
                    can_be_merged=a.can_be_merged and b.can_be_merged,
                    tie_rank=tie_rank)


def interaction_value(stat: EdgeStat) -> float:
    """Inter-cluster interaction represented by a statistic."""
    return stat.value


def constrain(stat: EdgeStat) -> EdgeStat:
    """Copy of a statistic with the mergeability flag cleared."""
    return replace(stat, can_be_merged=False)
