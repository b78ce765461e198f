"""Exact Kazhdan-Lusztig polynomials and Andersen filtration layers."""

import json

from ._klcalc import (
    Error,
    Group,
    InfiniteType,
    InsufficientTruncation,
    NotDominant,
    ParityError,
    RankDeficient,
    UsageError,
    group_info,
    gysin_pieces,
    h_to_P,
    poly_mul,
    smith_valuations,
)

__all__ = [
    "Error",
    "Group",
    "InfiniteType",
    "InsufficientTruncation",
    "NotDominant",
    "ParityError",
    "RankDeficient",
    "UsageError",
    "andersen",
    "block_table",
    "group_info",
    "gysin_pieces",
    "h_to_P",
    "poly_mul",
    "smith_valuations",
]


def andersen(group, ybar, xbar, singular=""):
    """Andersen report for the cosets of ybar and xbar as a dict."""
    return json.loads(group._andersen(singular, ybar, xbar))


def block_table(group, singular=""):
    """Reports for every comparable pair of cosets."""
    return json.loads(group._table(singular))
