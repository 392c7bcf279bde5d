"""The membership-testing adversary against pseudorandom flat channels."""

from __future__ import annotations

from collections.abc import Sequence

from ..channel import PseudorandomFlatChannel
from ..flat import FlatChannelSeed, FlatTree


def nonsupport_detector(channel_or_seed, stegotext: Sequence[int], start_i: int = 1,
                        S: int | None = None, H: int | None = None) -> bool:
    """True iff some ``t_i`` lies outside ``D_{start_i + i - 1}``.

    Costs one membership query per document.  Accepts a
    :class:`~bbstego.channel.PseudorandomFlatChannel` or a seed with ``S, H``.
    """
    if isinstance(channel_or_seed, PseudorandomFlatChannel):
        tree = channel_or_seed.tree
    elif isinstance(channel_or_seed, FlatChannelSeed):
        if S is None or H is None:
            raise ValueError("S and H are required with a bare seed")
        tree = FlatTree(channel_or_seed, S, H)
    else:
        raise TypeError("expected a pseudorandom flat channel or its seed")
    return any(not tree.insupp(start_i + pos, t) for pos, t in enumerate(stegotext))
