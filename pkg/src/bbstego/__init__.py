"""Black-box secret-key steganography by rejection sampling.

Stateful (counter-based) and stateless stegosystems over an abstract
document channel, truthful pseudorandom flat channels with membership
testing, and an experiment harness comparing measured behavior to the
analytical reliability, security and query-count bounds.
"""

from .channel import (
    ChannelModel,
    CountingChannel,
    DrawSequence,
    MemorylessChannel,
    PseudorandomFlatChannel,
    TrueRandomFlatChannel,
    draw_oracle_next,
    make_memoryless_empirical,
    min_entropy,
    sample_next,
    uniform_channel,
)
from .codes import SymbolBlock, rep_decode, rep_encode, stf_capacity_bound
from .flat import FlatChannelSeed, IntervalQuery, insupp, interval_sum, make_true_random_flat, rndelt
from .prf import PrfInput, RandomFunctionOracle, StegoKey, prf_eval_w, prf_uniform64, random_function_oracle
from .stf import (
    PrivateSampleLog,
    StfConfig,
    StfState,
    stf_decode,
    stf_decode_stateless,
    stf_encode,
    stf_encode_stateless,
)
from .stl import StlConfig, stl_decode, stl_encode

__version__ = "0.1.0"

__all__ = [
    "ChannelModel",
    "CountingChannel",
    "DrawSequence",
    "FlatChannelSeed",
    "IntervalQuery",
    "MemorylessChannel",
    "PrfInput",
    "PrivateSampleLog",
    "PseudorandomFlatChannel",
    "RandomFunctionOracle",
    "StegoKey",
    "StfConfig",
    "StfState",
    "StlConfig",
    "SymbolBlock",
    "TrueRandomFlatChannel",
    "draw_oracle_next",
    "insupp",
    "interval_sum",
    "make_memoryless_empirical",
    "make_true_random_flat",
    "min_entropy",
    "prf_eval_w",
    "prf_uniform64",
    "random_function_oracle",
    "rep_decode",
    "rep_encode",
    "rndelt",
    "sample_next",
    "stf_capacity_bound",
    "stf_decode",
    "stf_decode_stateless",
    "stf_encode",
    "stf_encode_stateless",
    "stl_decode",
    "stl_encode",
    "uniform_channel",
]
