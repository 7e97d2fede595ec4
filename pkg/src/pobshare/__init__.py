"""Generalized secret sharing with the Permutation Ordered Binary number system."""

__version__ = "0.1.0"

from .access import (
    AccessStructure,
    CumulativeArray,
    ForbiddenFamily,
    covers_all,
    cumulative_array,
    incidence_array,
    is_authorized,
    maximal_unauthorized,
    minimize,
)
from .analysis import candidate_secrets, leakage_audit, oracle_crosscheck
from .container import decode_bundle, encode_bundle, pack_7bit, parse_policy, unpack_7bit
from .dealer import CombineReport, ParticipantBundle, SchemeMetadata, combine, deal
from .pob import PobNumber, PobParams, binomial, pob_from_value, pob_value
from .threshold import (
    ReplayRandom,
    Share,
    ShareVector,
    recover_byte,
    recover_secret,
    share_byte,
    share_secret,
)

__all__ = [
    "AccessStructure",
    "CombineReport",
    "CumulativeArray",
    "ForbiddenFamily",
    "ParticipantBundle",
    "PobNumber",
    "PobParams",
    "ReplayRandom",
    "SchemeMetadata",
    "Share",
    "ShareVector",
    "binomial",
    "candidate_secrets",
    "combine",
    "covers_all",
    "cumulative_array",
    "deal",
    "decode_bundle",
    "encode_bundle",
    "incidence_array",
    "is_authorized",
    "leakage_audit",
    "maximal_unauthorized",
    "minimize",
    "oracle_crosscheck",
    "pack_7bit",
    "parse_policy",
    "pob_from_value",
    "pob_value",
    "recover_byte",
    "recover_secret",
    "share_byte",
    "share_secret",
    "unpack_7bit",
]
