"""Multiparty key exchange from nested commutators in nilpotent p-groups.

Three platforms (Heisenberg, cyclic triples, norm-one quaternion quotients),
the n + 1 user protocol, and the attacks that recover its key.
"""

from .attacks import (
    AttackReport,
    bsgs,
    cdh_from_eavesdropper,
    eavesdrop_generic,
    attack_heisenberg_linear,
    attack_quaternion_linear,
    pohlig_hellman,
    run_attack,
)
from .errors import NilnikeError
from .platforms import PlatformDescriptor
from .protocol import derive_key, run_exchange, setup
from .rng import make_rng

__version__ = "0.1.0"

__all__ = [
    "AttackReport",
    "NilnikeError",
    "PlatformDescriptor",
    "attack_heisenberg_linear",
    "attack_quaternion_linear",
    "bsgs",
    "cdh_from_eavesdropper",
    "derive_key",
    "eavesdrop_generic",
    "make_rng",
    "pohlig_hellman",
    "run_attack",
    "run_exchange",
    "setup",
]
