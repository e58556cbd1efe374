"""Generalized metabelian Baumslag-Solitar groups: protocols and attacks.

Exact arithmetic throughout; see the README for the CLI and file formats.
"""

from .group import Group, GroupElement
from .words import evaluate, parse, random_word, serialize
from .protocols import (
    AAGInstance,
    AAGPublic,
    KoLeeInstance,
    KoLeePublic,
    SubgroupDescriptor,
    aag_alice_key,
    aag_bob_key,
    aag_generate,
    kolee_generate,
    kolee_shared_key,
    trial_seed,
)
from .attacks import (
    AttackReport,
    ScspSolution,
    aag_attack,
    brute_force_conjugator,
    csp_row,
    derive_r,
    kolee_attack,
    kolee_attack_report,
    kolee_recover_key,
    recover_alpha,
    solve_scsp,
)

__version__ = "0.1.0"

__all__ = [
    "Group",
    "GroupElement",
    "parse",
    "evaluate",
    "serialize",
    "random_word",
    "AAGInstance",
    "AAGPublic",
    "KoLeeInstance",
    "KoLeePublic",
    "SubgroupDescriptor",
    "aag_generate",
    "aag_alice_key",
    "aag_bob_key",
    "kolee_generate",
    "kolee_shared_key",
    "trial_seed",
    "AttackReport",
    "ScspSolution",
    "csp_row",
    "solve_scsp",
    "recover_alpha",
    "aag_attack",
    "derive_r",
    "kolee_attack",
    "kolee_attack_report",
    "kolee_recover_key",
    "brute_force_conjugator",
]
