"""Frozen witness deals, stored as JSON next to this module.

Each loader re-parses its file on every call; the certificates are small
and independently checkable (verify_cycle, TwoOutcomeCertificate.verify,
verify_value_cycle), and the tests re-verify all of them.
"""

from __future__ import annotations

import json
from importlib import resources

from ..classic import ClassicState, parse_classic_deal
from ..cycles import CycleCertificate, DeterministicPolicy, TwoOutcomeCertificate


def _load(name: str) -> dict:
    return json.loads(resources.files(__package__).joinpath(name).read_text())


def model_cycle_n6() -> CycleCertificate:
    """A 6-card equal-split deal that cycles forever under a fixed policy."""
    return CycleCertificate.from_json_dict(_load("model_cycle_n6.json"))


def two_outcome_n4() -> TwoOutcomeCertificate:
    """A 4-card deal (low-beats-high variant) that either player can win."""
    return TwoOutcomeCertificate.from_json_dict(_load("two_outcome_n4.json"))


def classic_cycle_26() -> tuple[ClassicState, DeterministicPolicy]:
    """The 52-card deal whose rank sequences repeat every 26 war-free moves."""
    data = _load("classic_cycle_26.json")
    return parse_classic_deal(data["deal"]), DeterministicPolicy(data["policy"])
