"""Size guards for exhaustive enumeration.

Every guard has a safe default and can be raised through an environment
variable, e.g. ``GALOIS_QM_MAX_VECTORS=6000000`` to allow GF(49)^4.

=============================  =========  ==========================================
variable                       default    bounds
=============================  =========  ==========================================
GALOIS_QM_MAX_FIELD            2**20      field order p**n
GALOIS_QM_MAX_VECTORS          2**20      q**N when enumerating a vector space
GALOIS_QM_MAX_PGL_Q            16         q for PGL(2, q) / PU(2, q) enumeration
GALOIS_QM_MAX_EXHAUSTIVE_Q     5          q for CHSH search over every entangled state
GALOIS_QM_MAX_SINGLET_Q        32         q for the singlet-only CHSH search
GALOIS_QM_MAX_LHV_SETTINGS     8          total settings in a hidden-variable table
=============================  =========  ==========================================
"""

import os

DEFAULTS = {
    "GALOIS_QM_MAX_FIELD": 2**20,
    "GALOIS_QM_MAX_VECTORS": 2**20,
    "GALOIS_QM_MAX_PGL_Q": 16,
    "GALOIS_QM_MAX_EXHAUSTIVE_Q": 5,
    "GALOIS_QM_MAX_SINGLET_Q": 32,
    "GALOIS_QM_MAX_LHV_SETTINGS": 8,
}


class GuardError(ValueError):
    """A requested computation exceeds a configured size guard."""


def limit(name: str) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return DEFAULTS[name]
    try:
        return int(raw)
    except ValueError:
        raise GuardError(f"{name}={raw!r} is not an integer") from None


def check(name: str, value: int, what: str) -> None:
    bound = limit(name)
    if value > bound:
        raise GuardError(f"{what} = {value} exceeds guard {bound} (raise {name} to override)")
