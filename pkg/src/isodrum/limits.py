"""Default resource bounds.

The enumeration bound caps any computation that lists group elements
(conjugacy classes, EC/AC checks, automorphism verification).  The index
bound caps coset enumerations, and the involution search bound caps the
number of generator subsets examined by the involution-system search.
``GF_BOUND`` in the environment overrides the enumeration bound.
"""

import os

ENUMERATION_BOUND = 10**6
INDEX_BOUND = 10**4
INV_SEARCH_BOUND = 200_000
OKADA_SHUDO_NMAX = 13


def enumeration_bound(override=None):
    if override is not None:
        return int(override)
    env = os.environ.get("GF_BOUND")
    if env is not None:
        return int(env)
    return ENUMERATION_BOUND


def index_bound(override=None):
    if override is not None:
        return int(override)
    return INDEX_BOUND
