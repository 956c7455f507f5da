import os

DEFAULT_ENUMERATION_CAP = 20_000
# full subset check of join-continuity up to this hom size, pairs + empty join above it
JOIN_SUBSET_CHECK_MAX = 12
# largest candidate set searched exhaustively for a directed generating subset
SUBSET_SEARCH_MAX = 16
FUNCTOR_EXHAUSTIVE_MAX = 5_000
FUNCTOR_SAMPLE_SIZE = 1_000
DEFAULT_SEED = 0


def enumeration_cap(cap=None):
    """Resolve the enumeration cap: explicit argument, then QDOMAIN_CAP, then default."""
    if cap is not None:
        return int(cap)
    env = os.environ.get("QDOMAIN_CAP")
    if env:
        return int(env)
    return DEFAULT_ENUMERATION_CAP
