from functools import lru_cache

import pytest

from qhalg import build_algebra, corpus, direct_sum, tensor
from qhalg.structural import in_order


@lru_cache(maxsize=None)
def alg(name: str):
    """Built corpus algebra; ``a+b`` and ``a*b`` denote direct sums and tensor products."""
    if "+" in name:
        x, y = name.split("+")
        return direct_sum(alg(x), alg(y))
    if "*" in name:
        x, y = name.split("*")
        return tensor(alg(x), alg(y))
    if name.endswith("@opposite"):
        return in_order(alg(name[: -len("@opposite")]), "opposite")
    return build_algebra(corpus(name))


BALANCED = [
    "ex24(1)", "ex24(2)", "ex24",
    "directed_chain(1)", "directed_chain(2)", "directed_chain(3)", "directed_chain(4)",
    "semisimple(1)", "semisimple(2)", "semisimple(3)", "semisimple(4)",
    "ex24+directed_chain(2)", "directed_chain(2)*directed_chain(2)",
]
# Quasi-hereditary in the listed order; the Ringel target only in the reversed order.
QUASI_HEREDITARY = BALANCED + ["ex25", "ex25_ringel_target@opposite"]
KOSZUL = BALANCED + ["ex25"]


@pytest.fixture
def algebra():
    return alg
