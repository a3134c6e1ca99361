import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from cartierlab import CartierModule, FieldSpec, ModulePresentation, PolynomialRing  # noqa: E402

settings.register_profile(
    "repo", deadline=None, derandomize=True, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")


def to_library(mod, ring=None):
    """CartierModule equivalent to an oracle MonomialCartier."""
    if ring is None:
        names = ["x", "y", "z"][: mod.n]
        ring = PolynomialRing(mod.spec, names)
    rels = [{(i, tuple(m)): 1} for i, J in enumerate(mod.ideals) for m in J]
    P = ModulePresentation(ring, mod.rank, rels)
    return CartierModule(P, mod.table, check=True)


@pytest.fixture
def F3x():
    return PolynomialRing(FieldSpec(3), ["x"])


@pytest.fixture
def F3xy():
    return PolynomialRing(FieldSpec(3), ["x", "y"])


@pytest.fixture
def rem_module(F3x):
    """R = F_3[x] with kappa(x^i) = x^((i+1)/3 - 1): kappa(x^2) = 1, other digits 0."""
    return CartierModule(ModulePresentation.free(F3x, 1), {(0, (2,)): [F3x.one()]})
