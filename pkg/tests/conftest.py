import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from maltkit.catalog import cyclic_group, group_maltsev_term
from maltkit.rings import (
    LeftModule,
    LinearForm,
    cyclic_ring,
    dual_numbers_f2,
    module_over_self,
    submodule,
    zero_module,
)


@pytest.fixture(scope="session")
def z4():
    return cyclic_group(4)


@pytest.fixture(scope="session")
def z4_term(z4):
    return group_maltsev_term(z4, "plus", "neg")


def form_corpus():
    """Named linear forms with |R|, |M| <= 4 used across the test suite."""
    r2, r4 = cyclic_ring(2), cyclic_ring(4)
    f2eps = dual_numbers_f2()
    out = []
    out.append(("zero-into-Z2", LinearForm(zero_module(r2), (0,))))
    out.append(("id-Z2", LinearForm(module_over_self(r2), (0, 1))))
    out.append(("zero-map-Z2", LinearForm(module_over_self(r2), (0, 0))))
    out.append(("id-Z4", LinearForm(module_over_self(r4), (0, 1, 2, 3))))
    out.append(("double-Z4", LinearForm(module_over_self(r4), (0, 2, 0, 2))))
    z2_over_z4 = LeftModule(
        r4, 2, (0, 1, 1, 0), tuple((r * x) % 2 for r in range(4) for x in range(2))
    )
    out.append(("Z2-into-Z4", LinearForm(z2_over_z4, (0, 2))))
    out.append(("id-F2eps", LinearForm(module_over_self(f2eps), (0, 1, 2, 3))))
    eps_ideal, _ = submodule(module_over_self(f2eps), [0, 1])
    out.append(("cycles", LinearForm(eps_ideal, (0, 1))))
    return out


@pytest.fixture(scope="session")
def forms():
    return form_corpus()
