import pytest

import germlift as gl
from germlift.corpus import CORPUS


@pytest.fixture(scope="session")
def germs():
    """All corpus multigerms by name (contexts are cached per process)."""
    return {item.name: gl.load_multigerm(item.document) for item in CORPUS}


@pytest.fixture(scope="session")
def small_germs(germs):
    """The corpus entries cheap enough for the literal jet-space oracles."""
    names = (
        "cuspidal_curve",
        "quartic_quintic_curve",
        "transverse_cusps",
        "two_lines_and_cusp",
        "two_lines_cusp_tangential",
        "lines_2",
        "lines_3",
        "lines_4",
        "plane_embedding",
        "identity_line",
        "cross_cap",
        "whitney_cusp_map",
        "plane_map_xy_y5_y7",
    )
    return {name: germs[name] for name in names}
