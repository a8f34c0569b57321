from __future__ import annotations

import pytest

from reasm.generators import cube


@pytest.fixture
def cube_graph():
    return cube()
