import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from twoisland.chains import ChainParams, ModelKind


@pytest.fixture
def wf_params():
    return ChainParams(N=30, M=20, c=2, p1=0.05, p2=0.07, q1=0.04, q2=0.06,
                       kind=ModelKind.TWO_ISLAND_WF)


@pytest.fixture
def sb_params():
    return ChainParams(N=30, M=20, c=2, p1=0.05, p2=0.07, kind=ModelKind.SEED_BANK)


@pytest.fixture
def tiny_wf():
    return ChainParams(N=3, M=2, c=1, p1=0.05, p2=0.08, q1=0.03, q2=0.06,
                       kind=ModelKind.TWO_ISLAND_WF)


@pytest.fixture
def tiny_sb():
    return ChainParams(N=3, M=2, c=1, p1=0.05, p2=0.08, kind=ModelKind.SEED_BANK)
