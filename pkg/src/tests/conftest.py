import os
import sys

import mpmath
import numpy as np
import pytest

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))


from models import ZeroSet
from sieve.lambda_table import build_lambda_table
from zeros.table import dump_zeros, load_zeros

# covers N up to 2e5 and S~_1 down to a = 1e-3
TABLE_LIMIT = 200_000
ZERO_HEIGHT = 500.0

FIRST_ZEROS = (14.134725141734694, 21.022039638771555, 25.010857580145688)


@pytest.fixture(scope="session")
def lambda_table():
    """Λ table shared by every test that needs one"""
    return build_lambda_table(TABLE_LIMIT)


@pytest.fixture(scope="session")
def zero_file(tmp_path_factory):
    """Zero table up to height 500 computed by mpmath and written by dump_zeros"""
    mpmath.mp.dps = 25
    gammas = []
    n = 1
    while True:
        gamma = float(mpmath.zetazero(n).imag)
        if gamma > ZERO_HEIGHT:
            break
        gammas.append(gamma)
        n += 1
    path = tmp_path_factory.mktemp("zeros") / "zeros.txt"
    dump_zeros(ZeroSet(gammas=np.array(gammas), source="mpmath.zetazero"), path)
    return path


@pytest.fixture(scope="session")
def zero_set(zero_file):
    return load_zeros(zero_file)


@pytest.fixture
def three_zeros():
    return ZeroSet(gammas=np.array(FIRST_ZEROS), source="first three")


@pytest.fixture
def three_zero_file(tmp_path):
    path = tmp_path / "three.txt"
    path.write_text("\n".join(repr(g) for g in FIRST_ZEROS) + "\n", encoding="utf-8")
    return path
