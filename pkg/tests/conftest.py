import pytest

from galois_qm.field import field_of_order

SMALL_Q = (2, 3, 4, 5, 7, 8, 9)


@pytest.fixture(params=SMALL_Q, ids=lambda q: f"q{q}")
def small_field(request):
    return field_of_order(request.param)


@pytest.fixture
def gf9():
    return field_of_order(9)
