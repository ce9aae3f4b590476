import pytest
from hypothesis import settings
from hypothesis import strategies as st

from parsum.field import make_companion, make_general
from parsum.scalar import QX, K, X

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture(scope="session")
def example():
    # sigma(t0) = t1, sigma(t1) = -6 t0 + 5 t1
    return make_companion([-6, 5])


@pytest.fixture(scope="session")
def fib():
    return make_companion([1, 1])


@pytest.fixture(scope="session")
def strange():
    return make_general([[2, K.gens[0]], [0, 2]])


def gens(sys):
    return sys.field.gens


small_ints = st.integers(-5, 5)


@st.composite
def xpolys(draw, max_degree=3, nonzero=False):
    cs = draw(st.lists(small_ints, min_size=1, max_size=max_degree + 1))
    p = sum((c * X**i for i, c in enumerate(cs)), QX.zero)
    if nonzero and not p:
        p = QX(draw(st.integers(1, 5)))
    return p


@st.composite
def xrats(draw, max_degree=3):
    return K(draw(xpolys(max_degree))) / K(draw(xpolys(max_degree, nonzero=True)))


@st.composite
def nonconstant_xpolys(draw, max_degree=3):
    p = draw(xpolys(max_degree))
    if p.degree() < 1:
        p = p + X * draw(st.integers(1, 3)) + draw(small_ints)
    return p
