import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from besselharm.spaces import FiniteBanachSpace, ellq_space, hilbert_space, scalar_space

_vectors = st.lists(
    st.floats(min_value=-50.0, max_value=50.0, allow_nan=False), min_size=4, max_size=4
)


@given(v=_vectors, w=_vectors, q=st.sampled_from([1.0, 1.5, 2.0, 4.0, np.inf]))
@settings(max_examples=60, deadline=None)
def test_norm_axioms(v, w, q):
    space = ellq_space(4, q) if np.isfinite(q) else FiniteBanachSpace(4, "ellq", np.inf)
    v, w = np.array(v), np.array(w)
    nv, nw, nvw = space.norm(v), space.norm(w), space.norm(v + w)
    assert nv >= 0.0
    assert nvw <= nv + nw + 1e-9
    assert abs(space.norm(3.0 * v) - 3.0 * nv) <= 1e-9 * max(1.0, nv)


@given(v=_vectors)
@settings(max_examples=30, deadline=None)
def test_norm_monotone_in_q(v):
    v = np.array(v)
    norms = [ellq_space(4, q).norm(v) for q in (1.0, 2.0, 4.0)]
    assert norms[0] >= norms[1] - 1e-9 and norms[1] >= norms[2] - 1e-9


def test_complex_vectors_use_moduli():
    space = ellq_space(2, 2.0)
    assert abs(space.norm(np.array([3.0j, 4.0])) - 5.0) <= 1e-12


def test_hilbert_detection_and_labels():
    assert scalar_space().is_hilbert
    assert hilbert_space(5).is_hilbert
    assert ellq_space(3, 2.0).is_hilbert
    assert not ellq_space(3, 4.0).is_hilbert
    assert scalar_space().label() == "scalar"
    assert hilbert_space(5).label() == "ell2(5)"
    assert ellq_space(8, 4.0).label() == "ell4(8)"


def test_norm_broadcasts_over_leading_axes():
    space = hilbert_space(3)
    v = np.arange(24.0).reshape(2, 4, 3)
    out = space.norm(v)
    assert out.shape == (2, 4)
    assert abs(out[0, 0] - np.sqrt(5.0)) <= 1e-12


def test_space_validation():
    with pytest.raises(ValueError):
        FiniteBanachSpace(0, "ellq")
    with pytest.raises(ValueError):
        FiniteBanachSpace(3, "sobolev")
    with pytest.raises(ValueError):
        FiniteBanachSpace(3, "hilbert", q=4.0)
    with pytest.raises(ValueError):
        ellq_space(3, 0.5)
    with pytest.raises(ValueError):
        hilbert_space(4).norm(np.ones(3))
