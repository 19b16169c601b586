import numpy as np

from smallball.rngstreams import standard_normals, stream_key, uniform_block, uniforms


def test_deterministic():
    assert np.array_equal(uniforms(7, 2, 0, 50), uniforms(7, 2, 0, 50))
    assert stream_key(7, 2) == stream_key(7, 2)


def test_offset_slices_the_same_stream():
    whole = uniforms(11, 0, 0, 100)
    assert np.array_equal(uniforms(11, 0, 40, 30), whole[40:70])


def test_block_matches_per_stream():
    block = uniform_block(3, np.arange(8), 16)
    for s in range(8):
        assert np.array_equal(block[s], uniforms(3, s, 0, 16))


def test_streams_and_seeds_decorrelate():
    a = uniforms(1, 0, 0, 4000)
    b = uniforms(1, 1, 0, 4000)
    c = uniforms(2, 0, 0, 4000)
    assert abs(np.corrcoef(a, b)[0, 1]) < 0.05
    assert abs(np.corrcoef(a, c)[0, 1]) < 0.05


def test_range_and_moments():
    u = uniform_block(13, np.arange(500), 100).ravel()
    assert u.min() >= 0.0 and u.max() < 1.0
    assert abs(u.mean() - 0.5) < 0.005
    assert abs(u.var() - 1 / 12) < 0.005


def test_box_muller_moments():
    u = uniform_block(29, np.arange(1000), 64)
    z = standard_normals(u[:, :32], u[:, 32:]).ravel()
    assert abs(z.mean()) < 0.02
    assert abs(z.std() - 1.0) < 0.02
