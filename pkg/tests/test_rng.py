import numpy as np
import pytest

from jetcov import chunk_layout, chunk_stream, stream


def test_stream_deterministic():
    a = stream(42).standard_normal(8)
    b = stream(42).standard_normal(8)
    assert np.array_equal(a, b)


def test_streams_differ_across_seeds():
    assert not np.array_equal(stream(1).standard_normal(8),
                              stream(2).standard_normal(8))


def test_chunk_streams_deterministic_and_distinct():
    a0 = chunk_stream(7, 0).standard_normal(4)
    a0_again = chunk_stream(7, 0).standard_normal(4)
    a1 = chunk_stream(7, 1).standard_normal(4)
    assert np.array_equal(a0, a0_again)
    assert not np.array_equal(a0, a1)


def test_chunk_layout_covers_total():
    pairs = list(chunk_layout(100_001, 1 << 16))
    assert [c for _, c in pairs] == [65536, 34465]
    assert [i for i, _ in pairs] == [0, 1]
    assert list(chunk_layout(0)) == []


def test_chunk_layout_validation():
    with pytest.raises(ValueError):
        list(chunk_layout(-1))
    with pytest.raises(ValueError):
        list(chunk_layout(10, 0))
