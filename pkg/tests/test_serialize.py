import json

import numpy as np
import pytest

from genmeas.decomposition import random_kraus_set
from genmeas.serialize import (
    FORMAT_VERSION,
    check_version,
    kraus_set_from_json,
    kraus_set_to_json,
    matrix_from_json,
    matrix_to_json,
)


def test_matrix_round_trip():
    rng = np.random.default_rng(91)
    for _ in range(1000):
        m = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        back = matrix_from_json(matrix_to_json(m))
        assert np.array_equal(back, m)


def test_matrix_json_shape():
    rows = matrix_to_json(np.array([[1 + 2j, 0], [0, 3 - 4j]]))
    assert rows[0][0] == [1.0, 2.0]
    assert rows[1][1] == [3.0, -4.0]


def test_check_version_accepts_minor():
    check_version({"format_version": "1.7"}, "test")
    check_version({}, "test")  # absent defaults to current


def test_check_version_rejects_major():
    with pytest.raises(ValueError):
        check_version({"format_version": "2.0"}, "test")


def test_kraus_set_round_trip():
    rng = np.random.default_rng(92)
    s = random_kraus_set(3, rng, labels=("x", "y", "z"))
    back = kraus_set_from_json(kraus_set_to_json(s))
    assert back.labels == s.labels
    for a, b in zip(back.ops, s.ops):
        assert np.array_equal(a, b)


def test_kraus_set_json_carries_version():
    rng = np.random.default_rng(93)
    s = random_kraus_set(2, rng)
    data = json.loads(kraus_set_to_json(s))
    assert data["format_version"] == FORMAT_VERSION
