import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

import rigidkit as rk


@pytest.fixture
def rng():
    return np.random.RandomState(1234)


@pytest.fixture
def right_triangle():
    return rk.build_framework(
        rk.graph(3, [(0, 1), (0, 2), (1, 2)]), rk.euclidean(2),
        [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)],
    )


@pytest.fixture
def prism_doc():
    return rk.gallery.fixture("prism3-concurrent")


def scaled_into_chart(fw, factor=0.2):
    """Affine shrink so every vertex fits the Beltrami-Cayley-Klein ball."""
    from rigidkit import transforms

    d = fw.dim
    return transforms.apply_map(transforms.affine_map(np.eye(d) * factor), fw)
