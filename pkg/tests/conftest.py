import pathlib

import numpy as np
import pytest

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> pathlib.Path:
    return FIXTURES


@pytest.fixture
def formaldehyde_xml() -> bytes:
    return (FIXTURES / "formaldehyde.xml").read_bytes()


def random_rotation_matrices(n: int, seed: int = 0) -> np.ndarray:
    """Uniform random rotation matrices via QR of Gaussian matrices."""
    rng = np.random.default_rng(seed)
    out = np.empty((n, 3, 3))
    for i in range(n):
        q, r = np.linalg.qr(rng.normal(size=(3, 3)))
        q = q * np.sign(np.diagonal(r))
        if np.linalg.det(q) < 0:
            q[:, 2] = -q[:, 2]
        out[i] = q
    return out
