import random
from pathlib import Path

import numpy as np
import pytest

from chaoslab.dynamics import screen_parameter
from chaoslab.keying import extract_params, generate_key
from chaoslab.pgm import read_pgm

DATA = Path(__file__).parent / "data"


def radial_gradient(n):
    y, x = np.mgrid[0:n, 0:n]
    r = np.hypot(x - 0.3 * n, y - 0.62 * n)
    return (255 * r / r.max()).astype(np.uint8)


def blobs(n):
    y, x = np.mgrid[0:n, 0:n] / n
    v = (
        np.exp(-((x - 0.3) ** 2 + (y - 0.4) ** 2) / 0.02)
        + 0.7 * np.exp(-((x - 0.7) ** 2 + (y - 0.65) ** 2) / 0.05)
        + 0.2 * x
    )
    return (255 * v / v.max()).astype(np.uint8)


def photo(n):
    return read_pgm(DATA / f"camera_{n}.pgm")


NATURAL = {"gradient": radial_gradient, "blob": blobs, "photo": photo}


def seeded_key(rng):
    return generate_key(rng.randbytes)


def screened_params(rng):
    while True:
        p = extract_params(seeded_key(rng))
        if screen_parameter(p.r, p.x0):
            return p


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def nprng():
    return np.random.default_rng(20240611)


@pytest.fixture
def params(rng):
    return screened_params(rng)
