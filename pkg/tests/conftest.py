from pathlib import Path

import numpy as np
import pytest

from shachom import from_array, load_csv

ROOT = Path(__file__).resolve().parents[1]
WINE_CSV = ROOT / "data" / "wine.csv"

# three points A, B, C used throughout as the canonical small case
THREE_POINTS = [[2.0, 3.0], [3.0, 2.0], [1.0, 2.0]]
A, B, C = 0, 1, 2


@pytest.fixture
def three_points():
    return from_array(THREE_POINTS, ["attribute_1", "attribute_2"])


@pytest.fixture
def three_points_csv(tmp_path):
    path = tmp_path / "three_points.csv"
    path.write_text("2,3\n3,2\n1,2\n")
    return path


@pytest.fixture(scope="session")
def wine():
    return load_csv(WINE_CSV, has_header=True, label_column=-1)


def random_data(rng, n, d, scale=10.0):
    return from_array(rng.uniform(-scale, scale, size=(n, d)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
