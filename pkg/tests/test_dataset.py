import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shachom import (
    DatasetError,
    drop_last_attributes,
    drop_last_instances,
    from_array,
    load_csv,
    split,
    write_csv,
)

from conftest import WINE_CSV


def test_load_three_points(three_points_csv):
    ds = load_csv(three_points_csv)
    assert ds.features.tolist() == [[2, 3], [3, 2], [1, 2]]
    assert ds.labels is None
    assert ds.attribute_names == ("a1", "a2")


def test_load_single_cell(tmp_path):
    p = tmp_path / "one.csv"
    p.write_text("5\n")
    ds = load_csv(p)
    assert ds.features.shape == (1, 1)
    assert ds.features[0, 0] == 5.0


def test_non_numeric_cell_names_row_and_column(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("1,2\n2,x\n")
    with pytest.raises(DatasetError, match=r"row 2, column 2"):
        load_csv(p)
    p.write_text("2,x\n")
    with pytest.raises(DatasetError, match=r"row 1, column 2"):
        load_csv(p)


def test_ragged_rows_rejected(tmp_path):
    p = tmp_path / "ragged.csv"
    p.write_text("1,2\n3\n")
    with pytest.raises(DatasetError, match="row 2"):
        load_csv(p)


def test_missing_value_rejected(tmp_path):
    p = tmp_path / "nan.csv"
    p.write_text("1,nan\n")
    with pytest.raises(DatasetError, match="non-finite"):
        load_csv(p)


def test_unreadable_file():
    with pytest.raises(OSError):
        load_csv("/nonexistent/file.csv")


def test_label_and_id_columns(tmp_path):
    p = tmp_path / "l.csv"
    p.write_text("id,x,y,cls\n7,1.5,2,a\n8,3,4,b\n")
    ds = load_csv(p, has_header=True, label_column=3, drop_columns=[0])
    assert ds.attribute_names == ("x", "y")
    assert ds.labels == ("a", "b")
    assert ds.features.tolist() == [[1.5, 2.0], [3.0, 4.0]]


def test_wine_shape(wine):
    assert wine.features.shape == (178, 13)
    assert sorted(set(wine.labels)) == ["1", "2", "3"]


def test_drop_last_attributes(three_points, wine):
    assert drop_last_attributes(wine, 4).n_attributes == 9
    assert drop_last_attributes(wine, 8).n_attributes == 5
    assert drop_last_attributes(three_points, 0) == three_points
    assert drop_last_attributes(three_points, 1).features.tolist() == [[2], [3], [1]]
    with pytest.raises(DatasetError):
        drop_last_attributes(three_points, 2)


def test_drop_last_instances(three_points, wine):
    assert drop_last_instances(wine, 20).n_instances == 158
    assert drop_last_instances(wine, 40).n_instances == 138
    assert drop_last_instances(three_points, 0) == three_points
    assert drop_last_instances(three_points, 1).features.tolist() == [[2, 3], [3, 2]]
    with pytest.raises(DatasetError):
        drop_last_instances(three_points, 3)


@given(st.integers(0, 6), st.integers(0, 6))
def test_drop_attributes_composes(a, b):
    ds = from_array(np.arange(26.0).reshape(2, 13))
    assert drop_last_attributes(drop_last_attributes(ds, a), b) == drop_last_attributes(ds, a + b)


def _labelled(n, classes):
    return from_array(np.arange(float(n)).reshape(-1, 1), labels=[classes[i % len(classes)] for i in range(n)])


def test_split_sizes_and_determinism():
    ds = _labelled(100, ["p", "q"])
    s1 = split(ds, 0.66, 7)
    s2 = split(ds, 0.66, 7)
    assert (len(s1.train), len(s1.test)) == (66, 34)
    assert s1.train_index == s2.train_index and s1.test_index == s2.test_index
    assert split(ds, 0.66, 8).train_index != s1.train_index


def test_stratified_split_five_five():
    ds = from_array(np.arange(10.0).reshape(-1, 1), labels=["x"] * 5 + ["y"] * 5)
    sp = split(ds, 0.6, 3, stratify=True)
    assert sorted(sp.train.labels) == ["x"] * 3 + ["y"] * 3


def test_split_errors():
    ds = _labelled(10, ["p", "q"])
    with pytest.raises(DatasetError):
        split(from_array(np.zeros((4, 1))), 0.5, 1)
    with pytest.raises(DatasetError):
        split(ds, 1.0, 1)
    with pytest.raises(DatasetError):
        split(ds.with_labels(["p"] * 9 + ["q"]), 0.5, 1, stratify=True)


@settings(max_examples=60)
@given(st.integers(4, 60), st.floats(0.1, 0.9), st.integers(0, 2**32 - 1), st.booleans())
def test_split_is_partition(n, ratio, seed, stratify):
    ds = _labelled(n, ["a", "b", "c"] if n >= 6 else ["a", "b"])
    try:
        sp = split(ds, ratio, seed, stratify=stratify)
    except DatasetError:
        return  # ratio leaves an empty side for tiny n
    assert sorted(sp.train_index + sp.test_index) == list(range(n))
    assert not set(sp.train_index) & set(sp.test_index)
    assert len(sp.train) == int(np.floor(ratio * n + 0.5))
    if stratify:
        for c in set(ds.labels):
            n_c = ds.labels.count(c)
            assert abs(sp.train.labels.count(c) - n_c * len(sp.train) / n) <= 1


def test_csv_round_trip(tmp_path, rng):
    x = rng.normal(size=(20, 4)) * 10.0 ** rng.integers(-5, 6, size=(20, 4))
    ds = from_array(x, ["w", "x", "y", "z"], labels=[str(i % 3) for i in range(20)])
    path = tmp_path / "rt.csv"
    write_csv(ds, path)
    back = load_csv(path, has_header=True, label_column=-1)
    assert back == ds
    assert np.array_equal(back.features.view(np.int64), ds.features.view(np.int64))


def test_wine_file_is_writer_output(tmp_path, wine):
    path = tmp_path / "w.csv"
    write_csv(wine, path)
    assert path.read_text() == WINE_CSV.read_text()
