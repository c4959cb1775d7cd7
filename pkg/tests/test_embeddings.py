"""Word-vector tables: file parsing, cosine queries, synthetic source."""

import numpy as np
import pytest

from conet_probe.embeddings import (
    EmbeddingFormatError,
    EmbeddingTable,
    cosine,
    load_vectors,
    synthetic_table,
    write_vectors,
)


def table_from(rows: dict[str, list[float]]) -> EmbeddingTable:
    words = tuple(rows)
    matrix = np.array([rows[w] for w in words], dtype=float)
    return EmbeddingTable(
        dim=matrix.shape[1], words=words, matrix=matrix, source_id="inline"
    )


# --- loading --------------------------------------------------------------

def test_load_with_count_header(tmp_path):
    path = tmp_path / "vec.txt"
    path.write_text("2 3\ncat 1 0 0\ndog 0 1 0\n")
    table = load_vectors(path)
    assert table.dim == 3
    assert table.words == ("cat", "dog")
    assert np.array_equal(table.vector("cat"), [1.0, 0.0, 0.0])


def test_load_without_header(tmp_path):
    path = tmp_path / "vec.txt"
    path.write_text("cat 1 0\ndog 0 1\n")
    table = load_vectors(path)
    assert table.dim == 2
    assert table.words == ("cat", "dog")


def test_load_dimension_mismatch_reports_line(tmp_path):
    path = tmp_path / "vec.txt"
    path.write_text("cat 1 0 0\ndog 0 1\n")
    with pytest.raises(EmbeddingFormatError, match=":2:"):
        load_vectors(path)


def test_load_malformed_float_reports_line(tmp_path):
    path = tmp_path / "vec.txt"
    path.write_text("2 2\ncat 1 0\ndog x 1\n")
    with pytest.raises(EmbeddingFormatError, match=":3:"):
        load_vectors(path)


def test_load_empty_file(tmp_path):
    path = tmp_path / "vec.txt"
    path.write_text("")
    with pytest.raises(EmbeddingFormatError, match="empty"):
        load_vectors(path)


def test_load_duplicate_word_keeps_first(tmp_path):
    path = tmp_path / "vec.txt"
    path.write_text("cat 1 0\ncat 0 1\n")
    table = load_vectors(path)
    assert table.words == ("cat",)
    assert np.array_equal(table.vector("cat"), [1.0, 0.0])


def test_load_restrict_to(tmp_path):
    path = tmp_path / "vec.txt"
    path.write_text("3 2\na 1 0\nb 0 1\nc 1 1\n")
    table = load_vectors(path, restrict_to={"a", "c"})
    assert table.words == ("a", "c")
    assert "b" not in table


def test_roundtrip_write_load(tmp_path):
    original = synthetic_table(["alpha", "beta", "gamma"], dim=7, seed=3)
    path = tmp_path / "out.vec"
    write_vectors(original, path)
    loaded = load_vectors(path)
    assert loaded.words == original.words
    assert np.array_equal(loaded.matrix, original.matrix)


# --- cosine ---------------------------------------------------------------

def test_cosine_known_value():
    table = table_from({"a": [1, 2, 2], "b": [2, 1, 2]})
    assert cosine(table, "a", "b") == pytest.approx(8.0 / 9.0, abs=1e-15)


def test_cosine_self_is_one():
    table = table_from({"a": [3, 4, 0]})
    assert cosine(table, "a", "a") == pytest.approx(1.0, abs=1e-15)


def test_cosine_missing_or_zero_norm_is_none():
    table = table_from({"a": [1, 0], "z": [0, 0]})
    assert cosine(table, "a", "missing") is None
    assert cosine(table, "a", "z") is None
    assert cosine(table, "z", "z") is None


def test_cosine_symmetry_and_bounds(rng):
    words = [f"w{i}" for i in range(30)]
    table = synthetic_table(words, dim=20, seed=8)
    for _ in range(200):
        a, b = rng.choice(words, size=2)
        sim = cosine(table, str(a), str(b))
        assert sim == cosine(table, str(b), str(a))
        assert -1.0 - 1e-12 <= sim <= 1.0 + 1e-12


def test_unit_rows_masks_absent_words():
    table = table_from({"a": [2, 0], "z": [0, 0]})
    unit, ok = table.unit_rows(["a", "missing", "z"])
    assert ok.tolist() == [True, False, False]
    assert np.array_equal(unit[0], [1.0, 0.0])
    assert np.array_equal(unit[1], [0.0, 0.0])
    assert np.array_equal(unit[2], [0.0, 0.0])


def test_subset_keeps_order_and_vectors():
    table = synthetic_table(["a", "b", "c", "d"], dim=5, seed=1)
    sub = table.subset(["d", "b", "d", "nope"])
    assert sub.words == ("d", "b")
    assert np.array_equal(sub.vector("d"), table.vector("d"))
    assert len(table.subset([])) == 0


def test_duplicate_words_rejected():
    with pytest.raises(ValueError, match="duplicate"):
        EmbeddingTable(
            dim=1, words=("a", "a"), matrix=np.ones((2, 1)), source_id="x"
        )


# --- synthetic source -----------------------------------------------------

def test_synthetic_is_pure_function_of_inputs():
    one = synthetic_table(["cat", "dog"], dim=16, seed=5)
    two = synthetic_table(["dog", "cat", "cat"], dim=16, seed=5)
    assert one.words == two.words == ("cat", "dog")
    assert np.array_equal(one.matrix, two.matrix)


def test_synthetic_word_vector_independent_of_vocabulary():
    small = synthetic_table(["cat"], dim=16, seed=5)
    large = synthetic_table(["ant", "bee", "cat", "dog"], dim=16, seed=5)
    assert np.array_equal(small.vector("cat"), large.vector("cat"))


def test_synthetic_vectors_are_unit_norm():
    table = synthetic_table([f"w{i}" for i in range(50)], dim=30, seed=0)
    norms = np.linalg.norm(table.matrix, axis=1)
    assert np.allclose(norms, 1.0, atol=1e-12)


def test_synthetic_varies_with_seed_and_dim():
    a = synthetic_table(["cat"], dim=16, seed=0).vector("cat")
    b = synthetic_table(["cat"], dim=16, seed=1).vector("cat")
    c = synthetic_table(["cat"], dim=17, seed=0).vector("cat")
    assert not np.array_equal(a, b)
    assert c.shape == (17,)


def test_synthetic_no_collisions_across_vocabulary():
    table = synthetic_table([f"w{i}" for i in range(1000)], dim=50, seed=2)
    sims = table.matrix @ table.matrix.T
    np.fill_diagonal(sims, 0.0)
    # distinct words should never be near-identical vectors
    assert sims.max() < 0.999


def test_synthetic_rejects_bad_dim():
    with pytest.raises(ValueError):
        synthetic_table(["a"], dim=0)
