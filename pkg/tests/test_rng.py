import numpy as np
import pytest

from genphase import RngStream


def test_same_seed_same_sequence():
    a = RngStream(42).standard_normal(100)
    b = RngStream(42).standard_normal(100)
    assert np.array_equal(a, b)


def test_different_seeds_differ():
    a = RngStream(1).standard_normal(50)
    b = RngStream(2).standard_normal(50)
    assert not np.array_equal(a, b)


def test_child_streams_independent_of_parent_draws():
    # deriving a child must not depend on how much the parent has drawn
    parent1 = RngStream(9)
    parent1.standard_normal(1000)
    parent2 = RngStream(9)
    assert np.array_equal(parent1.child(3).standard_normal(10),
                          parent2.child(3).standard_normal(10))


def test_children_with_distinct_indices_differ():
    root = RngStream(9)
    draws = [root.child(i).standard_normal(20) for i in range(5)]
    for i in range(5):
        for j in range(i + 1, 5):
            assert not np.array_equal(draws[i], draws[j])


def test_nested_children():
    a = RngStream(5).child(1).child(2).standard_normal(5)
    b = RngStream(5).child(1, 2).standard_normal(5)
    assert np.array_equal(a, b)


def test_unit_vector_has_unit_norm():
    v = RngStream(3).unit_vector(17)
    assert abs(np.linalg.norm(v) - 1.0) < 1e-12


def test_negative_seed_rejected():
    with pytest.raises(ValueError):
        RngStream(-1)


def test_child_requires_index():
    with pytest.raises(ValueError):
        RngStream(0).child()
