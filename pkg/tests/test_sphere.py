import numpy as np

from core.sphere import nearest_neighbour_distance, normalize, unique_directions
from core.strata import TETRAHEDRON_VERTICES


def test_unique_directions_merges_a_large_jittered_cloud():
    rng = np.random.default_rng(4)
    centers = normalize(np.vstack([TETRAHEDRON_VERTICES, -TETRAHEDRON_VERTICES, np.eye(3)[:2], -np.eye(3)[:2]]))
    cloud = np.repeat(centers, 20_000 // len(centers) + 1, axis=0)[:20_000]
    cloud = normalize(cloud + rng.uniform(-1e-8, 1e-8, cloud.shape))

    merged = unique_directions(cloud, 1e-6)

    assert merged.shape == (12, 3)
    assert nearest_neighbour_distance(merged).min() > 0.3


def test_unique_directions_keeps_the_first_point_in_lexicographic_order():
    points = np.array([[0.0, 0.0, 1.0], [0.0, 1e-9, 1.0], [1.0, 0.0, 0.0]])

    merged = unique_directions(points, 1e-6)

    assert merged.tolist() == [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0]]


def test_unique_directions_of_an_empty_set():
    assert unique_directions(np.empty((0, 3)), 1e-6).shape == (0, 3)


def test_nearest_neighbour_distance_of_a_single_point_is_infinite():
    assert np.isinf(nearest_neighbour_distance(np.array([[0.0, 0.0, 1.0]]))).all()
