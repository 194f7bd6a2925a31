import pytest

from cubecompress import (
    compute_hyperplanes,
    grid,
    path,
    product,
    random_tree,
    staircase,
    tree,
)


@pytest.fixture(scope="session")
def grid33():
    g = grid([3, 3])
    return g, compute_hyperplanes(g)


@pytest.fixture(scope="session")
def grid43():
    g = grid([4, 3])
    return g, compute_hyperplanes(g)


@pytest.fixture(scope="session")
def path5():
    g = path(5)
    return g, compute_hyperplanes(g)


@pytest.fixture(scope="session")
def stair2():
    g = staircase(2)
    return g, compute_hyperplanes(g)


@pytest.fixture(scope="session")
def small_median_instances():
    """A spread of median graphs small enough for brute-force oracles."""
    pairs = [
        ("path4", path(4)),
        ("grid33", grid([3, 3])),
        ("grid43", grid([4, 3])),
        ("stair2", staircase(2)),
        ("stair3", staircase(3)),
        ("tree23", tree(2, 3)),
        ("rtree17", random_tree(17, 3)),
        ("prod_t_p", product(tree(2, 2), path(3))),
        ("grid222", grid([2, 2, 2])),
    ]
    return [(name, g, compute_hyperplanes(g)) for name, g in pairs]
