from math import comb

import pytest

from artifact.treebound import (
    RootedTree,
    TreeTable,
    brute_force_counts,
    catalan,
    catalan_bound,
    cohomology_bound,
    compositions,
    enumerate_trees,
    fox_neuwirth_cells,
    kappa,
    multinomial,
    planar_total,
)


def _star(degrees):
    table = TreeTable(len(degrees))
    leaves = []
    for colour, d in enumerate(degrees):
        unit = tuple(1 if i == colour else 0 for i in range(len(degrees)))
        leaves += [table.subtrees(unit)[0]] * d
    return RootedTree(table, tuple(sorted(leaves)))


def test_small_numbers():
    assert fox_neuwirth_cells(2, (1, 1)) == 8
    assert catalan(3) == 5
    assert [catalan(k) for k in range(6)] == [1, 1, 2, 5, 14, 42]
    assert multinomial([2, 1]) == 3
    with pytest.raises(ValueError):
        fox_neuwirth_cells(3, (1, 1))


def test_single_leaf():
    trees = enumerate_trees((1,))
    assert len(trees) == 1
    assert trees[0].stats()["non_leaf"] == 1
    assert trees[0].planar_count() == 1


@pytest.mark.parametrize("degrees", [(3,), (2, 1), (1, 1, 2)])
def test_star_tree(degrees):
    r = sum(degrees)
    star = _star(degrees)
    st = star.stats()
    assert (st["non_leaf"], st["valence_sum"], st["valence_minus_inner"]) == (1, r, r)
    assert star.planar_count() == multinomial(degrees)
    stars = [t for t in enumerate_trees(degrees) if t.stats()["non_leaf"] == 1]
    assert len(stars) == 1 and stars[0].planar_count() == star.planar_count()


def test_caterpillar():
    table = TreeTable(1)
    leaf = table.subtrees((1,))[0]
    inner = next(i for i in table.subtrees((2,)) if table.nodes[i] == ("node", (leaf, leaf)))
    tree = RootedTree(table, (inner,))
    st = tree.stats()
    assert (st["non_leaf"], st["valence_sum"], st["valence_minus_inner"]) == (2, 4, 3)
    assert st["max_valence"] == 3


def test_path_to_single_leaf_has_one_embedding():
    table = TreeTable(2)
    leaf = table.subtrees((1, 0))[0]
    assert RootedTree(table, (leaf,)).planar_count() == 1


def test_r2_single_colour():
    # root with two leaves, or root with one child carrying two leaves
    assert len(enumerate_trees((2,))) == 2


@pytest.mark.parametrize("m", [1, 2, 3])
def test_orbits_and_planar_counts_match_brute_force(m):
    for r in range(1, 6 if m < 3 else 5):
        for degs in compositions(r, m):
            trees = enumerate_trees(degs)
            brute = brute_force_counts(degs)
            assert len(trees) == brute["orbits"]
            assert sum(t.planar_count() for t in trees) == brute["planar"] == planar_total(degs)


def test_planar_shapes_are_schroeder_numbers():
    assert [planar_total((r,)) for r in range(1, 6)] == [1, 2, 6, 22, 90]


@pytest.mark.parametrize("m", [1, 2])
def test_tree_statistics_bounds(m):
    for r in range(1, 8 if m == 1 else 7):
        for degs in compositions(r, m):
            for t in enumerate_trees(degs):
                st = t.stats()
                assert st["non_leaf"] <= r
                assert st["valence_sum"] <= 3 * r - 2
                assert st["valence_minus_inner"] <= 2 * r - 1
                assert st["max_valence"] <= r + 1


def test_catalan_bounds_hold():
    for m in (1, 2):
        for r in range(1, 8):
            for degs in compositions(r, m):
                total = planar_total(degs)
                assert total <= catalan_bound(degs)
                assert catalan_bound(degs) <= catalan_bound(degs, 0)
                assert catalan_bound(degs) <= comb(r, degs[0]) * 4 ** (2 * r - 1)


def test_cohomology_bound_table():
    assert [cohomology_bound(r, 1) for r in range(5)] == [1, 2, 16, 192, 2816]
    assert cohomology_bound(6, 2) == 16138240
    for m in (1, 2, 3):
        kap = kappa(m)
        previous = 0
        for r in range(9):
            B = cohomology_bound(r, m)
            assert B <= kap * (64 * m) ** r
            assert B >= previous
            previous = B


def test_cell_sum_against_planar_counts():
    # each planar tree contributes at most 2^(2r - 1) cells
    for degs in [(2,), (2, 1), (3, 1), (2, 2)]:
        r = sum(degs)
        trees = enumerate_trees(degs)
        cells = sum(t.cell_sum() for t in trees)
        assert 0 < cells <= 2 ** (2 * r - 1) * sum(t.planar_count() for t in trees)
