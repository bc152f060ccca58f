import numpy as np
import pytest
import scipy.sparse as sp

from scone.complexes import (
    ComplexError,
    OrientationFlip,
    PermutationSet,
    apply_orientation_flip,
    apply_permutation,
    build_cubical_from_grid,
    build_simplicial,
    induced_transform,
    neighborhood,
    parse_map,
    read_complex,
    read_map,
    relabel_nodes,
    render_map,
    skeleton,
    validate,
    write_complex,
)


def filled_triangle():
    return build_simplicial(3, [(0, 1, 2)])


def test_filled_triangle_matrices():
    c = filled_triangle()
    assert c.edges == ((0, 1), (0, 2), (1, 2))
    expected_b1 = np.array([[-1, -1, 0], [1, 0, -1], [0, 1, 1]])
    np.testing.assert_array_equal(c.b1.toarray(), expected_b1)
    np.testing.assert_array_equal(c.b2.toarray(), [[1], [-1], [1]])


def test_single_edge_complex():
    c = build_simplicial(2, extra_edges=[(0, 1)])
    assert c.n_edges == 1 and c.n_faces == 0
    np.testing.assert_array_equal(c.b1.toarray(), [[-1], [1]])
    assert c.b2.shape == (1, 0)


def test_two_triangles_boundary_squared_zero():
    c = build_simplicial(4, [(0, 1, 2), (0, 1, 3)])
    assert c.n_edges == 5 and c.n_faces == 2
    assert (c.b1 @ c.b2).nnz == 0
    validate(c)


def test_builder_rejects_bad_input():
    with pytest.raises(ComplexError):
        build_simplicial(3, [(0, 1, 3)])
    with pytest.raises(ComplexError):
        build_simplicial(3, [(0, 1, 1)])
    with pytest.raises(ComplexError):
        build_simplicial(2, extra_edges=[(0, 0)])


def test_edge_id_and_sign():
    c = filled_triangle()
    assert c.edge_id_and_sign(0, 1) == (0, 1)
    assert c.edge_id_and_sign(1, 0) == (0, -1)
    with pytest.raises(ComplexError):
        c.edge_id_and_sign(0, 3)


def test_neighborhood():
    c = filled_triangle()
    assert neighborhood(c, 0) == (1, 2)
    single = build_simplicial(2, extra_edges=[(0, 1)])
    assert neighborhood(single, 1) == (0,)
    isolated = build_simplicial(3, extra_edges=[(0, 1)])
    assert neighborhood(isolated, 2) == ()
    with pytest.raises(ComplexError):
        neighborhood(c, 3)


def test_neighborhood_equals_faces_of_cofaces():
    rng = np.random.default_rng(7)
    for _ in range(10):
        c = random_simplicial(rng, max_nodes=20)
        for i in range(c.node_count):
            brute = {v for e in c.edges for v in e if i in e} - {i}
            assert set(neighborhood(c, i)) == brute


def random_simplicial(rng, max_nodes=30):
    n = int(rng.integers(4, max_nodes + 1))
    n_tri = int(rng.integers(0, 2 * n))
    tris = set()
    for _ in range(n_tri):
        tri = tuple(sorted(rng.choice(n, size=3, replace=False).tolist()))
        tris.add(tri)
    n_extra = int(rng.integers(1, n))
    extra = set()
    for _ in range(n_extra):
        e = tuple(sorted(rng.choice(n, size=2, replace=False).tolist()))
        extra.add(e)
    return build_simplicial(n, sorted(tris), sorted(extra))


def random_grid(rng, max_side=12):
    h = int(rng.integers(2, max_side))
    w = int(rng.integers(2, max_side))
    return rng.random((h, w)) > 0.25


def test_random_complexes_structural_invariants():
    rng = np.random.default_rng(0)
    for _ in range(50):
        c = random_simplicial(rng)
        validate(c)
        assert (c.b1 @ c.b2).nnz == 0
        col_sums = np.asarray(c.b1.sum(axis=0)).ravel()
        np.testing.assert_array_equal(col_sums, 0)


# -- cubical -----------------------------------------------------------------


def test_cubical_2x2_grid():
    c = build_cubical_from_grid(np.ones((2, 2), dtype=bool))
    assert (c.node_count, c.n_edges, c.n_faces) == (4, 4, 1)
    assert c.edges == ((0, 1), (0, 2), (1, 3), (2, 3))
    col = c.b2.toarray().ravel()
    # counter-clockwise cycle [0, 1, 3, 2] from the lowest-id corner
    np.testing.assert_array_equal(col, [1, -1, 1, -1])
    assert sorted(col.tolist()) == [-1, -1, 1, 1]
    validate(c)


def test_cubical_corridor_and_missing_corner():
    c = build_cubical_from_grid(np.ones((1, 3), dtype=bool))
    assert (c.node_count, c.n_edges, c.n_faces) == (3, 2, 0)
    grid = np.ones((2, 2), dtype=bool)
    grid[0, 1] = False
    c = build_cubical_from_grid(grid)
    assert c.n_faces == 0 and c.n_edges == 2


def test_cubical_rejects_empty():
    with pytest.raises(ComplexError):
        build_cubical_from_grid(np.zeros((0, 3), dtype=bool))


def test_random_grids_structural_invariants():
    rng = np.random.default_rng(3)
    for _ in range(15):
        c = build_cubical_from_grid(random_grid(rng))
        validate(c)
        assert (c.b1 @ c.b2).nnz == 0


# -- transforms ---------------------------------------------------------------


def test_identity_transforms_are_noops():
    c = filled_triangle()
    cp = apply_permutation(c, PermutationSet.identity(c))
    np.testing.assert_array_equal(cp.b1.toarray(), c.b1.toarray())
    np.testing.assert_array_equal(cp.b2.toarray(), c.b2.toarray())
    assert cp.edges == c.edges and cp.faces2 == c.faces2
    cf = apply_orientation_flip(c, OrientationFlip.identity(c))
    np.testing.assert_array_equal(cf.b1.toarray(), c.b1.toarray())
    assert cf.edges == c.edges


def test_permutation_then_inverse_restores():
    rng = np.random.default_rng(11)
    c = random_simplicial(rng)
    perm = PermutationSet.random(c, rng)
    back = apply_permutation(apply_permutation(c, perm), perm.inverse())
    np.testing.assert_array_equal(back.b1.toarray(), c.b1.toarray())
    np.testing.assert_array_equal(back.b2.toarray(), c.b2.toarray())
    assert back.edges == c.edges and back.faces2 == c.faces2


def test_node_swap_permutes_rows():
    c = filled_triangle()
    # swap node ids 0 and 1, keeping edge/face order fixed
    perm = PermutationSet(np.array([1, 0, 2]), np.arange(3), np.arange(1))
    cp = apply_permutation(c, perm)
    np.testing.assert_array_equal(
        cp.b1.toarray(), c.b1.toarray()[[1, 0, 2], :]
    )


def test_single_edge_flip():
    c = build_simplicial(2, extra_edges=[(0, 1)])
    flipped = apply_orientation_flip(
        c, OrientationFlip(np.array([-1]), np.zeros(0, dtype=np.int64))
    )
    np.testing.assert_array_equal(flipped.b1.toarray(), [[1], [-1]])
    assert flipped.edges == ((1, 0),)


def test_flip_preserves_boundary_squared():
    c = filled_triangle()
    flip = OrientationFlip(np.array([-1, 1, 1]), np.array([-1]))
    cf = apply_orientation_flip(c, flip)
    assert (cf.b1 @ cf.b2).nnz == 0


def test_transform_size_mismatch():
    c = filled_triangle()
    with pytest.raises(ComplexError):
        apply_permutation(c, PermutationSet(np.arange(2), np.arange(3), np.arange(1)))
    with pytest.raises(ComplexError):
        apply_orientation_flip(
            c, OrientationFlip(np.array([1, -1]), np.array([1]))
        )
    with pytest.raises(ComplexError):
        PermutationSet(np.array([0, 0, 2]), np.arange(3), np.arange(1))
    with pytest.raises(ComplexError):
        OrientationFlip(np.array([2, 1, 1]), np.array([1]))


def test_transforms_commute_with_construction():
    rng = np.random.default_rng(21)
    for _ in range(10):
        c = random_simplicial(rng, max_nodes=15)
        sigma = rng.permutation(c.node_count)
        rebuilt = relabel_nodes(c, sigma)
        perm, flip = induced_transform(c, sigma)
        transformed = apply_orientation_flip(apply_permutation(c, perm), flip)
        assert transformed.edges == rebuilt.edges
        assert transformed.faces2 == rebuilt.faces2
        np.testing.assert_array_equal(
            transformed.b1.toarray(), rebuilt.b1.toarray()
        )
        np.testing.assert_array_equal(
            transformed.b2.toarray(), rebuilt.b2.toarray()
        )


def test_skeleton_drops_faces():
    c = filled_triangle()
    s = skeleton(c)
    assert s.n_faces == 0 and s.edges == c.edges
    assert s.b2.shape == (3, 0)


# -- file formats -------------------------------------------------------------


def test_complex_file_round_trip(tmp_path):
    c = build_simplicial(4, [(0, 1, 2), (0, 1, 3)])
    path = tmp_path / "c.txt"
    write_complex(c, path)
    back = read_complex(path)
    assert back.kind == c.kind and back.edges == c.edges
    assert back.faces2 == c.faces2
    np.testing.assert_array_equal(back.b1.toarray(), c.b1.toarray())


def test_read_complex_diagnostics(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("simplicial 3\nedges\n0 x\n")
    with pytest.raises(ComplexError, match=":3"):
        read_complex(path)
    path.write_text("wedge 3\nedges\n")
    with pytest.raises(ComplexError, match="header"):
        read_complex(path)


def test_map_round_trip(tmp_path):
    rng = np.random.default_rng(5)
    grid = rng.random((6, 9)) > 0.3
    text = render_map(grid)
    np.testing.assert_array_equal(parse_map(text), grid)
    path = tmp_path / "m.map"
    path.write_text(text)
    np.testing.assert_array_equal(read_map(path), grid)


def test_map_rejects_truncated():
    text = "type octile\nheight 4\nwidth 3\nmap\n...\n...\n"
    with pytest.raises(ComplexError, match="rows"):
        parse_map(text)
