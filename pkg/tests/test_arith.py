"""Arithmetical structures: validation, enumeration, smoothing, orders."""

from fractions import Fraction
from math import comb

import pytest

from chipfire import (
    ArithmeticalStructure,
    GuardError,
    InvalidStructureError,
    IntegerMatrix,
    Multigraph,
    critical_group,
    critical_group_arith,
    enumerate_structures,
    family,
    g_r,
    is_smooth,
    kn_unit_fractions,
    laplacian,
    order_formula_spanning,
    order_formula_tree,
    parse_graph,
    smooth_at,
    smoothable_vertices,
    spanning_tree_count,
    validate,
)
from chipfire.arith import host_matrix, laplacian_structure, structure_to_text

from conftest import connected_multigraph_reps

DIAMOND = family("diamond")


def catalan(k):
    return comb(2 * k, k) // (k + 1)


def p_prime(n):
    """Path on n vertices with its first edge doubled."""
    mult = [[0] * n for _ in range(n)]
    for i in range(n - 1):
        mult[i][i + 1] = mult[i + 1][i] = 1
    mult[0][1] = mult[1][0] = 2
    return Multigraph([f"p{i+1}" for i in range(n)], mult)


class TestValidate:
    def test_paper_example(self):
        s = validate(DIAMOND, [3, 2, 4, 9])
        assert s.d == (5, 6, 3, 1)

    def test_all_ones_is_laplacian(self):
        s = laplacian_structure(family("house"))
        assert s.d == tuple(family("house").degree(v) for v in range(5))
        assert host_matrix(family("house"), s) == laplacian(family("house"))

    def test_triangle_1_1_2(self):
        s = validate(family("cycle", 3), [1, 1, 2])
        assert s.d == (3, 3, 1)

    def test_divisibility_failure_names_vertex(self):
        with pytest.raises(InvalidStructureError, match="v2"):
            validate(DIAMOND, [1, 3, 1, 1])

    def test_gcd_failure(self):
        with pytest.raises(InvalidStructureError, match="gcd"):
            validate(family("cycle", 2), [2, 2])

    def test_nonpositive_rejected(self):
        with pytest.raises(InvalidStructureError):
            validate(DIAMOND, [1, 0, 1, 1])

    def test_rendering(self):
        s = validate(DIAMOND, [3, 2, 4, 9])
        assert structure_to_text(s) == "r=(3,2,4,9) d=(5,6,3,1)"


class TestEnumerate:
    def test_diamond_63(self):
        found = enumerate_structures(DIAMOND, 20)
        assert len(found) == 63
        assert max(max(s.r) for s in found) == 18
        assert all(validate(DIAMOND, s.r) == s for s in found)
        assert any(s.r == (1, 1, 1, 1) for s in found)

    def test_sorted_and_unique(self):
        found = enumerate_structures(DIAMOND, 12)
        rs = [s.r for s in found]
        assert rs == sorted(rs)
        assert len(set(rs)) == len(rs)

    def test_path_catalan(self):
        for n in range(2, 7):
            found = enumerate_structures(family("path", n), 14)
            assert len(found) == catalan(n - 1)

    def test_cycle_binomial(self):
        for n in range(3, 6):
            found = enumerate_structures(family("cycle", n), 14)
            assert len(found) == comb(2 * n - 1, n - 1)

    def test_guard(self):
        with pytest.raises(GuardError):
            enumerate_structures(family("complete", 8), 100)


class TestSmoothing:
    def test_cycle_laplacian_smooth(self):
        for n in (3, 5):
            G = family("cycle", n)
            assert is_smooth(G, laplacian_structure(G))

    def test_path_laplacian_not_smooth(self):
        G = family("path", 3)
        s = laplacian_structure(G)
        assert not is_smooth(G, s)  # the ends match their neighbors

    def test_single_vertex_smooth(self):
        G = Multigraph(["a"], [[0]])
        assert is_smooth(G, validate(G, [1]))

    def test_interior_max_detected(self):
        G = family("path", 3)
        s = validate(G, [1, 2, 1])
        assert G.index("v2") in smoothable_vertices(G, s)

    def test_degree_two_smoothing(self):
        G = family("path", 3)
        newG, news = smooth_at(G, validate(G, [1, 2, 1]), "v2")
        assert newG.n == 2
        assert newG.mult[0][1] == 1
        assert news.r == (1, 1)

    def test_cycle_smoothing_shrinks_cycle(self):
        C3 = family("cycle", 3)
        s = validate(C3, [1, 2, 1])
        newG, news = smooth_at(C3, s, "v2")
        assert newG.n == 2 and newG.mult[0][1] == 2  # the doubled edge
        assert news.r == (1, 1)

    def test_degree_one_smoothing(self):
        G = family("path", 3)
        s = laplacian_structure(G)
        newG, news = smooth_at(G, s, "v1")
        assert newG.n == 2
        assert news.r == (1, 1)

    def test_not_smoothable_rejected(self):
        C3 = family("cycle", 3)
        with pytest.raises(InvalidStructureError):
            smooth_at(C3, laplacian_structure(C3), "v1")

    def test_smoothing_preserves_validity_and_order(self):
        # on cycles the critical group order survives smoothing
        C5 = family("cycle", 5)
        for s in enumerate_structures(C5, 8):
            spots = smoothable_vertices(C5, s)
            if not spots:
                continue
            newG, news = smooth_at(C5, s, spots[0])
            assert critical_group_arith(newG, news).order == (
                critical_group_arith(C5, s).order
            )

    def test_p_prime_smooth_counts(self):
        for n in (4, 5):
            G = p_prime(n)
            found = enumerate_structures(G, 16)
            expected_total = 4 * catalan(n - 1) - 2 * catalan(n - 2)
            assert len(found) == expected_total
            smooth = [s for s in found if is_smooth(G, s)]
            assert len(smooth) == 4


class TestGr:
    def test_all_ones_identity(self):
        s = laplacian_structure(DIAMOND)
        assert g_r(DIAMOND, s) == DIAMOND

    def test_diamond_multiplicities(self):
        s = validate(DIAMOND, [3, 2, 4, 9])
        H = g_r(DIAMOND, s)
        assert H.mult[0][1] == 6
        assert H.mult[0][2] == 12
        assert H.mult[0][3] == 27
        assert H.mult[1][3] == 18
        assert H.mult[2][3] == 36

    def test_scaling_lemma(self):
        for s in enumerate_structures(DIAMOND, 12):
            R = IntegerMatrix.diagonal(s.r)
            assert laplacian(g_r(DIAMOND, s)) == R * host_matrix(DIAMOND, s) * R

    def test_order_bridge(self):
        for s in enumerate_structures(DIAMOND, 12):
            lhs = critical_group(g_r(DIAMOND, s)).order
            r_prod = 1
            for x in s.r:
                r_prod *= x
            assert lhs == r_prod**2 * critical_group_arith(DIAMOND, s).order


class TestCriticalGroups:
    def test_paper_structure_trivial(self):
        s = validate(DIAMOND, [3, 2, 4, 9])
        assert critical_group_arith(DIAMOND, s).is_trivial()

    def test_laplacian_specializes(self):
        for G in (DIAMOND, family("house")):
            s = laplacian_structure(G)
            assert critical_group_arith(G, s) == critical_group(G)

    def test_path_structures_trivial(self):
        G = family("path", 4)
        for s in enumerate_structures(G, 8):
            assert critical_group_arith(G, s).is_trivial()


class TestOrderFormulas:
    def test_tree_formula_on_paths(self):
        G = family("path", 5)
        for s in enumerate_structures(G, 8):
            assert order_formula_tree(G, s) == 1

    def test_banana(self):
        B = family("cycle", 2)
        s = laplacian_structure(B)
        assert order_formula_tree(B, s) == 2
        assert critical_group_arith(B, s).order == 2

    def test_star_trivial(self):
        G = family("star", 2)
        assert order_formula_tree(G, laplacian_structure(G)) == 1

    def test_skeleton_must_be_tree(self):
        with pytest.raises(InvalidStructureError):
            order_formula_tree(DIAMOND, laplacian_structure(DIAMOND))

    def test_spanning_formula_on_cycles(self):
        for n in (3, 4, 5):
            G = family("cycle", n)
            assert order_formula_spanning(G, laplacian_structure(G)) == n

    def test_spanning_formula_diamond(self):
        assert order_formula_spanning(DIAMOND, laplacian_structure(DIAMOND)) == 8
        s = validate(DIAMOND, [3, 2, 4, 9])
        assert order_formula_spanning(DIAMOND, s) == 1

    def test_spanning_formula_matches_group_order(self):
        # every enumerated structure on every small multigraph host
        for n in range(2, 5):
            for G in connected_multigraph_reps(n, 6):
                for s in enumerate_structures(G, 6):
                    assert order_formula_spanning(G, s) == (
                        critical_group_arith(G, s).order
                    )


class TestUnitFractions:
    def test_k2(self):
        found = kn_unit_fractions(2)
        assert len(found) == 1
        assert found[0].r == (1, 1)

    def test_k3_ten(self):
        found = kn_unit_fractions(3)
        assert len(found) == 10
        direct = enumerate_structures(family("complete", 3), 8)
        assert {s.r for s in found} == {s.r for s in direct}

    def test_k4_matches_enumeration(self):
        found = kn_unit_fractions(4)
        assert len(found) == 215
        direct = enumerate_structures(family("complete", 4), 24)
        assert {(s.r, s.d) for s in found} == {(s.r, s.d) for s in direct}

    def test_guard(self):
        with pytest.raises(GuardError):
            kn_unit_fractions(9)
