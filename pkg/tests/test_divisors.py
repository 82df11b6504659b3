"""Chip-firing moves, q-reduction, rank, gonality, and the pairing."""

import random
from fractions import Fraction

import pytest

from chipfire import (
    Divisor,
    DisconnectedError,
    Multigraph,
    borrow,
    critical_group,
    degree,
    delta_divisor,
    div_of_function,
    divisor_from_text,
    divisor_to_text,
    effective_equivalent,
    equivalent,
    family,
    fire,
    fire_set,
    gonality,
    has_positive_rank,
    is_principal,
    is_q_reduced,
    list_q_reduced_degree0,
    monodromy_pairing,
    pairing_gram,
    parse_graph,
    q_reduce,
    spanning_tree_count,
    zero_divisor,
)

from conftest import small_connected_reps

# the running 4-vertex, 5-edge fixture
DIAMOND = family("diamond")

# the paper's list at q = v1, with its last tuple corrected to
# (-2,0,0,2): the printed (-2,0,2,0) puts deg(v3) = 2 chips on v3, and
# firing {v3} alone then leaves no vertex in debt
EIGHT_Q_REDUCED = {
    (0, 0, 0, 0),
    (-1, 1, 0, 0),
    (-1, 0, 1, 0),
    (-1, 0, 0, 1),
    (-2, 1, 1, 0),
    (-2, 1, 0, 1),
    (-2, 0, 1, 1),
    (-2, 0, 0, 2),
}


def doubled_triangle():
    return Multigraph(["u", "v", "w"], [[0, 2, 2], [2, 0, 2], [2, 2, 0]])


class TestMoves:
    def test_figure_one_sequence(self):
        C3 = family("cycle", 3)
        D = Divisor([-3, 2, 1])
        D = fire(C3, D, "v2")
        assert D.values == (-2, 0, 2)
        D = borrow(C3, D, "v1")
        assert D.values == (0, -1, 1)

    def test_fire_borrow_inverse(self):
        rng = random.Random(1)
        for G in small_connected_reps(5):
            D = Divisor([rng.randint(-5, 5) for _ in range(G.n)])
            v = rng.randrange(G.n)
            assert borrow(G, fire(G, D, v), v) == D
            assert degree(fire(G, D, v)) == degree(D)

    def test_fire_on_edge(self):
        K2 = family("path", 2)
        assert fire(K2, Divisor([4, 0]), 0).values == (3, 1)

    def test_fire_set_matches_composition(self):
        rng = random.Random(2)
        for G in small_connected_reps(4):
            D = Divisor([rng.randint(-4, 4) for _ in range(G.n)])
            subset = [v for v in range(G.n) if rng.random() < 0.5]
            stepwise = D
            for v in subset:
                stepwise = fire(G, stepwise, v)
            assert fire_set(G, D, subset) == stepwise

    def test_multigraph_weights(self):
        B = family("cycle", 2)  # doubled edge
        assert fire(B, Divisor([0, 0]), 0).values == (-2, 2)


class TestDivOfFunction:
    def test_constant_is_zero(self):
        G = family("house")
        assert div_of_function(G, [7] * 5) == zero_divisor(G)

    def test_triangle_indicator(self):
        C3 = family("cycle", 3)
        assert div_of_function(C3, [1, 0, 0]).values == (2, -1, -1)

    def test_indicator_is_negated_set_firing(self):
        rng = random.Random(3)
        for G in small_connected_reps(4):
            subset = [v for v in range(G.n) if rng.random() < 0.5]
            f = [1 if v in subset else 0 for v in range(G.n)]
            D = Divisor([rng.randint(-3, 3) for _ in range(G.n)])
            fired = fire_set(G, D, subset)
            assert (D - fired) == div_of_function(G, f)

    def test_degree_zero(self):
        rng = random.Random(4)
        for G in small_connected_reps(4):
            f = [rng.randint(-5, 5) for _ in range(G.n)]
            assert degree(div_of_function(G, f)) == 0


class TestPrincipality:
    def test_triangle_unit_not_principal(self):
        C3 = family("cycle", 3)
        assert is_principal(C3, Divisor([0, 1, -1])) is None

    def test_triple_delta_principal(self):
        C3 = family("cycle", 3)
        D = 3 * delta_divisor(C3, "v1", "v2")
        f = is_principal(C3, D)
        assert f is not None
        assert div_of_function(C3, f) == D

    def test_zero_divisor(self):
        G = family("diamond")
        f = is_principal(G, zero_divisor(G))
        assert f is not None
        assert div_of_function(G, f) == zero_divisor(G)

    def test_principal_iff_reduces_to_zero(self):
        rng = random.Random(5)
        for G in small_connected_reps(4):
            for _ in range(5):
                values = [rng.randint(-3, 3) for _ in range(G.n - 1)]
                values.append(-sum(values))
                D = Divisor(values)
                witness = is_principal(G, D)
                reduced_zero = q_reduce(G, D).values == (0,) * G.n
                assert (witness is not None) == reduced_zero
                assert (witness is not None) == equivalent(G, D, zero_divisor(G))


class TestQReduce:
    def test_diamond_eight_classes(self):
        reps = list_q_reduced_degree0(DIAMOND, "v1")
        assert {r.values for r in reps} == EIGHT_Q_REDUCED

    def test_other_base_vertex_also_eight(self):
        reps = list_q_reduced_degree0(DIAMOND, "v2")
        assert len(reps) == 8
        assert {r.values for r in reps} != EIGHT_Q_REDUCED

    def test_idempotent(self):
        rng = random.Random(6)
        for G in small_connected_reps(5):
            D = Divisor([rng.randint(-6, 6) for _ in range(G.n)])
            R = q_reduce(G, D)
            assert q_reduce(G, R) == R
            assert is_q_reduced(G, R)
            assert equivalent(G, D, R)

    def test_paper_figure_divisors(self):
        assert is_q_reduced(DIAMOND, [-2, 1, 1, 0], "v1")
        assert not is_q_reduced(DIAMOND, [-3, 1, 1, 1], "v1")
        assert q_reduce(DIAMOND, [-3, 1, 1, 1], "v1").values != (-3, 1, 1, 1)

    def test_overloaded_vertex_not_reduced(self):
        for G in small_connected_reps(4):
            if G.n < 2:
                continue
            q = G.n - 1
            values = [0] * G.n
            values[0] = G.degree(0)
            if 0 != q:
                assert not is_q_reduced(G, values, q)

    def test_uniqueness_on_random_classes(self):
        rng = random.Random(7)
        reps = [G for G in small_connected_reps(5) if G.n >= 2]
        for _ in range(300):
            G = rng.choice(reps)
            values = [rng.randint(-4, 4) for _ in range(G.n)]
            D = Divisor(values)
            script = D
            for _ in range(rng.randint(1, 8)):
                v = rng.randrange(G.n)
                script = (
                    fire(G, script, v) if rng.random() < 0.5 else borrow(G, script, v)
                )
            assert q_reduce(G, D) == q_reduce(G, script)

    def test_tree_has_single_class(self):
        T = family("path", 4)
        assert [r.values for r in list_q_reduced_degree0(T)] == [(0, 0, 0, 0)]

    def test_count_matches_group_order(self):
        for G in small_connected_reps(5):
            assert len(list_q_reduced_degree0(G)) == spanning_tree_count(G)


class TestDharAgainstDefinition:
    def test_exhaustive_small(self):
        # every divisor with entries in [-2, 2] on graphs up to 4 vertices
        from itertools import product

        for G in small_connected_reps(4):
            q = G.n - 1
            for values in product(range(-2, 3), repeat=G.n):
                fast = is_q_reduced(G, values, q)
                slow = is_q_reduced(G, values, q, oracle=True)
                assert fast == slow


class TestEquivalence:
    def test_effective_figure_pair(self):
        assert equivalent(DIAMOND, Divisor([-1, 2, 2, -2]), Divisor([1, 0, 0, 0]))

    def test_different_degrees(self):
        assert not equivalent(DIAMOND, Divisor([1, 0, 0, 0]), Divisor([0, 0, 0, 0]))

    def test_reflexive(self):
        D = Divisor([3, -1, 0, 5])
        assert equivalent(DIAMOND, D, D)


class TestEffective:
    def test_figure_divisor(self):
        assert effective_equivalent(DIAMOND, Divisor([-1, 2, 2, -2]))

    def test_effective_already(self):
        assert effective_equivalent(DIAMOND, Divisor([0, 1, 0, 3]))

    def test_negative_degree(self):
        assert not effective_equivalent(DIAMOND, Divisor([-1, 0, 0, 0]))


class TestPositiveRankAndGonality:
    def test_doubled_triangle_examples(self):
        G = doubled_triangle()
        assert has_positive_rank(G, Divisor([1, 1, 1]))
        assert not has_positive_rank(G, Divisor([1, 0, 0]))

    def test_doubled_triangle_gonality(self):
        gon, witness = gonality(doubled_triangle())
        assert gon == 3
        assert witness.values == (1, 1, 1)

    def test_paths_have_gonality_one(self):
        for n in range(2, 6):
            assert gonality(family("path", n))[0] == 1

    def test_trees_have_gonality_one(self):
        for G in small_connected_reps(5):
            if G.edge_count() == G.n - 1:
                assert gonality(G)[0] == 1

    def test_cycles_have_gonality_two(self):
        for n in range(3, 7):
            assert gonality(family("cycle", n))[0] == 2

    def test_negative_degree_has_no_rank(self):
        assert not has_positive_rank(DIAMOND, Divisor([-2, 1, 0, 0]))


class TestPairing:
    def test_triangle_self_pairing(self):
        C3 = family("cycle", 3)
        d = delta_divisor(C3, "v1", "v2")
        assert monodromy_pairing(C3, d, d) == Fraction(2, 3)

    def test_zero_pairs_to_zero(self):
        d = delta_divisor(DIAMOND, "v1", "v4")
        assert monodromy_pairing(DIAMOND, zero_divisor(DIAMOND), d) == 0

    def test_symmetric(self):
        rng = random.Random(8)
        for G in small_connected_reps(4):
            if G.n < 2:
                continue
            a = [rng.randint(-3, 3) for _ in range(G.n - 1)]
            b = [rng.randint(-3, 3) for _ in range(G.n - 1)]
            D1 = Divisor(a + [-sum(a)])
            D2 = Divisor(b + [-sum(b)])
            assert monodromy_pairing(G, D1, D2) == monodromy_pairing(G, D2, D1)

    def test_representative_invariance(self):
        rng = random.Random(9)
        for G in small_connected_reps(4):
            if G.n < 2:
                continue
            a = [rng.randint(-3, 3) for _ in range(G.n - 1)]
            D1 = Divisor(a + [-sum(a)])
            D2 = delta_divisor(G, 0, G.n - 1)
            f = [rng.randint(-2, 2) for _ in range(G.n)]
            shifted = D1 + div_of_function(G, f)
            assert monodromy_pairing(G, D1, D2) == monodromy_pairing(G, shifted, D2)

    def test_bilinear(self):
        G = family("diamond")
        rng = random.Random(10)
        for _ in range(20):
            vecs = []
            for _ in range(3):
                a = [rng.randint(-3, 3) for _ in range(G.n - 1)]
                vecs.append(Divisor(a + [-sum(a)]))
            D1, D2, D3 = vecs
            lhs = monodromy_pairing(G, D1 + D2, D3)
            rhs = (monodromy_pairing(G, D1, D3) + monodromy_pairing(G, D2, D3)) % 1
            assert lhs == rhs

    def test_matches_definitional_form(self):
        # <D1, D2> = (1/m) sum D1(v) f(v) where m*D2 = div(f)
        from chipfire import element_order

        rng = random.Random(11)
        for G in small_connected_reps(4):
            if G.n < 2:
                continue
            for _ in range(5):
                a = [rng.randint(-2, 2) for _ in range(G.n - 1)]
                b = [rng.randint(-2, 2) for _ in range(G.n - 1)]
                D1 = Divisor(a + [-sum(a)])
                D2 = Divisor(b + [-sum(b)])
                m = element_order(G, D2, G.n - 1)
                f = is_principal(G, m * D2)
                assert f is not None
                value = Fraction(
                    sum(x * y for x, y in zip(D1.values, f.values)), m
                ) % 1
                assert value == monodromy_pairing(G, D1, D2)

    def test_gram_triangle(self):
        C3 = family("cycle", 3)
        reps, table = pairing_gram(C3)
        diag = sorted(table[i][i] for i in range(3))
        assert diag == [Fraction(0), Fraction(2, 3), Fraction(2, 3)]

    def test_gram_perfect_diamond(self):
        reps, table = pairing_gram(DIAMOND, "v1")
        assert len(reps) == 8
        rows = [tuple(row) for row in table]
        assert len(set(rows)) == 8
        for row in table:
            for value in row:
                assert 0 <= value < 1
                assert 8 % value.denominator == 0

    def test_degree_must_vanish(self):
        with pytest.raises(ValueError):
            monodromy_pairing(DIAMOND, Divisor([1, 0, 0, 0]), zero_divisor(DIAMOND))


class TestTextFormat:
    def test_round_trip(self):
        D = Divisor([-2, 0, 1, 1])
        text = divisor_to_text(DIAMOND, D)
        assert text == "v1:-2 v2:0 v3:1 v4:1"
        assert divisor_from_text(DIAMOND, text) == D

    def test_omitted_labels_are_zero(self):
        assert divisor_from_text(DIAMOND, "v3:5") == Divisor([0, 0, 5, 0])

    def test_unknown_label(self):
        from chipfire import GraphParseError

        with pytest.raises(GraphParseError):
            divisor_from_text(DIAMOND, "zz:1")


class TestDisconnectedInputs:
    def test_q_reduce_rejects(self):
        with pytest.raises(DisconnectedError):
            q_reduce(parse_graph("a b\nvertex c"), [0, 0, 0])

    def test_gonality_rejects(self):
        with pytest.raises(DisconnectedError):
            gonality(parse_graph("a b\nvertex c"))
