import pytest

from latfm.discriminant import discriminant_module, orthogonal_group_of_module
from latfm.errors import RankUnsupportedError
from latfm.fmcount import (
    distinct_prime_count,
    fm_count_genus_sum,
    fm_count_rho1,
    fm_count_rho1_via_cosets,
    least_prime_above,
    pm_id_subgroup,
    prime_power_blocks,
)
from latfm.lattices import U, direct_sum, make_lattice
from latfm.oracle import SearchBudget, units_with_square_one


class TestPrimeHelpers:
    @pytest.mark.parametrize(
        "d,expected",
        [(1, 1), (2, 1), (6, 2), (8, 1), (15, 2), (30, 3), (210, 4), (210 * 11, 5)],
    )
    def test_distinct_prime_count(self, d, expected):
        assert distinct_prime_count(d) == expected

    @pytest.mark.parametrize(
        "d,blocks",
        [(1, ()), (8, (8,)), (12, (3, 4)), (15, (3, 5)), (360, (5, 8, 9))],
    )
    def test_blocks(self, d, blocks):
        assert prime_power_blocks(d) == blocks

    def test_least_prime_above(self):
        assert least_prime_above(1) == 2
        assert least_prime_above(16) == 17
        assert least_prime_above(81) == 83
        assert least_prime_above(83) == 89


class TestClosedForm:
    @pytest.mark.parametrize("d,count", [(1, 1), (2, 1), (15, 2), (30, 4), (210, 8)])
    def test_values(self, d, count):
        assert fm_count_rho1(d) == count

    def test_fresh_prime_doubles(self):
        for d, q in ((6, 5), (10, 7), (4, 3), (1, 2)):
            assert d % q != 0
            if d == 1:
                # p(1) = 1 = p(q): multiplying by one fresh prime keeps count 1
                assert fm_count_rho1(d * q) == fm_count_rho1(d)
            else:
                assert fm_count_rho1(d * q) == 2 * fm_count_rho1(d)

    def test_counts_at_least_one(self):
        assert all(fm_count_rho1(d) >= 1 for d in range(1, 100))


class TestCosetRoute:
    @pytest.mark.parametrize("d,count", [(1, 1), (6, 2), (30, 4)])
    def test_values(self, d, count):
        assert fm_count_rho1_via_cosets(d) == count

    def test_matches_closed_form(self):
        for d in range(1, 60):
            assert fm_count_rho1_via_cosets(d) == fm_count_rho1(d)

    def test_unit_route_matches_module_search(self):
        # the units realize exactly the orthogonal group found by search
        for d in (2, 6, 12, 30):
            module = discriminant_module(make_lattice([[2 * d]]))
            searched = {g.matrix[0][0] for g in orthogonal_group_of_module(module)}
            assert searched == set(units_with_square_one(2 * d))


class TestGenusSum:
    def test_rank_one_genus(self):
        for d in (1, 6, 15, 30):
            members = [make_lattice([[2 * d]])]
            assert fm_count_genus_sum(members) == fm_count_rho1(d)

    def test_unimodular_member(self):
        assert fm_count_genus_sum([U]) == 1

    def test_rank_two_member(self):
        # O(L_{1,3}) surjects onto O(A) = {+-id}, so one double coset remains
        member = make_lattice([[2, 3], [3, 0]])
        budget = SearchBudget(entry_bound=12, node_limit=1_000_000)
        assert fm_count_genus_sum([member], budget=budget) == 1

    def test_rank_three_unsupported(self):
        member = direct_sum(U, make_lattice([[2]]))
        with pytest.raises(RankUnsupportedError):
            fm_count_genus_sum([member])

    def test_multi_member_sum(self):
        members = [make_lattice([[12]]), make_lattice([[12]])]
        assert fm_count_genus_sum(members) == 2 * fm_count_rho1(6)


class TestPmIdSubgroup:
    def test_nontrivial_module(self):
        module = discriminant_module(make_lattice([[12]]))
        side = pm_id_subgroup(module)
        assert len(side) == 2

    def test_two_torsion_collapse(self):
        module = discriminant_module(make_lattice([[2]]))
        assert len(pm_id_subgroup(module)) == 1

    def test_trivial_module(self):
        module = discriminant_module(U)
        assert len(pm_id_subgroup(module)) == 1
