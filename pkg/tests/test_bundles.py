import pytest
from hypothesis import given, strategies as st

from sheafmod.bundles import (
    BundleSum,
    MorphismType,
    StabilizerRule,
    aut_group_dim,
    format_resolution_spec,
    hom_dim,
    hom_space_dim,
    parse_resolution_spec,
    quotient_dim_crosscheck,
    stabilizer_dim,
)
from sheafmod.registry import case_by_id, load_registry, stratum_codim


def test_hom_dim():
    assert hom_dim(-2, 0) == 6
    assert hom_dim(-1, -1) == 1
    assert hom_dim(0, -1) == 0


@given(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5))
def test_hom_dim_twist_invariance(a, b, k):
    assert hom_dim(a, b) == hom_dim(a + k, b + k)


def test_hom_space_dim():
    t = MorphismType.make([(-2, 1), (-1, 2)], [(0, 3)])
    assert hom_space_dim(t) == 36
    t = MorphismType.make([(-2, 2), (-1, 2)], [(-1, 1), (0, 3)], zeroed=[(1, 0)])
    assert hom_space_dim(t) == 60
    t = MorphismType.make([(-2, 4)], [(-1, 3), (1, 1)])
    assert hom_space_dim(t) == 76


def test_aut_group_dim():
    assert aut_group_dim(MorphismType.make([(-2, 1), (-1, 2)], [(0, 3)])) == 19
    assert (
        aut_group_dim(
            MorphismType.make([(-2, 3), (-1, 3)], [(-1, 2), (0, 4)], zeroed=[(1, 0)])
        )
        == 88
    )
    assert aut_group_dim(MorphismType.make([(-2, 4)], [(-1, 3), (1, 1)])) == 43


@given(st.integers(1, 6), st.integers(1, 6), st.integers(-4, 1), st.integers(2, 5))
def test_aut_single_types(k, m, d, gap):
    t = MorphismType.make([(d, k)], [(d + gap, m)])
    # hom(d, d') with d < d' contributes nothing to either automorphism group
    assert aut_group_dim(t) == k * k + m * m - 1


def test_stabilizer_rules():
    assert stabilizer_dim(StabilizerRule.N_MINUS_1, 5) == 4
    assert stabilizer_dim(StabilizerRule.TRIVIAL, 99) == 0
    assert stabilizer_dim(StabilizerRule.FOUR_N_MINUS_11, 10) == 29
    with pytest.raises(ValueError):
        stabilizer_dim(StabilizerRule.FOUR_N_MINUS_11, 2)


def test_stratum_codim_examples():
    assert stratum_codim(case_by_id("M(n+2,n):omega1"), 3) == 2
    assert stratum_codim(case_by_id("M(7,4):omega2"), 4) == 6
    assert stratum_codim(case_by_id("M(n,3):h0m1=1+ker"), 8) == 6


def test_codim_zero_family():
    case = case_by_id("M(n+1,n):h0m1=0")
    for n in range(1, 11):
        assert stratum_codim(case, n) == 0
        t = case.resolution(n)
        assert hom_space_dim(t) - aut_group_dim(t) == (n + 1) ** 2 + 1


@pytest.mark.parametrize("n", range(1, 11))
def test_crosscheck_linear(n):
    assert quotient_dim_crosscheck("linear", n)


@pytest.mark.parametrize("n", (1, 2, 3))
def test_crosscheck_cubic(n):
    assert quotient_dim_crosscheck("cubic", n)


def test_crosscheck_rejects_bad_n():
    with pytest.raises(ValueError):
        quotient_dim_crosscheck("cubic", 4)
    with pytest.raises(ValueError):
        quotient_dim_crosscheck("linear", 0)


def test_bundle_sum_invariants():
    with pytest.raises(ValueError):
        BundleSum([(-1, 2), (-2, 1)])  # not increasing
    with pytest.raises(ValueError):
        BundleSum([(-1, 0)])
    b = BundleSum([(-2, 1), (-1, 2)])
    assert b.rank == 3
    assert b.dual() == BundleSum([(-1, 2), (0, 1)])


def test_morphism_type_dual_involution():
    t = MorphismType.make([(-2, 2), (-1, 3)], [(-1, 1), (0, 4)], zeroed=[(1, 0)])
    assert t.dual().dual() == t
    d = t.dual()
    assert d.source.summands == ((-2, 4), (-1, 1))
    assert d.target.summands == ((-1, 3), (0, 2))


def test_resolution_spec_roundtrip():
    spec = "src=(-2)x3,(-1)x2 tgt=(-1)x2,(0)x3 zero=(2,1)"
    t, k = parse_resolution_spec(spec)
    assert k is None
    assert format_resolution_spec(t) == spec
    t2, k2 = parse_resolution_spec("src=(-2)x4,(-1)x3 tgt=(-1)x3,(0)x3 ker=(-2)")
    assert k2 == -2


def test_registry_loads_17_blocks():
    assert len(load_registry()) == 17
