import pytest
from hypothesis import given
from hypothesis import strategies as st

from inqshell import cf_and, cf_attenuate, cf_merge, cf_or

cfs = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


class TestExamples:
    def test_and(self):
        assert cf_and([1.0, 1.0]) == 1.0
        assert cf_and([0.8, 0.5, 0.9]) == 0.5
        assert cf_and([0.42]) == 0.42

    def test_or(self):
        assert cf_or([0.0, 0.0]) == 0.0
        assert cf_or([0.8, 0.5, 0.9]) == 0.9
        assert cf_or([0.42]) == 0.42

    def test_attenuate(self):
        assert cf_attenuate(0.7, 1.0) == 0.7
        assert cf_attenuate(1.0, 0.9) == 0.9
        assert cf_attenuate(0.5, 0.8) == pytest.approx(0.4, abs=1e-12)

    def test_merge(self):
        assert cf_merge(0.0, 0.7) == 0.7
        assert cf_merge(1.0, 0.3) == 1.0
        assert cf_merge(0.6, 0.5) == pytest.approx(0.8, abs=1e-12)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            cf_and([])
        with pytest.raises(ValueError):
            cf_or([])


class TestMergeProperties:
    @given(cfs, cfs)
    def test_commutative(self, a, b):
        assert cf_merge(a, b) == cf_merge(b, a)

    @given(cfs, cfs, cfs)
    def test_associative(self, a, b, c):
        left = cf_merge(cf_merge(a, b), c)
        right = cf_merge(a, cf_merge(b, c))
        assert abs(left - right) <= 1e-12

    @given(cfs)
    def test_zero_identity(self, a):
        assert cf_merge(0.0, a) == a

    @given(cfs)
    def test_one_absorbing(self, a):
        assert cf_merge(1.0, a) == 1.0

    @given(cfs, cfs)
    def test_result_not_below_either_input(self, a, b):
        merged = cf_merge(a, b)
        assert merged >= a and merged >= b

    @given(cfs, cfs, cfs)
    def test_monotone(self, a, b, delta):
        bigger = min(1.0, a + delta * (1.0 - a))
        assert cf_merge(bigger, b) >= cf_merge(a, b) - 1e-12


class TestAndOrProperties:
    @given(cfs)
    def test_idempotent(self, a):
        assert cf_and([a, a]) == a
        assert cf_or([a, a]) == a

    @given(st.lists(cfs, min_size=1, max_size=6))
    def test_commutative_and_associative(self, values):
        assert cf_and(values) == cf_and(list(reversed(values)))
        assert cf_or(values) == cf_or(list(reversed(values)))
        assert cf_and(values) == min(values)
        assert cf_or(values) == max(values)

    @given(st.lists(cfs, min_size=1, max_size=6))
    def test_interval_preserved(self, values):
        for op in (cf_and, cf_or):
            assert 0.0 <= op(values) <= 1.0

    @given(cfs, cfs)
    def test_attenuate_and_merge_stay_in_interval(self, a, b):
        assert 0.0 <= cf_attenuate(a, b) <= 1.0
        assert 0.0 <= cf_merge(a, b) <= 1.0
