from math import isqrt

import pytest
from hypothesis import given, strategies as st

from sandpiles.characterization import (
    div_profile,
    enumerate_fixed_point_forms,
    is_spm_reachable,
    is_sspm_form,
    is_stable_form,
    spm_fixed_point,
    sspm_split,
)
from sandpiles.core import NotAPartition, NotUnimodal, reverse

from conftest import compositions, naive_unimodal, partitions


def naive_spm_reachable(p):
    """Direct window scan for (x,x,x) and (x,x,x-1,...,q,q)."""
    k = len(p)
    for i in range(k):
        for j in range(i + 2, k):
            w = p[i:j + 1]
            if w[0] != w[1] or w[-1] != w[-2]:
                continue
            mid = w[1:-1]
            if all(a - b == 1 for a, b in zip(mid, mid[1:])):
                return False
    return True


@pytest.mark.parametrize("p, want", [((3, 3, 3), False), ((2, 2, 1, 1), False), ((2, 2, 1), True), ((6,), True)])
def test_is_spm_reachable_examples(p, want):
    assert is_spm_reachable(p) is want


def test_is_spm_reachable_rejects_non_partition():
    with pytest.raises(NotAPartition):
        is_spm_reachable((1, 2))


def test_pattern_scan_matches_window_scan():
    for n in range(1, 19):
        for p in partitions(n):
            assert is_spm_reachable(p) == naive_spm_reachable(p), p


@pytest.mark.parametrize("n, fp", [(6, (3, 2, 1)), (4, (2, 1, 1)), (10, (4, 3, 2, 1)), (1, (1,)), (8, (3, 2, 2, 1))])
def test_spm_fixed_point(n, fp):
    assert spm_fixed_point(n) == fp


def test_spm_fixed_point_rejects_zero():
    with pytest.raises(ValueError):
        spm_fixed_point(0)


@pytest.mark.parametrize(
    "u, want", [((1, 1, 2, 1), True), ((1, 2, 3, 2, 1), True), ((2, 2, 2, 2, 2), False), ((5,), True)]
)
def test_is_sspm_form_examples(u, want):
    assert is_sspm_form(u) is want


def test_three_threes_is_reachable(sequential_spaces):
    # split (3 | 3,3) avoids the forbidden windows on both sides
    assert is_sspm_form((3, 3, 3))
    nodes, _ = sequential_spaces(9, True)
    assert (3, 3, 3) in {hs for _, hs in nodes}


def test_is_sspm_form_rejects_non_unimodal():
    with pytest.raises(NotUnimodal):
        is_sspm_form((2, 1, 2))


def test_sspm_split_matches_definition():
    for n in range(1, 13):
        for u in compositions(n):
            if not naive_unimodal(u):
                continue
            splits = [
                i for i in range(len(u) + 1)
                if list(u[i:]) == sorted(u[i:], reverse=True)
                and list(u[:i]) == sorted(u[:i])
                and naive_spm_reachable(u[i:])
                and naive_spm_reachable(reverse(u[:i]))
            ]
            assert sspm_split(u) == (splits[0] if splits else None), u


@pytest.mark.parametrize(
    "n, forms",
    [
        (5, [(1, 1, 2, 1), (1, 2, 1, 1)]),
        (10, [(1, 1, 2, 3, 2, 1), (1, 2, 2, 2, 2, 1), (1, 2, 3, 2, 1, 1)]),
    ],
)
def test_enumerate_examples(n, forms):
    assert enumerate_fixed_point_forms(n) == forms


def test_enumerate_nine_has_pyramid():
    forms = enumerate_fixed_point_forms(9)
    assert (1, 2, 3, 2, 1) in forms and len(forms) == 3


def test_enumerate_matches_stable_sspm_forms_by_brute_force():
    for n in range(1, 16):
        brute = sorted(
            u for u in compositions(n) if naive_unimodal(u) and is_stable_form(u) and is_sspm_form(u)
        )
        assert enumerate_fixed_point_forms(n) == brute, n


@given(st.integers(1, 3000))
def test_fixed_form_shape(n):
    h = isqrt(n)
    forms = enumerate_fixed_point_forms(n)
    assert len(forms) == h
    for f in forms:
        assert max(f) in (h, h - 1)
        assert f[0] == f[-1] == 1
        assert is_stable_form(f)
        top = max(f)
        assert top * top <= n <= top * top + 3 * top
        i = sspm_split(f)
        assert i is not None
        # each flank is the unique stable SPM partition of its weight
        assert f[i:] == spm_fixed_point(sum(f[i:]))
        assert i == 0 or reverse(f[:i]) == spm_fixed_point(sum(f[:i]))


def test_div_profile_figure_examples():
    p = div_profile((1, 2, 3, 4, 5, 5, 4, 3, 3, 2, 1))
    assert p.div_value == 2
    q = div_profile((1, 2, 2, 3, 4, 5, 5, 4, 3, 2, 2, 1))
    assert q.div_value == 5
    assert q.separators == (5, 6)
    assert q.center == 5
    r = div_profile((1, 2, 1))
    assert (r.div_value, r.separators, r.center) == (0, (1,), 1)


def test_div_profile_rejects_empty():
    with pytest.raises(ValueError):
        div_profile(())


@given(st.integers(1, 2000))
def test_center_law(n):
    for f in enumerate_fixed_point_forms(n):
        rep = div_profile(f)
        assert rep.center is not None
        h = max(f)
        assert f[rep.center] == h
        assert rep.div_values[rep.center] == rep.div_value <= h
        brute = min(abs(sum(f[:i]) - sum(f[i + 1:])) for i in range(len(f)))
        assert rep.div_value == brute


@given(st.integers(1, 5000))
def test_alternating_phase_length_is_non_negative(n):
    for f in enumerate_fixed_point_forms(n):
        assert n - max(f) - div_profile(f).div_value ** 2 >= 0
