"""Frozen sweep summaries and the validity-vs-bruteforce audit."""

import numpy as np
import pytest

from semifields import census as cs
from semifields import fields as fd


def test_x_validity_vs_bruteforce_321():
    out = cs.x_validity_vs_bruteforce(3, 2, 1)
    assert out["domain"] == 4608
    assert out["valid"] == 1056
    assert out["mismatches"] == []


def test_sweep_C_321():
    summ = cs.sweep_C(3, 2, 1)
    assert (summ.domain, summ.valid) == (64, 24)
    assert summ.mismatches == []
    assert summ.histogram == {
        (False, (1, 2, 1), "square-twist-identity"): 16,
        (True, (1, 2, 1), "square-twist-identity"): 8,
    }


def test_sweep_B_321():
    summ = cs.sweep_B(3, 2, 1)
    assert (summ.domain, summ.valid) == (512, 108)
    assert summ.mismatches == []
    assert summ.histogram == {
        (False, (1, 2, 1), "middle-is-twist-square-field"): 16,
        (False, (1, 2, 1), "middle-quadratic-over-fixed-field"): 56,
        (True, (1, 2, 1), "middle-is-twist-square-field"): 8,
        (True, (1, 2, 1), "middle-quadratic-over-fixed-field"): 28,
    }


def test_sweep_X_321_full_and_reduced():
    summ = cs.sweep_X(3, 2, 1)
    assert (summ.domain, summ.valid) == (4608, 1056)
    assert summ.mismatches == []
    assert summ.histogram == {
        (False, (1, 2, 1), "square-twist-identity"): 128,
        (True, (1, 2, 1), "square-twist-identity"): 64,
        (False, (1, 2, 1), "via-unit-scale-isotope: middle-is-twist-square-field"): 128,
        (True, (1, 2, 1), "via-unit-scale-isotope: middle-is-twist-square-field"): 64,
        (False, (1, 2, 1), "via-unit-scale-isotope: middle-quadratic-over-fixed-field"): 448,
        (True, (1, 2, 1), "via-unit-scale-isotope: middle-quadratic-over-fixed-field"): 224,
    }

    reduced = cs.sweep_X(3, 2, 1, reduce=True)
    assert reduced.valid == 39
    assert reduced.mismatches == []
    # orbit representatives hit every classification the full sweep sees
    assert set(reduced.histogram) == set(summ.histogram)


def test_sweep_A_321():
    summ = cs.sweep_A(3, 2, 1)
    assert (summ.domain, summ.valid) == (640, 12)
    assert summ.mismatches == []
    assert summ.histogram == {(True, (1, 2, 1), "scalar-subfield-containment"): 12}


def test_sweep_twisted_331():
    summ = cs.sweep_twisted(3, 3, 1)
    assert (summ.domain, summ.valid) == (26, 13)
    assert summ.mismatches == []
    assert summ.histogram == {(True, (1, 1, 1), "twist-fixed-fields"): 13}


def test_sweep_records_and_json():
    summ = cs.sweep_twisted(3, 3, 1, keep_records=True)
    assert len(summ.records) == summ.valid
    for rec in summ.records:
        assert rec["type"] == "instance" and rec["family"] == "twisted"
        assert all(v in ("match", "not-applicable") for v in rec["agreement"].values())
    js = summ.to_json()
    assert js["type"] == "summary" and js["valid"] == 13
    assert sum(js["histogram"].values()) == 13


def test_canon_map_is_coset_projection(gf9):
    canon = cs._canon_map(gf9, 2)
    xs = np.arange(1, 9, dtype=np.int64)
    squares = np.unique(np.asarray(gf9.pow_vec(xs, 2)))
    assert canon[0] == 0
    for i in range(1, 9):
        # idempotent, dominated by i, and in the same coset as i
        assert canon[canon[i]] == canon[i]
        assert canon[i] <= i
        ratio = int(gf9.mul_vec(np.int64(i), gf9._inv[canon[i]]))
        assert ratio in squares
    # constant on cosets
    for i in range(1, 9):
        for u in squares.tolist():
            j = int(gf9.mul_vec(np.int64(i), np.int64(u)))
            assert canon[j] == canon[i]
