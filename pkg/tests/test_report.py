import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hyperlab import report as rp
from hyperlab.analytics import li
from hyperlab.report import StatReport


def _r(lo, hi, count=1, ws=0.0, cs=0j, const=2.0, **meta):
    md = {"reference": "linear", "ratio_of": "count"}
    md.update(meta)
    return StatReport((lo, hi), "hyperbolic", count, ws, cs, const, md)


def test_validation():
    with pytest.raises(ValueError):
        StatReport((1, 2), "bogus")
    with pytest.raises(ValueError):
        StatReport((3, 2), "elliptic")
    with pytest.raises(ValueError):
        StatReport((1, 2), "elliptic", metadata={"reference": "cubic"})


def test_reference_and_ratio():
    r = _r(1, 10, count=30, const=3.0)
    assert r.reference_value == 30 and r.ratio == 1
    blk = _r(11, 20, count=15, const=3.0)
    assert blk.reference_value == 30 and blk.ratio == 0.5
    li_rep = StatReport((1, 100), "hyperbolic", 10, reference_constant=2.0, metadata={"reference": "li"})
    assert li_rep.reference_value == pytest.approx(2 * li(100))
    mag = StatReport((1, 5), "elliptic", 4, complex_sum=3 + 4j, metadata={"ratio_of": "magnitude"})
    assert mag.ratio == pytest.approx(5 / 4)
    assert math.isnan(StatReport((1, 5), "elliptic", 4).ratio)


def test_merge_rules():
    a, b = _r(1, 10, 5, 1.5, 1j), _r(11, 30, 7, 2.5, 2 + 0j)
    m = a.merge(b)
    assert m == b.merge(a)
    assert m.x_range == (1, 30) and m.count == 12 and m.weighted_sum == 4.0 and m.complex_sum == 2 + 1j
    with pytest.raises(ValueError):
        a.merge(_r(12, 30))
    with pytest.raises(ValueError):
        a.merge(_r(11, 30, const=1.0))
    with pytest.raises(ValueError):
        a.merge(_r(11, 30, residue="7"))


@given(st.integers(1, 10**6), st.integers(0, 10**6), st.integers(1, 40))
def test_blocks_partition(lo, span, k):
    hi = lo + span
    parts = rp.blocks(lo, hi, k)
    assert parts[0][0] == lo and parts[-1][1] == hi
    assert all(a[1] + 1 == b[0] for a, b in zip(parts, parts[1:]))
    assert all(x <= y for x, y in parts)
    assert len(parts) <= k


def test_run_blocks_deterministic():
    def fn(lo, hi):
        return _r(lo, hi, count=sum(range(lo, hi + 1)), ws=sum(1 / n for n in range(lo, hi + 1)))

    one = rp.run_blocks(fn, 1, 1000, 1)
    for t in (2, 3, 8, 2000):
        many = rp.run_blocks(fn, 1, 1000, t)
        assert many.count == one.count
        assert many.weighted_sum == pytest.approx(one.weighted_sum, rel=1e-14)
        assert many == rp.run_blocks(fn, 1, 1000, t)


def test_json_roundtrip():
    r = _r(3, 99, 12, 0.1 + 0.2, complex(1 / 3, -2 / 7), m1="2")
    again = StatReport.from_json(r.to_json())
    assert again == r
    d = StatReport((1, 5), "elliptic", 0).to_dict()
    assert d["ratio"] is None and d["reference_value"] is None


def test_csv_roundtrip():
    reps = [_r(1, 10, 3, 1 / 3, 1j / 7), _r(11, 20, 4, 2 / 3, -1 + 0j, residue="1")]
    text = rp.to_csv(reps)
    assert text.splitlines()[0] == ",".join(rp.CSV_FIELDS)
    assert rp.from_csv(text) == reps
    with pytest.raises(ValueError):
        rp.from_csv("a,b\n1,2\n")


def test_merge_all():
    parts = [_r(11, 20), _r(1, 10), _r(21, 25)]
    assert rp.merge_all(parts).x_range == (1, 25)
    with pytest.raises(ValueError):
        rp.merge_all([])
