import json

import numpy as np
import pytest

from lrhaar.coeffs import Poisson, ScaledChiSquared, lrh_forward
from lrhaar.haar import forward_haar
from lrhaar.io import (
    decomposition_from_dict,
    decomposition_to_dict,
    dump_json,
    fmt,
    read_signal,
    signal_to_text,
    write_signal,
)


def test_fmt_round_trips():
    for v in (0.1, 1 / 3, 2.0**-1074, 1e308, -7.25):
        assert float(fmt(v)) == v
    assert fmt(0.1) == "0.10000000000000001"


class TestSignals:
    def test_csv_with_header(self, tmp_path):
        p = tmp_path / "x.csv"
        p.write_text("value\n1\n2.5\n\n3e2\n")
        np.testing.assert_array_equal(read_signal(p), [1, 2.5, 300])

    def test_bad_row(self, tmp_path):
        p = tmp_path / "x.csv"
        p.write_text("1\nabc\n")
        with pytest.raises(ValueError, match=":2:"):
            read_signal(p)

    @pytest.mark.parametrize("name", ["x.csv", "x.json"])
    def test_round_trip(self, tmp_path, rng, name):
        x = rng.normal(size=16)
        write_signal(tmp_path / name, x)
        np.testing.assert_array_equal(read_signal(tmp_path / name), x)

    def test_json_object(self, tmp_path):
        p = tmp_path / "x.json"
        p.write_text(json.dumps({"values": [1, 2]}))
        np.testing.assert_array_equal(read_signal(p), [1, 2])

    def test_text(self):
        assert signal_to_text([1.0, 0.5]) == "1\n0.5\n"
        assert signal_to_text([1.0], "json") == "[1]\n"


class TestDecompositions:
    def test_haar_round_trip(self, rng):
        h = forward_haar(rng.normal(size=8))
        back = decomposition_from_dict(json.loads(dump_json(decomposition_to_dict(h))))
        for a, b in zip(h.details, back.details):
            np.testing.assert_array_equal(a, b)
        assert back.smooth_top == h.smooth_top

    @pytest.mark.parametrize("family", [Poisson(), ScaledChiSquared(3)])
    def test_lrh_round_trip(self, rng, family):
        d = lrh_forward(rng.exponential(size=8) + 0.1, family)
        data = decomposition_to_dict(d)
        assert data["family"] == str(family) and list(data["details"]) == ["1", "2", "3"]
        back = decomposition_from_dict(json.loads(dump_json(data)))
        assert back.family == family
        np.testing.assert_array_equal(back.g[0], d.g[0])

    def test_unknown_type(self):
        with pytest.raises(TypeError):
            decomposition_to_dict(object())


def test_dump_json_plain_types():
    out = json.loads(dump_json({"a": np.float64(1.5), "b": np.arange(2), "c": float("nan"), "d": np.bool_(True)}))
    assert out == {"a": 1.5, "b": [0, 1], "c": None, "d": True}
