import json
from fractions import Fraction as F
from pathlib import Path

import pytest

from gptk.errors import InputError
from gptk.modelfile import OutcomeSerializer, load, parse_rational

MODELS = Path(__file__).resolve().parent.parent / "models"


def test_load_bundled_bit():
    mf = load(MODELS / "bit.json")
    assert mf.space("bit").dim == 2
    assert len(mf.models) == 1
    assert "F" in mf.valued_weights
    assert mf.kernels["k"].matrix == ((F(1, 2), F(1, 2)), (F(0), F(1)))


def test_load_bundled_gbit_pair():
    mf = load(MODELS / "gbit_pair.json")
    assert mf.space("gbit").dim == 3
    assert "pr" in mf.joint_weights
    assert "gmax" in mf.bilinear_rules


def test_rationals_parse_and_floats_rejected(tmp_path):
    assert parse_rational("3/7") == F(3, 7)
    assert parse_rational(2) == F(2)
    with pytest.raises(InputError):
        parse_rational(0.5)
    bad = tmp_path / "bad.json"
    bad.write_text('{"spaces": {"s": {"dim": 1, "cone_generators": [[0.5]], "unit": [1]}}}')
    with pytest.raises(InputError):
        load(bad)


def test_nonsumming_weight_names_the_test(tmp_path):
    doc = {
        "spaces": {"b": {"dim": 2, "cone_generators": [["1", "0"], ["0", "1"]],
                         "unit": ["1", "1"]}},
        "testspaces": {"coin": {"tests": [["x", "y"]]}},
        "valued_weights": {"bad": {"space": "b", "testspace": "coin",
                                   "values": {"x": ["1", "0"], "y": ["1", "0"]}}},
    }
    p = tmp_path / "m.json"
    p.write_text(json.dumps(doc))
    with pytest.raises(InputError) as err:
        load(p)
    assert "does not sum" in str(err.value)
    assert "x" in str(err.value) and "y" in str(err.value)


def test_unknown_reference(tmp_path):
    doc = {"models": {"m": {"testspace": "nope", "states": []}}}
    p = tmp_path / "m.json"
    p.write_text(json.dumps(doc))
    with pytest.raises(InputError):
        load(p)


def test_unknown_section(tmp_path):
    p = tmp_path / "m.json"
    p.write_text('{"nonsense": {}}')
    with pytest.raises(InputError):
        load(p)


def test_outcome_serializer_pairs_and_covers():
    ser = OutcomeSerializer()
    pair = ("1", (F(1, 2), F(1, 2)))
    assert ser.outcome(pair) == ["1", 0]
    assert ser.outcome(pair) == ["1", 0]  # interned
    cover = (frozenset({"x", "y"}), "x")
    assert ser.outcome(cover) == [["x", "y"], "x"]
    assert ser.effect_table() == [["1/2", "1/2"]]
