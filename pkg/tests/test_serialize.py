import json
import math

from hypothesis import given, strategies as st

from orlicz_mart import PiecewiseLinearConcave, Power, PowerLog, decompose
from orlicz_mart.serialize import (
    decode_number,
    decomposition_to_dict,
    digest,
    dumps,
    encode_number,
    filtration_from_dict,
    filtration_to_dict,
    martingale_from_dict,
    martingale_to_dict,
    phi_from_dict,
    phi_to_dict,
    stopping_time_from_list,
    stopping_time_to_list,
)
from orlicz_mart.stopping import enumerate_stopping_times
from strategies import martingales


@given(st.fractions())
def test_fraction_codec(x):
    assert decode_number(encode_number(x)) == x


def test_special_numbers():
    assert encode_number(math.inf) == "inf"
    assert decode_number("inf") == math.inf
    assert decode_number(0.25) == 0.25


@given(martingales(max_depth=4))
def test_martingale_round_trip(f):
    d = json.loads(dumps(martingale_to_dict(f)))
    g = martingale_from_dict(d)
    assert g == f
    assert filtration_from_dict(filtration_to_dict(f.filtration)) == f.filtration


def test_stopping_time_round_trip(F2):
    for nu in enumerate_stopping_times(F2):
        data = json.loads(json.dumps(stopping_time_to_list(nu)))
        assert stopping_time_from_list(F2, data) == nu


def test_phi_round_trip():
    for Phi in (Power(0.5), PowerLog(0.5, 1.0),
                PiecewiseLinearConcave([(1, 1), (3, 2)])):
        back = phi_from_dict(json.loads(json.dumps(phi_to_dict(Phi))))
        assert back.to_dict() == Phi.to_dict()
        assert float(back(2.5)) == float(Phi(2.5))


def test_decomposition_schema(f_run):
    d = decomposition_to_dict(decompose(f_run, "s"))
    assert d["kind"] == "s" and d["A"] == 2
    assert [a["k"] for a in d["atoms"]] == [-1, 0]
    assert d["atoms"][1]["nu"] == [[1, 0]]


@given(martingales(max_depth=3))
def test_dumps_is_deterministic(f):
    a = dumps(martingale_to_dict(f))
    b = dumps(martingale_to_dict(martingale_from_dict(json.loads(a))))
    assert a == b and a.endswith("\n")
    assert digest(martingale_to_dict(f)) == digest(json.loads(a))
