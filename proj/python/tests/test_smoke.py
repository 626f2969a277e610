import pathlib

import pytest

import ndsid

MODELS = pathlib.Path(__file__).resolve().parents[2] / "models"


def test_philox_known_answer():
    assert ndsid.philox4x32_10([0, 0, 0, 0], [0, 0]) == [0x6627E8D5, 0xE169C58D, 0xBC57AC4C, 0x9B00DBD8]


def test_bundled_verdicts():
    assert ndsid.check(ndsid.load_model(str(MODELS / "circuit_k0.4.json")))["exit_code"] == 0
    half = ndsid.check(ndsid.load_model(str(MODELS / "circuit_k0.5.json")), "thm2")
    assert half["verdict"] == "inconclusive"
    assert all(not r["zu_fnrr"] for r in half["ranks"])
    witness = ndsid.check(ndsid.load_model(str(MODELS / "gzv_zero_unidentifiable.json")))
    assert witness["exit_code"] == 1
    assert witness["witness"]["i"] == 1


def test_round_trip_and_exact_tfms():
    m = ndsid.circuit_model(T="1", k1="2/5", k2="9/10")
    assert ndsid.parse_model(m.dump()) == m
    assert ndsid.normal_rank(m, 0, "yv") == 1
    assert ndsid.tfm_det(m, 0, "zu") == "(1/5)/(s^2 + 22/5*s + 17/5)"
    assert ndsid.normal_rank(ndsid.circuit_model(k1="1/2"), 0, "zu") == 1


def test_distance_is_reproducible():
    m = ndsid.circuit_sweep_model("1/2")
    a = ndsid.dsid_freq(m, 3, 4, seed=5)
    b = ndsid.dsid_freq(m, 3, 4, seed=5, threads=2)
    assert a == b
    assert a["d_freq"] > 0
    csv = ndsid.sweep_csv(1, 2, seed=3)
    assert csv.count("\n") == 21


def test_errors_are_raised():
    with pytest.raises(ndsid.NdsidError):
        ndsid.parse_model('{"subsystems": [], "bogus": 1}')
    with pytest.raises(ndsid.NdsidError):
        ndsid.circuit_model(k1="3/2")
