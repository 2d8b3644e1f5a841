import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nonfreeness import models, stateio
from nonfreeness.errors import CapacityError, NumberSymmetryViolation, ValidationError
from nonfreeness.measures import nonfreeness
from nonfreeness.states import DensityOperator, PureState


def write(tmp_path, doc, name="state.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc) if isinstance(doc, dict) else doc)
    return path


def header(d, kind):
    return {"format": "nonfreeness-state", "format_version": 1, "modes": d, "kind": kind}


class TestParse:
    def test_rounded_superposition(self, tmp_path):
        doc = header(2, "pure") | {"amplitudes": [["10", 0.7071, 0], ["01", 0.7071, 0]]}
        psi = stateio.parse_state(write(tmp_path, doc))
        assert isinstance(psi, PureState) and psi.n == 1
        np.testing.assert_allclose(psi.amplitudes, [2 ** -0.5] * 2, atol=1e-15)

    def test_ensemble(self, tmp_path):
        doc = header(2, "ensemble") | {"members": [
            {"weight": 0.5, "amplitudes": [["10", 1, 0]]},
            {"weight": 0.5, "amplitudes": [["01", 1, 0]]},
        ]}
        rho = stateio.parse_state(write(tmp_path, doc))
        assert rho.sectors == [1]
        np.testing.assert_allclose(rho.blocks[1], np.diag([0.5, 0.5]))

    def test_sector_mixing(self, tmp_path):
        doc = header(1, "pure") | {"amplitudes": [["0", 0.7071, 0], ["1", 0.7071, 0]]}
        with pytest.raises(NumberSymmetryViolation):
            stateio.parse_state(write(tmp_path, doc))

    def test_bitstring_leftmost_is_first_mode(self, tmp_path):
        doc = header(3, "pure") | {"amplitudes": [["100", 1, 0]]}
        assert stateio.parse_state(write(tmp_path, doc)).as_dict() == {1: 1}

    @pytest.mark.parametrize("doc", [
        "{not json",
        header(2, "pure") | {"amplitudes": [["1", 1, 0]]},
        header(2, "pure") | {"amplitudes": [["12", 1, 0]]},
        header(2, "pure") | {"amplitudes": [["10", 0.5, 0]]},
        header(2, "pure") | {"amplitudes": [["10", "x", 0]]},
        header(2, "pure") | {"amplitudes": [["10", 1, 0], ["10", 0, 0]]},
        header(2, "pure"),
        header(2, "bogus"),
        header(2, "pure") | {"format_version": 9, "amplitudes": []},
        {"modes": 2},
        header(2, "blocks") | {"blocks": [{"n": 1, "basis": ["01", "10"],
                                           "real": [[1, 0], [0, 0]], "imag": [[0, 0], [0, 0]]}]},
        header(2, "blocks") | {"blocks": [{"n": 1, "real": [[0.5, 0], [0, 0.4]],
                                           "imag": [[0, 0], [0, 0]]}]},
    ])
    def test_rejects(self, tmp_path, doc):
        with pytest.raises(ValidationError):
            stateio.parse_state(write(tmp_path, doc))

    def test_capacity(self, tmp_path):
        with pytest.raises(CapacityError):
            stateio.parse_state(write(tmp_path, header(13, "blocks") | {"blocks": []}))
        with pytest.raises(CapacityError):
            stateio.parse_state(write(tmp_path, header(17, "pure") | {"amplitudes": []}))


class TestRoundTrip:
    @settings(max_examples=25, deadline=None)
    @given(st.integers(1, 6), st.integers(0, 2 ** 32 - 1))
    def test_pure(self, d, seed):
        psi = models.random_pure(d, seed)
        back = stateio.state_from_dict(json.loads(stateio.dumps_state(psi)))
        assert back.n == psi.n
        np.testing.assert_array_equal(back.amplitudes, psi.amplitudes)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(1, 5), st.integers(0, 2 ** 32 - 1))
    def test_blocks(self, d, seed):
        rho = models.random_mixed(d, seed)
        back = stateio.state_from_dict(json.loads(stateio.dumps_state(rho)))
        assert isinstance(back, DensityOperator)
        assert back.distance(rho) == 0

    def test_file(self, tmp_path):
        psi = models.double_slater(2)
        stateio.write_state(tmp_path / "s.json", psi)
        np.testing.assert_array_equal(stateio.parse_state(tmp_path / "s.json").amplitudes, psi.amplitudes)


class TestReport:
    def test_round_trip(self, rng):
        report = nonfreeness(models.random_mixed(4, rng), cross_check=True, corr=True)
        text = stateio.dumps_report(report, "abc", {"corr": True})
        back, prov = stateio.loads_report(text)
        assert back == report
        assert prov["input_digest"] == "abc"
        assert prov["log_base"] == "2"
        assert prov["options"] == {"corr": True}

    def test_infinite_value_survives(self):
        report = nonfreeness(models.random_mixed(2, 0))
        report.nonfreeness = np.inf
        back, _ = stateio.loads_report(stateio.dumps_report(report, "", {}))
        assert back.nonfreeness == np.inf

    def test_full_precision(self, rng):
        report = nonfreeness(models.random_mixed(3, rng))
        doc = json.loads(stateio.dumps_report(report, "", {}))
        assert doc["report"]["S_delta"] == report.S_delta

    def test_nats_conversion(self, rng):
        rho = models.random_mixed(4, rng)
        bits = nonfreeness(rho, corr=True)
        nats = nonfreeness(rho, corr=True, log_base="e")
        for key in ("S_delta", "S_gamma", "nonfreeness", "corr_fidelity"):
            assert getattr(bits, key) * np.log(2) == pytest.approx(getattr(nats, key), abs=1e-12)

    def test_rejects_foreign_document(self):
        with pytest.raises(ValidationError):
            stateio.loads_report(json.dumps({"format": "other"}))


def test_digest_is_stable():
    assert stateio.digest("x") == stateio.digest(b"x")
    assert len(stateio.digest(b"")) == 64
