import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nextjump import (FockTruncation, InvalidParameter, NonMonotoneRecord,
                      QubitLevel, RecordSource, SurvivalRecord,
                      default_truncation, initial_state, make_params)


class TestMakeParams:
    def test_gamma_derived_simple(self):
        p = make_params(kappa=1.0, nbar=4.0)
        assert p.gamma_drive == 1.0

    def test_zero_drive(self):
        assert make_params(kappa=1.0, nbar=0.0).gamma_drive == 0.0

    def test_gamma_benchmark(self):
        p = make_params(kappa=1.0, nbar=100.0, chi=10.0, omega_rabi=1.0)
        assert p.gamma_drive == 5.0

    @pytest.mark.parametrize("kwargs", [
        dict(kappa=0.0, nbar=1.0),
        dict(kappa=-1.0, nbar=1.0),
        dict(kappa=1.0, nbar=-0.5),
        dict(kappa=1.0, nbar=1.0, chi=-2.0),
        dict(kappa=math.nan, nbar=1.0),
        dict(kappa=1.0, nbar=math.inf),
        dict(kappa=1.0, nbar=1.0, omega_rabi=complex("inf")),
    ])
    def test_rejects_bad_values(self, kwargs):
        with pytest.raises(InvalidParameter):
            make_params(**kwargs)

    @given(kappa=st.floats(1e-6, 1e6), nbar=st.floats(0.0, 1e6))
    @settings(max_examples=200, deadline=None)
    def test_gamma_identity_everywhere(self, kappa, nbar):
        p = make_params(kappa=kappa, nbar=nbar)
        assert p.gamma_drive == kappa * math.sqrt(nbar) / 2.0

    def test_omega_stored_complex(self):
        p = make_params(1.0, 1.0, 0.0, omega_rabi=1 - 2j)
        assert p.omega_rabi == 1 - 2j
        assert isinstance(p.omega_rabi, complex)


class TestTruncation:
    def test_default_scales_with_nbar(self):
        assert default_truncation(0.0).n_max == math.ceil(7.0) + 6
        assert default_truncation(4.0).n_max == math.ceil(4 + 7 * math.sqrt(5)) + 6

    @pytest.mark.parametrize("bad", [dict(n_max=0), dict(n_max=4, tail_tol=0.0),
                                     dict(n_max=4, tail_tol=1.0)])
    def test_invalid(self, bad):
        with pytest.raises(InvalidParameter):
            FockTruncation(**bad)


class TestInitialState:
    def test_ground_reset(self):
        st0 = initial_state(QubitLevel.G, FockTruncation(n_max=8))
        assert st0.amps_G[0] == 1.0
        assert np.all(st0.amps_G[1:] == 0) and np.all(st0.amps_B == 0)
        assert st0.norm() == 1.0
        assert st0.time == 0.0

    def test_bright_reset_symmetry(self):
        st0 = initial_state("B", FockTruncation(n_max=8))
        assert st0.amps_B[0] == 1.0 and np.all(st0.amps_G == 0)
        assert st0.norm() == 1.0

    def test_minimal_truncation_two_levels(self):
        st0 = initial_state(QubitLevel.G, FockTruncation(n_max=1))
        assert len(st0.amps_G) == 2 and len(st0.amps_B) == 2

    def test_amplitudes_are_frozen(self):
        st0 = initial_state(QubitLevel.G, FockTruncation(n_max=4))
        with pytest.raises(ValueError):
            st0.amps_G[0] = 0.5


class TestSurvivalRecord:
    def _record(self, w, dw=None):
        t = np.linspace(0.0, 1.0, len(w))
        w = np.asarray(w, dtype=float)
        if dw is None:
            dw = np.zeros_like(w)
        return SurvivalRecord(t=t, w=w, dw_dt=np.asarray(dw, dtype=float),
                              source=RecordSource.CLOSED_FORM,
                              params=make_params(1.0, 1.0))

    def test_monotone_record_validates(self):
        self._record([1.0, 0.9, 0.5, 0.2], [-0.1, -0.5, -0.4, -0.1]).validate()

    def test_increasing_w_rejected(self):
        with pytest.raises(NonMonotoneRecord):
            self._record([1.0, 0.9, 0.95, 0.2]).validate()

    def test_positive_derivative_rejected(self):
        with pytest.raises(NonMonotoneRecord):
            self._record([1.0, 0.9, 0.8, 0.2], [0.0, 0.1, 0.0, 0.0]).validate()

    def test_tiny_slack_tolerated(self):
        self._record([1.0, 0.5, 0.5 * (1 + 1e-13), 0.2]).validate()

    def test_grid_property_shape(self):
        rec = self._record([1.0, 0.9, 0.5, 0.2])
        assert rec.grid.shape == (4, 3)
        assert np.all(rec.grid[:, 1] == rec.w)
