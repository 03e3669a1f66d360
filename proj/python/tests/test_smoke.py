import json

import numpy as np
import pytest

import nlwlab


def test_version():
    assert nlwlab.version()


def test_profile_values():
    assert nlwlab.W(0.0, 6) == 1.0
    r = np.linspace(0.1, 10.0, 50)
    w = nlwlab.W(r, 4)
    assert np.allclose(w, 1.0 / (1.0 + r**2 / 8.0))
    assert nlwlab.LambdaW(0.0, 6) == pytest.approx(2.0)


def test_constants():
    k = nlwlab.closed_form_constants(6)
    assert k["interaction_constant"] == pytest.approx(4608.0)
    assert k["omega_sq"] == pytest.approx(1.25)
    assert nlwlab.closed_form_constants(4)["omega_sq"] is None
    q = nlwlab.quadrature_constants(6)
    assert q["interaction"] == pytest.approx(-4608.0, rel=1e-8)
    with pytest.raises(ValueError):
        nlwlab.closed_form_constants(9)


def test_synthesize_shapes():
    r, u, udot = nlwlab.synthesize([1, -1], [0.1, 1.0], dim=6, n=1024, r_max=20.0)
    assert r.shape == u.shape == udot.shape == (1024,)
    assert np.all(udot == 0.0)
    assert u[0] > 0.0
    with pytest.raises(ValueError):
        nlwlab.synthesize([1, 1], [1.0, 0.5])


def test_energy_of_W():
    k = nlwlab.closed_form_constants(6)
    assert nlwlab.energy([1], [1.0], n=8192, r_max=200.0) == pytest.approx(k["E_W"], rel=1e-3)


def test_config_round_trip():
    text = nlwlab.normalize_config("dim = 5\n[data]\nsigns = +-\nscales = 0.1, 1\n")
    assert nlwlab.normalize_config(text) == text
    with pytest.raises(ValueError):
        nlwlab.normalize_config("[grid]\nfoo = 1\n")


def test_run_verify_constants():
    rec = nlwlab.run("verify-constants", "dim = 6\n")
    assert rec["exit_code"] == 0
    meta = json.loads(rec["metadata"])
    assert meta["status"] == "ok"


def test_run_reduced_is_deterministic():
    cfg = "[data]\nsigns = ++\nscales = 0.01, 1\n[reduced]\nt_end = 5\n"
    a, b = nlwlab.run("reduced", cfg), nlwlab.run("reduced", cfg)
    assert a["files"]["series.csv"] == b["files"]["series.csv"]
