import numpy as np
import pytest

from closefact import _kernels
from closefact._kernels import offset_scan, resolve_backend


def test_resolve_backend_defaults_to_numba_when_available(monkeypatch):
    monkeypatch.delenv(_kernels.BACKEND_ENV, raising=False)
    expected = "numba" if _kernels.numba_available() else "numpy"
    assert resolve_backend() == expected


def test_resolve_backend_env_flag(monkeypatch):
    monkeypatch.setenv(_kernels.BACKEND_ENV, "numpy")
    assert resolve_backend() == "numpy"
    monkeypatch.setenv(_kernels.BACKEND_ENV, "fortran")
    with pytest.raises(ValueError, match="unknown backend"):
        resolve_backend()


def test_resolve_backend_explicit_beats_env(monkeypatch):
    monkeypatch.setenv(_kernels.BACKEND_ENV, "numpy")
    if _kernels.numba_available():
        assert resolve_backend("numba") == "numba"


def test_resolve_backend_numba_unavailable(monkeypatch):
    monkeypatch.setattr(_kernels, "numba_available", lambda: False)
    assert resolve_backend() == "numpy"
    with pytest.raises(RuntimeError, match="not importable"):
        resolve_backend("numba")


def test_offset_scan_empty_range():
    out = offset_scan(5, 5, 10, backend="numpy")
    assert out.shape == (0, 4)


def test_offset_scan_tiny_case_by_hand():
    # A = 6, c_max = 6: 24 = 6*4 = 8*3 = 12*2 and 36 = 6*6 = 9*4 = 12*3
    out = offset_scan(6, 7, 6, backend="numpy")
    rows = {tuple(r) for r in out.tolist()}
    assert (6, 4, 2, 1) in rows
    assert (6, 4, 6, 2) in rows
    assert (6, 6, 3, 2) in rows
    assert (6, 6, 6, 3) in rows
    for base, cob, a, b in rows:
        assert (base + a) * (cob - b) == base * cob
        assert 1 <= b <= 6


@pytest.mark.skipif(not _kernels.numba_available(), reason="numba not installed")
@pytest.mark.parametrize("a_hi,c_max", [(2, 1), (40, 6), (150, 12)])
def test_backends_agree(a_hi, c_max):
    got_nb = offset_scan(1, a_hi, c_max, backend="numba")
    got_np = offset_scan(1, a_hi, c_max, backend="numpy")
    assert np.array_equal(got_nb, got_np)


def test_scan_order_is_row_major():
    out = offset_scan(1, 80, 8, backend="numpy")
    keys = [tuple(r[:3]) for r in out.tolist()]
    assert keys == sorted(keys)
