import os
import subprocess

import numpy as np
import pytest

import lvc


def numpy_oracle(features, query, tokens_per_frame, pseudo_frames, heads=1):
    rows, dim = features.shape
    frames = rows // tokens_per_frame
    w = frames // pseudo_frames
    qbar = query.astype(np.float64).reshape(-1, dim).mean(axis=0)
    windows = features.astype(np.float64).reshape(-1, w, dim)
    hd = dim // heads
    out = np.empty((windows.shape[0], dim))
    for h in range(heads):
        sl = slice(h * hd, (h + 1) * hd)
        logits = windows[:, :, sl] @ qbar[sl] / np.sqrt(hd)
        weights = np.exp(logits - logits.max(axis=1, keepdims=True))
        weights /= weights.sum(axis=1, keepdims=True)
        out[:, sl] = np.einsum("nk,nkd->nd", weights, windows[:, :, sl])
    return out


@pytest.fixture
def instance():
    rng = np.random.default_rng(0)
    return (rng.standard_normal((64 * 4, 8), dtype=np.float32),
            rng.standard_normal((5, 8), dtype=np.float32))


def test_shape_64_to_16(instance):
    f, q = instance
    out = lvc.compress(f, q, tokens_per_frame=4, pseudo_frames=16)
    assert out.shape == (64, 8)
    assert out.dtype == np.float32


def test_zero_query_is_average_pooling(instance):
    f, _ = instance
    zero = np.zeros((2, 8), dtype=np.float32)
    a = lvc.compress(f, zero, tokens_per_frame=4, pseudo_frames=8)
    b = lvc.compress(f, tokens_per_frame=4, pseudo_frames=8, mode="avg-pool")
    assert np.max(np.abs(a - b)) <= 1e-6


@pytest.mark.parametrize("heads", [1, 2, 4])
def test_matches_numpy_oracle(instance, heads):
    f, q = instance
    mode = "query-attn-mh" if heads > 1 else "query-attn"
    out = lvc.compress(f, q, tokens_per_frame=4, pseudo_frames=4, heads=heads, mode=mode)
    assert np.max(np.abs(out - numpy_oracle(f, q, 4, 4, heads))) <= 1e-5
    ref = lvc.oracle_compress(f, q, tokens_per_frame=4, pseudo_frames=4, heads=heads, mode=mode)
    assert np.max(np.abs(out - ref)) <= 1e-5


def test_errors_carry_code(instance):
    f, q = instance
    with pytest.raises(lvc.LvcError) as err:
        lvc.compress(f, q, tokens_per_frame=4, pseudo_frames=7)
    assert err.value.args[0] == "IndivisibleFrames"
    with pytest.raises(lvc.LvcError) as err:
        lvc.compress(f, tokens_per_frame=4, pseudo_frames=4)
    assert err.value.args[0] == "MissingQuery"
    with pytest.raises(lvc.LvcError) as err:
        lvc.sample_frame_indices(10, 64)
    assert err.value.args[0] == "InsufficientFrames"


def test_conversion_warns(instance):
    f, q = instance
    with pytest.warns(UserWarning):
        out = lvc.compress(f.astype(np.float64), q, tokens_per_frame=4, pseudo_frames=16)
    assert np.array_equal(out, lvc.compress(f, q, tokens_per_frame=4, pseudo_frames=16))


def test_sampling():
    assert lvc.sample_frame_indices(128, 64) == list(range(1, 128, 2))


@pytest.mark.skipif("LVC_CLI" not in os.environ, reason="CLI path not provided")
@pytest.mark.parametrize("mode", ["query-attn", "query-attn-mh", "avg-pool"])
def test_cli_parity(tmp_path, instance, mode):
    f, q = instance
    np.save(tmp_path / "f.npy", f)
    np.save(tmp_path / "q.npy", q)
    args = [os.environ["LVC_CLI"], "compress", "--features", str(tmp_path / "f.npy"),
            "--tokens-per-frame", "4", "--pseudo-frames", "16", "--mode", mode,
            "--out", str(tmp_path / "o.npy")]
    if mode != "avg-pool":
        args += ["--query", str(tmp_path / "q.npy")]
    heads = 2 if mode == "query-attn-mh" else 1
    args += ["--heads", str(heads)]
    subprocess.run(args, check=True, capture_output=True)
    cli = np.load(tmp_path / "o.npy")
    bound = lvc.compress(f, None if mode == "avg-pool" else q, tokens_per_frame=4,
                         pseudo_frames=16, heads=heads, mode=mode)
    assert cli.tobytes() == bound.tobytes()


def test_version_matches_project():
    import re
    root = os.path.join(os.path.dirname(__file__), "..", "..")
    with open(os.path.join(root, "CMakeLists.txt")) as fh:
        cmake_version = re.search(r"project\(lvc VERSION ([0-9.]+)", fh.read()).group(1)
    with open(os.path.join(root, "pyproject.toml")) as fh:
        py_version = re.search(r'^version = "([0-9.]+)"', fh.read(), re.M).group(1)
    assert lvc.__version__ == cmake_version == py_version
