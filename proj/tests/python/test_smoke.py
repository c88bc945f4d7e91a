import numpy as np
import pytest

import edgetext as et


def ribbon(length=200.0, height=40.0, k=7, bend=0.0):
    xs = np.linspace(-0.5, 0.5, k)
    top = np.stack([300 + xs * length, 200 + bend * length * xs**2], axis=1)
    bottom = np.stack([300 + xs * length, 200 + height + bend * length * xs**2], axis=1)
    return np.concatenate([top, bottom[::-1]])


def test_encode_reconstruct_round_trip():
    poly = ribbon(bend=0.4)
    label = et.encode(poly)
    assert str(label.top.mask) == "2(2)+c"
    assert label.top.coefficient(2) == pytest.approx(0.4, abs=1e-9)
    contour = et.reconstruct(label, samples=100)
    assert contour.shape == (200, 2)
    assert np.allclose(contour[0], label.truncation.start_top)
    assert et.polygon_iou(contour, poly) > 0.97


def test_batch_matches_single():
    labels = [et.encode(ribbon(bend=b)) for b in np.linspace(-0.5, 0.5, 9)]
    for got, label in zip(et.reconstruct_batch(labels), labels):
        assert np.array_equal(got, et.reconstruct(label))


def test_losses_and_metrics():
    mask = et.ParamMask("2(2)+c")
    square = et.CurveParams(mask, [0.0, 1.0, 0.0])
    zero = et.CurveParams(mask, [0.0, 0.0, 0.0])
    assert abs(et.pi_loss(square, zero, samples=1000) - 1 / 12) <= 2e-3
    assert et.smooth_l1(1.0, 0.0) == 0.5
    m = (np.arange(100) % 3 == 0).astype(np.float32)
    assert et.dice_loss(m, m) == 0.0
    assert et.dice_loss(np.zeros(10), np.zeros(10)) == 0.0
    assert et.total_loss(1, 1, 1) == 2.0
    assert et.precision_recall_hmean(8, 2, 2) == pytest.approx((80, 80, 80))
    assert et.match_detections([ribbon()], [ribbon()]) == (1, 0, 0)


def test_maps_round_trip():
    gts = [ribbon(length=300, height=30, bend=0.2) - [0, 120], ribbon(length=300, height=30, bend=-0.2) + [0, 100]]
    maps = et.render_label_maps(gts, 512, 512)
    assert maps["trunc_offsets"].shape == (512, 512, 8)
    assert maps["edge_params"].shape == (512, 512, 6)
    decoded = et.decode_maps(maps)
    assert len(decoded) == 2
    for gt in gts:
        assert max(et.polygon_iou(p, gt) for p in decoded) >= 0.8


def test_tensor_round_trip(tmp_path):
    values = np.random.default_rng(0).normal(size=(4, 5, 3)).astype(np.float32)
    path = str(tmp_path / "x.edgt")
    et.write_tensor(values, path, ["a", "b", "c"])
    back, names = et.read_tensor(path)
    assert names == ["a", "b", "c"]
    assert back.tobytes() == values.tobytes()


def test_errors_and_cli(tmp_path):
    with pytest.raises(et.EdgetextError):
        et.encode(np.array([[0, 0], [0, 0], [0, 5], [0, 5]], dtype=float))
    with pytest.raises(et.EdgetextError):
        et.ParamMask("2(9)")
    out = str(tmp_path / "s.jsonl")
    code, stdout, _ = et.cli(["synth", "--kind", "ribbon", "--count", "3", "--seed", "1", "-o", out])
    assert code == 0 and "3 record" in stdout
    code, stdout, _ = et.cli(["eval", "--pred", out, "--gt", out])
    assert code == 0 and "H=100.00" in stdout
    assert et.cli([])[0] == 1
