import csv
import subprocess
import sys

import numpy as np
import pytest

from scramblemark import chaos, netpbm, skg, testimages
from scramblemark.chaos import ChaosKey
from scramblemark.cli import main


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    netpbm.write_pgm(d / "in.pgm", testimages.load("camera"))
    netpbm.write_pbm(d / "logo.pbm", testimages.logo())
    assert main(["keygen", "--key1-bits", "128", "--out", str(d / "key1.hex"), "--seed", "11",
                 "--chaos-out", str(d / "key2.txt"), "--chaos-out", str(d / "key3.txt")]) == 0
    return d


def test_keygen_formats(workdir, tmp_path):
    assert len((workdir / "key1.hex").read_text().strip()) == 32
    text = (workdir / "key2.txt").read_text()
    key = ChaosKey.from_text(text)
    assert ChaosKey.from_text(key.to_text()) == key and text == key.to_text()
    for bits in (256, 512):
        out = tmp_path / f"k{bits}.hex"
        assert main(["keygen", "--key1-bits", str(bits), "--out", str(out)]) == 0
        assert len(out.read_text().strip()) == bits // 4


def test_keygen_seeded_is_reproducible(tmp_path):
    for name in ("a", "b"):
        main(["keygen", "--seed", "3", "--out", str(tmp_path / f"{name}.hex"),
              "--chaos-out", str(tmp_path / f"{name}.txt")])
    assert (tmp_path / "a.hex").read_bytes() == (tmp_path / "b.hex").read_bytes()
    assert (tmp_path / "a.txt").read_bytes() == (tmp_path / "b.txt").read_bytes()


def test_features(workdir):
    out = workdir / "fc.hex"
    assert main(["features", "--image", str(workdir / "in.pgm"), "--out", str(out),
                 "--key1", str(workdir / "key1.hex"), "--subkey-out", str(workdir / "sk.hex")]) == 0
    fc = skg.extract_feature_codes(netpbm.read_pgm(workdir / "in.pgm"))
    assert out.read_text().strip() == skg.bits_to_hex(fc)
    assert len(out.read_text().strip()) == 39
    assert len((workdir / "sk.hex").read_text().strip()) == 64


def test_embed_extract_roundtrip(workdir, capsys):
    args = ["embed", "--image", str(workdir / "in.pgm"), "--logo", str(workdir / "logo.pbm"),
            "--key1", str(workdir / "key1.hex"), "--key2", str(workdir / "key2.txt"),
            "--key3", str(workdir / "key3.txt")]
    assert main(args + ["--out", str(workdir / "wm.pgm")]) == 0
    assert main(args + ["--out", str(workdir / "wm2.pgm")]) == 0
    assert (workdir / "wm.pgm").read_bytes() == (workdir / "wm2.pgm").read_bytes()
    capsys.readouterr()
    assert main(["extract", "--image", str(workdir / "wm.pgm"), "--key1", str(workdir / "key1.hex"),
                 "--key2", str(workdir / "key2.txt"), "--logo-dims", "64x64",
                 "--out", str(workdir / "got.pbm"), "--reference", str(workdir / "logo.pbm")]) == 0
    assert capsys.readouterr().out.splitlines() == ["ber,nc", "0,1"]
    np.testing.assert_array_equal(netpbm.read_pbm(workdir / "got.pbm"), testimages.logo())


def test_embed_refuses_weak_delta(workdir, capsys):
    code = main(["embed", "--image", str(workdir / "in.pgm"), "--logo", str(workdir / "logo.pbm"),
                 "--key1", str(workdir / "key1.hex"), "--key2", str(workdir / "key2.txt"),
                 "--key3", str(workdir / "key3.txt"), "--delta", "20", "--delta-prime", "18",
                 "--out", str(workdir / "bad.pgm")])
    assert code == 2
    assert "ParameterError" in capsys.readouterr().err
    assert not (workdir / "bad.pgm").exists()


def test_attack_and_detect(workdir):
    if not (workdir / "wm.pgm").exists():
        pytest.skip("needs the embed test output")
    att = workdir / "shift.pgm"
    assert main(["attack", "--image", str(workdir / "wm.pgm"), "--kind", "translate",
                 "--distance", "17", "--direction", "-30", "--out", str(att),
                 "--report", str(workdir / "attack.csv")]) == 0
    assert read_csv(workdir / "attack.csv")[0]["params"] == "translate(direction=-30.0,distance=17.0)"
    assert main(["detect", "--image", str(att), "--key3", str(workdir / "key3.txt"),
                 "--max-shift", "30", "--direction", "-30", "--out", str(workdir / "est.csv"),
                 "--cc-curve", str(workdir / "curve.csv"),
                 "--rectified", str(workdir / "rect.pgm")]) == 0
    est = read_csv(workdir / "est.csv")[0]
    assert est["found"] == "yes" and float(est["shift"]) == 17 and float(est["rotation"]) == 0
    curve = read_csv(workdir / "curve.csv")
    assert len(curve) == 360 and curve[0]["angle"] == "1"
    rect = netpbm.read_pgm(workdir / "rect.pgm")
    wm = netpbm.read_pgm(workdir / "wm.pgm")
    np.testing.assert_array_equal(rect[:-9, :-15], wm[:-9, :-15])


def test_detect_unwatermarked_is_not_found(workdir):
    out = workdir / "none.csv"
    assert main(["detect", "--image", str(workdir / "in.pgm"), "--key3", str(workdir / "key3.txt"),
                 "--out", str(out)]) == 0
    assert read_csv(out)[0]["found"] == "no"


def test_attack_usage_error(workdir, capsys):
    assert main(["attack", "--image", str(workdir / "in.pgm"), "--kind", "awgn",
                 "--out", str(workdir / "x.pgm")]) == 1
    assert "--sigma" in capsys.readouterr().err


def test_usage_errors_exit_one():
    with pytest.raises(SystemExit) as info:
        main(["nonsense"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main(["keygen", "--key1-bits", "100"])
    assert info.value.code == 1


def test_missing_file_is_domain_error(tmp_path):
    assert main(["features", "--image", str(tmp_path / "absent.pgm")]) == 2


def test_correlate(workdir):
    out = workdir / "cc.csv"
    assert main(["correlate", "--key", str(workdir / "key2.txt"), "--key-b",
                 str(workdir / "key3.txt"), "--length", "1000", "--max-lag", "20",
                 "--out", str(out)]) == 0
    rows = read_csv(out)
    assert len(rows) == 41
    zero = rows[20]
    assert zero["tau"] == "0" and float(zero["ac"]) == 1.0
    b = chaos.sign_sequence(ChaosKey.from_text((workdir / "key2.txt").read_text()), 1000)
    b2 = chaos.sign_sequence(ChaosKey.from_text((workdir / "key3.txt").read_text()), 1000)
    assert float(rows[25]["cc"]) == pytest.approx(chaos.crosscorrelation(b, b2, 5))


def test_evaluate_table8(tmp_path, images):
    imgdir = tmp_path / "imgs"
    imgdir.mkdir()
    for name, img in images.items():
        netpbm.write_pgm(imgdir / f"{name}.pgm", img)
    out = tmp_path / "table8.csv"
    assert main(["evaluate", "--suite", "table8", "--images", str(imgdir), "--out", str(out)]) == 0
    rows = read_csv(out)
    assert len(rows) == 5 * 11
    assert {"image", "attack", "psnr_vs_original", "ber", "nc"} <= set(rows[0])
    first = [r for r in rows if r["attack"] == "jpeg_like(quality=100)"]
    assert all(float(r["ber"]) == 0 for r in first)


def test_console_script_entry_point(workdir):
    res = subprocess.run([sys.executable, "-m", "scramblemark.cli", "features", "--image",
                          str(workdir / "in.pgm")], capture_output=True, text=True)
    assert res.returncode == 0 and len(res.stdout.strip()) == 39
