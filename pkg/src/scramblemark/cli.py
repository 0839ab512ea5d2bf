"""Command-line front end: ``scramblemark <command> ...``.

Exit status is 0 on success, 1 for usage errors and 2 for domain errors
(bad keys, images too small, capacity exceeded and so on).
"""

import argparse
import csv
import secrets
import sys
from pathlib import Path

import numpy as np

from . import chaos, experiments, metrics, netpbm, skg
from .attacks import AttackSpec
from .chaos import ChaosKey
from .detect import detect, extract_logo, rectify
from .embed import EmbedConfig, embed
from .errors import WatermarkError
from .skg import BlockGeometry, MainKey

ATTACK_PARAMS = {
    "none": (), "awgn": ("sigma",), "jpeg_like": ("quality",), "mean3": (),
    "gauss_lp": (), "rotate": ("angle",), "translate": ("distance", "direction"),
    "crop": ("fraction",),
}


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _write_text(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _write_csv(path, header, rows):
    fh = sys.stdout if path is None or path == "-" else open(path, "w", newline="")
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    finally:
        if fh is not sys.stdout:
            fh.close()


def _fmt(x):
    return f"{x:.17g}" if isinstance(x, float) else str(x)


def read_main_key(path) -> MainKey:
    return MainKey(Path(path).read_text().strip())


def read_chaos_key(path) -> ChaosKey:
    return ChaosKey.from_text(Path(path).read_text())


def _dims(text):
    try:
        h, w = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected HxW, got {text!r}")
    return h, w


def _config(args) -> EmbedConfig:
    theta = None if str(args.theta).lower() == "key" else float(args.theta)
    return EmbedConfig(delta=args.delta, delta_prime=args.delta_prime, theta=theta,
                       len_ow=args.len_ow)


# -- commands --------------------------------------------------------------

def cmd_keygen(args):
    rng = np.random.default_rng(args.seed) if args.seed is not None else None
    nbytes = args.key1_bits // 8
    raw = rng.bytes(nbytes) if rng is not None else secrets.token_bytes(nbytes)
    _write_text(args.out, MainKey(raw.hex()).hex + "\n")
    for path in args.chaos_out or []:
        if rng is not None:
            mu, x0 = 3.9 + 0.0999 * rng.random(), 0.001 + 0.998 * rng.random()
        else:
            sysrng = secrets.SystemRandom()
            mu, x0 = 3.9 + 0.0999 * sysrng.random(), 0.001 + 0.998 * sysrng.random()
        _write_text(path, ChaosKey(mu, x0).to_text())


def cmd_features(args):
    img = netpbm.read_pgm(args.image)
    fc = skg.extract_feature_codes(img, BlockGeometry(args.m, args.n))
    _write_text(args.out, skg.bits_to_hex(fc) + "\n")
    if args.key1:
        sk = skg.derive_subkey(read_main_key(args.key1), fc)
        _write_text(args.subkey_out, sk.hex + "\n")


def cmd_embed(args):
    cfg = _config(args)
    img = netpbm.read_pgm(args.image)
    logo = netpbm.read_pbm(args.logo)
    out = embed(img, logo, read_main_key(args.key1), read_chaos_key(args.key2),
                read_chaos_key(args.key3), cfg)
    netpbm.write_pgm(args.out, out)
    print(f"psnr,{metrics.psnr(img, out):.4f}")


def cmd_attack(args):
    params = {}
    for name in ATTACK_PARAMS[args.kind]:
        value = getattr(args, name)
        if value is None:
            raise UsageError(f"--kind {args.kind} needs --{name}")
        params[name] = value
    spec = AttackSpec(args.kind, params, args.seed)
    img = netpbm.read_pgm(args.image)
    out = spec.apply(img)
    netpbm.write_pgm(args.out, out)
    _write_csv(args.report, ["kind", "params", "seed", "psnr_vs_input"],
               [[spec.kind, spec.label(), spec.seed, _fmt(metrics.psnr(img, out))]])


def cmd_detect(args):
    cfg = EmbedConfig(delta_prime=args.delta_prime, delta=max(36.0, 1.5 * args.delta_prime),
                      len_ow=args.len_ow)
    img = netpbm.read_pgm(args.image)
    est, scan = detect(img, read_chaos_key(args.key3), cfg, max_shift=args.max_shift,
                       direction=args.direction, grid_step=args.grid_step,
                       threshold=args.threshold)
    peaks = est.peak_pair or ("", "")
    dist, direction = est.translation or ("", "")
    _write_csv(args.out, ["found", "rotation", "peak1", "peak2", "shift", "shift_direction",
                          "confidence"],
               [["yes" if est.found else "no", _fmt(est.rotation), *peaks,
                 _fmt(dist), _fmt(direction), _fmt(est.confidence)]])
    if args.cc_curve:
        _write_csv(args.cc_curve, ["angle", "cc"],
                   [[int(a), _fmt(float(c))] for a, c in zip(scan.angles, scan.cc_values)])
    if args.rectified:
        netpbm.write_pgm(args.rectified, rectify(img, est) if est.found else img)


def cmd_extract(args):
    cfg = EmbedConfig(delta=args.delta, delta_prime=args.delta / 2)
    img = netpbm.read_pgm(args.image)
    logo = extract_logo(img, read_main_key(args.key1), read_chaos_key(args.key2), cfg,
                        args.logo_dims)
    netpbm.write_pbm(args.out, logo)
    if args.reference:
        ref = netpbm.read_pbm(args.reference)
        if ref.shape != logo.shape:
            raise WatermarkError(f"reference logo is {ref.shape}, extracted {logo.shape}")
        _write_csv(None, ["ber", "nc"],
                   [[_fmt(metrics.ber(ref, logo)), _fmt(metrics.nc(ref, logo))]])


def _load_images(directory):
    if directory is None:
        from . import testimages
        return testimages.load_all()
    files = sorted(Path(directory).glob("*.pgm"))
    if not files:
        raise WatermarkError(f"no .pgm files in {directory}")
    return {f.stem: netpbm.read_pgm(f) for f in files}


def cmd_evaluate(args):
    images = _load_images(args.images)
    if args.logo:
        logo = netpbm.read_pbm(args.logo)
    else:
        from . import testimages
        logo = testimages.logo()
    keys = experiments.Keys(
        read_main_key(args.key1) if args.key1 else experiments.DEFAULT_KEY1,
        read_chaos_key(args.key2) if args.key2 else experiments.DEFAULT_KEY2,
        read_chaos_key(args.key3) if args.key3 else experiments.DEFAULT_KEY3)
    rows = experiments.run_suite(args.suite, images, logo, keys)
    experiments.write_csv(args.out, rows)


def cmd_correlate(args):
    b = chaos.sign_sequence(read_chaos_key(args.key), args.length)
    max_lag = args.max_lag if args.max_lag is not None else args.length - 1
    lags = np.arange(-max_lag, max_lag + 1)
    ac = chaos.correlation_curve(b, b, max_lag)
    header, cols = ["tau", "ac"], [lags, ac]
    if args.key_b:
        b2 = chaos.sign_sequence(read_chaos_key(args.key_b), args.length)
        header.append("cc")
        cols.append(chaos.correlation_curve(b, b2, max_lag))
    rows = [[int(t)] + [_fmt(float(c[i])) for c in cols[1:]] for i, t in enumerate(lags)]
    _write_csv(args.out, header, rows)


# -- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = Parser(prog="scramblemark", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=Parser)

    k = sub.add_parser("keygen", help="generate a main key and logistic-map keys")
    k.add_argument("--key1-bits", type=int, choices=(128, 256, 512), default=128)
    k.add_argument("--out", help="main key file (hex); stdout if omitted")
    k.add_argument("--chaos-out", action="append", metavar="FILE",
                   help="write a (mu, x0) key here; repeat for several keys")
    k.add_argument("--seed", type=int, help="derive keys from this seed (reproducible)")
    k.set_defaults(func=cmd_keygen)

    f = sub.add_parser("features", help="feature codes of an image")
    f.add_argument("--image", required=True)
    f.add_argument("--m", type=int, default=100)
    f.add_argument("--n", type=int, default=68)
    f.add_argument("--out")
    f.add_argument("--key1", help="also derive the sub key from this main key")
    f.add_argument("--subkey-out")
    f.set_defaults(func=cmd_features)

    e = sub.add_parser("embed", help="embed a logo and the orientation template")
    e.add_argument("--image", required=True)
    e.add_argument("--logo", required=True)
    e.add_argument("--key1", required=True)
    e.add_argument("--key2", required=True)
    e.add_argument("--key3", required=True)
    e.add_argument("--delta", type=float, default=36.0)
    e.add_argument("--delta-prime", type=float, default=18.0)
    e.add_argument("--theta", default="60", help="ray half-angle in degrees, or 'key'")
    e.add_argument("--len-ow", type=int, default=150)
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_embed)

    a = sub.add_parser("attack", help="apply one attack")
    a.add_argument("--image", required=True)
    a.add_argument("--kind", required=True, choices=sorted(ATTACK_PARAMS))
    a.add_argument("--sigma", type=float)
    a.add_argument("--quality", type=int)
    a.add_argument("--angle", type=float)
    a.add_argument("--distance", type=float)
    a.add_argument("--direction", type=float, help="degrees ccw; 30 clockwise is -30")
    a.add_argument("--fraction", type=float)
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--out", required=True)
    a.add_argument("--report", help="CSV echo of the attack spec (default stdout)")
    a.set_defaults(func=cmd_attack)

    d = sub.add_parser("detect", help="find the orientation template")
    d.add_argument("--image", required=True)
    d.add_argument("--key3", required=True)
    d.add_argument("--delta-prime", type=float, default=18.0)
    d.add_argument("--len-ow", type=int, default=150)
    d.add_argument("--max-shift", type=int, default=0)
    d.add_argument("--direction", type=float)
    d.add_argument("--grid-step", type=int)
    d.add_argument("--threshold", type=float, default=0.5)
    d.add_argument("--out", help="estimate CSV (default stdout)")
    d.add_argument("--cc-curve")
    d.add_argument("--rectified")
    d.set_defaults(func=cmd_detect)

    x = sub.add_parser("extract", help="blind logo extraction")
    x.add_argument("--image", required=True)
    x.add_argument("--key1", required=True)
    x.add_argument("--key2", required=True)
    x.add_argument("--logo-dims", type=_dims, default=(64, 64))
    x.add_argument("--delta", type=float, default=36.0)
    x.add_argument("--out", required=True)
    x.add_argument("--reference")
    x.set_defaults(func=cmd_extract)

    v = sub.add_parser("evaluate", help="run an experiment grid")
    v.add_argument("--suite", required=True, choices=experiments.SUITES)
    v.add_argument("--images", help="directory of .pgm files (default: bundled sample images)")
    v.add_argument("--logo")
    v.add_argument("--key1")
    v.add_argument("--key2")
    v.add_argument("--key3")
    v.add_argument("--out", required=True)
    v.set_defaults(func=cmd_evaluate)

    c = sub.add_parser("correlate", help="auto/cross-correlation curves of a key")
    c.add_argument("--key", required=True)
    c.add_argument("--key-b", help="second key for the cross-correlation")
    c.add_argument("--length", type=int, default=1000)
    c.add_argument("--max-lag", type=int)
    c.add_argument("--out")
    c.set_defaults(func=cmd_correlate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"scramblemark: error: {exc}", file=sys.stderr)
        return 1
    except (WatermarkError, OSError, ValueError) as exc:
        print(f"scramblemark: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
