"""Command-line pipeline: generate, dissim, cluster, build, evaluate, sweep.

Exit codes: 0 on success, 2 for configuration errors, 3 for data or
invariant errors. All error messages start with "error:" on a single line.
All randomness flows from --seed; outputs are byte-reproducible.
"""

import argparse
import csv
import json
import os
import sys
from pathlib import Path

from . import clustering, dictionary, dissimilarity, manifolds, pod, snapshots

EXIT_CONFIG = 2
EXIT_DATA = 3


class ConfigError(Exception):
    pass


def _load_snapshots(path):
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"input file {path} does not exist")
    with open(path, "rb") as fh:
        magic = fh.read(4)
    if magic == b"ROMD":
        return snapshots.load_binary(path)
    return snapshots.load_csv(path)


def _inner_product(args):
    weights = getattr(args, "weights", None)
    if weights is None:
        return snapshots.InnerProduct()
    if not Path(weights).exists():
        raise ConfigError(f"weights file {weights} does not exist")
    return snapshots.load_diagonal_weights(weights)


def _threads(args):
    value = args.threads
    if value is None:
        value = os.environ.get("ROMDICT_THREADS")
    if value is None:
        return os.cpu_count() or 1
    n = int(value)
    if n < 1:
        raise ConfigError("--threads must be a positive integer")
    return n


def _parse_range(text):
    if ":" in text:
        lo, hi = text.split(":", 1)
        values = list(range(int(lo), int(hi) + 1))
    else:
        values = [int(x) for x in text.split(",") if x]
    if not values:
        raise ConfigError(f"empty range {text!r}")
    return values


def cmd_generate(args):
    try:
        spec_text = Path(args.spec).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read spec file: {exc}") from exc
    try:
        payload = json.loads(spec_text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {args.spec}: {exc}") from exc
    if args.seed is not None:
        payload["seed"] = args.seed
    try:
        spec = manifolds.ManifoldSpec.from_json(json.dumps(payload))
    except TypeError as exc:
        raise ConfigError(f"bad manifold spec: {exc}") from exc
    data = manifolds.generate(spec)
    if args.format == "csv":
        snapshots.save_csv(args.out, data)
    else:
        snapshots.save_binary(args.out, data)
    return 0


def cmd_dissim(args):
    data = _load_snapshots(args.input)
    ip = _inner_product(args)
    D = dissimilarity.dissim_matrix(data, ip, squared=args.squared)
    D.to_csv(args.out)
    return 0


def cmd_cluster(args):
    data = _load_snapshots(args.input)
    ip = _inner_product(args)
    D = dissimilarity.dissim_matrix(data, ip, squared=True)
    outcome = clustering.pam(
        D, args.k, seed=args.seed, restarts=args.restarts
    )
    outcome.partition.to_csv(args.out)
    return 0


def _build_artifacts(args, data, ip, out_dir):
    dct = dictionary.build_dictionary(
        data, ip, args.k, args.n, seed=args.seed, restarts=args.restarts
    )
    report = dictionary.evaluate(data, ip, dct, baselines=args.baselines)
    out_dir.mkdir(parents=True, exist_ok=True)
    dct.partition.to_csv(out_dir / "partition.csv")
    for k, basis in enumerate(dct.bases):
        pod.save_basis(out_dir / f"basis_{k:03d}.bin", basis, dct.partition.members(k))
    report.to_json(out_dir / "report.json")
    return report


def cmd_build(args):
    data = _load_snapshots(args.input)
    ip = _inner_product(args)
    _build_artifacts(args, data, ip, Path(args.out))
    return 0


def cmd_evaluate(args):
    data = _load_snapshots(args.input)
    ip = _inner_product(args)
    art_dir = Path(args.dict)
    report_path = art_dir / "report.json"
    if not report_path.exists():
        raise ConfigError(f"{art_dir} holds no report.json (run build first)")
    config = json.loads(report_path.read_text())["config"]
    partition = clustering.load_partition_csv(art_dir / "partition.csv")
    bases = tuple(
        pod.load_basis(art_dir / f"basis_{k:03d}.bin")[0]
        for k in range(partition.n_clusters)
    )
    dct = dictionary.RomDictionary(partition, bases, config)
    report = dictionary.evaluate(data, ip, dct, baselines=args.baselines)
    report.to_json(args.out)
    return 0


def cmd_sweep(args):
    data = _load_snapshots(args.input)
    ip = _inner_product(args)
    k_values = _parse_range(args.k_range)
    n_values = _parse_range(args.n_range)
    rows = []
    for K in k_values:
        for N in n_values:
            dct = dictionary.build_dictionary(
                data, ip, K, N, seed=args.seed, restarts=args.restarts
            )
            report = dictionary.evaluate(data, ip, dct, baselines=args.baselines)
            row = {"K": K, "N": N, "total_cost": report.total_cost}
            for name in args.baselines:
                row[name] = report.baseline_costs[name]
            rows.append(row)
    fieldnames = ["K", "N", "total_cost", *args.baselines]
    with open(args.out, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
    return 0


def _baseline_list(text):
    names = [x for x in text.split(",") if x]
    for name in names:
        if name not in dictionary.BASELINE_NAMES:
            raise argparse.ArgumentTypeError(
                f"unknown baseline {name!r}; choose from {dictionary.BASELINE_NAMES}"
            )
    return names


def build_parser():
    parser = argparse.ArgumentParser(
        prog="romdict",
        description="Local reduced-order basis dictionaries from snapshot sets.",
    )
    parser.add_argument("--threads", default=None, help="worker thread budget")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a synthetic snapshot manifold")
    p.add_argument("--spec", required=True, help="manifold spec JSON file")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=None, help="override the spec seed")
    p.add_argument("--format", choices=("bin", "csv"), default="bin")
    p.set_defaults(func=cmd_generate)

    def io_common(p, weights=True):
        p.add_argument("--input", required=True, help="snapshot file (bin or csv)")
        if weights:
            p.add_argument("--weights", default=None, help="diagonal weight file")
        p.add_argument("--out", required=True)

    p = sub.add_parser("dissim", help="export the sine dissimilarity matrix")
    io_common(p)
    p.add_argument("--squared", action="store_true")
    p.set_defaults(func=cmd_dissim)

    p = sub.add_parser("cluster", help="PAM partition under the sine dissimilarity")
    io_common(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=5)
    p.set_defaults(func=cmd_cluster)

    for name, fn in (("build", cmd_build), ("sweep", cmd_sweep)):
        p = sub.add_parser(name)
        io_common(p)
        if name == "build":
            p.add_argument("--k", type=int, required=True)
            p.add_argument("--n", type=int, required=True)
        else:
            p.add_argument("--k-range", required=True, help="e.g. 1:6 or 2,4,8")
            p.add_argument("--n-range", required=True)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--restarts", type=int, default=5)
        p.add_argument("--baselines", type=_baseline_list, default=[])
        p.set_defaults(func=fn)

    p = sub.add_parser("evaluate", help="re-evaluate stored dictionary artifacts")
    io_common(p)
    p.add_argument("--dict", required=True, help="directory written by build")
    p.add_argument("--baselines", type=_baseline_list, default=[])
    p.set_defaults(func=cmd_evaluate)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _threads(args)  # validated; numerical kernels are BLAS-threaded
        if getattr(args, "k", None) is not None and args.k < 1:
            raise ConfigError("--k must be positive")
        if getattr(args, "n", None) is not None and args.n < 1:
            raise ConfigError("--n must be positive")
        if getattr(args, "restarts", None) is not None and args.restarts < 1:
            raise ConfigError("--restarts must be positive")
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
