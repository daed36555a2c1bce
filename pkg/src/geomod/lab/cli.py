"""Command-line entry point.

    geomod [--config PATH] [--seed S] [--out PATH] [--threads T] COMMAND ...

Commands: sample, graph, decompose, optimize, transport, experiment NAME.
Global flags may also follow the command.
"""

from __future__ import annotations

import argparse
import logging
import sys

from ..domain import sample
from ..errors import GeomodError
from ..functional import CSV_COLUMNS, decompose
from ..geograph import build_graph
from ..optimizer import OPTIMIZERS, optimize
from ..transport import build_quantile_map, sup_deviation, tl1_surrogate
from .config import ExperimentConfig
from .csvio import format_csv, open_out
from .experiments import EXPERIMENTS, run_experiment


def _global_flags(parser, suppress: bool):
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--config", default=default, help="JSON experiment config")
    parser.add_argument("--seed", type=int, default=default, help="base seed override")
    parser.add_argument("--out", default=default, help="output path (default stdout)")
    parser.add_argument("--threads", type=int, default=default, help="worker processes")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="geomod", description=__doc__.split("\n")[0])
    _global_flags(p, suppress=False)
    p.add_argument("-v", "--verbose", action="store_true")
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("sample", parents=[common], help="write a seeded point cloud")
    sp.add_argument("--n", type=int)

    for name, text in (("graph", "write the weighted edge list"),
                       ("decompose", "modularity decomposition of the configured partition"),
                       ("optimize", "maximize modularity with at most K clusters")):
        sp = sub.add_parser(name, parents=[common], help=text)
        sp.add_argument("--n", type=int)
        sp.add_argument("--eps", type=float)
        if name == "optimize":
            sp.add_argument("--method", choices=sorted(OPTIMIZERS))
            sp.add_argument("--labels-out", help="path for the vertex_index,label file")

    sp = sub.add_parser("transport", parents=[common],
                        help="quantile map diagnostics (d = 1)")
    sp.add_argument("--n", type=int)

    sp = sub.add_parser("experiment", parents=[common], help="run a configured experiment")
    sp.add_argument("name", choices=sorted(EXPERIMENTS))
    return p


def _config(args) -> ExperimentConfig:
    if not args.config:
        raise GeomodError("--config is required")
    cfg = ExperimentConfig.load(args.config)
    return cfg.with_overrides(seed=args.seed, threads=args.threads, output=args.out)


def _n(args, cfg):
    n = args.n if getattr(args, "n", None) else (cfg.n[0] if cfg.n else None)
    if n is None:
        raise GeomodError("give --n or an n grid in the config")
    return n


def _eps(args, cfg, n):
    return args.eps if getattr(args, "eps", None) else cfg.eps_for(0, n)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = _config(args)
        out = args.out or cfg.output
        if args.command == "experiment":
            table = run_experiment(cfg, args.name)
            text = format_csv(table.header, table.columns, table.rows)
        elif args.command == "sample":
            text = sample(cfg.domain, cfg.density, _n(args, cfg), cfg.seed).to_csv()
        else:
            n = _n(args, cfg)
            cloud = sample(cfg.domain, cfg.density, n, cfg.seed)
            header = {"command": args.command, "n": n, "seed": cfg.seed, **cfg.resolved()}
            if args.command == "transport":
                tmap = build_quantile_map(cfg.density, cloud)
                dev = sup_deviation(tmap)
                part = cfg.partition
                u_n = (part.induce(cloud).labels == 0).astype(float)
                tl1 = tl1_surrogate(tmap, part.regions[0], u_n)
                text = format_csv(header, ["n", "seed", "sup", "lil", "tl1_surrogate"],
                                  [[n, cfg.seed, dev.sup,
                                    float("nan") if dev.lil is None else dev.lil, tl1]])
            else:
                eps = _eps(args, cfg, n)
                g = build_graph(cloud, cfg.kernel, eps)
                header["eps"] = eps
                if args.command == "graph":
                    text = "# " + g.header_json() + "\n" + g.edge_list_csv()
                elif args.command == "decompose":
                    rep = decompose(g, cfg.partition.induce(cloud), cfg.alpha, cfg.K)
                    text = format_csv(header, list(CSV_COLUMNS), [rep.row()])
                else:
                    res = optimize(g, cfg.alpha, cfg.K, args.method or cfg.optimizer, cfg.seed)
                    text = res.csv(g)
                    if args.labels_out:
                        with open_out(args.labels_out) as fh:
                            fh.write(res.labels_csv())
        with open_out(out) as fh:
            fh.write(text)
    except (GeomodError, ValueError, OSError) as exc:
        print(f"geomod: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
