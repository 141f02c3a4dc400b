"""Command-line front end.

Exit codes are a stable contract:

* 0  success (for ``conjugate``: the elements are conjugate)
* 1  ``conjugate``: certified not conjugate
* 2  malformed input (flags, config, or words)
* 3  ``conjugate``: search exhausted, conjugacy undecided
* 4  an enumeration cap was exceeded

Structured reports are JSON on stdout; tables are CSV files written
atomically (temp file + rename).
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import (
    BeyondRadius,
    CapExceeded,
    ConfigError,
    SearchExhausted,
    WordParseError,
)
from .groups import (
    bs_config,
    canonical_str,
    eval_word,
    load_config,
    parse_word,
)
from .harness import (
    clf_metadata,
    empirical_clf,
    empirical_rclf_bs,
    empirical_tclf,
    fit_bound,
    write_json,
)
from .metrics import DEFAULT_CAP, bfs_ball, word_length
from .solvers import DEFAULT_CAPS, SolverCaps, conjugacy_report, rho, stabilizer_lattice

EXIT_OK = 0
EXIT_NOT_CONJUGATE = 1
EXIT_BAD_INPUT = 2
EXIT_EXHAUSTED = 3
EXIT_CAP = 4


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="conjlen",
        description="Exact conjugacy solving and conjugator-length measurement.",
    )
    parser.add_argument("--seed", type=int, default=20_240_101,
                        help="seed recorded in metadata for reproducible runs")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config(p):
        p.add_argument("--config", required=True, help="group config JSON (path or literal)")

    p = sub.add_parser("normal-form", help="canonical form of a word")
    add_config(p)
    p.add_argument("word")

    p = sub.add_parser("conjugate", help="decide conjugacy of two words")
    add_config(p)
    p.add_argument("word_u")
    p.add_argument("word_v")
    p.add_argument("--radius", type=int, default=None,
                   help="certify the witness length against a ball of this radius")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)

    p = sub.add_parser("ball", help="write a Cayley ball as CSV")
    add_config(p)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--out", required=True)

    p = sub.add_parser("wordlen", help="exact word length via a BFS ball")
    add_config(p)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("word")

    p = sub.add_parser("clf", help="empirical conjugacy length table")
    add_config(p)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--radius", type=int, default=None, help="conjugator ball radius")
    p.add_argument("--ball-radius", type=int, default=None)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--model", choices=["linear", "exponential"], default="linear")
    p.add_argument("--out", required=True, help="CSV path; metadata JSON goes beside it")

    p = sub.add_parser("tclf", help="twisted conjugacy length table for the action matrix")
    add_config(p)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--out", required=True)

    p = sub.add_parser("rclf", help="restricted conjugacy table for BS(1, m) kernel powers")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--r-max", type=int, required=True)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--out", required=True)

    p = sub.add_parser("rho", help="covering radius of a centralizer projection lattice")
    add_config(p)
    p.add_argument("--x", required=True, help="kernel vector, comma separated")
    p.add_argument("--y", required=True, help="acting exponent vector, comma separated")

    return parser


def _vector(text):
    return tuple(int(c) for c in text.split(",") if c.strip() != "")


def _action_matrix(cfg):
    if cfg.family == "semidirect":
        if not cfg.phi_gens:
            raise ConfigError("tclf needs an action matrix; k = 0 has none")
        return cfg.phi_gens[0]
    return cfg.matrix_m


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_BAD_INPUT if exc.code else EXIT_OK

    try:
        return _dispatch(args)
    except (ConfigError, WordParseError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (CapExceeded, BeyondRadius) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except SearchExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED


def _dispatch(args) -> int:
    if args.command == "rclf":
        table = empirical_rclf_bs(args.m, args.r_max, cap=args.cap)
        cfg = bs_config(args.m)
        table.to_csv(args.out, cfg)
        fits = {"linear": fit_bound(table, "linear")}
        write_json(_meta_path(args.out), clf_metadata(cfg, table, fits, seed=args.seed))
        return EXIT_OK

    cfg = load_config(args.config)

    if args.command == "normal-form":
        el = eval_word(cfg, parse_word(cfg, args.word))
        print(canonical_str(el))
        return EXIT_OK

    if args.command == "conjugate":
        u = eval_word(cfg, parse_word(cfg, args.word_u))
        v = eval_word(cfg, parse_word(cfg, args.word_v))
        ball = bfs_ball(cfg, args.radius, args.cap) if args.radius is not None else None
        report = conjugacy_report(cfg, u, v, DEFAULT_CAPS, ball)
        print(report.to_json(cfg))
        if report.search_exhausted:
            return EXIT_EXHAUSTED
        return EXIT_OK if report.conjugate else EXIT_NOT_CONJUGATE

    if args.command == "ball":
        ball = bfs_ball(cfg, args.radius, args.cap)
        import os
        import tempfile

        directory = os.path.dirname(os.path.abspath(args.out))
        fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
        os.close(fd)
        ball.to_csv(tmp)
        os.replace(tmp, args.out)
        return EXIT_OK

    if args.command == "wordlen":
        ball = bfs_ball(cfg, args.radius, args.cap)
        el = eval_word(cfg, parse_word(cfg, args.word))
        print(word_length(ball, el))
        return EXIT_OK

    if args.command == "clf":
        table = empirical_clf(
            cfg,
            args.n_max,
            ball_radius=args.ball_radius,
            conjugator_radius=args.radius,
            cap=args.cap,
        )
        table.to_csv(args.out, cfg)
        fits = {args.model: fit_bound(table, args.model)}
        write_json(_meta_path(args.out), clf_metadata(cfg, table, fits, seed=args.seed))
        return EXIT_OK

    if args.command == "tclf":
        table = empirical_tclf(cfg.d, _action_matrix(cfg), args.n_max, cap=args.cap)
        table.to_csv(args.out)
        write_json(_meta_path(args.out), {"kind": "tclf", "meta": table.meta, "seed": args.seed})
        return EXIT_OK

    if args.command == "rho":
        value = rho(cfg, _vector(args.x), _vector(args.y))
        lat = stabilizer_lattice(cfg, _vector(args.x), _vector(args.y))
        print(
            json.dumps(
                {
                    "rho": value,
                    "lattice_index": lat.index,
                    "axis_orders": list(lat.axis_orders),
                    "basis": [list(r) for r in lat.basis.data],
                }
            )
        )
        return EXIT_OK

    raise ConfigError(f"unknown command {args.command!r}")


def _meta_path(out):
    return (out[:-4] if out.endswith(".csv") else out) + ".meta.json"


def run():
    raise SystemExit(main())


if __name__ == "__main__":
    run()
