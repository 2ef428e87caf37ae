"""Command-line front end.

Exit codes: 0 ok, 1 verification failed, 2 parse error, 3 invalid state,
4 infeasible request, 5 numerical failure.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import channels, combinat, construct, feasibility, io
from .linalg import InvalidStateError, check_density, rank_eps, spectrum

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_PARSE = 2
EXIT_INVALID_STATE = 3
EXIT_INFEASIBLE = 4
EXIT_NUMERICAL = 5


@dataclass
class RunConfig:
    command: str
    inputs: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    seed: int = construct.DEFAULT_SEED
    output: str | None = None
    mode: str = "json"

    def __post_init__(self):
        if any(t <= 0 for t in self.tolerances.values()):
            raise ValueError("tolerances must be positive")
        if not -(2**63) <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 bits")


def _seed(value) -> int:
    if value is not None:
        return int(value)
    env = os.environ.get("REDRANK_SEED")
    return int(env) if env else construct.DEFAULT_SEED


def _emit(cfg: RunConfig, payload: dict, text: str) -> None:
    out = text if cfg.mode == "text" else io.dumps(payload, indent=1)
    print(out)


def _load_state(path) -> np.ndarray:
    M = io.matrix_from_json(io.read_json(path))
    check_density(M)
    return M


def _parse_values(arg: str) -> tuple:
    p = Path(arg)
    if p.suffix == ".json" or p.exists():
        return io.spectrum_from_json(io.read_json(p))
    try:
        return feasibility.as_spectrum([v for v in arg.split(",") if v.strip()])
    except ValueError as exc:
        raise io.FormatError(f"cannot parse spectrum {arg!r}") from exc


def cmd_minrank(cfg: RunConfig) -> int:
    if cfg.inputs.get("spectra"):
        a = io.spectrum_from_json(io.read_json(cfg.inputs["sigma1"]))
        b = io.spectrum_from_json(io.read_json(cfg.inputs["sigma2"]))
        hi = feasibility.nonzero_count(a) * feasibility.nonzero_count(b)
    else:
        s1 = _load_state(cfg.inputs["sigma1"])
        s2 = _load_state(cfg.inputs["sigma2"])
        a, b = spectrum(s1), spectrum(s2)
        hi = rank_eps(s1) * rank_eps(s2)
    rep = feasibility.min_rank_report(a, b)
    payload = {
        "min_rank": rep.min_rank,
        "max_rank": hi,
        "witness_c": [str(x) for x in rep.witness_c] if rep.witness_c is not None else None,
        "inequality_count": rep.inequality_count,
    }
    _emit(cfg, payload, f"min_rank {rep.min_rank}\nmax_rank {hi}")
    return EXIT_OK


def cmd_range(cfg: RunConfig) -> int:
    s1 = _load_state(cfg.inputs["sigma1"])
    s2 = _load_state(cfg.inputs["sigma2"])
    ranks = list(feasibility.rank_range(s1, s2))
    _emit(cfg, {"ranks": ranks}, " ".join(map(str, ranks)))
    return EXIT_OK


def cmd_construct(cfg: RunConfig) -> int:
    s1 = _load_state(cfg.inputs["sigma1"])
    s2 = _load_state(cfg.inputs["sigma2"])
    rho = construct.state_of_rank(s1, s2, cfg.inputs["rank"], seed=cfg.seed)
    rep = construct.verify_membership(rho, s1, s2, tol=cfg.tolerances.get("member_tol", construct.MEMBER_TOL))
    if cfg.output:
        io.write_json(cfg.output, io.matrix_to_json(rho))
    payload = {"rank": rep.rank, "report": rep.to_json(), "output": cfg.output}
    _emit(cfg, payload, f"rank {rep.rank} {'pass' if rep.passed else 'FAIL'}")
    return EXIT_OK if rep.passed else EXIT_VERIFY_FAIL


def cmd_verify(cfg: RunConfig) -> int:
    rho = io.matrix_from_json(io.read_json(cfg.inputs["rho"]))
    s1 = io.matrix_from_json(io.read_json(cfg.inputs["sigma1"]))
    s2 = io.matrix_from_json(io.read_json(cfg.inputs["sigma2"]))
    try:
        rep = construct.verify_membership(rho, s1, s2, tol=cfg.tolerances.get("member_tol", construct.MEMBER_TOL))
    except ValueError as exc:
        raise io.FormatError(str(exc)) from exc
    _emit(cfg, rep.to_json(), f"{'pass' if rep.passed else 'FAIL'} rank {rep.rank}")
    return EXIT_OK if rep.passed else EXIT_VERIFY_FAIL


def cmd_ineq(cfg: RunConfig) -> int:
    tuples = combinat.klyachko_inequalities(cfg.inputs["m"], cfg.inputs["r"])
    if cfg.mode == "text":
        print(combinat.format_inequalities(tuples))
    else:
        print(io.dumps([t.to_json() for t in tuples]))
    return EXIT_OK


def cmd_region(cfg: RunConfig) -> int:
    a = _parse_values(cfg.inputs["a"])
    b = _parse_values(cfg.inputs["b"])
    ok, c, binding = feasibility.region_check(a, b, cfg.inputs["r"])
    payload = {"feasible": ok, "witness_c": [str(x) for x in c] if c else None, "binding": binding}
    _emit(cfg, payload, ("true" if ok else "false") + "".join("\n  " + s for s in binding))
    return EXIT_OK


def cmd_channel(cfg: RunConfig) -> int:
    if cfg.inputs["action"] == "make":
        s2 = _load_state(cfg.inputs["sigma2"])
        kr = channels.channel_with_choi_rank(s2, cfg.inputs["m"], cfg.inputs["rank"], seed=cfg.seed)
        if cfg.output:
            io.write_json(cfg.output, io.kraus_to_json(kr))
        payload = {"choi_rank": len(kr), "tp_defect": kr.tp_defect(), "output": cfg.output}
        _emit(cfg, payload, f"choi_rank {len(kr)}")
        return EXIT_OK
    kr = io.kraus_from_json(io.read_json(cfg.inputs["kraus"]))
    info = channels.analyze(kr)
    payload = {
        "choi_rank": info["choi_rank"],
        "fixed_marginal": io.matrix_to_json(info["fixed_marginal"]),
        "trace_preserving": info["trace_preserving"],
    }
    _emit(cfg, payload, f"choi_rank {info['choi_rank']}\ntrace_preserving {info['trace_preserving']}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="redrank", description="Ranks of bipartite states with prescribed marginals.")
    ap.add_argument("--text", action="store_true", help="human-readable output instead of JSON")
    ap.add_argument("--seed", type=int, default=None, help="RNG seed (fallback: $REDRANK_SEED)")
    ap.add_argument("--member-tol", type=float, default=None)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("minrank")
    p.add_argument("--sigma1", required=True)
    p.add_argument("--sigma2", required=True)
    p.add_argument("--spectra", action="store_true", help="inputs are spectrum files")

    p = sub.add_parser("range")
    p.add_argument("--sigma1", required=True)
    p.add_argument("--sigma2", required=True)

    p = sub.add_parser("construct")
    p.add_argument("--sigma1", required=True)
    p.add_argument("--sigma2", required=True)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--seed", type=int, default=None, dest="sub_seed")
    p.add_argument("-o", "--output")

    p = sub.add_parser("verify")
    p.add_argument("--rho", required=True)
    p.add_argument("--sigma1", required=True)
    p.add_argument("--sigma2", required=True)

    p = sub.add_parser("ineq")
    isub = p.add_subparsers(dest="action", required=True)
    q = isub.add_parser("list")
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--json", action="store_true", help="JSON output (default unless --text)")

    p = sub.add_parser("region")
    rsub = p.add_subparsers(dest="action", required=True)
    q = rsub.add_parser("check")
    q.add_argument("--r", type=int, required=True)
    q.add_argument("--a", required=True, help="spectrum file or comma-separated values")
    q.add_argument("--b", required=True, help="spectrum file or comma-separated values")

    p = sub.add_parser("channel")
    csub = p.add_subparsers(dest="action", required=True)
    q = csub.add_parser("make")
    q.add_argument("--sigma2", required=True)
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--rank", type=int, required=True)
    q.add_argument("--seed", type=int, default=None, dest="sub_seed")
    q.add_argument("-o", "--output")
    q = csub.add_parser("analyze")
    q.add_argument("--kraus", required=True)
    return ap


COMMANDS = {
    "minrank": cmd_minrank,
    "range": cmd_range,
    "construct": cmd_construct,
    "verify": cmd_verify,
    "ineq": cmd_ineq,
    "region": cmd_region,
    "channel": cmd_channel,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    raw_seed = getattr(args, "sub_seed", None)
    tol = {"member_tol": args.member_tol} if args.member_tol is not None else {}
    inputs = {k: v for k, v in vars(args).items() if k not in ("text", "seed", "sub_seed", "member_tol", "command", "output")}
    text = args.text and not getattr(args, "json", False)
    try:
        cfg = RunConfig(args.command, inputs, tol, _seed(raw_seed if raw_seed is not None else args.seed),
                        getattr(args, "output", None), "text" if text else "json")
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        return COMMANDS[args.command](cfg)
    except io.FormatError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (InvalidStateError, feasibility.NormalizationError) as exc:
        print(f"invalid state: {exc}", file=sys.stderr)
        return EXIT_INVALID_STATE
    except (construct.RankOutOfRangeError, combinat.CapExceededError) as exc:
        print(f"infeasible request: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except construct.NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    raise SystemExit(main())
