"""Command-line experiment harness.

Subcommands: generate | exact | estimate | resources | complement.
JSON in, JSON/CSV out; every emitted report echoes its full configuration and
master seed so any stochastic field can be reproduced bit-identically.
Exit codes: 0 success, 2 invalid configuration, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from math import comb

import numpy as np

from . import __version__
from .complexes import (
    InstanceSpec,
    dump_instance,
    generate_instance,
    instance_to_dict,
    load_instance,
)
from .extraction import (
    ObservablePair,
    SingularSystemError,
    complement_report,
    estimate_betti,
    estimate_normalized_betti,
    pipeline_context,
    resource_estimate,
)
from .homology import betti_exact, euler_check, spectral_summary
from .pipeline import BlockEncodingError, PEConfig

TRIAL_CSV_COLUMNS = [
    "trial",
    "seed_entropy",
    "beta_estimate",
    "beta_rounded",
    "p1",
    "normalized_betti",
    "samples",
    "delta",
]

RESOURCE_CSV_COLUMNS = [
    "n",
    "k",
    "kappa",
    "beta",
    "s_count",
    "slot_count",
    "eps",
    "delta",
    "this_method_cost",
    "prior_quantum_cost",
    "classical_cost",
    "depth_this_method",
    "depth_prior_quantum",
    "normalized_this_method_cost",
    "normalized_prior_cost",
    "grover_preparation_cost",
    "planned_measurement_delta",
    "sample_cost",
    "valid",
    "error",
]


def _parse_pe(text: str) -> PEConfig:
    if text == "ideal":
        return PEConfig.ideal()
    if text.startswith("bits:"):
        return PEConfig.bits(t=int(text.split(":", 1)[1]))
    if text == "bits":
        return PEConfig.bits()
    raise ValueError(f"--pe must be 'ideal' or 'bits:<t>', got {text!r}")


def _parse_pair(text: str) -> ObservablePair:
    if text == "default":
        return ObservablePair.default()
    if text.startswith("custom:"):
        with open(text.split(":", 1)[1]) as fh:
            data = json.load(fh)
        return ObservablePair(np.asarray(data["m1"], dtype=float),
                              np.asarray(data["m2"], dtype=float))
    raise ValueError(f"--pair must be 'default' or 'custom:<file>', got {text!r}")


def _parse_grid(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(part) for part in text.split(",")]


def _emit_json(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True, default=_jsonable)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    raise TypeError(f"not JSON-serializable: {type(obj)!r}")


def _emit_csv(rows: list[dict], columns: list[str], path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns, extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)


def _versions() -> dict:
    return {"bettiq": __version__, "numpy": np.__version__}


# ---------------------------------------------------------------------------
# subcommands


def _cmd_generate(args) -> int:
    params = {}
    for name in ("n", "p", "inner", "outer", "length_scale"):
        value = getattr(args, name.replace("-", "_"))
        if value is not None:
            params[name] = value
    spec = InstanceSpec(args.model, params, args.seed)
    instance = generate_instance(spec)
    if args.out:
        dump_instance(instance, args.out, spec)
    else:
        print(json.dumps(instance_to_dict(instance, spec), indent=2, sort_keys=True))
    return 0


def _cmd_exact(args) -> int:
    instance = load_instance(args.instance)
    ctx = pipeline_context(instance, args.k, convention=args.convention)
    if ctx.s_count == 0:
        raise ValueError(f"instance has no simplices at dimension k={args.k}")
    start = time.perf_counter()
    beta = betti_exact(ctx.complex, args.k)
    summary = spectral_summary(ctx.op)
    euler_ok, euler_rep = euler_check(ctx.complex)
    payload = {
        "config": {"command": "exact", "instance": str(args.instance), "k": args.k,
                   "convention": args.convention},
        "results": {
            "beta": beta,
            "s_count": ctx.s_count,
            "slot_count": ctx.slot_count,
            "kappa_laplacian": summary.kappa,
            "kernel_dim": summary.kernel_dim,
            "euler_ok": euler_ok,
            "euler": euler_rep,
        },
        "timing_seconds": time.perf_counter() - start,
        "versions": _versions(),
    }
    _emit_json(payload, args.out)
    return 0


def _trial_row(i: int, result, seed_entropy) -> dict:
    d = result.to_dict()
    return {
        "trial": i,
        "seed_entropy": seed_entropy,
        "beta_estimate": d.get("beta_estimate"),
        "beta_rounded": d.get("beta_rounded"),
        "p1": d.get("p1"),
        "normalized_betti": d.get("normalized_betti"),
        "samples": d.get("samples"),
        "delta": d.get("delta") if d.get("delta") is not None else d.get("eps_measurement"),
    }


def _cmd_estimate(args) -> int:
    if args.normalized and args.delta is None:
        raise ValueError("--normalized needs --delta (additive accuracy)")
    if not args.normalized and args.mode == "sampled" and args.eps is None:
        raise ValueError("sampled estimation needs --eps (multiplicative accuracy)")
    instance = load_instance(args.instance)
    pe = _parse_pe(args.pe)
    pair = _parse_pair(args.pair)
    master = np.random.SeedSequence(args.seed)
    config = {
        "command": "estimate",
        "instance": str(args.instance),
        "k": args.k,
        "normalized": args.normalized,
        "eps": args.eps,
        "delta": args.delta,
        "mode": args.mode,
        "convention": args.convention,
        "pe": args.pe,
        "pair": args.pair,
        "confidence": args.confidence,
        "seed": master.entropy,
        "trials": args.trials,
    }

    def run_one(seed):
        if args.normalized:
            return estimate_normalized_betti(
                instance, args.k, args.delta, pair=pair, convention=args.convention,
                pe=pe, mode=args.mode, confidence=args.confidence, seed=seed)
        return estimate_betti(
            instance, args.k, args.eps, pair=pair, convention=args.convention,
            pe=pe, mode=args.mode, confidence=args.confidence, seed=seed)

    start = time.perf_counter()
    instance_desc = instance_to_dict(instance)
    if args.trials <= 1:
        result = run_one(master)
        payload = {
            "config": config,
            "results": result.to_dict(instance=instance_desc),
            "timing_seconds": time.perf_counter() - start,
            "versions": _versions(),
        }
        _emit_json(payload, args.out)
        return 0

    children = [np.random.SeedSequence(entropy=master.entropy, spawn_key=(i,))
                for i in range(args.trials)]
    results = [run_one(child) for child in children]
    rows = [_trial_row(i, res, children[i].entropy) for i, res in enumerate(results)]
    payload = {
        "config": config,
        "results": {"trials": [res.to_dict(instance=instance_desc) for res in results]},
        "timing_seconds": time.perf_counter() - start,
        "versions": _versions(),
    }
    _emit_json(payload, args.out)
    if args.out:
        stem = args.out.rsplit(".", 1)[0]
        _emit_csv(rows, TRIAL_CSV_COLUMNS, f"{stem}.trials.csv")
    return 0


def _cmd_resources(args) -> int:
    rows = []
    for n in _parse_grid(args.n):
        for k in _parse_grid(args.k):
            row = {"n": n, "k": k, "kappa": args.kappa, "beta": args.beta,
                   "eps": args.eps, "delta": args.delta, "valid": True, "error": ""}
            try:
                if not 0 <= k <= n - 1:
                    raise ValueError(f"k={k} out of range for n={n}")
                s_count = comb(n, k + 1) if args.s_k == "dense" else int(args.s_k)
                report = resource_estimate(n, k, args.kappa, args.beta, s_count,
                                           eps=args.eps, delta=args.delta,
                                           confidence=args.confidence)
                row.update(report.to_dict())
            except ValueError as exc:
                row.update({"valid": False, "error": str(exc)})
            rows.append(row)
    if args.out:
        _emit_csv(rows, RESOURCE_CSV_COLUMNS, args.out)
    else:
        writer = csv.DictWriter(sys.stdout, fieldnames=RESOURCE_CSV_COLUMNS, extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    return 0


def _cmd_complement(args) -> int:
    instance = load_instance(args.instance)
    pe = _parse_pe(args.pe)
    start = time.perf_counter()
    report = complement_report(instance, args.k, pe=pe)
    payload = {
        "config": {"command": "complement", "instance": str(args.instance), "k": args.k,
                   "pe": args.pe},
        "results": report,
        "timing_seconds": time.perf_counter() - start,
        "versions": _versions(),
    }
    _emit_json(payload, args.out)
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bettiq",
                                     description="Betti numbers of clique complexes: "
                                                 "exact oracle and simulated pipeline.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a seeded instance file")
    gen.add_argument("--model", required=True,
                     choices=["cycle", "complete", "erdos-renyi", "octahedron", "annulus-cloud"])
    gen.add_argument("--n", type=int)
    gen.add_argument("--p", type=float, help="edge probability (erdos-renyi)")
    gen.add_argument("--inner", type=float, help="inner radius (annulus-cloud)")
    gen.add_argument("--outer", type=float, help="outer radius (annulus-cloud)")
    gen.add_argument("--length-scale", type=float, dest="length_scale")
    gen.add_argument("--seed", type=int)
    gen.add_argument("--out")
    gen.set_defaults(func=_cmd_generate)

    exact = sub.add_parser("exact", help="exact Betti number, spectrum, and Euler check")
    exact.add_argument("--instance", required=True)
    exact.add_argument("--k", type=int, required=True)
    exact.add_argument("--convention", choices=["restricted", "dual"], default="restricted")
    exact.add_argument("--out")
    exact.set_defaults(func=_cmd_exact)

    est = sub.add_parser("estimate", help="run the estimation pipeline")
    est.add_argument("--instance", required=True)
    est.add_argument("--k", type=int, required=True)
    est.add_argument("--eps", type=float, help="multiplicative accuracy target")
    est.add_argument("--delta", type=float, help="additive accuracy (normalized mode)")
    est.add_argument("--normalized", action="store_true")
    est.add_argument("--mode", choices=["exact", "sampled"], default="exact")
    est.add_argument("--convention", choices=["restricted", "dual"], default="restricted")
    est.add_argument("--pe", default="ideal", help="'ideal' or 'bits:<t>'")
    est.add_argument("--pair", default="default", help="'default' or 'custom:<json file>'")
    est.add_argument("--confidence", type=float, default=0.95)
    est.add_argument("--seed", type=int)
    est.add_argument("--trials", type=int, default=1)
    est.add_argument("--out")
    est.set_defaults(func=_cmd_estimate)

    res = sub.add_parser("resources", help="evaluate the cost formulas over a grid")
    res.add_argument("--n", required=True, help="int, comma list, or lo..hi")
    res.add_argument("--k", required=True, help="int, comma list, or lo..hi")
    res.add_argument("--kappa", type=float, required=True)
    res.add_argument("--beta", type=float, required=True)
    res.add_argument("--s-k", dest="s_k", default="dense",
                     help="simplex count, or 'dense' for the full slot count")
    res.add_argument("--eps", type=float)
    res.add_argument("--delta", type=float)
    res.add_argument("--confidence", type=float, default=0.95)
    res.add_argument("--out")
    res.set_defaults(func=_cmd_resources)

    comp = sub.add_parser("complement", help="three-way complement comparison")
    comp.add_argument("--instance", required=True)
    comp.add_argument("--k", type=int, required=True)
    comp.add_argument("--pe", default="ideal")
    comp.add_argument("--out")
    comp.set_defaults(func=_cmd_complement)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: invalid configuration: {exc}", file=sys.stderr)
        return 2
    except (SingularSystemError, BlockEncodingError, np.linalg.LinAlgError, ArithmeticError) as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
