"""Command-line entry point for hyperswitch experiments."""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, List, Optional

from config import settings
from exceptions import (
    ChiSquareValidityError,
    ContractViolation,
    GuardExceeded,
    HyperswitchError,
    InsufficientGreenEdgesError,
    ParamsValidationError,
    RejectBudgetExceeded,
    SequenceFormatError,
    UnknownInstanceError,
)
from models import SCHEMA_VERSION, RunConfig, SimpleGraph
from services.coupling import coupled_generate
from services.generators import sample_iid, sample_regular, sample_sequential, trial_rng
from services.metrics import get_metrics
from services.oracle import count_preimages, enumerate_regular, find_loose_hamilton, plant_loose_cycle, validate_loose_cycle
from services.params import derive_params
from services.pipeline import RESAMPLE, SINGLE, run_pipeline
from services.stats import (
    SAMPLERS,
    double_count,
    embedding_pilot,
    embedding_trend,
    event_frequencies,
    expectation_checks,
    fb_audit,
    phi_checks,
    pipeline_law,
    redswap_uniformity,
    resolve_sample_size,
    uniformity_test,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_ABORT = 2
EXIT_FAILED = 3

TEXT_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
JSON_FORMAT = '{"time": "%(asctime)s", "name": "%(name)s", "level": "%(levelname)s", "message": "%(message)s"}'


class Refused(Exception):
    """Command-line usage that is rejected before any work starts."""


def configure_logging(level: Optional[str] = None) -> None:
    logging.basicConfig(
        level=getattr(logging, (level or settings.log_level).upper()),
        format=JSON_FORMAT if settings.log_format == "json" else TEXT_FORMAT,
        stream=sys.stderr,
    )


def _instance(parser: argparse.ArgumentParser, red_edges: bool = False) -> None:
    parser.add_argument("--n", type=int, required=True, help="vertex count")
    parser.add_argument("--d", type=int, required=True, help="degree")
    parser.add_argument("--k", type=int, default=3, help="edge size")
    if red_edges:
        parser.add_argument("--red-edges", type=int, default=None,
                            help="override the number of red edges")


def _seeded(parser: argparse.ArgumentParser, trials: bool = True) -> None:
    parser.add_argument("--seed", type=int, default=None,
                        help="master seed (default: HYPERSWITCH_SEED)")
    if trials:
        parser.add_argument("--N", dest="trials", type=int, required=True, help="number of trials")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperswitch", description=__doc__)
    parser.add_argument("--log-level", default=None, help="logging level (default: HYPERSWITCH_LOG_LEVEL)")
    parser.add_argument("--metrics-out", default=None, help="write prometheus metrics to this file")
    parser.add_argument("--jobs", type=int, default=None, help="worker processes for trials")
    parser.add_argument("--out", default=None, help="write the primary output here instead of stdout")
    parser.add_argument("--format", choices=("json", "edgelist"), default=None,
                        help="output format (default: edgelist for enumerate, json otherwise)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="derived instance constants")
    _instance(p, red_edges=True)

    p = sub.add_parser("sample-x", help="i.i.d. sequence X")
    _instance(p)
    _seeded(p, trials=False)
    p.add_argument("--trial", type=int, default=0)

    p = sub.add_parser("sample-y", help="uniform regular sequence Y")
    _instance(p)
    _seeded(p, trials=False)
    p.add_argument("--trial", type=int, default=0)
    p.add_argument("--method", choices=("shuffle", "sequential", "coupled"), default="shuffle")

    p = sub.add_parser("pipeline", help="H(n,m) inside a d-regular k-graph")
    _instance(p)
    _seeded(p, trials=False)
    p.add_argument("--trial", type=int, default=0)
    p.add_argument("--mode", choices=(SINGLE, RESAMPLE), default=SINGLE)
    p.add_argument("--hnm-out", default=None, help="edge-list file for H(n,m)")
    p.add_argument("--tilde-out", default=None, help="edge-list file for the output k-graph")

    p = sub.add_parser("enumerate", help="all d-regular k-graphs on [n]")
    _instance(p)
    p.add_argument("--node-ceiling", type=int, default=None)

    p = sub.add_parser("hamilton", help="exact loose Hamilton cycle search")
    p.add_argument("--input", default=None, help="edge-list file")
    p.add_argument("--plant", action="store_true", help="search a planted random loose cycle")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--extra", type=int, default=0, help="extra random edges around the planted cycle")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--node-ceiling", type=int, default=None)

    p = sub.add_parser("preimages", help="count sequences mapping to a k-graph")
    p.add_argument("--input", required=True, help="edge-list file of a regular k-graph")
    p.add_argument("--filtered", action="store_true", help="count only phi-concentrated sequences")

    p = sub.add_parser("uniformity", help="chi-square uniformity against the enumerated space")
    _instance(p)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--N", dest="trials", default="auto", help="sample size or 'auto'")
    p.add_argument("--sampler", choices=SAMPLERS, default="pipeline")
    p.add_argument("--against", choices=("uniform", "exact"), default="uniform",
                   help="reference law: uniform, or the exact pipeline output law (no red prefix)")

    p = sub.add_parser("events", help="frequencies of conditioning and coupling events")
    _instance(p)
    _seeded(p)

    p = sub.add_parser("phi", help="mean and tails of phi")
    _instance(p, red_edges=True)
    _seeded(p)

    p = sub.add_parser("expect", help="E|W|, E phi and E lambda(X) against closed forms")
    _instance(p)
    _seeded(p)

    p = sub.add_parser("fb-audit", help="exact F and B on sampled sequences")
    _instance(p, red_edges=True)
    _seeded(p)

    p = sub.add_parser("double-count", help="sum of F against sum of B over a full enumeration")
    _instance(p, red_edges=True)

    p = sub.add_parser("redswap", help="conditional uniformity after the red swap")
    _instance(p, red_edges=True)
    _seeded(p)
    p.add_argument("--level", type=int, default=None)

    p = sub.add_parser("trend", help="embedding frequencies along an n-grid")
    p.add_argument("--grid", default="500,1000,2000,4000")
    p.add_argument("--C", type=float, required=True, help="d = ceil(C ln n)")
    p.add_argument("--k", type=int, default=3)
    _seeded(p)

    p = sub.add_parser("pilot", help="event frequencies at one n over several degrees, to calibrate C")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--degrees", required=True, help="comma-separated list of d")
    p.add_argument("--k", type=int, default=3)
    _seeded(p)
    return parser


def _seed(args: argparse.Namespace) -> int:
    seed = args.seed if args.seed is not None else settings.seed
    if seed is None:
        raise Refused("a seed is required: pass --seed or set HYPERSWITCH_SEED")
    return seed


def _dump(obj: Any) -> str:
    if hasattr(obj, "model_dump"):
        obj = obj.model_dump(mode="json", by_alias=True)
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(args: argparse.Namespace, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _sequence_doc(seq) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "params": seq.params.report(),
        "entries": (seq.entries + 1).tolist(),
    }


def _verdict(ok: bool) -> int:
    return EXIT_OK if ok else EXIT_FAILED


def run_command(args: argparse.Namespace) -> int:
    cmd = args.command
    jobs = args.jobs
    if args.format is None:
        args.format = "edgelist" if cmd == "enumerate" else "json"

    if cmd == "params":
        p = derive_params(args.n, args.d, args.k, red_edges=args.red_edges)
        _emit(args, _dump({"schema_version": SCHEMA_VERSION, **p.report(), "L": p.L}))
        return EXIT_OK

    if cmd in ("sample-x", "sample-y"):
        p = derive_params(args.n, args.d, args.k)
        rng = trial_rng(_seed(args), args.trial, cmd)
        if cmd == "sample-x":
            seq = sample_iid(p, rng)
        elif args.method == "sequential":
            seq = sample_sequential(p, rng)
        elif args.method == "coupled":
            seq = coupled_generate(p, rng).Y
        else:
            seq = sample_regular(p, rng)
        _emit(args, seq.to_text() if args.format == "edgelist" else _dump(_sequence_doc(seq)))
        return EXIT_OK

    if cmd == "pipeline":
        p = derive_params(args.n, args.d, args.k)
        seed = _seed(args)
        result = run_pipeline(p, trial_rng(seed, args.trial, "pipeline"), mode=args.mode,
                              master_seed=seed, trial_index=args.trial)
        if args.hnm_out:
            Path(args.hnm_out).write_text(result.hnm.to_text())
        if args.tilde_out and result.tilde_h is not None:
            Path(args.tilde_out).write_text(result.tilde_h.to_text())
        _emit(args, _dump(result))
        return EXIT_OK

    if cmd == "enumerate":
        derive_params(args.n, args.d, args.k)
        space = enumerate_regular(args.n, args.d, args.k, node_ceiling=args.node_ceiling)
        if args.format == "edgelist":
            _emit(args, "\n".join(g.to_text() for g in space.instances))
        else:
            _emit(args, _dump({
                "schema_version": SCHEMA_VERSION,
                "n": args.n, "d": args.d, "k": args.k,
                "count": space.count,
                "instances": [g.model_dump(mode="json")["edges"] for g in space.instances],
            }))
        return EXIT_OK

    if cmd == "hamilton":
        if args.plant:
            if args.n is None:
                raise Refused("--plant needs --n")
            h, _ = plant_loose_cycle(args.n, args.k, trial_rng(_seed(args), 0, "hamilton"), args.extra)
        elif args.input:
            h = SimpleGraph.from_text(Path(args.input).read_text())
        else:
            raise Refused("pass --input FILE or --plant")
        cycle = find_loose_hamilton(h, node_ceiling=args.node_ceiling)
        _emit(args, _dump({
            "schema_version": SCHEMA_VERSION,
            "n": h.n, "k": h.k, "edges": len(h.edges),
            "found": cycle is not None,
            "valid": cycle is not None and validate_loose_cycle(h, cycle),
            "cycle": [[v + 1 for v in e] for e in cycle] if cycle else None,
        }))
        return EXIT_OK

    if cmd == "preimages":
        h = SimpleGraph.from_text(Path(args.input).read_text())
        degrees = set(h.degrees())
        if len(degrees) != 1:
            raise SequenceFormatError("preimage counting needs a regular k-graph")
        p = derive_params(h.n, degrees.pop(), h.k)
        count = count_preimages(h, p, filtered=args.filtered)
        _emit(args, _dump({"schema_version": SCHEMA_VERSION, "params": p.report(),
                           "filtered": args.filtered, "count": count}))
        return EXIT_OK

    if cmd == "uniformity":
        p = derive_params(args.n, args.d, args.k)
        seed = _seed(args)
        space = enumerate_regular(args.n, args.d, args.k)
        requested = None if str(args.trials) == "auto" else int(args.trials)
        N = resolve_sample_size(space.count, requested)
        law = pipeline_law(p, space) if args.against == "exact" else None
        report = uniformity_test(args.sampler, p, space, N, seed, jobs=jobs, law=law)
        _emit(args, _dump(report))
        return _verdict(report.passed)

    if cmd == "redswap":
        p = derive_params(args.n, args.d, args.k, red_edges=args.red_edges)
        report = redswap_uniformity(p, args.trials, _seed(args), level=args.level, jobs=jobs)
        _emit(args, _dump(report))
        return _verdict(report.passed)

    if cmd == "double-count":
        report = double_count(derive_params(args.n, args.d, args.k, red_edges=args.red_edges))
        _emit(args, _dump(report))
        return _verdict(all(report.verdicts.values()))

    if cmd == "trend":
        grid = [int(x) for x in args.grid.split(",") if x.strip()]
        report = embedding_trend(grid, args.C, args.trials, _seed(args), k=args.k, jobs=jobs)
        _emit(args, _dump(report))
        return _verdict(report.verdicts["no_coupling_violations"])

    if cmd == "pilot":
        degrees = [int(x) for x in args.degrees.split(",") if x.strip()]
        report = embedding_pilot(args.n, degrees, args.trials, _seed(args), k=args.k, jobs=jobs)
        _emit(args, _dump(report))
        return _verdict(report.verdicts["no_coupling_violations"])

    red = getattr(args, "red_edges", None)
    p = derive_params(args.n, args.d, args.k, red_edges=red)
    seed = _seed(args)
    if cmd == "events":
        report = event_frequencies(p, args.trials, seed, jobs=jobs)
    elif cmd == "phi":
        report = phi_checks(p, args.trials, seed, jobs=jobs)
    elif cmd == "expect":
        report = expectation_checks(p, args.trials, seed, jobs=jobs)
    elif cmd == "fb-audit":
        report = fb_audit(p, args.trials, seed, jobs=jobs)
    else:
        raise Refused(f"unknown command {cmd}")
    _emit(args, _dump(report))
    return _verdict(all(report.verdicts.values()))


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)
    config = RunConfig(
        command=args.command,
        n=getattr(args, "n", None),
        d=getattr(args, "d", None),
        k=getattr(args, "k", None),
        trials=args.trials if isinstance(getattr(args, "trials", None), int) else None,
        seed=getattr(args, "seed", None),
        mode=getattr(args, "mode", SINGLE),
        out=args.out,
        format=args.format or "json",
        jobs=args.jobs if args.jobs is not None else settings.jobs,
        node_ceiling=getattr(args, "node_ceiling", None),
    )
    logger.info(f"[CLI_START] {config.model_dump(exclude_none=True)}")

    try:
        code = run_command(args)
    except (ParamsValidationError, SequenceFormatError, ChiSquareValidityError, Refused) as e:
        logger.error(f"[CLI_VALIDATION] {e}")
        code = EXIT_VALIDATION
    except (GuardExceeded, RejectBudgetExceeded, InsufficientGreenEdgesError) as e:
        logger.error(f"[CLI_ABORT] {e}")
        code = EXIT_ABORT
    except (UnknownInstanceError, ContractViolation) as e:
        logger.error(f"[CLI_INTERNAL] {e}")
        code = EXIT_ABORT
    except HyperswitchError as e:
        logger.error(f"[CLI_ERROR] {e}")
        code = EXIT_ABORT
    except ValueError as e:
        logger.error(f"[CLI_VALIDATION] {e}")
        code = EXIT_VALIDATION

    metrics_path = args.metrics_out or settings.metrics_path
    if metrics_path:
        Path(metrics_path).write_bytes(get_metrics())
    logger.info(f"[CLI_DONE] command={args.command} exit={code}")
    return code


if __name__ == "__main__":
    sys.exit(main())
