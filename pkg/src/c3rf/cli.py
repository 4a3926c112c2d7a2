"""/c3rf/src/c3rf/cli.py
Command-line front end.

Exit codes: 0 success, 1 usage, 2 unreadable or malformed input,
3 inference failure, 4 enumeration cap exceeded.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from .candidates import CandidateSet, divmbest
from .constants import (
    DEFAULT_LAMBDAS,
    DEFAULT_POTENTIAL_LOW,
    DEFAULT_RADIUS_FRACTIONS,
    DEFAULT_SAMPLE_COUNTS,
    DEFAULT_TEMPERATURES,
    SWEEP_TEMPERATURES,
    TOOL_NAME,
    TOOL_VERSION,
)
from .core.base import run_header
from .core.dtypes import CVMode, InferenceMethod, LossName, PredictorKind, SolverName, TuneObjective
from .core.errors import C3RFError
from .core.graph import GibbsModel, as_configuration, gen_grid
from .core.types import BPSettings, CVPlan, LossKind, ParameterGrid, PredictorConfig
from .corpus import Corpus
from .experiments import (
    compare_predictors,
    export_marginals,
    gen_corpus,
    rank_correlation,
    summarize_sweep,
    sweep_bethe,
)
from .factory import FormatFactory, InferenceFactory
from .formats.documents import (
    CandidatesReader,
    CandidatesWriter,
    CorpusReader,
    CorpusWriter,
    MarginalsWriter,
    PosteriorWriter,
    PredictionWriter,
)
from .formats.graph import GraphWriter
from .formats.tabular import table_to_string
from .hamming.ball import HammingBall, radius_from_fraction
from .predict import loss_kind, predict
from .tune import grid_search

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2

# argparse bookkeeping that is not a user flag
_INTERNAL_ARGS = {"func", "command", "verbose"}


class ArgumentParser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _int_list(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _header(args: argparse.Namespace) -> Dict[str, Any]:
    flags = {k: v for k, v in vars(args).items() if k not in _INTERNAL_ARGS}
    return run_header(args.command, flags, getattr(args, "seed", None))


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _settings(args: argparse.Namespace) -> BPSettings:
    """BP settings from --bp-config, overridden by explicit flags."""
    values: Dict[str, Any] = {}
    if getattr(args, "bp_config", None):
        values.update(json.loads(Path(args.bp_config).read_text()))
    for key in ("max_iterations", "convergence_tol", "damping"):
        if getattr(args, key, None) is not None:
            values[key] = getattr(args, key)
    return BPSettings.from_dict(values)


def _model(args: argparse.Namespace) -> GibbsModel:
    model = FormatFactory.read_graph(args.graph)
    if getattr(args, "temperature", None) is not None:
        model = model.with_temperature(args.temperature)
    return model


def _candidates(path: str, model: Optional[GibbsModel] = None) -> CandidateSet:
    cands = CandidatesReader().loads(Path(path).read_text())
    return cands.verify(model) if model is not None else cands


def _corpus(path: str) -> Corpus:
    return CorpusReader().loads(Path(path).read_text())


def _loss(args: argparse.Namespace, default_classes: int) -> LossKind:
    classes = args.num_classes if getattr(args, "num_classes", None) else default_classes
    return loss_kind(args.loss, classes)


# Subcommands

def cmd_gen_grid(args: argparse.Namespace) -> int:
    model = gen_grid(args.n, args.seed, args.potential_low, args.num_labels, args.temperature)
    writer = FormatFactory.create_writer(args.out)
    if isinstance(writer, GraphWriter):
        _emit(writer.dumps(model, _header(args)), args.out)
    else:
        _emit(writer.dumps(model), args.out)
    return EXIT_OK


def cmd_infer(args: argparse.Namespace) -> int:
    model = _model(args)
    method = InferenceMethod.EXACT if args.exact else InferenceMethod(args.method)
    strategy = InferenceFactory.create(model, method, _settings(args))
    marginals, log_z = strategy.infer(model)
    label = "exact" if strategy.exact else "bethe"
    _emit(MarginalsWriter(log_z, label).dumps(marginals, _header(args)), args.out)
    return EXIT_OK


def cmd_mass(args: argparse.Namespace) -> int:
    model = _model(args)
    if args.center is not None:
        centers = [as_configuration(model.graph, args.center)]
    else:
        centers = [c.configuration for c in _candidates(args.candidates, model)]
    n = model.num_variables
    radius = args.radius if args.radius is not None else radius_from_fraction(args.radius_fraction, n)
    strategy = InferenceFactory.create(model, InferenceMethod(args.method), _settings(args),
                                       saturation_cap=args.saturation_cap)
    results = []
    for center in centers:
        ball = HammingBall(center, radius)
        results.append((ball, strategy.constrained(model, ball)))
    _emit(PosteriorWriter().dumps(results, _header(args)), args.out)
    return EXIT_OK


def cmd_divmbest(args: argparse.Namespace) -> int:
    model = _model(args)
    cands = divmbest(model, args.m, args.lam, SolverName(args.solver), _settings(args))
    _emit(CandidatesWriter().dumps(cands, _header(args)), args.out)
    return EXIT_OK


def cmd_predict(args: argparse.Namespace) -> int:
    model = _model(args)
    cands = _candidates(args.candidates, model)
    loss = _loss(args, int(np.max(model.graph.cardinalities)))
    config = PredictorConfig(PredictorKind(args.kind), args.radius_fraction, model.temperature, loss)
    result = predict(model, cands, config, _settings(args), InferenceMethod(args.method), args.workers)
    _emit(PredictionWriter().dumps(result, _header(args)), args.out)
    return EXIT_OK


def cmd_tune(args: argparse.Namespace) -> int:
    corpus = _corpus(args.corpus)
    grid = ParameterGrid(tuple(args.lambdas), tuple(args.radius_fractions), tuple(args.temperatures))
    plan = CVPlan(args.folds, args.permutations, args.seed, CVMode(args.cv_mode))
    result = grid_search(
        corpus, grid, plan,
        kind=PredictorKind(args.kind),
        loss=_loss(args, corpus.num_classes),
        objective=TuneObjective(args.objective),
        num_candidates=args.m,
        settings=_settings(args),
        method=InferenceMethod(args.method),
        solver=SolverName(args.solver),
        pin_temperature=args.pin_temperature,
    )
    _emit(table_to_string(result.report, _header(args)), args.out)
    lam, rho, T = result.best
    if args.out is not None:
        print(json.dumps({"objective": result.objective.value, "lambda": lam, "rho": rho, "T": T}))
    return EXIT_OK


def cmd_sweep_bethe(args: argparse.Namespace) -> int:
    df = sweep_bethe(args.sizes, args.runs, args.samples, args.seed, args.potential_low, _settings(args))
    if args.summary:
        df = summarize_sweep(df)
    _emit(table_to_string(df, _header(args)), args.out)
    return EXIT_OK


def cmd_rank_corr(args: argparse.Namespace) -> int:
    corpus = _corpus(args.corpus)
    df = rank_correlation(
        corpus, args.radius_fractions, args.temperatures, args.m, args.lam,
        _settings(args), InferenceMethod(args.method), SolverName(args.solver),
    )
    _emit(table_to_string(df, _header(args)), args.out)
    return EXIT_OK


def cmd_export_marginals(args: argparse.Namespace) -> int:
    model = _model(args)
    cands = _candidates(args.candidates, model)
    frames = export_marginals(
        model, cands, args.radius_fractions, args.temperatures, _settings(args), InferenceMethod(args.method)
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    header = _header(args)
    for (rho, T), df in frames.items():
        (out / f"marginals_rho{rho:g}_T{T:g}.csv").write_text(table_to_string(df, header))
    return EXIT_OK


def cmd_gen_corpus(args: argparse.Namespace) -> int:
    corpus = gen_corpus(args.instances, args.n, args.num_labels, args.seed, args.potential_low)
    _emit(CorpusWriter().dumps(corpus, _header(args)), args.out)
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    corpus = _corpus(args.corpus)
    curves, classwise = compare_predictors(
        corpus,
        [PredictorKind(k) for k in args.kinds.split(",")],
        args.ms, args.lam, args.radius_fraction, args.temperature,
        _loss(args, corpus.num_classes), _settings(args),
        InferenceMethod(args.method), SolverName(args.solver),
    )
    header = _header(args)
    _emit(table_to_string(curves, header), args.out)
    if args.classwise_out:
        Path(args.classwise_out).write_text(table_to_string(classwise, header))
    return EXIT_OK


# Parser

def _add_bp_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--bp-config", help="JSON file of BP settings")
    p.add_argument("--max-iterations", type=int, default=None)
    p.add_argument("--tol", dest="convergence_tol", type=float, default=None)
    p.add_argument("--damping", type=float, default=None)


def _add_method(p: argparse.ArgumentParser, default: str = InferenceMethod.AUTO.value) -> None:
    p.add_argument("--method", choices=[m.value for m in InferenceMethod], default=default)


def _add_loss(p: argparse.ArgumentParser) -> None:
    p.add_argument("--loss", choices=[m.value for m in LossName], default=LossName.HAMMING.value)
    p.add_argument("--num-classes", type=int, default=None, help="class count for IOU")


def _add_solver(p: argparse.ArgumentParser) -> None:
    p.add_argument("--solver", choices=[s.value for s in SolverName], default=SolverName.AUTO.value)


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog=TOOL_NAME, description="Candidate constrained CRF inference and prediction")
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {TOOL_VERSION}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, func: Callable[[argparse.Namespace], int], help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        return p

    p = command("gen-grid", cmd_gen_grid, "random N x N grid CRF")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--potential-low", type=float, default=DEFAULT_POTENTIAL_LOW)
    p.add_argument("--num-labels", type=int, default=2)
    p.add_argument("--temperature", type=float, default=1.0)
    p.add_argument("--out")

    p = command("infer", cmd_infer, "marginals and log Z")
    p.add_argument("--graph", required=True)
    p.add_argument("--exact", action="store_true", help="shorthand for --method exact")
    _add_method(p, InferenceMethod.BETHE.value)
    p.add_argument("--temperature", type=float, default=None)
    _add_bp_flags(p)
    p.add_argument("--out")

    p = command("mass", cmd_mass, "Hamming-ball masses and constrained marginals")
    p.add_argument("--graph", required=True)
    centers = p.add_mutually_exclusive_group(required=True)
    centers.add_argument("--center", type=_int_list)
    centers.add_argument("--candidates")
    radii = p.add_mutually_exclusive_group(required=True)
    radii.add_argument("--radius", type=int)
    radii.add_argument("--radius-fraction", "--rho", type=float)
    p.add_argument("--saturation-cap", type=int, default=None)
    _add_method(p, InferenceMethod.BETHE.value)
    p.add_argument("--temperature", type=float, default=None)
    _add_bp_flags(p)
    p.add_argument("--out")

    p = command("divmbest", cmd_divmbest, "diverse M-best candidates")
    p.add_argument("--graph", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    _add_solver(p)
    _add_bp_flags(p)
    p.add_argument("--out")

    p = command("predict", cmd_predict, "choose one candidate")
    p.add_argument("--graph", required=True)
    p.add_argument("--candidates", required=True)
    p.add_argument("--kind", choices=[k.value for k in PredictorKind], default=PredictorKind.C3RF_FELA.value)
    p.add_argument("--radius-fraction", "--rho", type=float, default=0.0)
    p.add_argument("--temperature", type=float, default=None)
    _add_loss(p)
    _add_method(p)
    p.add_argument("--workers", type=int, default=1)
    _add_bp_flags(p)
    p.add_argument("--out")

    p = command("tune", cmd_tune, "cross-validated parameter selection")
    p.add_argument("--corpus", required=True)
    p.add_argument("--kind", choices=[k.value for k in PredictorKind], default=PredictorKind.C3RF_FELA.value)
    p.add_argument("--objective", choices=[o.value for o in TuneObjective], default=TuneObjective.ERM.value)
    p.add_argument("--m", type=int, default=10)
    p.add_argument("--lambdas", type=_float_list, default=list(DEFAULT_LAMBDAS))
    p.add_argument("--radius-fractions", type=_float_list, default=list(DEFAULT_RADIUS_FRACTIONS))
    p.add_argument("--temperatures", type=_float_list, default=list(DEFAULT_TEMPERATURES))
    p.add_argument("--pin-temperature", type=float, default=None)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--permutations", type=int, default=1)
    p.add_argument("--cv-mode", choices=[m.value for m in CVMode], default=CVMode.KFOLD.value)
    p.add_argument("--seed", type=int, default=0)
    _add_loss(p)
    _add_method(p)
    _add_solver(p)
    _add_bp_flags(p)
    p.add_argument("--out")

    p = command("sweep-bethe", cmd_sweep_bethe, "Bethe vs sampling log-mass errors")
    p.add_argument("--sizes", type=_int_list, default=[3, 4])
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--samples", type=_int_list, default=list(DEFAULT_SAMPLE_COUNTS))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--potential-low", type=float, default=DEFAULT_POTENTIAL_LOW)
    p.add_argument("--summary", action="store_true", help="mean errors instead of per-run rows")
    _add_bp_flags(p)
    p.add_argument("--out")

    p = command("rank-corr", cmd_rank_corr, "rank correlation of masses and scores")
    p.add_argument("--corpus", required=True)
    p.add_argument("--radius-fractions", type=_float_list, default=[0.0, 0.1, 0.5])
    p.add_argument("--temperatures", type=_float_list, default=list(SWEEP_TEMPERATURES))
    p.add_argument("--m", type=int, default=10)
    p.add_argument("--lambda", dest="lam", type=float, default=0.5)
    _add_method(p)
    _add_solver(p)
    _add_bp_flags(p)
    p.add_argument("--out")

    p = command("export-marginals", cmd_export_marginals, "mass-averaged marginals per radius and temperature")
    p.add_argument("--graph", required=True)
    p.add_argument("--candidates", required=True)
    p.add_argument("--radius-fractions", type=_float_list, default=[0.0, 0.1, 0.5, 1.0])
    p.add_argument("--temperatures", type=_float_list, default=list(SWEEP_TEMPERATURES))
    _add_method(p)
    _add_bp_flags(p)
    p.add_argument("--out", required=True, help="output directory")

    p = command("gen-corpus", cmd_gen_corpus, "synthetic grid corpus with sampled ground truths")
    p.add_argument("--instances", type=int, default=20)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--num-labels", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--potential-low", type=float, default=DEFAULT_POTENTIAL_LOW)
    p.add_argument("--out")

    p = command("compare", cmd_compare, "predictor performance against M")
    p.add_argument("--corpus", required=True)
    p.add_argument("--kinds", default=",".join(k.value for k in PredictorKind))
    p.add_argument("--ms", type=_int_list, default=[1, 2, 5, 10])
    p.add_argument("--lambda", dest="lam", type=float, default=0.5)
    p.add_argument("--radius-fraction", "--rho", type=float, default=0.1)
    p.add_argument("--temperature", type=float, default=1.0)
    _add_loss(p)
    _add_method(p)
    _add_solver(p)
    _add_bp_flags(p)
    p.add_argument("--out")
    p.add_argument("--classwise-out")

    return parser


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        format='%(asctime)s %(levelname)s %(message)s',
        level=logging.DEBUG if verbose else logging.WARNING,
        stream=sys.stderr,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)
    try:
        return args.func(args)
    except C3RFError as exc:
        print(f"{TOOL_NAME}: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (FileNotFoundError, IsADirectoryError, json.JSONDecodeError) as exc:
        print(f"{TOOL_NAME}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"{TOOL_NAME}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
