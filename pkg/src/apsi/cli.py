"""Command-line interface.

Subcommands: induce (predict sub-event sequences), evaluate (E-ROUGE
report), baseline (random / top-one-similar), stats (corpus statistics),
serve (HTTP service exposing the same operations).

Exit codes: 0 success, 2 input error, 3 no analogous processes,
4 internal error.  File outputs get a ``<file>.manifest.json`` sidecar
recording command, configuration, input digests, and seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path
from typing import Optional

from . import __version__
from .baselines import WordVectors, baseline_random, baseline_top_one
from .config import Config, Eq4GroupFactor, Erouge2Mode, MergeStrategy
from .corpus import EventGraph, Process, load_corpus, load_corpus_with_k
from .errors import ApsiError, InputError, NoAnalogousProcessesError
from .evaluator import (
    MatchStandard,
    ReferenceSet,
    Setting,
    build_report,
    load_references,
)
from .manifest import RunManifest
from .pipeline import (
    build_representations,
    corpus_stats,
    resolve_k,
)
from .sequencer import Prediction, predict_sequence
from .taxonomy import Taxonomy, load_taxonomy
from .util import parallel_map

TAXONOMY_ENV = "APSI_TAXONOMY"
TRAIN_ENV = "APSI_TRAIN"

_EROUGE2_MODES = {
    "adjacent": Erouge2Mode.ADJACENT,
    "pairs": Erouge2Mode.ALL_ORDERED_PAIRS,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="apsi",
        description="Predict ordered sub-event sequences for unseen "
        "processes by analogy over observed process graphs.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=1, metavar="N",
                        help="worker threads for batch work (default 1)")
    common.add_argument("-o", "--out", metavar="FILE",
                        help="output file (default stdout); written with a "
                        "manifest sidecar")

    tax_opt = argparse.ArgumentParser(add_help=False)
    tax_opt.add_argument(
        "--taxonomy", metavar="SPEC",
        default=os.environ.get(TAXONOMY_ENV),
        help="taxonomy location, 'wordnet:<dir>' or 'tsv:<file>' "
        f"(default ${TAXONOMY_ENV})",
    )

    knobs = argparse.ArgumentParser(add_help=False)
    knobs.add_argument("--wv", type=float, metavar="W",
                       help="verb abstraction decay (default 0.5)")
    knobs.add_argument("--wn", type=float, metavar="W",
                       help="noun abstraction decay (default 0.5)")
    knobs.add_argument("--max-depth", type=int, metavar="D",
                       help="hypernym ancestor depth cap (default 3)")
    knobs.add_argument("--max-candidates", type=int, metavar="N",
                       help="candidate concepts per event (default 1000)")

    targets = argparse.ArgumentParser(add_help=False)
    group = targets.add_mutually_exclusive_group(required=True)
    group.add_argument("--process", metavar="NAME",
                       help="single target process, e.g. 'buy+house'")
    group.add_argument("--test", metavar="FILE",
                       help="batch targets: a corpus of test process graphs")
    targets.add_argument("--k", type=int, metavar="K",
                         help="prediction length (single-target default 4)")
    targets.add_argument("--refs", metavar="FILE",
                         help="references file; its majority length per "
                         "process overrides k in batch mode")
    targets.add_argument("--seed", type=int, metavar="N",
                         help="random seed (default 0); batch lines use "
                         "seed + line index")

    induce = sub.add_parser(
        "induce", parents=[common, tax_opt, knobs, targets],
        help="predict sub-event sequences for unseen processes",
    )
    induce.add_argument("--train", required=True, metavar="FILE",
                        help="training corpus (JSON-lines process graphs)")
    induce.add_argument("--strategy", choices=[s.value for s in MergeStrategy],
                        help="merge strategy (default instantiation)")
    induce.add_argument("--eq4", choices=[v.value for v in Eq4GroupFactor],
                        help="cross-group factor orientation "
                        "(default as_printed)")
    induce.add_argument("--dump-abstract", metavar="FILE",
                        help="also dump both abstract representations")
    induce.add_argument("--fallback", choices=["random"],
                        help="fall back to the random baseline when no "
                        "analogous processes exist")
    induce.set_defaults(handler=cmd_induce)

    evaluate = sub.add_parser(
        "evaluate", parents=[common, tax_opt],
        help="score predictions against references with E-ROUGE",
    )
    evaluate.add_argument("--pred", required=True, metavar="FILE",
                          help="predictions (JSON-lines)")
    evaluate.add_argument("--refs", required=True, metavar="FILE",
                          help="references (JSON-lines)")
    evaluate.add_argument("--standard", choices=[s.value for s in MatchStandard],
                          help="matching standard (default: both)")
    evaluate.add_argument("--setting", choices=[s.value for s in Setting],
                          help="verb-only or all-words matching "
                          "(default: both)")
    evaluate.add_argument("--erouge2", choices=sorted(_EROUGE2_MODES),
                          default="adjacent",
                          help="pair definition for E-ROUGE2 "
                          "(default adjacent)")
    evaluate.add_argument("--format", choices=["json", "markdown"],
                          default="json", help="report format (default json)")
    evaluate.set_defaults(handler=cmd_evaluate)

    baseline = sub.add_parser(
        "baseline", parents=[common, targets],
        help="run the random or top-one-similar baseline",
    )
    baseline.add_argument("--method", required=True,
                          choices=["random", "top1-jaccard", "top1-vector"])
    baseline.add_argument("--train", required=True, metavar="FILE")
    baseline.add_argument("--vectors", metavar="FILE",
                          help="word vectors for top1-vector "
                          "('word v1 ... vd' rows)")
    baseline.set_defaults(handler=cmd_baseline)

    stats = sub.add_parser(
        "stats", parents=[common],
        help="corpus counts, mean sequence length, mean group sizes",
    )
    stats.add_argument("--train", required=True, metavar="FILE")
    stats.add_argument("--test", metavar="FILE",
                       help="test split for group-size statistics")
    stats.add_argument("--format", choices=["json", "markdown"],
                       default="json")
    stats.set_defaults(handler=cmd_stats)

    serve = sub.add_parser(
        "serve", parents=[tax_opt],
        help="run the HTTP service on a preloaded taxonomy and corpus",
    )
    serve.add_argument("--train", metavar="FILE",
                       default=os.environ.get(TRAIN_ENV),
                       help=f"training corpus (default ${TRAIN_ENV})")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.set_defaults(handler=cmd_serve)

    return parser


def _config_from_args(args: argparse.Namespace) -> Config:
    kwargs = {}
    mapping = (
        ("w_v", "wv"),
        ("w_n", "wn"),
        ("max_concept_depth", "max_depth"),
        ("max_candidates_per_event", "max_candidates"),
        ("k", "k"),
    )
    for field_name, attr in mapping:
        value = getattr(args, attr, None)
        if value is not None:
            kwargs[field_name] = value
    strategy = getattr(args, "strategy", None)
    if strategy:
        kwargs["merge_strategy"] = MergeStrategy(strategy)
    eq4 = getattr(args, "eq4", None)
    if eq4:
        kwargs["eq4_group_factor"] = Eq4GroupFactor(eq4)
    erouge2 = getattr(args, "erouge2", None)
    if erouge2:
        kwargs["erouge2_mode"] = _EROUGE2_MODES[erouge2]
    return Config(**kwargs)


def _require_taxonomy(args: argparse.Namespace) -> Taxonomy:
    if not args.taxonomy:
        raise InputError(
            f"no taxonomy given; pass --taxonomy or set ${TAXONOMY_ENV}"
        )
    return load_taxonomy(args.taxonomy)


def _write_output(
    text: str,
    out: Optional[str],
    manifest: RunManifest,
    started: float,
) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
        manifest.duration_seconds = round(time.monotonic() - started, 6)
        manifest.write_for(out)
    else:
        sys.stdout.write(text)


def _load_ref_map(path: Optional[str]) -> dict[str, ReferenceSet]:
    if not path:
        return {}
    return {ref.source_id: ref for ref in load_references(path)}


def _batch_targets(
    args: argparse.Namespace, ref_map: dict[str, ReferenceSet]
) -> list[tuple[str, Process, int, int]]:
    """(id, process, k, seed) per target, honoring the k precedence."""
    base_seed = args.seed if args.seed is not None else 0
    if args.process:
        process = Process.parse(args.process)
        refs = ref_map.get(process.name)
        k = resolve_k(
            refs.references if refs else None,
            None,
            args.k,
            Config().k,
        )
        return [(process.name, process, k, base_seed)]
    graphs, per_line_k = load_corpus_with_k(args.test)
    targets = []
    for index, graph in enumerate(graphs):
        refs = ref_map.get(graph.source_id)
        k = resolve_k(
            refs.references if refs else None,
            per_line_k.get(graph.source_id),
            args.k,
            len(graph.steps),
        )
        targets.append((graph.source_id, graph.process, k, base_seed + index))
    return targets


def cmd_induce(args: argparse.Namespace) -> int:
    started = time.monotonic()
    cfg = _config_from_args(args)
    tax = _require_taxonomy(args)
    train = load_corpus(args.train)
    ref_map = _load_ref_map(args.refs)
    targets = _batch_targets(args, ref_map)

    def induce_one(
        target: tuple[str, Process, int, int]
    ) -> tuple[str, Prediction, Optional[dict]]:
        target_id, process, k, seed = target
        try:
            s_p, s_a = build_representations(process, train, tax, cfg)
            prediction = predict_sequence(process, s_p, s_a, k, tax, cfg)
            dump = {
                "id": target_id,
                "predicate_side": s_p.to_json(),
                "argument_side": s_a.to_json(),
            }
        except NoAnalogousProcessesError:
            if args.fallback != "random":
                raise
            prediction = baseline_random(process, train, k, seed)
            dump = None
        return target_id, prediction, dump

    results = parallel_map(induce_one, targets, args.threads)
    lines = [
        json.dumps(prediction.to_json(target_id))
        for target_id, prediction, _ in results
    ]
    manifest = RunManifest.start(cfg.to_json(), seed=args.seed)
    manifest.add_input("train", args.train)
    manifest.add_input("test", args.test)
    manifest.add_input("refs", args.refs)
    if args.taxonomy and args.taxonomy.startswith("tsv:"):
        manifest.add_input("taxonomy", args.taxonomy.split(":", 1)[1])
    _write_output("\n".join(lines) + "\n", args.out, manifest, started)
    if args.dump_abstract:
        dump_lines = [
            json.dumps(dump) for _, _, dump in results if dump is not None
        ]
        Path(args.dump_abstract).write_text(
            "\n".join(dump_lines) + "\n", encoding="utf-8"
        )
        manifest.write_for(args.dump_abstract)
    return 0


def _load_prediction_file(path: str) -> list[tuple[str, list[EventGraph]]]:
    out = []
    seen: set[str] = set()
    try:
        handle = open(path, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read predictions {path}: {exc}") from exc
    with handle:
        for line_no, raw in enumerate(handle, 1):
            line = raw.strip()
            if not line:
                continue
            where = f"{path}:{line_no}"
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise InputError(f"{where}: malformed JSON: {exc}") from exc
            if "id" not in obj or "events" not in obj:
                raise InputError(f"{where}: missing 'id' or 'events'")
            source_id = str(obj["id"])
            if source_id in seen:
                raise InputError(f"{where}: duplicate id {source_id!r}")
            seen.add(source_id)
            events = [
                EventGraph.from_json(e, where=f"{where}: event {i}")
                for i, e in enumerate(obj["events"])
            ]
            if not events:
                raise InputError(f"{where}: empty prediction")
            out.append((source_id, events))
    return out


def cmd_evaluate(args: argparse.Namespace) -> int:
    started = time.monotonic()
    tax = _require_taxonomy(args)
    predictions = _load_prediction_file(args.pred)
    references = [
        (ref.source_id, ref.references) for ref in load_references(args.refs)
    ]
    standards = (
        [MatchStandard(args.standard)] if args.standard else list(MatchStandard)
    )
    settings = [Setting(args.setting)] if args.setting else list(Setting)
    mode = _EROUGE2_MODES[args.erouge2]
    report = build_report(
        predictions, references, tax,
        standards=standards, settings=settings, mode=mode,
        threads=args.threads,
    )
    if args.format == "markdown":
        text = report.to_markdown()
    else:
        text = json.dumps(report.to_json(), indent=2) + "\n"
    manifest = RunManifest.start(
        {"standards": [s.value for s in standards],
         "settings": [s.value for s in settings],
         "erouge2_mode": mode.value}
    )
    manifest.add_input("pred", args.pred)
    manifest.add_input("refs", args.refs)
    _write_output(text, args.out, manifest, started)
    return 0


def cmd_baseline(args: argparse.Namespace) -> int:
    started = time.monotonic()
    train = load_corpus(args.train)
    ref_map = _load_ref_map(args.refs)
    targets = _batch_targets(args, ref_map)
    vectors = None
    if args.method == "top1-vector":
        if not args.vectors:
            raise InputError("top1-vector needs --vectors <file>")
        vectors = WordVectors.load(args.vectors)

    def run_one(target: tuple[str, Process, int, int]) -> str:
        target_id, process, k, seed = target
        if args.method == "random":
            prediction = baseline_random(process, train, k, seed)
        elif args.method == "top1-jaccard":
            prediction = baseline_top_one(process, train, "jaccard", k)
        else:
            prediction = baseline_top_one(process, train, "vector", k, vectors)
        return json.dumps(prediction.to_json(target_id))

    lines = parallel_map(run_one, targets, args.threads)
    manifest = RunManifest.start({"method": args.method}, seed=args.seed)
    manifest.add_input("train", args.train)
    manifest.add_input("test", args.test)
    manifest.add_input("refs", args.refs)
    manifest.add_input("vectors", args.vectors)
    _write_output("\n".join(lines) + "\n", args.out, manifest, started)
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    started = time.monotonic()
    train = load_corpus(args.train)
    test = load_corpus(args.test) if args.test else None
    stats = corpus_stats(train, test, threads=args.threads)
    if args.format == "markdown":
        rows = [
            "| Statistic | Value |",
            "| --- | --- |",
        ]
        for key, value in stats.to_json().items():
            rows.append(f"| {key} | {value} |")
        text = "\n".join(rows) + "\n"
    else:
        text = json.dumps(stats.to_json(), indent=2) + "\n"
    manifest = RunManifest.start({})
    manifest.add_input("train", args.train)
    manifest.add_input("test", args.test)
    _write_output(text, args.out, manifest, started)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service.app import create_app

    app = create_app(taxonomy_spec=args.taxonomy, train_path=args.train)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except NoAnalogousProcessesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ApsiError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 4
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
