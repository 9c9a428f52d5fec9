"""Command-line interface: run, eval, stats, hits, and sweep subcommands.

Exit codes: 0 success, 2 bad input (files, formats, config), 1 unexpected
runtime failure. A run manifest with input digests is written even when the
run fails.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import itertools
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .corpus import EntityPair, SeedFileSpec, TypedEntity, extract_instances, \
    load_corpus, load_embeddings, parse_seed_file, reorder_passive
from .engine import bootstrap
from .errors import InputError
from .evaluate import ExtractorSummary, extractor_stats, hit_count, load_gold, prf1
from .model import MODES, PAIRINGS, SCORE_AGAINST, BootstrapResult, RunConfig, \
    SeedState, build_seed_state
from .similarity import MEASURE_KINDS, SimilarityMeasure

log = logging.getLogger(__name__)

_CONFIG_KEYS = (
    "mode", "sim", "sim_weights", "tau_sim", "tau_cnf", "wn", "wu", "iters",
    "pairing", "max_before", "max_between", "max_after", "output_threshold",
    "score_against",
)


def _sha256(path) -> str | None:
    try:
        digest = hashlib.sha256()
        with open(path, "rb") as fh:
            for chunk in iter(lambda: fh.read(1 << 16), b""):
                digest.update(chunk)
        return digest.hexdigest()
    except OSError:
        return None


def _load_config_file(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: invalid JSON config ({exc.msg})") from None
    if not isinstance(data, dict):
        raise InputError(f"{path}: config file must be a JSON object")
    unknown = sorted(set(data) - set(_CONFIG_KEYS))
    if unknown:
        raise InputError(f"{path}: unknown config keys {unknown}")
    return data


def build_config(args) -> RunConfig:
    """Merge defaults <- config file <- explicit CLI flags into a RunConfig."""
    file_cfg = _load_config_file(args.config) if getattr(args, "config", None) else {}

    def pick(name, default):
        value = getattr(args, name, None)
        if value is not None:
            return value
        return file_cfg.get(name, default)

    weights = pick("sim_weights", (0.2, 0.6, 0.2))
    measure = SimilarityMeasure(kind=pick("sim", "cc-asym"),
                                weights=tuple(float(w) for w in weights))
    return RunConfig(
        mode=pick("mode", "brej"),
        measure=measure,
        tau_sim=float(pick("tau_sim", 0.7)),
        tau_cnf=float(pick("tau_cnf", 0.7)),
        w_neg=float(pick("wn", 0.5)),
        w_unk=float(pick("wu", 0.0001)),
        iterations=int(pick("iters", 3)),
        pairing=pick("pairing", "ordered"),
        max_before=int(pick("max_before", 2)),
        max_between=int(pick("max_between", 6)),
        max_after=int(pick("max_after", 2)),
        output_threshold=float(pick("output_threshold", 0.5)),
        score_against=pick("score_against", "yield"),
    )


def config_dict(cfg: RunConfig) -> dict:
    out = dataclasses.asdict(cfg)
    out["measure"]["weights"] = list(out["measure"]["weights"])
    return out


@dataclass
class Ingested:
    spec: SeedFileSpec
    instances: list
    seed_state: SeedState
    counters: dict


def ingest_inputs(corpus_path, embeddings_path, seeds_path, cfg: RunConfig) -> Ingested:
    spec = parse_seed_file(seeds_path)
    loaded = load_corpus(corpus_path, set(spec.type_pair))
    emb = load_embeddings(embeddings_path)
    extraction = extract_instances(loaded.sentences, emb, cfg.limits, spec.type_pair)
    instances = [
        reorder_passive(inst, loaded.sentences[inst.sentence_ref].pos)
        for inst in extraction.instances
    ]
    state = build_seed_state(spec, emb, cfg.pairing)
    counters = {
        "sentences": len(loaded.sentences),
        "rejected_records": loaded.rejected_records,
        "dropped_entities": loaded.dropped_entities,
        "instances": len(instances),
        "skipped_over_limit": extraction.skipped_over_limit,
    }
    return Ingested(spec=spec, instances=instances, seed_state=state,
                    counters=counters)


def write_outputs(out_dir: Path, relation: str, result: BootstrapResult,
                  counters: dict) -> None:
    with open(out_dir / "accepted.jsonl", "w", encoding="utf-8") as fh:
        for instance, confidence in result.accepted:
            row = {
                "relation": relation,
                "e1": instance.pair.e1.surface,
                "e2": instance.pair.e2.surface,
                "e1_type": instance.pair.e1.etype,
                "e2_type": instance.pair.e2.etype,
                "confidence": confidence,
                "sentence_ref": instance.sentence_ref,
            }
            fh.write(json.dumps(row, sort_keys=True) + "\n")
    with open(out_dir / "extractors.jsonl", "w", encoding="utf-8") as fh:
        for extractor in result.extractors:
            summary = ExtractorSummary.from_extractor(extractor)
            fh.write(json.dumps(summary.to_dict(), sort_keys=True) + "\n")
    stats = {
        "relation": relation,
        "diagnostic": result.diagnostic,
        "iterations": result.per_iteration_stats,
        "accepted_total": len(result.accepted),
        **counters,
    }
    with open(out_dir / "stats.json", "w", encoding="utf-8") as fh:
        json.dump(stats, fh, indent=2, sort_keys=True)
        fh.write("\n")


def run_pipeline(cfg: RunConfig, corpus, embeddings, seeds, out_dir: Path,
                 manifest: dict) -> dict:
    ingested = ingest_inputs(corpus, embeddings, seeds, cfg)
    result = bootstrap(ingested.instances, ingested.seed_state, cfg)
    manifest["iterations"] = result.per_iteration_stats
    write_outputs(out_dir, ingested.spec.relation, result, ingested.counters)
    return {
        "relation": ingested.spec.relation,
        "out": str(out_dir),
        "accepted": len(result.accepted),
        "extractors": len(result.extractors),
        "diagnostic": result.diagnostic,
        **ingested.counters,
    }


def _cmd_run(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = {
        "tool": "brex",
        "version": __version__,
        "status": "failed",
        "error": None,
        "config": None,
        "inputs": {
            name: {"path": str(path), "sha256": _sha256(path)}
            for name, path in (("corpus", args.corpus),
                               ("embeddings", args.embeddings),
                               ("seeds", args.seeds))
        },
        "iterations": [],
    }
    code = 0
    try:
        cfg = build_config(args)
        manifest["config"] = config_dict(cfg)
        summary = run_pipeline(cfg, args.corpus, args.embeddings, args.seeds,
                               out_dir, manifest)
        manifest["status"] = "ok"
        print(json.dumps(summary, indent=2, sort_keys=True))
    except (InputError, OSError, ValueError) as exc:
        manifest["error"] = str(exc)
        print(f"error: {exc}", file=sys.stderr)
        code = 2
    except Exception as exc:  # noqa: BLE001 - report, record, and fail distinctly
        manifest["error"] = f"{type(exc).__name__}: {exc}"
        print(f"internal error: {exc}", file=sys.stderr)
        code = 1
    finally:
        with open(out_dir / "manifest.json", "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return code


def _read_run_dir(run_dir: Path) -> tuple[dict, list[dict]]:
    manifest_path = run_dir / "manifest.json"
    accepted_path = run_dir / "accepted.jsonl"
    if not manifest_path.exists() or not accepted_path.exists():
        raise InputError(f"{run_dir}: not a run directory (missing outputs)")
    with open(manifest_path, encoding="utf-8") as fh:
        manifest = json.load(fh)
    rows = []
    with open(accepted_path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                rows.append(json.loads(line))
    return manifest, rows


def _cmd_eval(args) -> int:
    try:
        run_dir = Path(args.run)
        manifest, rows = _read_run_dir(run_dir)
        cfg_snapshot = manifest.get("config") or {}
        pairing = cfg_snapshot.get("pairing", "ordered")
        relation = "unknown"
        stats_path = run_dir / "stats.json"
        if stats_path.exists():
            with open(stats_path, encoding="utf-8") as fh:
                relation = json.load(fh).get("relation", relation)
        elif rows:
            relation = rows[0]["relation"]
        gold = load_gold(args.gold, relation, pairing)
        accepted = [
            (EntityPair(TypedEntity(r["e1"], r["e1_type"]),
                        TypedEntity(r["e2"], r["e2_type"])), r["confidence"])
            for r in rows
        ]
        scores = prf1(accepted, gold, threshold=args.threshold)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    report = {
        "relation": relation,
        "threshold": args.threshold,
        "gold_size": len(gold),
        "out_count": scores.out_count,
        "precision": scores.precision,
        "recall": scores.recall,
        "f1": scores.f1,
    }
    out_path = Path(args.out) if args.out else run_dir / "report.json"
    with open(out_path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"{'relation':<16}{'#out':>8}{'P':>8}{'R':>8}{'F1':>8}")
    print(f"{relation:<16}{scores.out_count:>8}"
          f"{scores.precision:>8.3f}{scores.recall:>8.3f}{scores.f1:>8.3f}")
    return 0


def _fmt(value) -> str:
    return "-" if value is None else f"{value:.3f}"


def _cmd_stats(args) -> int:
    try:
        run_dir = Path(args.run)
        path = run_dir / "extractors.jsonl"
        if not path.exists():
            raise InputError(f"{run_dir}: missing extractors.jsonl")
        summaries = []
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    summaries.append(ExtractorSummary.from_dict(json.loads(line)))
        labels = None
        if args.labels:
            with open(args.labels, encoding="utf-8") as fh:
                raw = json.load(fh)
            labels = {str(k): bool(v) for k, v in raw.items()}
        stats = extractor_stats(summaries, labels)
    except (InputError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    header = ("count", "AIE", "AES", "ANE", "ANNE", "ANNLC", "AP", "AN", "ANP")
    values = (str(stats.count), f"{stats.aie:.1f}", f"{stats.aes:.2f}",
              _fmt(stats.ane), _fmt(stats.anne), _fmt(stats.annlc),
              f"{stats.ap:.1f}", f"{stats.an:.1f}", _fmt(stats.anp))
    print("  ".join(f"{h:>7}" for h in header))
    print("  ".join(f"{v:>7}" for v in values))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(dataclasses.asdict(stats), fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0


def _cmd_hits(args) -> int:
    try:
        cfg = build_config(args)
        ingested = ingest_inputs(args.corpus, args.embeddings, args.seeds, cfg)
        counts = hit_count(ingested.instances, ingested.seed_state, cfg)
    except (InputError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    payload = {
        "relation": ingested.spec.relation,
        "by_pair": counts.by_pair,
        "by_template": counts.by_template,
        "either": counts.either,
    }
    print(json.dumps(payload, indent=2, sort_keys=True))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0


_SWEEPABLE = ("mode", "sim", "tau_sim", "tau_cnf", "wn", "wu", "iters", "pairing")


def _parse_sweep_values(name: str, text: str) -> list:
    casts = {
        "mode": str, "sim": str, "pairing": str,
        "tau_sim": float, "tau_cnf": float, "wn": float, "wu": float,
        "iters": int,
    }
    values = [casts[name](part.strip()) for part in text.split(",") if part.strip()]
    if not values:
        raise InputError(f"--{name.replace('_', '-')}: empty value list")
    return values


def _cmd_sweep(args) -> int:
    out_root = Path(args.out)
    out_root.mkdir(parents=True, exist_ok=True)
    try:
        grid = {}
        for name in _SWEEPABLE:
            raw = getattr(args, name)
            if raw is not None:
                grid[name] = _parse_sweep_values(name, raw)
        names = sorted(grid)
        combos = list(itertools.product(*(grid[n] for n in names))) or [()]
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    summary_rows = []
    worst = 0
    for index, combo in enumerate(combos):
        cell = dict(zip(names, combo))
        varying = [n for n in names if len(grid[n]) > 1]
        slug = "_".join(f"{n.replace('_', '-')}-{cell[n]}" for n in varying)
        cell_dir = out_root / (f"cell_{index:03d}" + (f"_{slug}" if slug else ""))
        cell_args = argparse.Namespace(**vars(args))
        for name, value in cell.items():
            setattr(cell_args, name, value)
        cell_args.out = str(cell_dir)
        code = _cmd_run(cell_args)
        worst = max(worst, code)
        row = {"cell": cell_dir.name, "params": cell, "exit_code": code}
        if code == 0 and args.gold:
            eval_args = argparse.Namespace(run=str(cell_dir), gold=args.gold,
                                           threshold=args.threshold, out=None)
            if _cmd_eval(eval_args) == 0:
                with open(cell_dir / "report.json", encoding="utf-8") as fh:
                    row["scores"] = json.load(fh)
        summary_rows.append(row)

    with open(out_root / "sweep_summary.json", "w", encoding="utf-8") as fh:
        json.dump(summary_rows, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return worst


def _add_config_flags(parser: argparse.ArgumentParser, sweep: bool = False) -> None:
    """Config flags; defaults are None so explicit values can override a config file.

    Under sweep, the sweepable flags accept comma-separated lists and are kept
    as raw strings for later expansion.
    """
    suffix = " (comma list)" if sweep else ""

    def sweepable(flag, dest, kind, choices=None, help=None):
        parser.add_argument(flag, dest=dest, default=None,
                            type=str if sweep else kind,
                            choices=None if sweep else choices,
                            help=(help or dest) + suffix)

    parser.add_argument("--config", default=None,
                        help="JSON config file; CLI flags override it")
    sweepable("--mode", "mode", str, list(MODES), "bootstrapping mode")
    sweepable("--sim", "sim", str, list(MEASURE_KINDS), "similarity measure")
    parser.add_argument("--sim-weights", dest="sim_weights", nargs=3, type=float,
                        default=None, metavar=("W_BEFORE", "W_BETWEEN", "W_AFTER"),
                        help="window weights for --sim match")
    sweepable("--tau-sim", "tau_sim", float, help="similarity threshold")
    sweepable("--tau-cnf", "tau_cnf", float, help="confidence threshold")
    sweepable("--wn", "wn", float, help="weight on negative matches")
    sweepable("--wu", "wu", float, help="weight on unknown matches")
    sweepable("--iters", "iters", int, help="bootstrapping iterations")
    sweepable("--pairing", "pairing", str, list(PAIRINGS), "entity pair matching")
    parser.add_argument("--max-before", dest="max_before", type=int, default=None)
    parser.add_argument("--max-between", dest="max_between", type=int, default=None)
    parser.add_argument("--max-after", dest="max_after", type=int, default=None)
    parser.add_argument("--output-threshold", dest="output_threshold", type=float,
                        default=None)
    parser.add_argument("--score-against", dest="score_against", default=None,
                        choices=list(SCORE_AGAINST),
                        help="score extractor counts against grown or original seeds")


def _add_input_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--corpus", required=True)
    parser.add_argument("--embeddings", required=True)
    parser.add_argument("--seeds", required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="brex",
        description="Bootstrapping relation extraction over a pre-tagged corpus",
    )
    parser.add_argument("--verbose", "-v", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="Run the bootstrap pipeline")
    _add_input_flags(p_run)
    _add_config_flags(p_run)
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.set_defaults(func=_cmd_run)

    p_eval = sub.add_parser("eval", help="Score a prior run against a gold pair list")
    p_eval.add_argument("--run", required=True, help="run output directory")
    p_eval.add_argument("--gold", required=True, help="gold file, e1<TAB>e2 per line")
    p_eval.add_argument("--threshold", type=float, default=0.5,
                        help="confidence cutoff for evaluated records")
    p_eval.add_argument("--out", default=None, help="report path (default: run dir)")
    p_eval.set_defaults(func=_cmd_eval)

    p_stats = sub.add_parser("stats", help="Extractor attribute table for a prior run")
    p_stats.add_argument("--run", required=True)
    p_stats.add_argument("--labels", default=None,
                         help="JSON file mapping extractor signature -> noisy flag")
    p_stats.add_argument("--out", default=None)
    p_stats.set_defaults(func=_cmd_stats)

    p_hits = sub.add_parser("hits", help="Iteration-1 seed-hit counts per channel")
    _add_input_flags(p_hits)
    _add_config_flags(p_hits)
    p_hits.add_argument("--out", default=None)
    p_hits.set_defaults(func=_cmd_hits)

    p_sweep = sub.add_parser("sweep", help="Grid of runs over list-valued parameters")
    _add_input_flags(p_sweep)
    _add_config_flags(p_sweep, sweep=True)
    p_sweep.add_argument("--out", required=True, help="root output directory")
    p_sweep.add_argument("--gold", default=None,
                         help="optional gold file; adds P/R/F1 per cell")
    p_sweep.add_argument("--threshold", type=float, default=0.5)
    p_sweep.set_defaults(func=_cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
