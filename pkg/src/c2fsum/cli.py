"""Command-line interface.

Subcommands: segment, summarize, evaluate, bench, sweep, gen-synthetic,
inspect. Every subcommand is deterministic given its flags and inputs, exits
0 on success, and writes a machine-readable JSON error object to stderr
otherwise. Hyper-parameter precedence: flags > --config file > defaults.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .core import Document, EngineError, PipelineConfig, read_corpus, write_corpus
from .embeddings import EmbeddingReader, hash_embed, write_embedding_file
from .evaluation import SYSTEMS, bench, evaluate_corpus, far_comparison, get_system
from .pipeline import StageTrace, summarize
from .segmentation import segment
from .synthetic import synthetic_corpus

# CLI flag name -> PipelineConfig field.
_CONFIG_FIELDS = {
    "w": "window",
    "w_hat": "smooth_window",
    "lambda": "granularity",
    "alpha": "keep_ratio",
    "k": "k",
    "beta": "candidates_per_block",
    "lambda1": "prev_weight",
    "lambda2": "next_weight",
}


def _parse_config_file(path: Path) -> dict:
    """Read a JSON object or flat ``key = value`` lines (# comments allowed)."""
    text = path.read_text(encoding="utf-8")
    stripped = text.lstrip()
    if stripped.startswith("{"):
        obj = json.loads(text)
        if not isinstance(obj, dict):
            raise EngineError(f"config file {path} must hold a JSON object")
        return obj
    out: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise EngineError(f"config file {path} line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        try:
            out[key.strip()] = json.loads(value.strip())
        except json.JSONDecodeError:
            out[key.strip()] = value.strip()
    return out


def build_config(args: argparse.Namespace) -> PipelineConfig:
    values: dict = {}
    if getattr(args, "config", None):
        raw = _parse_config_file(Path(args.config))
        for key, value in raw.items():
            field = _CONFIG_FIELDS.get(str(key).replace("-", "_"))
            if field is None:
                raise EngineError(f"unknown config key {key!r}")
            values[field] = value
    for flag, field in _CONFIG_FIELDS.items():
        flag_value = getattr(args, field, None)
        if flag_value is not None:
            values[field] = flag_value
    try:
        return PipelineConfig(**values)
    except (TypeError, ValueError) as exc:
        raise EngineError(f"invalid configuration: {exc}") from exc


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("pipeline configuration")
    group.add_argument("--k", dest="k", type=int, help="summary sentences to extract")
    group.add_argument("--lambda", dest="granularity", type=float,
                       help="boundary threshold multiplier (higher = fewer blocks)")
    group.add_argument("--alpha", dest="keep_ratio", type=float,
                       help="fraction of blocks kept by the coarse filter, in (0, 1]")
    group.add_argument("--beta", dest="candidates_per_block", type=int,
                       help="per-block candidate quota (default: derived)")
    group.add_argument("--lambda1", dest="prev_weight", type=float,
                       help="centrality weight on earlier positions")
    group.add_argument("--lambda2", dest="next_weight", type=float,
                       help="centrality weight on later positions")
    group.add_argument("--w", dest="window", type=int,
                       help="sentences per side for gap similarity")
    group.add_argument("--w-hat", dest="smooth_window", type=int,
                       help="smoothing half-width for the similarity curve (0 = off)")
    group.add_argument("--config", help="JSON or key=value file with the flags above")


def _add_input_flags(parser: argparse.ArgumentParser, jobs: bool = True) -> None:
    parser.add_argument("--corpus", required=True, help="JSONL corpus path")
    parser.add_argument("--embeddings", help="embedding file (binary or JSONL debug)")
    parser.add_argument("--hash-dim", type=int, default=256,
                        help="fallback hashing-encoder dimension when no "
                             "embedding file is given (default 256)")
    if jobs:
        parser.add_argument("--jobs", type=int, default=1,
                            help="documents processed concurrently (default 1)")


def _load_inputs(args: argparse.Namespace) -> tuple[list[Document], dict]:
    docs = read_corpus(args.corpus)
    if args.embeddings:
        reader = EmbeddingReader(args.embeddings)
        matrices = {doc.id: reader.load(doc.id, expected_n=doc.n) for doc in docs}
    else:
        matrices = {doc.id: hash_embed(doc, args.hash_dim) for doc in docs}
    return docs, matrices


def _open_out(path: str | None):
    return open(path, "w", encoding="utf-8") if path else sys.stdout


def _emit_lines(lines: Sequence[str], path: str | None) -> None:
    out = _open_out(path)
    try:
        for line in lines:
            out.write(line + "\n")
    finally:
        if out is not sys.stdout:
            out.close()


def _trace_json(trace: StageTrace) -> dict:
    return {
        "block_scores": [[i, s] for i, s in trace.block_scores],
        "kept_blocks": list(trace.kept_blocks),
        "beta_used": trace.beta_used,
        "candidates": list(trace.candidates),
        "candidate_scores": [[i, s] for i, s in trace.candidate_scores],
        "op_counts": trace.op_counts,
    }


def cmd_segment(args: argparse.Namespace) -> int:
    config = build_config(args)
    docs, matrices = _load_inputs(args)
    figures_dir = Path(args.figures) if args.figures else None
    if figures_dir:
        figures_dir.mkdir(parents=True, exist_ok=True)

    def one(doc: Document) -> str:
        seg, profile = segment(matrices[doc.id], config)
        if figures_dir:
            from .report import save_profile_figure

            save_profile_figure(profile, doc.id, figures_dir / f"{doc.id}.png")
        return json.dumps({
            "id": doc.id,
            "boundaries": list(profile.boundaries),
            "blocks": [[b.start, b.end] for b in seg.blocks],
            "epsilon": profile.epsilon,
            "depth_scores": list(profile.depth_scores),
        }, ensure_ascii=False)

    if args.jobs > 1 and len(docs) > 1 and not figures_dir:
        # Figure rendering stays serial: pyplot is not thread-safe.
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            lines = list(pool.map(one, docs))
    else:
        lines = [one(doc) for doc in docs]
    _emit_lines(lines, args.out)
    return 0


def cmd_summarize(args: argparse.Namespace) -> int:
    config = build_config(args)
    docs, matrices = _load_inputs(args)
    run = get_system(args.system)

    def one(doc: Document) -> str:
        result = run(doc, matrices[doc.id], config)
        obj = {
            "id": doc.id,
            "summary_ids": list(result.sentence_ids),
            "summary": [doc.sentences[i].text for i in result.sentence_ids],
        }
        if args.trace and result.trace is not None:
            obj["trace"] = _trace_json(result.trace)
        return json.dumps(obj, ensure_ascii=False)

    if args.jobs > 1 and len(docs) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            lines = list(pool.map(one, docs))
    else:
        lines = [one(doc) for doc in docs]
    _emit_lines(lines, args.out)
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    config = build_config(args)
    docs, matrices = _load_inputs(args)
    per_doc, aggregate = evaluate_corpus(docs, matrices, args.system, config, jobs=args.jobs)
    if args.per_doc:
        _emit_lines([json.dumps(row, ensure_ascii=False) for row in per_doc], args.per_doc)
    _emit_lines([json.dumps(aggregate, ensure_ascii=False)], args.out)
    return 0


def _bench_csv(report: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    names = list(report["systems"])
    writer.writerow(["system", "mean_seconds", "total_seconds", "op_counts"]
                    + [f"speedup_vs_{other}" for other in names])
    for name in names:
        info = report["systems"][name]
        speedups = report["speedups"].get(name, {})
        writer.writerow(
            [name, f"{info['mean_seconds']:.9f}", f"{info['total_seconds']:.9f}",
             json.dumps(info["op_counts"], sort_keys=True)]
            + [("" if other == name else f"{speedups[other]:.6f}") for other in names]
        )
    return buf.getvalue()


def cmd_bench(args: argparse.Namespace) -> int:
    config = build_config(args)
    docs, matrices = _load_inputs(args)
    systems = [s.strip() for s in args.systems.split(",") if s.strip()]
    report = bench(docs, matrices, systems, config, repeats=args.repeats).to_json()
    if args.far_context:
        n_cand, k = args.far_context
        report["far_context"] = far_comparison(n_cand, k)
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "bench.json").write_text(
            json.dumps(report, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
        )
        (out_dir / "bench.csv").write_text(_bench_csv(report), encoding="utf-8")
        from .report import save_bench_figure

        save_bench_figure(report, out_dir / "bench.png")
    _emit_lines([json.dumps(report, ensure_ascii=False)], args.out)
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    docs, matrices = _load_inputs(args)
    values = [float(v) for v in args.values.split(",") if v.strip()]
    if not values:
        raise EngineError("--values must list at least one number")
    field = {"lambda": "granularity", "alpha": "keep_ratio"}[args.param]
    has_refs = any(doc.reference is not None for doc in docs)
    rows = []
    for value in values:
        config = build_config(args)
        config = PipelineConfig(**{
            **{f: getattr(config, f) for f in PipelineConfig.__dataclass_fields__},
            field: value,
        })
        blocks, betas, candidates = [], [], []
        for doc in docs:
            result = summarize(doc, matrices[doc.id], config)
            blocks.append(result.segmentation.m)
            betas.append(result.trace.beta_used)
            candidates.append(len(result.trace.candidates))
        total_sentences = sum(doc.n for doc in docs)
        row = {
            args.param: value,
            "mean_blocks": sum(blocks) / len(blocks),
            "mean_beta": sum(betas) / len(betas),
            "mean_candidates": sum(candidates) / len(candidates),
            "compression": sum(blocks) / total_sentences,
        }
        if has_refs:
            _, aggregate = evaluate_corpus(docs, matrices, "c2f", config, jobs=args.jobs)
            for variant in ("rouge-1", "rouge-2", "rouge-l"):
                row[variant.replace("-", "_") + "_f1"] = aggregate[variant]["f1"]
        rows.append(row)

    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]))
    writer.writeheader()
    writer.writerows(rows)
    csv_text = buf.getvalue()
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "sweep.csv").write_text(csv_text, encoding="utf-8")
        from .report import save_sweep_figure

        save_sweep_figure(rows, args.param, out_dir / "sweep.png")
    _emit_lines([csv_text.rstrip("\n")], args.out)
    return 0


def _parse_span(text: str) -> int | tuple[int, int]:
    if ":" in text:
        lo, _, hi = text.partition(":")
        return (int(lo), int(hi))
    return int(text)


def cmd_gen_synthetic(args: argparse.Namespace) -> int:
    seed = args.seed if args.seed is not None else args.global_seed
    docs, matrices, truths = synthetic_corpus(
        docs=args.docs,
        blocks=_parse_span(args.blocks),
        sentences_per_block=_parse_span(args.sentences_per_block),
        dim=args.dim,
        noise=args.noise,
        seed=seed,
    )
    write_corpus(docs, args.out_corpus)
    write_embedding_file(args.out_embeddings, {doc.id: matrices[doc.id] for doc in docs})
    summary = {
        "documents": len(docs),
        "sentences": sum(doc.n for doc in docs),
        "dim": args.dim,
        "noise": args.noise,
        "seed": seed,
        "corpus": str(args.out_corpus),
        "embeddings": str(args.out_embeddings),
        "boundaries": {doc.id: list(truths[doc.id]) for doc in docs},
    }
    _emit_lines([json.dumps(summary, ensure_ascii=False)], args.out)
    return 0


def cmd_inspect(args: argparse.Namespace) -> int:
    reader = EmbeddingReader(args.embeddings)
    expected: dict[str, int] = {}
    ids = reader.ids()
    if args.corpus:
        docs = read_corpus(args.corpus)
        expected = {doc.id: doc.n for doc in docs}
        ids = tuple(doc.id for doc in docs)
    lines = []
    for doc_id in ids:
        matrix = reader.load(doc_id)
        row = {
            "id": doc_id,
            "n": matrix.n,
            "dim": matrix.dim,
            "repaired_rows": list(matrix.repaired),
        }
        if expected:
            row["expected_n"] = expected[doc_id]
            row["count_match"] = expected[doc_id] == matrix.n
        lines.append(json.dumps(row, ensure_ascii=False))
    _emit_lines(lines, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="c2fsum",
        description="Coarse-to-fine extractive summarizer for long documents",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--seed", dest="global_seed", type=int, default=0,
                        help="seed for randomized subcommands (default 0)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("segment", help="emit per-document boundary diagnostics")
    _add_input_flags(p)
    _add_config_flags(p)
    p.add_argument("--figures", help="directory for per-document profile PNGs")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("summarize", help="extract summaries as JSONL")
    _add_input_flags(p)
    _add_config_flags(p)
    p.add_argument("--system", default="c2f", choices=sorted(SYSTEMS),
                   help="summarizer to run (default c2f)")
    p.add_argument("--trace", action="store_true", help="attach per-stage diagnostics")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_summarize)

    p = sub.add_parser("evaluate", help="ROUGE-score a system against references")
    _add_input_flags(p)
    _add_config_flags(p)
    p.add_argument("--system", default="c2f", choices=sorted(SYSTEMS))
    p.add_argument("--per-doc", help="write per-document scores to this JSONL path")
    p.add_argument("--out", help="aggregate output path (default stdout)")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("bench", help="time scoring per system over a corpus")
    _add_input_flags(p, jobs=False)  # benchmarks stay single-threaded
    _add_config_flags(p)
    p.add_argument("--systems", default="c2f,pacsum",
                   help="comma-separated system names (default c2f,pacsum)")
    p.add_argument("--repeats", type=int, default=10, help="runs to average (default 10)")
    p.add_argument("--far-context", nargs=2, type=int, metavar=("CANDIDATES", "K"),
                   help="also report the combination-scoring cost C(CANDIDATES, K)")
    p.add_argument("--out-dir", help="write bench.json, bench.csv, and bench.png here")
    p.add_argument("--out", help="report path (default stdout)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("sweep", help="sweep lambda or alpha and tabulate the response")
    _add_input_flags(p)
    _add_config_flags(p)
    p.add_argument("--param", choices=("lambda", "alpha"), default="lambda")
    p.add_argument("--values", required=True, help="comma-separated parameter values")
    p.add_argument("--out-dir", help="write sweep.csv and sweep.png here")
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("gen-synthetic", help="write a seeded planted-boundary corpus")
    p.add_argument("--docs", type=int, default=1)
    p.add_argument("--blocks", default="2", help="block count, N or LO:HI (default 2)")
    p.add_argument("--sentences-per-block", default="4",
                   help="sentences per block, N or LO:HI (default 4)")
    p.add_argument("--dim", type=int, default=16)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--seed", type=int, help="override the global --seed")
    p.add_argument("--out-corpus", required=True)
    p.add_argument("--out-embeddings", required=True)
    p.add_argument("--out", help="summary output path (default stdout)")
    p.set_defaults(func=cmd_gen_synthetic)

    p = sub.add_parser("inspect", help="describe an embedding file (counts, repairs)")
    p.add_argument("--embeddings", required=True)
    p.add_argument("--corpus", help="verify record sizes against this corpus")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_inspect)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (EngineError, OSError, ValueError, KeyError) as exc:
        json.dump(
            {"error": type(exc).__name__, "message": str(exc)},
            sys.stderr,
            ensure_ascii=False,
        )
        sys.stderr.write("\n")
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
