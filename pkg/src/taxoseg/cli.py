"""Command-line interface: annotate, segment, eval, gen-dataset, bench.

Exit codes: 0 success, 1 usage/config problem, 2 malformed or mismatched
data, 3 remote annotation-service failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import annotation, dataset, metrics, segmentation, textprep
from .errors import ConfigError, FormatError, RemoteServiceError
from .similarity import SimilarityWeights
from .taxonomy import Taxonomy, load_taxonomy

ENDPOINT_ENV = "TAXOSEG_REMOTE_ENDPOINT"

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DATA = 2
EXIT_REMOTE = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; our contract says 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def read_document_sentences(path: Path) -> list[str]:
    """Sentences of a plain or marker-delimited document file."""
    lines = [ln.strip() for ln in path.read_text(encoding="utf-8").splitlines() if ln.strip()]
    if dataset.BOUNDARY_MARKER in lines:
        return dataset.read_choi(path).sentences
    if not lines:
        raise FormatError(f"{path}: document has no sentences")
    return lines


def _require_file(path_str: str, what: str) -> Path:
    path = Path(path_str)
    if not path.is_file():
        raise ConfigError(f"{what} file not found: {path}")
    return path


def _require_dir(path_str: str, what: str) -> Path:
    path = Path(path_str)
    if not path.is_dir():
        raise ConfigError(f"{what} directory not found: {path}")
    return path


def _load_stopwords(args) -> frozenset[str]:
    if getattr(args, "stopwords", None):
        return textprep.load_stopwords(_require_file(args.stopwords, "stopword"))
    return textprep.default_stopwords()


# ---------------------------------------------------------------------------
# annotate
# ---------------------------------------------------------------------------


def _annotate_one(path: Path, args, gazetteer, endpoint) -> annotation.AnnotatedDocument:
    sentences = read_document_sentences(path)
    if gazetteer is not None:
        return annotation.gazetteer_annotate(sentences, gazetteer, doc_id=path.stem)
    return annotation.remote_annotate(
        sentences, endpoint, confidence=args.confidence, doc_id=path.stem
    )


def cmd_annotate(args) -> int:
    gazetteer = None
    endpoint = args.endpoint or os.environ.get(ENDPOINT_ENV)
    if args.gazetteer:
        gazetteer = annotation.load_gazetteer(_require_file(args.gazetteer, "gazetteer"))
    elif not endpoint:
        raise ConfigError(f"need --gazetteer or --endpoint (or ${ENDPOINT_ENV})")

    in_path = Path(args.input)
    if in_path.is_dir():
        docs = sorted(p for p in in_path.iterdir() if p.suffix == ".txt")
        if not docs:
            raise ConfigError(f"no .txt documents in {in_path}")
        for doc_path in docs:
            annotated = _annotate_one(doc_path, args, gazetteer, endpoint)
            annotation.save_annotations(annotated, doc_path.with_suffix(".ann.jsonl"))
        print(f"annotated {len(docs)} documents in {in_path}")
        return EXIT_OK
    doc_path = _require_file(args.input, "input")
    annotated = _annotate_one(doc_path, args, gazetteer, endpoint)
    out = Path(args.output) if args.output else doc_path.with_suffix(".ann.jsonl")
    annotation.save_annotations(annotated, out)
    print(f"wrote {out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# segment
# ---------------------------------------------------------------------------


def _render_linear(sentences: list[str], seg: segmentation.Segmentation, with_outer: bool) -> str:
    lines = [dataset.BOUNDARY_MARKER] if with_outer else []
    edges = [0, *seg.boundaries, seg.sentence_count]
    for i in range(len(edges) - 1):
        lines.extend(sentences[edges[i] : edges[i + 1]])
        if with_outer or i < len(edges) - 2:
            lines.append(dataset.BOUNDARY_MARKER)
    return "\n".join(lines) + "\n"


def cmd_segment(args) -> int:
    taxonomy = load_taxonomy(_require_file(args.taxonomy, "taxonomy"))
    doc_path = _require_file(args.input, "input")
    sentences = read_document_sentences(doc_path)
    stopwords = _load_stopwords(args)

    if args.annotations:
        doc = annotation.load_annotations(
            sentences, _require_file(args.annotations, "annotation sidecar"), doc_id=doc_path.stem
        )
    elif args.gazetteer:
        gazetteer = annotation.load_gazetteer(_require_file(args.gazetteer, "gazetteer"))
        doc = annotation.gazetteer_annotate(sentences, gazetteer, doc_id=doc_path.stem)
    else:
        sidecar = doc_path.with_suffix(".ann.jsonl")
        if sidecar.is_file():
            doc = annotation.load_annotations(sentences, sidecar, doc_id=doc_path.stem)
        else:
            doc = annotation.AnnotatedDocument(
                doc_id=doc_path.stem,
                sentences=tuple(annotation.Sentence(text=s) for s in sentences),
            )

    try:
        weights = SimilarityWeights(alpha=args.alpha)
        cfg = segmentation.WindowConfig(window_size=args.window)
        dendro, seg = segmentation.segment_document(
            doc, taxonomy, weights, cfg, args.segments, stopwords
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    if args.format == "tree":
        rendered = dendro.to_json()
    else:
        rendered = _render_linear(sentences, seg, with_outer=args.format == "choi")
    if args.output:
        Path(args.output).write_text(rendered, encoding="utf-8")
        print(f"wrote {args.output}")
    else:
        sys.stdout.write(rendered)
    return EXIT_OK


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------


def _segmentations_from_dir(path: Path) -> dict[str, segmentation.Segmentation]:
    out = {}
    for doc_path in sorted(path.iterdir()):
        if doc_path.suffix == ".txt":
            out[doc_path.stem] = dataset.reference_segmentation(dataset.read_choi(doc_path))
    if not out:
        raise FormatError(f"no .txt documents in {path}")
    return out


def _eval_config(args) -> metrics.EvalConfig:
    if args.k is not None:
        return metrics.EvalConfig(k=args.k, k_policy="fixed")
    return metrics.EvalConfig()


def cmd_eval(args) -> int:
    refs = _segmentations_from_dir(_require_dir(args.ref_dir, "reference"))
    hyps = _segmentations_from_dir(_require_dir(args.hyp_dir, "hypothesis"))
    report = metrics.evaluate_documents(refs, hyps, _eval_config(args))
    rendered = metrics.render_report(report)
    if args.output:
        Path(args.output).write_text(rendered, encoding="utf-8")
        print(f"wrote {args.output}")
    else:
        sys.stdout.write(rendered)
    return EXIT_OK


# ---------------------------------------------------------------------------
# gen-dataset
# ---------------------------------------------------------------------------


def _parse_subsets(text: str) -> list[tuple[str, int, int, int]]:
    # "3-11:400,3-5:100" -> [(name, low, high, samples), ...]
    subsets = []
    for part in text.split(","):
        part = part.strip()
        try:
            rng, count = part.split(":")
            low, high = rng.split("-")
            subsets.append((rng, int(low), int(high), int(count)))
        except ValueError as exc:
            raise ConfigError(f"bad subset spec {part!r}; expected like 3-11:400") from exc
    return subsets


def cmd_gen_dataset(args) -> int:
    corpus = _require_dir(args.corpus, "corpus")
    out_root = Path(args.output)
    total = 0
    for idx, (name, low, high, samples) in enumerate(_parse_subsets(args.subsets)):
        try:
            spec = dataset.GenSpec(
                corpus_dir=str(corpus),
                samples=samples,
                n_low=low,
                n_high=high,
                num_segments=args.segments,
                seed=args.seed + idx,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        subset_dir = out_root / name
        subset_dir.mkdir(parents=True, exist_ok=True)
        for doc in dataset.generate(spec):
            dataset.write_choi(doc, subset_dir / f"{doc.doc_id}.txt")
            total += 1
    print(f"wrote {total} documents under {out_root}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------

_WORKER: dict = {}


def _bench_init(taxonomy_path: str, gazetteer_path: str | None, stopword_path: str | None):
    _WORKER["taxonomy"] = load_taxonomy(taxonomy_path)
    _WORKER["gazetteer"] = (
        annotation.load_gazetteer(gazetteer_path) if gazetteer_path else None
    )
    _WORKER["stopwords"] = (
        textprep.load_stopwords(stopword_path) if stopword_path else textprep.default_stopwords()
    )


def _bench_doc(task) -> tuple[str, str, list[tuple[float, int, float, float]]]:
    """Score one document for every (alpha, window) cell; used by workers."""
    subset, doc_path_str, alphas, windows, segments, fixed_k = task
    taxonomy: Taxonomy = _WORKER["taxonomy"]
    gazetteer = _WORKER["gazetteer"]
    stopwords = _WORKER["stopwords"]

    doc_path = Path(doc_path_str)
    segmented = dataset.read_choi(doc_path)
    sentences = segmented.sentences
    ref = dataset.reference_segmentation(segmented)
    sidecar = doc_path.with_suffix(".ann.jsonl")
    if sidecar.is_file():
        doc = annotation.load_annotations(sentences, sidecar, doc_id=doc_path.stem)
    elif gazetteer is not None:
        doc = annotation.gazetteer_annotate(sentences, gazetteer, doc_id=doc_path.stem)
    else:
        raise ConfigError(f"no sidecar for {doc_path} and no --gazetteer given")

    cfg = (
        metrics.EvalConfig(k=fixed_k, k_policy="fixed")
        if fixed_k
        else metrics.EvalConfig(k=metrics.choose_k([ref]), k_policy="fixed")
    )
    cells = []
    for window in windows:
        blocks = segmentation.make_blocks(doc, segmentation.WindowConfig(window), stopwords)
        for alpha in alphas:
            dendro = segmentation.build_dendrogram(blocks, taxonomy, SimilarityWeights(alpha))
            # Short documents can hold fewer blocks than requested segments;
            # fall back to the finest cut available.
            k = min(segments, len(blocks))
            hyp = segmentation.flatten(dendro, k)
            cells.append(
                (
                    alpha,
                    window,
                    metrics.pk_score(ref, hyp, cfg),
                    metrics.window_diff_score(ref, hyp, cfg),
                )
            )
    return subset, doc_path.stem, cells


def _render_bench_tables(kind: str, subsets, alphas, windows, means) -> list[str]:
    lines = []
    for alpha in alphas:
        lines.append(f"{kind} error rates, alpha = {alpha:g}")
        lines.append("\t".join(["window", *subsets]))
        for w in windows:
            row = [f"W = {w}"]
            for subset in subsets:
                row.append(f"{means[(subset, alpha, w)]:.4f}")
            lines.append("\t".join(row))
        lines.append("")
    return lines


def cmd_bench(args) -> int:
    data_root = _require_dir(args.dataset, "dataset")
    _require_file(args.taxonomy, "taxonomy")
    if args.gazetteer:
        _require_file(args.gazetteer, "gazetteer")
    try:
        alphas = [float(a) for a in args.alphas.split(",")]
        windows = [int(w) for w in args.windows.split(",")]
    except ValueError as exc:
        raise ConfigError(f"bad --alphas/--windows: {exc}") from exc
    if any(not 0 <= a <= 1 for a in alphas):
        raise ConfigError("alphas must lie in [0, 1]")

    subsets = sorted(p.name for p in data_root.iterdir() if p.is_dir())
    if not subsets:
        raise ConfigError(f"dataset {data_root} has no subset directories")
    tasks = []
    for subset in subsets:
        for doc_path in sorted((data_root / subset).glob("*.txt")):
            tasks.append((subset, str(doc_path), alphas, windows, args.segments, args.k))
    if not tasks:
        raise FormatError(f"dataset {data_root} holds no documents")

    init_args = (args.taxonomy, args.gazetteer, args.stopwords)
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs, initializer=_bench_init, initargs=init_args) as pool:
            results = list(pool.map(_bench_doc, tasks))
    else:
        _bench_init(*init_args)
        results = [_bench_doc(task) for task in tasks]

    sums: dict[tuple[str, float, int], list[float]] = {}
    counts: dict[tuple[str, float, int], int] = {}
    tsv_rows = []
    for subset, doc_id, cells in sorted(results, key=lambda r: (r[0], r[1])):
        for alpha, window, pk, wd in cells:
            key = (subset, alpha, window)
            acc = sums.setdefault(key, [0.0, 0.0])
            acc[0] += pk
            acc[1] += wd
            counts[key] = counts.get(key, 0) + 1
            tsv_rows.append(f"{subset}\t{doc_id}\t{alpha:g}\t{window}\t{pk:.6f}\t{wd:.6f}")

    wd_means = {k: v[1] / counts[k] for k, v in sums.items()}
    pk_means = {k: v[0] / counts[k] for k, v in sums.items()}
    lines = _render_bench_tables("WindowDiff", subsets, alphas, windows, wd_means)
    lines += _render_bench_tables("Pk", subsets, alphas, windows, pk_means)
    rendered = "\n".join(lines)

    if args.output:
        Path(args.output).write_text(rendered, encoding="utf-8")
        print(f"wrote {args.output}")
    else:
        sys.stdout.write(rendered)
    if args.tsv:
        header = "subset\tdoc_id\talpha\twindow\tpk\twindow_diff"
        Path(args.tsv).write_text("\n".join([header, *tsv_rows]) + "\n", encoding="utf-8")
        print(f"wrote {args.tsv}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="taxoseg", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("annotate", help="attach entity annotations as sidecar files")
    p.add_argument("input", help="document file or directory of .txt documents")
    p.add_argument("--gazetteer", help="gazetteer JSON (offline, deterministic)")
    p.add_argument("--endpoint", help=f"annotation service URL (or ${ENDPOINT_ENV})")
    p.add_argument("--confidence", type=float, default=annotation.DEFAULT_CONFIDENCE,
                   help="service confidence threshold (default %(default)s)")
    p.add_argument("--output", help="sidecar path (single-file mode only)")
    p.set_defaults(func=cmd_annotate)

    p = sub.add_parser("segment", help="segment one document")
    p.add_argument("input", help="document file (plain or marker-delimited)")
    p.add_argument("--taxonomy", required=True, help="taxonomy JSON file")
    p.add_argument("--alpha", type=float, default=0.0,
                   help="lexical weight in [0,1]; 0 = ontological only (default %(default)s)")
    p.add_argument("--window", type=int, default=1, help="sentences per block (default %(default)s)")
    p.add_argument("--segments", type=int, default=10, help="output segment count (default %(default)s)")
    p.add_argument("--annotations", help="annotation sidecar (default: <input>.ann.jsonl if present)")
    p.add_argument("--gazetteer", help="gazetteer JSON for inline annotation")
    p.add_argument("--stopwords", help="stopword file overriding the bundled list")
    p.add_argument("--format", choices=("linear", "choi", "tree"), default="linear")
    p.add_argument("--output", help="output path (default: stdout)")
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("eval", help="score hypothesis segmentations against references")
    p.add_argument("--ref-dir", required=True)
    p.add_argument("--hyp-dir", required=True)
    p.add_argument("--k", type=int, help="fixed probe width (default: half mean segment length per doc)")
    p.add_argument("--output", help="report path (default: stdout)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("gen-dataset", help="generate concatenated-segment benchmark subsets")
    p.add_argument("--corpus", required=True, help="directory of source documents")
    p.add_argument("--output", required=True, help="output dataset root")
    p.add_argument("--subsets", default="3-11:400,3-5:100,6-8:100,9-11:100",
                   help="comma list of nLow-nHigh:samples (default %(default)s)")
    p.add_argument("--segments", type=int, default=10, help="segments per document (default %(default)s)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gen_dataset)

    p = sub.add_parser("bench", help="run the alpha x window grid over a dataset")
    p.add_argument("--dataset", required=True, help="dataset root with subset subdirectories")
    p.add_argument("--taxonomy", required=True)
    p.add_argument("--gazetteer", help="gazetteer JSON used when no sidecar exists")
    p.add_argument("--stopwords", help="stopword file overriding the bundled list")
    p.add_argument("--alphas", default="0,0.3,0.5,0.7")
    p.add_argument("--windows", default="1,2,3,4")
    p.add_argument("--segments", type=int, default=10)
    p.add_argument("--k", type=int, help="fixed probe width for scoring")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers (default %(default)s)")
    p.add_argument("--output", help="table path (default: stdout)")
    p.add_argument("--tsv", help="optional per-document TSV path")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"taxoseg: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"taxoseg: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RemoteServiceError as exc:
        print(f"taxoseg: remote service error: {exc}", file=sys.stderr)
        return EXIT_REMOTE
    except FormatError as exc:
        print(f"taxoseg: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except FileNotFoundError as exc:
        print(f"taxoseg: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
