"""Single entry point wiring every module into file-based subcommands."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import __version__, audit as audit_mod, corpus, metrics
from .annotate import create_app, load_annotators, load_tasks
from .annotate.service import load_pages
from .annotate.store import TaskStore
from .errors import AdiAuditError, FormatError, ValidationError
from .judgments import JudgmentSet
from .manifest import build_manifest, dump_report
from .textnorm import normalize_sentence


def _read_tsv(path):
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh, delimiter="\t", quoting=csv.QUOTE_NONE)
        rows = list(reader)
    if not rows:
        raise FormatError(f"{path}: empty file, expected a header row")
    return rows[0], rows[1:]


def _cmd_normalize(args):
    header, rows = _read_tsv(args.input)
    if args.column not in header:
        raise FormatError(f"{args.input}: no column named {args.column!r}")
    col = header.index(args.column)
    with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\t".join(header) + "\n")
        for cells in rows:
            cells = cells + [""] * (len(header) - len(cells))
            cells[col] = normalize_sentence(cells[col], fold_orthography=args.fold_orthography)
            fh.write("\t".join(cells) + "\n")
    if not args.quiet:
        print(f"normalized {len(rows)} rows -> {args.output}")
    return 0


def _cmd_transform(args):
    city_map = (
        corpus.CityCountryMap.from_tsv(args.city_map)
        if args.city_map
        else corpus.CityCountryMap.bundled()
    )
    rows = corpus.ingest_parallel(args.input, format=args.format)
    ds = corpus.parallel_to_di(rows, city_map, fold_orthography=args.fold_orthography)
    if args.drop_msa:
        ds = ds.drop_label("MSA")
    corpus.save_dataset(ds, args.output)
    if not args.quiet:
        print(
            f"{len(rows)} parallel rows -> {len(ds)} samples over "
            f"{len(ds.label_inventory)} labels ({args.output}); counters={ds.counters}"
        )
    return 0


def _cmd_audit(args):
    ds = corpus.ingest_labeled(args.input)
    report = audit_mod.audit_dataset(ds, weighting=args.weighting, top_k=args.top_k)
    payload = {
        "manifest": build_manifest(
            "audit",
            {"weighting": args.weighting, "top_k": args.top_k},
            {"input": args.input},
        ),
        **report.to_dict(),
    }
    dump_report(payload, args.report)
    if not args.quiet:
        mass = metrics.round_half_away(report.multi_validity_mass, 1)
        ema = metrics.round_half_away(report.expected_max_accuracy, 1)
        print(f"samples={report.distribution.sample_count} N={report.distribution.n_dialects}")
        print(f"multi-validity mass={mass}% expected max accuracy={ema}%")
        print(f"report -> {args.report}")
    return 0


def _cmd_simulate(args):
    ds = corpus.ingest_labeled(args.input)
    groups = audit_mod.group_validity(ds)
    dist = audit_mod.perc_distribution(groups, ds)
    seed = args.seed if args.seed is not None else (args.global_seed or 0)
    simulated = audit_mod.simulate_oracle(ds, groups, trials=args.trials, seed=seed)
    payload = {
        "manifest": build_manifest(
            "simulate", {"trials": args.trials}, {"input": args.input}, seed=seed
        ),
        "simulated_accuracy": simulated,
        "expected_max_accuracy": audit_mod.expected_max_accuracy(dist),
        "trials": args.trials,
        "seed": seed,
    }
    out = dump_report(payload, args.report)
    if not args.quiet:
        sys.stdout.write(out)
    return 0


def _cmd_evaluate(args):
    ds = corpus.ingest_labeled(args.gold)
    pairs = corpus.load_predictions(args.pred, ds)
    gold = [s.label for s in ds.samples]
    pred = [p for _, p in pairs]
    cm = metrics.confusion(gold, pred, labels=ds.label_inventory)
    report = metrics.classification_report(cm)
    counts = metrics.eval_counts(cm)
    fp_ids = {
        label: sorted(
            s.sample_id
            for s, (_, p) in zip(ds.samples, pairs)
            if p == label and s.label != label
        )
        for label in cm.labels
    }
    payload = {
        "manifest": build_manifest(
            "evaluate", {}, {"gold": args.gold, "pred": args.pred}
        ),
        "labels": list(cm.labels),
        "confusion": cm.counts,
        "report": report,
        "eval_counts": {
            label: {"tp": ec.tp, "fp": ec.fp, "fn": ec.fn, "support": ec.support}
            for label, ec in counts.items()
        },
        "fp_sample_ids": fp_ids,
        "samples": [
            {"id": s.sample_id, "gold": s.label, "pred": p}
            for s, (_, p) in zip(ds.samples, pairs)
        ],
    }
    dump_report(payload, args.report)
    if args.confusion:
        Path(args.confusion).write_text(cm.to_csv(), encoding="utf-8")
    if args.fps_out:
        from .annotate.store import import_fps, save_tasks

        tasks = import_fps(
            [s.sample_id for s in ds.samples], gold, pred, [s.sentence for s in ds.samples]
        )
        save_tasks(tasks, args.fps_out)
    if not args.quiet:
        acc = metrics.round_half_away(report["accuracy"], 4)
        macro_f1 = metrics.round_half_away(report["macro_avg"]["f1"], 4)
        print(f"accuracy={acc} macro F1={macro_f1}; report -> {args.report}")
    return 0


def _cmd_correct(args):
    eval_payload = json.loads(Path(args.eval).read_text(encoding="utf-8"))
    judgments = JudgmentSet.load(args.judgments)
    eval_counts = eval_payload["eval_counts"]
    fp_ids = eval_payload.get("fp_sample_ids", {})
    pairs = []
    for dialect in judgments.dialects():
        if dialect not in eval_counts:
            raise ValidationError(f"judgments reference unknown dialect {dialect!r}")
        raw = eval_counts[dialect]
        ec = metrics.EvalCounts(dialect=dialect, tp=raw["tp"], fp=raw["fp"], fn=raw["fn"])
        cc = metrics.corrected_counts(
            ec, judgments, fp_ids=set(fp_ids[dialect]) if dialect in fp_ids else None
        )
        pairs.append((ec, cc))
    corrected = metrics.corrected_report(pairs)
    samples = eval_payload.get("samples", [])
    breakdown = None
    if samples:
        breakdown = metrics.fp_breakdown(
            judgments,
            [s["id"] for s in samples],
            [s["gold"] for s in samples],
            [s["pred"] for s in samples],
        )
    payload = {
        "manifest": build_manifest(
            "correct", {}, {"eval": args.eval, "judgments": args.judgments}
        ),
        "corrected": corrected,
        "fp_breakdown": breakdown,
        "note": "macro averages cover only the dialects with validated judgments",
    }
    dump_report(payload, args.report)
    if not args.quiet:
        macro = corrected["macro_avg"]
        print(
            "macro F1="
            + f"{metrics.round_half_away(macro['f1'])}"
            + f" -> F1*={metrics.round_half_away(macro['f1_star'])}"
            + f" over {len(corrected['per_dialect'])} dialect(s); report -> {args.report}"
        )
    return 0


def _read_label_column(path):
    header, rows = _read_tsv(path)
    if "label" not in header:
        raise FormatError(f"{path}: expected a 'label' column")
    col = header.index("label")
    return [cells[col] if col < len(cells) else "" for cells in rows]


def _cmd_kappa(args):
    a = _read_label_column(args.a)
    b = _read_label_column(args.b)
    kappa = metrics.cohen_kappa(a, b)
    payload = {
        "manifest": build_manifest("kappa", {}, {"a": args.a, "b": args.b}),
        "kappa": kappa,
        "items": len(a),
    }
    out = dump_report(payload, args.report)
    if not args.quiet:
        sys.stdout.write(out)
    return 0


def _cmd_serve(args):
    import uvicorn

    tasks = load_tasks(args.tasks)
    annotators = load_annotators(args.annotators)
    store = TaskStore(
        store_dir=args.store,
        tasks=tasks,
        annotators=annotators,
        lease_seconds=args.lease_seconds,
    )
    pages = load_pages(args.pages) if args.pages else None
    app = create_app(store, pages=pages, ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning" if args.quiet else "info")
    return 0


def _cmd_export_judgments(args):
    store_dir = Path(args.store)
    log = store_dir / "judgments.log"
    judgments = (
        JudgmentSet.from_jsonl(log.read_text(encoding="utf-8")) if log.exists() else JudgmentSet()
    )
    judgments.save(args.output)
    if not args.quiet:
        print(f"exported {len(judgments)} judgment(s) -> {args.output}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adi-audit",
        description="Audit dialect-ID datasets, correct metrics with native-speaker judgments.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--quiet", action="store_true", help="suppress stdout summaries")
    parser.add_argument(
        "--seed", dest="global_seed", type=int, default=None, help="fallback seed for randomized subcommands"
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("normalize", help="normalize one TSV column of Arabic text")
    p.add_argument("--input", required=True)
    p.add_argument("--column", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--fold-orthography", action="store_true")
    p.set_defaults(func=_cmd_normalize)

    p = sub.add_parser("transform", help="flatten a parallel corpus into labeled samples")
    p.add_argument("--format", choices=corpus.PARALLEL_FORMATS, default="generic-tsv")
    p.add_argument("--city-map", default=None, help="label->country TSV (default: bundled map)")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--drop-msa", action="store_true")
    p.add_argument("--fold-orthography", action="store_true")
    p.set_defaults(func=_cmd_transform)

    p = sub.add_parser("audit", help="multi-validity distribution and the accuracy bound")
    p.add_argument("--input", required=True)
    p.add_argument("--report", required=True)
    p.add_argument("--weighting", choices=("samples", "sentences"), default="samples")
    p.add_argument("--top-k", type=int, default=20)
    p.set_defaults(func=_cmd_audit)

    p = sub.add_parser("simulate", help="Monte-Carlo check of the accuracy bound")
    p.add_argument("--input", required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--report", default=None, help="optional JSON output path")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("evaluate", help="confusion matrix and classification report")
    p.add_argument("--gold", required=True)
    p.add_argument("--pred", required=True)
    p.add_argument("--report", required=True)
    p.add_argument("--confusion", default=None, help="optional CSV path for the matrix")
    p.add_argument("--fps-out", default=None, help="optional annotation-task TSV of the FPs")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("correct", help="judgment-corrected precision/recall/F1")
    p.add_argument("--eval", required=True)
    p.add_argument("--judgments", required=True)
    p.add_argument("--report", required=True)
    p.set_defaults(func=_cmd_correct)

    p = sub.add_parser("kappa", help="Cohen's kappa between two label files")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--report", default=None)
    p.set_defaults(func=_cmd_kappa)

    p = sub.add_parser("serve", help="run the annotation service")
    p.add_argument("--tasks", required=True)
    p.add_argument("--store", required=True)
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--annotators", required=True)
    p.add_argument("--lease-seconds", type=float, default=900.0)
    p.add_argument("--pages", default=None, help="JSON file with instruction/example pages")
    p.add_argument("--ui", default=None, help="directory with the static annotation UI")
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("export-judgments", help="dump the judgment log as line-delimited JSON")
    p.add_argument("--store", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=_cmd_export_judgments)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except AdiAuditError as exc:
        sys.stderr.write(json.dumps({"error": exc.code, "message": str(exc)}) + "\n")
        return 1
    except UnicodeDecodeError as exc:
        sys.stderr.write(json.dumps({"error": "decoding_error", "message": str(exc)}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
