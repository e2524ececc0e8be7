"""The ``nevl`` command line: corpus tools, scoring, contrastive evaluation,
synthetic data generation and the reference-free classifier.

Options resolve as flags > config file > built-in defaults, and every
JSON report echoes the resolved options plus SHA-256 digests of its
inputs. Output files are byte-identical across reruns with the same
inputs (online generation excepted).

Exit codes: 0 success, 1 input or operational error, 2 validation
findings under ``--strict``.
"""

from __future__ import annotations

import argparse
import dataclasses
import enum
import hashlib
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .classifier import (
    ClassBalance,
    ClassifierModel,
    ModelFormatError,
    TrainConfig,
    evaluate,
    load_model,
    predict,
    save_model,
    train,
)
from .contrastive import (
    CANONICAL_METRICS,
    ExclusionPolicy,
    RefPolicy,
    SystemOutput,
    TiePolicy,
    evaluate_protocol,
)
from .corpus import (
    CorpusFormatError,
    LexiconError,
    extract_candidates,
    load_lexicon,
    parse_corpus,
    reference_variability,
    starter_lexicon,
    stats,
    validate,
)
from .metrics import BleuConfig, ChrfConfig, Level, MeteorParams, MetricConfig, MetricKind, score
from .synthgen import (
    GenerationConfig,
    HttpChatClient,
    SeedLexiconError,
    TransportError,
    explode,
    generate_round1,
    generate_round2,
    holdout_split,
    load_seed_lexicon,
    offline_generate,
    read_synthetic_tsv,
    starter_seeds,
    validate_all,
    write_synthetic_tsv,
)

log = logging.getLogger("nevl")

EXIT_OK, EXIT_ERROR, EXIT_FINDINGS = 0, 1, 2
CONFIG_SECTIONS = ("corpus", "metrics", "contrastive", "synth", "classifier")
# keys that would carry a secret; the token is read from the environment only
FORBIDDEN_KEYS = {"token", "api_token", "api_key", "apikey", "authorization", "secret"}


class CliError(Exception):
    """An input or operational problem; reported on stderr with exit code 1."""


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors; exit code 2 is reserved for --strict findings
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


# ------------------------------------------------------------------ config


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CliError(f"config {path}: not valid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise CliError(f"config {path}: top level must be an object with sections")
    unknown = set(doc) - set(CONFIG_SECTIONS)
    if unknown:
        raise CliError(f"config {path}: unknown section(s) {sorted(unknown)}; valid: {list(CONFIG_SECTIONS)}")
    _reject_secrets(doc, path)
    return doc


def _reject_secrets(node: Any, path: str) -> None:
    if isinstance(node, dict):
        for key, value in node.items():
            if key.lower() in FORBIDDEN_KEYS:
                raise CliError(f"config {path}: {key!r} is not allowed; the API token is read from the environment only")
            _reject_secrets(value, path)


def _build(cls, data: dict | None, where: str):
    """Instantiate a config dataclass from a dict, coercing enums and tuples."""
    data = data or {}
    if not isinstance(data, dict):
        raise CliError(f"config section {where} must be an object")
    fields = {f.name: f for f in dataclasses.fields(cls)}
    kwargs = {}
    for key, value in data.items():
        if key not in fields:
            raise CliError(f"config section {where}: unknown option {key!r}; valid: {sorted(fields)}")
        default = cls().__getattribute__(key)
        if isinstance(default, enum.Enum):
            value = type(default)(value)
        elif isinstance(default, tuple):
            value = tuple(value)
        kwargs[key] = value
    return cls(**kwargs)


def _plain(obj: Any) -> Any:
    if dataclasses.is_dataclass(obj):
        return {f.name: _plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (list, tuple)):
        return [_plain(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    return obj


def metric_config(cfg: dict) -> MetricConfig:
    section = cfg.get("metrics") or {}
    unknown = set(section) - {"bleu", "chrf", "meteor"}
    if unknown:
        raise CliError(f"config section metrics: unknown metric(s) {sorted(unknown)}")
    return MetricConfig(
        bleu=_build(BleuConfig, section.get("bleu"), "metrics.bleu"),
        chrf=_build(ChrfConfig, section.get("chrf"), "metrics.chrf"),
        meteor=_build(MeteorParams, section.get("meteor"), "metrics.meteor"),
    )


def _pick(flag, section: dict, key: str, default):
    if flag is not None:
        return flag
    return section.get(key, default)


def parse_metrics(value: str | Sequence[str] | None, default=CANONICAL_METRICS) -> tuple[MetricKind, ...]:
    if value is None:
        return tuple(default)
    names = value.split(",") if isinstance(value, str) else list(value)
    names = [n for n in (x.strip() for x in names) if n]
    if not names:
        raise CliError("empty metric list")
    return tuple(MetricKind.parse(n) for n in names)


# -------------------------------------------------------------------- I/O


def digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def read_text(path: str | Path) -> str:
    return Path(path).read_bytes().decode("utf-8-sig")


def write_text(path: str | Path | None, text: str) -> None:
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def dump_json(obj: Any) -> str:
    return json.dumps(obj, ensure_ascii=False, indent=2, sort_keys=False) + "\n"


def report(command: str, config: dict, inputs: dict[str, str | Path], result: Any) -> dict:
    return {
        "command": command,
        "version": __version__,
        "config": _plain(config),
        "inputs": {role: {"path": str(p), "sha256": digest(p)} for role, p in inputs.items()},
        "result": result,
    }


def _side_path(out: str | None, suffix: str) -> Path | None:
    if out is None or out == "-":
        return None
    return Path(out).with_name(Path(out).name + suffix)


def read_table(path: str | Path, required: Sequence[str], optional: Sequence[str] = ()) -> list[dict[str, str]]:
    """A headed TSV; returns one dict per non-empty row, keyed by column name."""
    lines = read_text(path).split("\n")
    header = lines[0].rstrip("\r").split("\t")
    missing = [c for c in required if c not in header]
    if missing:
        raise CliError(f"{path}: missing column(s) {missing}; header is {header}")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        line = line.rstrip("\r")
        if not line.strip():
            continue
        cols = line.split("\t")
        if len(cols) > len(header):
            raise CliError(f"{path} line {lineno}: {len(cols)} columns, header has {len(header)}")
        cols += [""] * (len(header) - len(cols))
        rows.append({**{c: "" for c in optional}, **dict(zip(header, cols)), "_line": str(lineno)})
    return rows


def read_outputs(path: str | Path) -> list[SystemOutput]:
    out = []
    for row in read_table(path, ("ENTRY_ID", "TEXT"), ("POSTEDIT_SOURCE",)):
        src = row["POSTEDIT_SOURCE"].strip()
        try:
            out.append(SystemOutput(row["ENTRY_ID"], row["TEXT"], int(src) if src else None))
        except ValueError as exc:
            raise CliError(f"{path} line {row['_line']}: {exc}") from None
    if not out:
        raise CliError(f"{path}: no system outputs")
    return out


def read_lines(path: str | Path) -> list[str]:
    text = read_text(path)
    lines = text.split("\n")
    if text.endswith("\n"):
        lines.pop()
    return [l.rstrip("\r") for l in lines]


# ----------------------------------------------------------------- corpus


def cmd_corpus(args, cfg: dict) -> int:
    section = cfg.get("corpus") or {}
    if args.action == "extract":
        return _corpus_extract(args, cfg)
    corpus = parse_corpus(Path(args.input).read_bytes(), name=Path(args.input).name)
    resolved: dict[str, Any] = {"action": args.action}
    if args.action == "validate":
        tolerance = int(_pick(args.tolerance, section, "tolerance", 0))
        resolved.update(tolerance=tolerance, strict=args.strict)
        result = validate(corpus, tolerance)
        write_text(args.out, dump_json(report("corpus validate", resolved, {"corpus": args.input}, result.to_dict())))
        if not result.ok:
            log.warning("%d finding(s): %s", len(result.findings), ", ".join(sorted(set(result.codes()))))
            if args.strict:
                return EXIT_FINDINGS
        return EXIT_OK
    if args.action == "stats":
        write_text(args.out, dump_json(report("corpus stats", resolved, {"corpus": args.input}, stats(corpus).to_dict())))
        return EXIT_OK
    # variability
    metrics = parse_metrics(args.metrics or section.get("variability_metric"), (MetricKind.BLEU,))
    if len(metrics) != 1:
        raise CliError("variability takes a single metric")
    metric = metrics[0]
    mcfg = metric_config(cfg)
    resolved.update(metric=metric.value, metrics_config=mcfg)

    def scorer(hyps, refs):
        return score(metric, hyps, refs, Level.CORPUS, mcfg).report_value()

    common = corpus.subset(common_only=True)
    if not common.entries:
        raise CliError(f"{args.input}: no common-set entries with three neutral references")
    matrices = reference_variability(common, scorer)
    result = {tag.value: m.to_dict() for tag, m in matrices.items()}
    write_text(args.out, dump_json(report("corpus variability", resolved, {"corpus": args.input}, result)))
    return EXIT_OK


def _corpus_extract(args, cfg: dict) -> int:
    inputs: dict[str, Any] = {"segments": args.input}
    if args.lexicon:
        lexicon = load_lexicon(Path(args.lexicon).read_bytes())
        inputs["lexicon"] = args.lexicon
    else:
        lexicon = starter_lexicon()
    rows = read_table(args.input, ("SOURCE", "TARGET"))
    cands = extract_candidates(((r["SOURCE"], r["TARGET"]) for r in rows), lexicon)
    lines = ["SOURCE\tTARGET\tSET\tGENDERED_CUES\tNEUTRAL_CUES\tHINT"]
    for c in cands:
        hint = c.category_hint.value if c.category_hint else ""
        lines.append(f"{c.source}\t{c.target}\t{c.set_tag.value}\t{'|'.join(c.gendered_cues)}\t{'|'.join(c.neutral_cues)}\t{hint}")
    write_text(args.out, "\n".join(lines) + "\n")
    side = _side_path(args.out, ".report.json")
    if side:
        counts = {tag: sum(1 for c in cands if c.set_tag.value == tag) for tag in ("Set-G", "Set-N")}
        result = {"segments": len(rows), "candidates": len(cands), "per_set": counts}
        resolved = {"action": "extract", "lexicon": "starter" if not args.lexicon else "file"}
        write_text(side, dump_json(report("corpus extract", resolved, inputs, result)))
    return EXIT_OK


# ------------------------------------------------------------------ score


def cmd_score(args, cfg: dict) -> int:
    metrics = parse_metrics(args.metrics, (MetricKind.BLEU, MetricKind.CHRF, MetricKind.TER, MetricKind.METEOR))
    mcfg = metric_config(cfg)
    hyps = read_lines(args.input)
    ref_sets = [read_lines(r) for r in args.ref]
    for path, refs in zip(args.ref, ref_sets):
        if len(refs) != len(hyps):
            raise CliError(f"{path}: {len(refs)} lines but the hypothesis file has {len(hyps)}")
    if not hyps:
        raise CliError(f"{args.input}: no hypotheses")
    refs_per_seg = [[refs[i] for refs in ref_sets] for i in range(len(hyps))]
    result = {}
    for m in metrics:
        entry: dict[str, Any] = {"corpus": score(m, hyps, refs_per_seg, Level.CORPUS, mcfg).report_value()}
        if args.sentences:
            entry["sentences"] = [score(m, [h], [r], Level.SENTENCE, mcfg).report_value() for h, r in zip(hyps, refs_per_seg)]
        result[m.value] = entry
    resolved = {"metrics": [m.value for m in metrics], "sentences": args.sentences, "metrics_config": mcfg}
    inputs = {"hypotheses": args.input, **{f"reference_{k + 1}": r for k, r in enumerate(args.ref)}}
    write_text(args.out, dump_json(report("score", resolved, inputs, result)))
    return EXIT_OK


# -------------------------------------------------------- eval-contrastive


def cmd_eval_contrastive(args, cfg: dict) -> int:
    section = cfg.get("contrastive") or {}
    metrics = parse_metrics(args.metrics or section.get("metrics"))
    ref_policy_s = _pick(args.ref_policy, section, "ref_policy", None)
    ref_policy = RefPolicy.parse(ref_policy_s) if ref_policy_s else None
    tie_policy = TiePolicy(_pick(args.tie_policy, section, "tie_policy", TiePolicy.INCORRECT.value))
    strict = args.strict or bool(section.get("strict", False))
    exclusion = ExclusionPolicy.STRICT if strict else ExclusionPolicy.LENIENT
    mcfg = metric_config(cfg)

    corpus = parse_corpus(Path(args.input).read_bytes(), name=Path(args.input).name)
    outputs = read_outputs(args.outputs)
    protocol = evaluate_protocol(outputs, corpus, metrics, ref_policy, tie_policy, exclusion, mcfg)
    resolved = {
        "metrics": [m.value for m in metrics],
        "ref_policy": protocol.ref_policy,
        "tie_policy": tie_policy.value,
        "exclusion": exclusion.value,
        "metrics_config": mcfg,
    }
    body = report("eval-contrastive", resolved, {"corpus": args.input, "outputs": args.outputs}, protocol.to_dict())
    write_text(args.out, dump_json(body))
    side = _side_path(args.out, ".verdicts.tsv")
    if side:
        write_text(side, protocol.verdicts_tsv())
    return EXIT_OK


# ------------------------------------------------------------------ synth


def _gen_config(args, cfg: dict) -> GenerationConfig:
    section = dict(cfg.get("synth") or {})
    section.pop("per_seed", None)
    section.pop("rng", None)
    section.pop("holdout_fraction", None)
    gen = _build(GenerationConfig, section, "synth")
    overrides = {}
    if args.endpoint is not None:
        overrides["endpoint"] = args.endpoint
    if args.model_name is not None:
        overrides["model_name"] = args.model_name
    if args.per_seed is not None and args.online:
        overrides["sentences_per_seed"] = args.per_seed
    return dataclasses.replace(gen, **overrides)


def _label_counts(examples) -> dict[str, int]:
    counts = {"N": 0, "M": 0, "F": 0}
    for e in examples:
        counts[e.label.value] += 1
    return counts


def cmd_synth(args, cfg: dict) -> int:
    if args.action == "split":
        return _synth_split(args, cfg)
    section = cfg.get("synth") or {}
    inputs: dict[str, Any] = {}
    if args.seeds:
        lexicon = load_seed_lexicon(Path(args.seeds).read_bytes())
        inputs["seeds"] = args.seeds
    else:
        lexicon = starter_seeds()
    seeds = list(lexicon.seeds)
    gen = _gen_config(args, cfg)

    if args.online:
        client = HttpChatClient(gen.endpoint, gen.model_name, gen.token_env, gen.max_retries, gen.request_timeout)
        r1 = generate_round1(client, seeds, gen)
        r2 = generate_round2(client, r1.triplets, gen)
        examples = validate_all(explode(r1.triplets + r2.triplets), seeds)
        rounds = {
            "R1": {"triplets": len(r1.triplets), "skipped_blocks": r1.skipped, "requests": r1.requests},
            "R2": {"triplets": len(r2.triplets), "skipped_blocks": r2.skipped, "requests": r2.requests},
        }
        requested = 3 * len(seeds) * gen.sentences_per_seed * (1 + gen.rewrites_per_sentence)
        resolved = {"mode": "online", "generation": gen}
    else:
        per_seed = int(_pick(args.per_seed, section, "per_seed", 10))
        rng = int(_pick(args.rng, section, "rng", 0))
        examples = offline_generate(seeds, per_seed, rng)
        requested = 3 * len(seeds) * per_seed
        rounds = {"OFFLINE": {"triplets": len(examples) // 3}}
        resolved = {"mode": "offline", "per_seed": per_seed, "rng": rng}

    kept = [e for e in examples if e.valid]
    write_text(args.out, write_synthetic_tsv(kept))
    result = {
        "seeds": len(seeds),
        "seed_duplicates_dropped": lexicon.duplicates_dropped,
        "requested": requested,
        "generated": len(examples),
        "produced": len(kept),
        "dropped_invalid": len(examples) - len(kept),
        "generated_per_category": _label_counts(examples),
        "produced_per_category": _label_counts(kept),
        "rounds": rounds,
    }
    side = _side_path(args.out, ".report.json")
    if side:
        write_text(side, dump_json(report("synth generate", resolved, inputs, result)))
    else:
        sys.stderr.write(dump_json(report("synth generate", resolved, inputs, result)))
    return EXIT_OK


def _synth_split(args, cfg: dict) -> int:
    section = cfg.get("synth") or {}
    if args.out is None or args.test_out is None:
        raise CliError("synth split needs --out (train part) and --test-out (held-out part)")
    fraction = float(_pick(args.holdout, section, "holdout_fraction", 0.2))
    rng = int(_pick(args.rng, section, "rng", 0))
    examples = read_synthetic_tsv(read_text(args.input))
    train_part, test_part = holdout_split(examples, fraction, rng)
    write_text(args.out, write_synthetic_tsv(train_part))
    write_text(args.test_out, write_synthetic_tsv(test_part))
    result = {
        "train": len(train_part),
        "test": len(test_part),
        "train_seeds": len({e.seed_id for e in train_part}),
        "test_seeds": len({e.seed_id for e in test_part}),
    }
    write_text(
        _side_path(args.out, ".report.json"),
        dump_json(report("synth split", {"holdout_fraction": fraction, "rng": rng, "group": "seed_id"}, {"synthetic": args.input}, result)),
    )
    return EXIT_OK


# ------------------------------------------------------------- classifier


def _train_config(args, cfg: dict) -> TrainConfig:
    section = dict(cfg.get("classifier") or {})
    conf = _build(TrainConfig, section, "classifier")
    if args.rng is not None:
        conf = dataclasses.replace(conf, rng_seed=args.rng)
    if getattr(args, "balance", None) is not None:
        conf = dataclasses.replace(conf, class_balance=ClassBalance(args.balance))
    return conf


def _labeled_rows(path: str) -> list[tuple[str, str]]:
    rows = read_table(path, ("TEXT", "LABEL"), ("VALID",))
    return [(r["TEXT"], r["LABEL"]) for r in rows if r["VALID"] != "0"]


def cmd_classifier(args, cfg: dict) -> int:
    if args.action == "train":
        if args.out is None:
            raise CliError("classifier train needs --out for the model file")
        conf = _train_config(args, cfg)
        data = _labeled_rows(args.input)
        model = train(data, conf)
        save_model(model, args.out)
        result = {k: model.metadata[k] for k in ("n_examples", "n_neutral", "updates", "corpus_digest", "config_digest")}
        write_text(
            _side_path(args.out, ".report.json"),
            dump_json(report("classifier train", {"train": conf.to_dict()}, {"training": args.input}, result)),
        )
        return EXIT_OK

    if args.model is None:
        raise CliError(f"classifier {args.action} needs --model")
    model = ClassifierModel.zero() if args.model == "zero" else load_model(args.model)
    model_input = {} if args.model == "zero" else {"model": args.model}
    if args.action == "classify":
        rows = read_table(args.input, ("TEXT",))
        lines = ["TEXT\tLABEL\tPROB"]
        for r in rows:
            p = predict(model, r["TEXT"])
            lines.append(f"{r['TEXT']}\t{p.label.value}\t{p.probability:.6f}")
        write_text(args.out, "\n".join(lines) + "\n")
        return EXIT_OK
    # evaluate
    data = _labeled_rows(args.input)
    if not data:
        raise CliError(f"{args.input}: nothing to evaluate")
    result = evaluate(model, data).to_dict()
    resolved = {"threshold": model.threshold, "model_config": model.metadata.get("train_config")}
    write_text(args.out, dump_json(report("classifier evaluate", resolved, {**model_input, "labeled": args.input}, result)))
    return EXIT_OK


# ----------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nevl", description="Evaluation tools for gender-neutral English-Italian translation.")
    p.add_argument("--version", action="version", version=f"nevl {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, needs_in=True):
        sp.add_argument("--in", dest="input", required=needs_in, help="input file")
        sp.add_argument("--out", help="output file (stdout when omitted)")
        sp.add_argument("--config", help="JSON config file with per-module sections")

    c = sub.add_parser("corpus", help="validate, summarise or build a gold corpus")
    c.add_argument("action", choices=("validate", "stats", "extract", "variability"))
    common(c)
    c.add_argument("--strict", action="store_true", help="exit 2 when validation finds problems")
    c.add_argument("--tolerance", type=int, help="allowed count difference in balance checks")
    c.add_argument("--lexicon", help="cue lexicon TSV for extract (default: bundled starter lexicon)")
    c.add_argument("--metrics", help="metric for variability (default bleu)")

    s = sub.add_parser("score", help="score hypotheses against one or more reference files")
    common(s)
    s.add_argument("--ref", action="append", required=True, help="reference file, one line per hypothesis (repeatable)")
    s.add_argument("--metrics", help="comma-separated subset of bleu,chrf,ter,meteor")
    s.add_argument("--sentences", action="store_true", help="also report sentence-level scores")

    e = sub.add_parser("eval-contrastive", help="contrastive evaluation of system outputs on a gold corpus")
    common(e)
    e.add_argument("--outputs", required=True, help="TSV with ENTRY_ID, TEXT and optional POSTEDIT_SOURCE")
    e.add_argument("--metrics", help="comma-separated metrics (default bleu,ter,meteor)")
    e.add_argument("--ref-policy", help="best, exclude-source, single:K or pairwise")
    e.add_argument("--tie-policy", choices=[t.value for t in TiePolicy])
    e.add_argument("--strict", action="store_true", help="reject common-set Set-N outputs without POSTEDIT_SOURCE")

    y = sub.add_parser("synth", help="generate or split synthetic training data")
    y.add_argument("action", choices=("generate", "split"))
    common(y, needs_in=False)
    mode = y.add_mutually_exclusive_group()
    mode.add_argument("--offline", dest="online", action="store_false", help="template generator, no network (default)")
    mode.add_argument("--online", dest="online", action="store_true", help="prompted generation via a chat endpoint")
    y.set_defaults(online=False)
    y.add_argument("--seeds", help="seed triplet TSV (default: bundled lexicon)")
    y.add_argument("--per-seed", type=int, help="triplets per seed")
    y.add_argument("--rng", type=int, help="random seed")
    y.add_argument("--endpoint", help="chat-completion endpoint URL")
    y.add_argument("--model-name", help="model name sent to the endpoint")
    y.add_argument("--holdout", type=float, help="held-out fraction of seeds for split")
    y.add_argument("--test-out", help="held-out part for split")

    k = sub.add_parser("classifier", help="train, apply or evaluate the reference-free classifier")
    k.add_argument("action", choices=("train", "classify", "evaluate"))
    common(k)
    k.add_argument("--model", help="model file (or 'zero' for the zero-weight debug model)")
    k.add_argument("--rng", type=int, help="shuffle seed for training")
    k.add_argument("--balance", choices=[b.value for b in ClassBalance])
    return p


COMMANDS = {
    "corpus": cmd_corpus,
    "score": cmd_score,
    "eval-contrastive": cmd_eval_contrastive,
    "synth": cmd_synth,
    "classifier": cmd_classifier,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        cfg = load_config(args.config)
        if args.command == "synth" and args.action == "split" and args.input is None:
            raise CliError("synth split needs --in")
        return COMMANDS[args.command](args, cfg)
    except BrokenPipeError:
        # downstream reader (e.g. head) closed early; not an error of ours
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK
    except (CliError, CorpusFormatError, LexiconError, SeedLexiconError, ModelFormatError, TransportError) as exc:
        print(f"nevl: error: {exc}", file=sys.stderr)
    except (OSError, UnicodeDecodeError) as exc:
        print(f"nevl: error: {exc}", file=sys.stderr)
    except (ValueError, KeyError, TypeError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"nevl: error: {msg}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
