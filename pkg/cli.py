"""
Command line for the sem-tagging toolkit.

    python cli.py validate corpus.tsv
    python cli.py train train.tsv --model model.txt
    python cli.py tag --model model.txt plain.txt tagged.tsv
    python cli.py eval gold.tsv predicted.tsv [--against baseline.tsv]
    python cli.py baseline train.tsv gold.tsv [--model model.txt]
    python cli.py bootstrap seed.tsv unlabeled.txt heldout.tsv --model out.txt
    python cli.py schema EXS 'S\\NP' walk Agent
    python cli.py tagset [--format tsv]

`-` stands for stdin/stdout wherever a corpus path is expected. Output files
are written to a temporary sibling and renamed, so a failing command leaves
nothing behind. Logs go to stderr.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from typing import Dict, List, Optional

from bootstrap import bootstrap
from config import BootstrapConfig, CliConfig, TaggerConfig, build
from corpus import read_plain, read_tagged, validate_tagged, write_tagged, write_text
from drs import show, to_fol
from errors import MISSING_INPUT_EXIT_CODE, USAGE_EXIT_CODE, SemtagError
from evaluation import compare, evaluate, render_lines, render_text
from model_io import load_model, save_model
from schemas import SCHEMA_PATH, SchemaRegistry, default_registry, interpret
from tagset import default_tagset
from taggers import TAGGERS

LOGGER = logging.getLogger(__name__)

# which parsed arguments hold paths, per command
PATH_ARGS = {
    "validate": ("corpus",),
    "train": ("train", "model"),
    "tag": ("model", "input", "output"),
    "eval": ("gold", "predicted", "against"),
    "baseline": ("train", "gold", "model"),
    "bootstrap": ("seed", "unlabeled", "heldout", "model"),
}
# paths that are read, and so must exist up front
INPUT_ARGS = {
    "validate": ("corpus",),
    "train": ("train",),
    "tag": ("model", "input"),
    "eval": ("gold", "predicted", "against"),
    "baseline": ("train", "gold", "model"),
    "bootstrap": ("seed", "unlabeled", "heldout"),
}


class MissingInput(Exception):
    pass


class UsageError(Exception):
    pass


def _emit(text: str):
    write_text("-", text)


def _emit_report(report, comparison, fmt: str):
    if fmt == "tsv":
        _emit("\n".join(render_lines(report, comparison)) + "\n")
    else:
        _emit(render_text(report, comparison))


# =========================
# Subcommands
# =========================

def cmd_validate(args, cfg: CliConfig) -> int:
    problems, n_sentences = validate_tagged(cfg.paths["corpus"], upcase_tags=args.upcase_tags)
    if not problems:
        _emit(f"OK: {n_sentences} sentences, all tags valid\n")
        return 0
    shown = problems[:args.max_errors]
    lines = [str(p) for p in shown]
    if len(problems) > len(shown):
        lines.append(f"... {len(problems) - len(shown)} more")
    lines.append(f"{len(problems)} problem(s) found")
    _emit("\n".join(lines) + "\n")
    return 1


def cmd_train(args, cfg: CliConfig) -> int:
    train, _ = TAGGERS["trigram"]
    corpus = read_tagged(cfg.paths["train"], upcase_tags=args.upcase_tags)
    model = train(corpus, cfg.tagger)
    save_model(model, cfg.paths["model"])
    return 0


def cmd_tag(args, cfg: CliConfig) -> int:
    _, tag_corpus = TAGGERS["trigram"]
    model = load_model(cfg.paths["model"])
    if args.suffix_len is not None or args.rare_threshold is not None:
        LOGGER.warning("--suffix-len/--rare-threshold only apply when training; using the model's values")
    overrides = {k: v for k, v in (("beam_width", args.beam), ("workers", args.workers)) if v is not None}
    if overrides:
        model = model.with_config(**overrides)
    plain = read_plain(cfg.paths["input"])
    tagged = tag_corpus(model, plain)
    write_text(cfg.paths["output"], write_tagged(tagged))
    LOGGER.info("tagged %d sentences / %d tokens", len(tagged), tagged.token_total)
    return 0


def _warn_surface_mismatch(gold, predicted, label: str):
    for i, (g, p) in enumerate(zip(gold.sentences, predicted.sentences)):
        if g.surfaces != p.surfaces:
            LOGGER.warning("%s sentence %d: surfaces differ from gold", label, i)
            return


def cmd_eval(args, cfg: CliConfig) -> int:
    gold = read_tagged(cfg.paths["gold"])
    predicted = read_tagged(cfg.paths["predicted"])
    _warn_surface_mismatch(gold, predicted, "predicted")
    report = evaluate(gold, predicted)
    comparison = None
    if cfg.paths.get("against"):
        other = read_tagged(cfg.paths["against"])
        _warn_surface_mismatch(gold, other, "against")
        comparison = compare(report, evaluate(gold, other))
    _emit_report(report, comparison, cfg.output_format)
    return 0


def cmd_baseline(args, cfg: CliConfig) -> int:
    train, tag_corpus = TAGGERS["baseline"]
    train_corpus = read_tagged(cfg.paths["train"])
    gold = read_tagged(cfg.paths["gold"])
    baseline = train(train_corpus)
    baseline_report = evaluate(gold, tag_corpus(baseline, gold.strip_tags()))
    if not cfg.paths.get("model"):
        _emit_report(baseline_report, None, cfg.output_format)
        return 0
    _, tag_trigram = TAGGERS["trigram"]
    model = load_model(cfg.paths["model"])
    if args.beam is not None:
        model = model.with_config(beam_width=args.beam)
    model_report = evaluate(gold, tag_trigram(model, gold.strip_tags(), args.workers))
    # a = trigram model, b = baseline
    _emit_report(model_report, compare(model_report, baseline_report), cfg.output_format)
    return 0


def cmd_bootstrap(args, cfg: CliConfig) -> int:
    seed = read_tagged(cfg.paths["seed"])
    unlabeled = read_plain(cfg.paths["unlabeled"])
    heldout = read_tagged(cfg.paths["heldout"])
    model, report = bootstrap(seed, unlabeled, heldout, cfg.bootstrap, cfg.tagger, cfg.dump_dir)
    save_model(model, cfg.paths["model"])
    if cfg.output_format == "tsv":
        _emit("\n".join(report.lines()) + "\n")
    else:
        _emit(report.text())
    return 0


def cmd_schema(args, cfg: CliConfig) -> int:
    registry = SchemaRegistry.load(args.registry) if args.registry != SCHEMA_PATH else default_registry()
    if args.list:
        _emit(registry.frame().to_string(index=False) + "\n")
        return 0
    if not (args.tag and args.category and args.symbol):
        raise UsageError("schema needs TAG CATEGORY SYMBOL [ROLE ...] (or --list)")
    term = interpret(args.tag, args.category, args.symbol, args.roles, registry)
    _emit(show(term) + "\n")
    if args.fol:
        _emit(show(to_fol(term)) + "\n")
    return 0


def cmd_tagset(args, cfg: CliConfig) -> int:
    ts = default_tagset()
    df = ts.frame()
    if cfg.output_format == "tsv":
        _emit(df.to_csv(sep="\t", index=False))
    else:
        _emit(f"Universal semantic tagset v{ts.version}: {len(ts)} sem-tags in {len(ts.meta_tags())} meta-tags\n\n"
              + df.to_string(index=False) + "\n")
    return 0


COMMANDS = {
    "validate": cmd_validate,
    "train": cmd_train,
    "tag": cmd_tag,
    "eval": cmd_eval,
    "baseline": cmd_baseline,
    "bootstrap": cmd_bootstrap,
    "schema": cmd_schema,
    "tagset": cmd_tagset,
}


# =========================
# Parsing
# =========================

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    common.add_argument("-q", "--quiet", action="store_true", help="warnings and errors only")

    tagger = argparse.ArgumentParser(add_help=False)
    tagger.add_argument("--beam", type=int, help="states kept per position, 0 = exact search (default 20)")
    tagger.add_argument("--suffix-len", type=int, help="longest suffix for unknown words (default 10)")
    tagger.add_argument("--rare-threshold", type=int, help="max frequency of words feeding the suffix model (default 10)")
    tagger.add_argument("--workers", type=int, help="threads used for tagging (default 1)")

    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("text", "tsv"), default="text", help="report format")

    parser = argparse.ArgumentParser(prog="semtag", description="Universal semantic tagging toolkit", parents=[common])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("validate", parents=[common], help="check a tagged corpus against the tagset")
    p.add_argument("corpus")
    p.add_argument("--max-errors", type=int, default=20)
    p.add_argument("--upcase-tags", action="store_true", help="accept lower-case tag codes")

    p = sub.add_parser("train", parents=[common, tagger], help="train a trigram tagger")
    p.add_argument("train")
    p.add_argument("--model", required=True, help="model file to write")
    p.add_argument("--upcase-tags", action="store_true", help="accept lower-case tag codes")

    p = sub.add_parser("tag", parents=[common, tagger], help="tag a plain corpus")
    p.add_argument("--model", required=True)
    p.add_argument("input")
    p.add_argument("output", nargs="?", default="-")

    p = sub.add_parser("eval", parents=[common, fmt], help="score predictions against gold")
    p.add_argument("gold")
    p.add_argument("predicted")
    p.add_argument("--against", help="second predictions to compare with")

    p = sub.add_parser("baseline", parents=[common, tagger, fmt], help="score the most-frequent-tag baseline")
    p.add_argument("train")
    p.add_argument("gold")
    p.add_argument("--model", help="trigram model to compare with the baseline")

    p = sub.add_parser("bootstrap", parents=[common, tagger, fmt], help="self-train from unlabeled text")
    p.add_argument("seed")
    p.add_argument("unlabeled")
    p.add_argument("heldout")
    p.add_argument("--model", required=True, help="model file to write")
    p.add_argument("--threshold", type=float, help="confidence needed for promotion (default 0.9)")
    p.add_argument("--max-iter", type=int, help="iterations (default 5)")
    p.add_argument("--promote-cap", type=int, help="sentences promoted per iteration (default 1000)")
    p.add_argument("--stop-delta", type=float, help="minimum held-out gain to go on (default 0.0)")
    p.add_argument("--dump-dir", help="write promoted sentences per iteration here")

    p = sub.add_parser("schema", parents=[common], help="show the semantics of a sem-tag for a category")
    p.add_argument("tag", nargs="?")
    p.add_argument("category", nargs="?")
    p.add_argument("symbol", nargs="?")
    p.add_argument("roles", nargs="*")
    p.add_argument("--fol", action="store_true", help="also print the first-order reading")
    p.add_argument("--list", action="store_true", help="list the registry")
    p.add_argument("--registry", default=SCHEMA_PATH, help="schema file")

    sub.add_parser("tagset", parents=[common, fmt], help="dump the tagset table")
    return parser


def to_config(args) -> CliConfig:
    """Validate flags and paths before any I/O."""
    paths: Dict[str, str] = {}
    for name in PATH_ARGS.get(args.command, ()):
        value = getattr(args, name, None)
        if value:
            paths[name] = value
    tagger_values = {
        k: v for k, v in (
            ("beam_width", getattr(args, "beam", None)),
            ("max_suffix_len", getattr(args, "suffix_len", None)),
            ("rare_threshold", getattr(args, "rare_threshold", None)),
            ("workers", getattr(args, "workers", None)),
        ) if v is not None
    }
    bootstrap_values = {
        k: v for k, v in (
            ("confidence_threshold", getattr(args, "threshold", None)),
            ("max_iterations", getattr(args, "max_iter", None)),
            ("promote_cap", getattr(args, "promote_cap", None)),
            ("stop_delta", getattr(args, "stop_delta", None)),
        ) if v is not None
    }
    return build(
        CliConfig,
        command=args.command,
        paths=paths,
        tagger=build(TaggerConfig, **tagger_values),
        bootstrap=build(BootstrapConfig, **bootstrap_values),
        output_format=getattr(args, "format", "text"),
        dump_dir=getattr(args, "dump_dir", None),
    )


def check_inputs(cfg: CliConfig):
    for name in INPUT_ARGS.get(cfg.command, ()):
        path = cfg.paths.get(name)
        if path and path != "-" and not os.path.isfile(path):
            raise MissingInput(f"{name} file not found: {path}")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, stream=sys.stderr, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    try:
        cfg = to_config(args)
        check_inputs(cfg)
        return COMMANDS[args.command](args, cfg)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        LOGGER.error("%s", e)
        return USAGE_EXIT_CODE
    except MissingInput as e:
        LOGGER.error("%s", e)
        return MISSING_INPUT_EXIT_CODE
    except SemtagError as e:
        LOGGER.error("%s: %s", type(e).__name__, e)
        return e.exit_code
    except FileNotFoundError as e:
        LOGGER.error("%s", e)
        return MISSING_INPUT_EXIT_CODE
    except OSError as e:
        LOGGER.error("%s", e)
        return 1


if __name__ == "__main__":
    sys.exit(main())
