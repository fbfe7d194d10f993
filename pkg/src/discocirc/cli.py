"""Command-line front end for the text-to-circuit pipeline."""

from __future__ import annotations

import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click

from .ansatz import AnsatzConfig, circuit_to_json, dump_circuit
from .compose import text_diagram_to_dot, text_diagram_to_json
from .errors import (CapExceeded, DiscocircError, FormatError, NoParse,
                     ZeroNorm)
from .ingest import Lexicon, document_to_json, lexicon_parse
from .pipeline import PipelineConfig, resolve_rewrites, run
from .sandwich import SandwichConfig
from .sim import TrainConfig, load_dataset, train
from .trees import dump_tree, forest_to_json, tree_to_dot

log = logging.getLogger(__name__)

EXIT_FORMAT = 2
EXIT_NO_PARSE = 3
EXIT_CAP = 4
EXIT_TRAIN = 5


def _exit_code(exc: Exception) -> int:
    if isinstance(exc, FormatError):
        return EXIT_FORMAT
    if isinstance(exc, NoParse):
        return EXIT_NO_PARSE
    if isinstance(exc, CapExceeded):
        return EXIT_CAP
    if isinstance(exc, ZeroNorm):
        return EXIT_TRAIN
    return 1


def _fail(exc: Exception):
    location = getattr(exc, "location", None)
    where = f" [{location}]" if location else ""
    click.echo(f"{type(exc).__name__}: {exc}{where}", err=True)
    sys.exit(_exit_code(exc))


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        click.echo(text)


def _common(f):
    f = click.option("--input", "input_path", required=True,
                     type=click.Path(exists=True),
                     help="Interchange JSON document.")(f)
    f = click.option("--lexicon", "lexicon_path", type=click.Path(exists=True),
                     help="Lexicon JSON; defaults to the built-in one.")(f)
    f = click.option("--rewrites", default="",
                     help="Comma-separated rule names or rule-file paths "
                          "(coordination, determiner, auxiliary, "
                          "noun_modification).")(f)
    f = click.option("--min-noun-frequency", type=int, default=None,
                     help="Drop chains with fewer mentions than this.")(f)
    f = click.option("--remove-nouns", default="",
                     help="Comma-separated noun words to drop.")(f)
    f = click.option("--format", "fmt",
                     type=click.Choice(["json", "text", "dot"]),
                     default="json")(f)
    f = click.option("--out", type=click.Path(), default=None,
                     help="Write the artifact here instead of stdout.")(f)
    return f


def _config(lexicon_path, rewrites, min_noun_frequency,
            remove_nouns, **extra) -> PipelineConfig:
    lex = Lexicon.load(lexicon_path) if lexicon_path else Lexicon.builtin()
    cfg = PipelineConfig(lexicon=lex, **extra)
    resolve_rewrites([r for r in rewrites.split(",") if r], cfg)
    cfg.min_noun_frequency = min_noun_frequency
    cfg.remove_nouns = [w for w in remove_nouns.split(",") if w]
    return cfg


@click.group()
@click.option("--verbose", is_flag=True, help="Log per-stage progress.")
def main(verbose):
    """Compile text documents into parameterised quantum circuits."""
    logging.basicConfig(
        level=logging.INFO if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s")


@main.command()
@_common
@click.option("--all-parses", is_flag=True,
              help="Dump every parse the mini parser finds.")
def parse(input_path, lexicon_path, rewrites, min_noun_frequency,
          remove_nouns, fmt, out, all_parses):
    """Ingest (or mini-parse) a document and dump it."""
    try:
        cfg = _config(lexicon_path, rewrites, min_noun_frequency,
                      remove_nouns)
        with open(input_path, encoding="utf-8") as f:
            raw = json.load(f)
        if all_parses and "tokens" in raw:
            parses = {
                " ".join(tokens): [
                    {"types": [str(ty) for _, ty in d.tokens],
                     "cups": [list(c) for c in d.cups]}
                    for d in lexicon_parse(tokens, cfg.lexicon,
                                           all_parses=True)
                ]
                for tokens in raw["tokens"]
            }
            _emit(json.dumps(parses, indent=1), out)
            return
        doc = run(raw, cfg, stage="parse")
        _emit(json.dumps(document_to_json(doc), indent=1), out)
    except DiscocircError as exc:
        _fail(exc)


@main.command()
@_common
def tree(input_path, lexicon_path, rewrites, min_noun_frequency,
         remove_nouns, fmt, out):
    """Build pregroup trees and dump the forest."""
    try:
        cfg = _config(lexicon_path, rewrites, min_noun_frequency,
                      remove_nouns)
        with open(input_path, encoding="utf-8") as f:
            reports = run(json.load(f), cfg, stage="tree")
        if fmt == "text":
            text = "\n".join(dump_tree(root)
                             for rep in reports for root in rep.forest)
        elif fmt == "dot":
            text = "\n".join(tree_to_dot(rep.forest) for rep in reports)
        else:
            text = json.dumps(
                [forest_to_json(rep.forest) for rep in reports], indent=1)
        _emit(text, out)
    except DiscocircError as exc:
        _fail(exc)


@main.command()
@_common
def diagram(input_path, lexicon_path, rewrites, min_noun_frequency,
            remove_nouns, fmt, out):
    """Compose the document-level diagram and dump it."""
    try:
        cfg = _config(lexicon_path, rewrites, min_noun_frequency,
                      remove_nouns)
        with open(input_path, encoding="utf-8") as f:
            td = run(json.load(f), cfg, stage="diagram")
        if fmt == "dot":
            text = text_diagram_to_dot(td)
        else:
            text = json.dumps(text_diagram_to_json(td), indent=1)
        _emit(text, out)
    except DiscocircError as exc:
        _fail(exc)


def _circuit_options(f):
    f = click.option("--ansatz", "ansatz_kind",
                     type=click.Choice(["iqp", "sim4"]), default="iqp")(f)
    f = click.option("--qubits-per-wire", type=int, default=1)(f)
    f = click.option("--layers", type=int, default=1)(f)
    f = click.option("--no-share", is_flag=True,
                     help="Give every box occurrence its own parameters.")(f)
    f = click.option("--foliated", is_flag=True,
                     help="Independent sandwich unitaries per layer.")(f)
    f = click.option("--seed", type=int, default=0)(f)
    return f


@main.command()
@_common
@_circuit_options
@click.option("--batch", type=click.Path(exists=True, file_okay=False),
              default=None, help="Compile every *.json in a directory.")
def circuit(input_path, lexicon_path, rewrites, min_noun_frequency,
            remove_nouns, fmt, out, ansatz_kind, qubits_per_wire, layers,
            no_share, foliated, seed, batch):
    """Compile the document into a parameterised circuit."""
    try:
        cfg = _config(
            lexicon_path, rewrites, min_noun_frequency, remove_nouns,
            sandwich=SandwichConfig("foliated" if foliated else "shared"),
            ansatz=AnsatzConfig(ansatz_kind, qubits_per_wire, layers,
                                not no_share, seed))

        def one(path):
            with open(path, encoding="utf-8") as f:
                c = run(json.load(f), cfg, stage="circuit")
            return dump_circuit(c) if fmt == "text" \
                else json.dumps(circuit_to_json(c), indent=1)

        if batch:
            paths = sorted(Path(batch).glob("*.json"))
            with ThreadPoolExecutor(max_workers=4) as pool:
                artifacts = list(pool.map(one, paths))
            for path, text in zip(paths, artifacts):
                target = Path(out or batch) / (path.stem + ".circuit.json")
                target.write_text(text + "\n", encoding="utf-8")
                log.info("compiled %s -> %s", path.name, target.name)
        else:
            _emit(one(input_path), out)
    except DiscocircError as exc:
        _fail(exc)


@main.command(name="train")
@click.option("--input", "input_path", required=True,
              type=click.Path(exists=True),
              help="JSON-lines dataset of circuits and labels.")
@click.option("--epochs", type=int, default=60)
@click.option("--batch-size", type=int, default=10)
@click.option("--learning-rate", type=float, default=0.01)
@click.option("--gradient", type=click.Choice(
    ["parameter_shift", "finite_diff"]), default="parameter_shift")
@click.option("--seed", type=int, default=0)
@click.option("--out", type=click.Path(), default=None,
              help="History CSV path (default stdout).")
@click.option("--params-out", type=click.Path(), default=None,
              help="Write the trained parameters here as JSON.")
def train_cmd(input_path, epochs, batch_size, learning_rate, gradient,
              seed, out, params_out):
    """Train shared circuit parameters on a labelled dataset."""
    try:
        dataset = load_dataset(input_path)
        cfg = TrainConfig(epochs=epochs, batch_size=batch_size,
                          learning_rate=learning_rate, gradient=gradient,
                          seed=seed)
        params, history = train(dataset, cfg)
        if params_out:
            Path(params_out).write_text(
                json.dumps(params, indent=1) + "\n", encoding="utf-8")
        lines = ["epoch,train_loss,train_acc,test_acc"]
        lines += [f"{e},{l:.6f},{a:.4f},{t:.4f}"
                  for e, l, a, t in history.rows]
        _emit("\n".join(lines), out)
    except (DiscocircError, ValueError) as exc:
        if isinstance(exc, DiscocircError):
            _fail(exc)
        click.echo(f"training failed: {exc}", err=True)
        sys.exit(EXIT_TRAIN)


if __name__ == "__main__":
    main()
