"""Stage orchestration: document in, trees/diagrams/circuits out.

Each stage consumes the previous stage's artifact, so the command-line
front end can stop anywhere and dump the intermediate.  The stages are:
ingest -> trees (with rewrites) -> sentence diagrams -> document diagram
-> frame expansion -> circuit.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .ansatz import AnsatzConfig, Circuit, append_merge_box, compile
from .compose import TextDiagram, compose_document
from .errors import EmptySentence
from .frames import min_frequency_filter, sentence_diagram
from .ingest import CorefMap, Document, Lexicon, load_document, parse_text
from .rewrite import (RewriteRule, builtin_rule, coordination_rewrite,
                      load_rule, rewrite_tree)
from .sandwich import SandwichConfig, expand_frames
from .trees import TreeBuildReport, build_trees

log = logging.getLogger(__name__)


@dataclass
class PipelineConfig:
    lexicon: Lexicon = field(default_factory=Lexicon.builtin)
    rewrites: list[RewriteRule] = field(default_factory=list)
    coordination: bool = False
    min_noun_frequency: int | None = None
    remove_nouns: list[str] = field(default_factory=list)
    sandwich: SandwichConfig = field(default_factory=SandwichConfig)
    ansatz: AnsatzConfig = field(default_factory=AnsatzConfig)


def resolve_rewrites(names: list[str], cfg: PipelineConfig) -> None:
    """Fill cfg.rewrites/coordination from rule names or rule-file paths."""
    for name in names:
        if name == "coordination":
            cfg.coordination = True
            continue
        try:
            cfg.rewrites.append(builtin_rule(name))
        except KeyError:
            cfg.rewrites.append(load_rule(name))


def ingest(source, lex: Lexicon) -> Document:
    """Load an interchange document, or parse raw token lists with the
    mini parser when the input carries 'tokens' instead of 'sentences'."""
    if isinstance(source, dict) and "sentences" not in source \
            and "tokens" in source:
        return parse_text(source["tokens"], lex, source.get("text"))
    doc = load_document(source)
    complete_chains(doc, lex)
    return doc


def complete_chains(doc: Document, lex: Lexicon) -> None:
    """Give every unchained noun token its own singleton chain, so each
    noun owns a wire after composition."""
    chained = doc.corefs.mentions()
    for si, sent in enumerate(doc.sentences):
        for ti, (word, _) in enumerate(sent.tokens):
            if lex.is_noun(word) and (si, ti) not in chained:
                doc.corefs.chains.append([(si, ti)])


def apply_coordination(doc: Document, cfg: PipelineConfig) -> Document:
    if not cfg.coordination:
        return doc
    sentences = []
    coref = doc.corefs
    index = 0
    for sent in doc.sentences:
        parts, coref = coordination_rewrite(sent, coref, index)
        sentences.extend(parts)
        index += len(parts)
    return Document(sentences, coref, doc.source_text)


def treeize(doc: Document, cfg: PipelineConfig) -> list[TreeBuildReport]:
    """Build and rewrite one tree forest per sentence."""
    reports = []
    for sent in doc.sentences:
        report = build_trees(sent)
        for rule in cfg.rewrites:
            report.forest = [rewrite_tree(root, rule).tree
                             for root in report.forest]
        reports.append(report)
    return reports


def removed_mentions(doc: Document, cfg: PipelineConfig) -> set:
    removed = set()
    if cfg.min_noun_frequency:
        removed |= min_frequency_filter(doc.corefs, cfg.min_noun_frequency)
    if cfg.remove_nouns:
        drop = set(cfg.remove_nouns)
        for si, sent in enumerate(doc.sentences):
            for ti, (word, _) in enumerate(sent.tokens):
                if word in drop:
                    removed.add((si, ti))
    return removed


def diagrams(doc: Document, reports: list[TreeBuildReport],
             cfg: PipelineConfig) -> TextDiagram:
    """Lower tree forests to sentence diagrams and compose the document."""
    removed = removed_mentions(doc, cfg)
    coref = CorefMap([
        [m for m in chain if m not in removed]
        for chain in doc.corefs.chains
        if any(m not in removed for m in chain)
    ])
    sentence_diagrams = []
    for si, (sent, report) in enumerate(zip(doc.sentences, reports)):
        noun_tokens = frozenset(
            ti for ti, (word, _) in enumerate(sent.tokens)
            if cfg.lexicon.is_noun(word))
        remove = frozenset(ti for s, ti in removed if s == si)
        try:
            sd = sentence_diagram(report.forest, remove, noun_tokens, si)
        except EmptySentence:
            log.info("sentence %d empty after filtering", si)
            sd = None
        sentence_diagrams.append(sd)
    return compose_document(sentence_diagrams, coref)


def circuit(td: TextDiagram, cfg: PipelineConfig) -> Circuit:
    expanded = expand_frames(td, cfg.sandwich)
    merged = append_merge_box(expanded)
    return compile(merged, cfg.ansatz)


def run(source, cfg: PipelineConfig, stage: str = "circuit"):
    """Run the pipeline up to ``stage`` and return that stage's artifact."""
    doc = ingest(source, cfg.lexicon)
    if stage == "parse":
        return doc
    doc = apply_coordination(doc, cfg)
    reports = treeize(doc, cfg)
    if stage == "tree":
        return reports
    td = diagrams(doc, reports, cfg)
    if stage == "diagram":
        return td
    if stage == "circuit":
        return circuit(td, cfg)
    raise ValueError(f"unknown stage {stage!r}")
