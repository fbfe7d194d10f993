"""Document ingestion: interchange files, mini parser, pronoun resolution.

The interchange JSON file is the primary ingestion path: it carries
pre-parsed pregroup diagrams plus coreference chains.  For self-contained
use a small lexicon-driven parser and a nearest-antecedent pronoun
resolver stand in for an external parser and coreference model.
"""

from __future__ import annotations

import itertools
import json
import logging
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import FormatError, InvalidDiagram, NoParse
from .grammar import (
    PregroupDiagram,
    PregroupType,
    SimpleType,
    can_contract,
    validate_diagram,
)

log = logging.getLogger(__name__)

PARSER_TOKEN_CAP = 12

Mention = tuple[int, int]


@dataclass
class CorefMap:
    """Disjoint chains of (sentence_index, token_index) mentions."""

    chains: list[list[Mention]] = field(default_factory=list)

    def __post_init__(self):
        seen = set()
        for ci, chain in enumerate(self.chains):
            self.chains[ci] = sorted(chain)
            for m in chain:
                if m in seen:
                    raise FormatError(f"mention {m} appears in two chains")
                seen.add(m)

    def chain_of(self, mention: Mention) -> int | None:
        for ci, chain in enumerate(self.chains):
            if mention in chain:
                return ci
        return None

    def mentions(self) -> set[Mention]:
        return {m for chain in self.chains for m in chain}


@dataclass
class Document:
    sentences: list[PregroupDiagram]
    corefs: CorefMap
    source_text: str | None = None


class Lexicon:
    """Word entries (pregroup types) plus noun/pronoun tags and features."""

    def __init__(self, raw: dict):
        self.entries: dict[str, list[PregroupType]] = {}
        self.features: dict[str, dict] = {}
        self.nouns: set[str] = set()
        self.pronouns: set[str] = set()
        for word, value in raw.items():
            if isinstance(value, list):
                value = {"types": value}
            types = [_type_from_json(t, f"lexicon[{word}]")
                     for t in value["types"]]
            if any(len(t) == 0 for t in types):
                raise FormatError(f"empty type for word {word!r}")
            self.entries[word] = types
            self.features[word] = value.get("features", {})
            if value.get("is_noun"):
                self.nouns.add(word)
            if value.get("is_pronoun"):
                self.pronouns.add(word)

    def is_noun(self, word: str) -> bool:
        return word in self.nouns or word in self.pronouns

    @staticmethod
    def load(path) -> "Lexicon":
        with open(path, encoding="utf-8") as f:
            return Lexicon(json.load(f))

    @staticmethod
    def builtin() -> "Lexicon":
        data = resources.files("discocirc.data").joinpath("lexicon.json")
        return Lexicon(json.loads(data.read_text(encoding="utf-8")))


def _type_from_json(pairs, where: str) -> PregroupType:
    try:
        return PregroupType(SimpleType(base, int(z)) for base, z in pairs)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"bad type {pairs!r}: {exc}", where) from None


def _type_to_json(ty: PregroupType) -> list:
    return [[t.base, t.z] for t in ty]


def load_document(source) -> Document:
    """Load an interchange document from a path, stream or parsed dict."""
    if isinstance(source, dict):
        data = source
    elif isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as f:
            try:
                data = json.load(f)
            except json.JSONDecodeError as exc:
                raise FormatError(f"invalid JSON: {exc}", str(source)) from None
    else:
        try:
            data = json.load(source)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON: {exc}") from None

    if not isinstance(data, dict) or "sentences" not in data:
        raise FormatError("document must be an object with a 'sentences' list")
    sentences = []
    for si, sent in enumerate(data["sentences"]):
        where = f"sentences[{si}]"
        try:
            tokens = sent["tokens"]
            types = sent["types"]
            cups = sent.get("cups", [])
        except (TypeError, KeyError) as exc:
            raise FormatError(f"missing field {exc}", where) from None
        if len(tokens) != len(types):
            raise FormatError(
                f"{len(tokens)} tokens but {len(types)} types", where)
        diagram = PregroupDiagram(
            [(w, _type_from_json(t, f"{where}.types[{i}]"))
             for i, (w, t) in enumerate(zip(tokens, types))],
            [tuple(c) for c in cups])
        report = validate_diagram(diagram)
        if not report.is_valid:
            raise InvalidDiagram(
                f"sentence {si}: illegal cups {report.illegal_cups}, "
                f"crossings {report.crossing_pairs}")
        sentences.append(diagram)

    chains = []
    for ci, chain in enumerate(data.get("corefs", [])):
        mentions = []
        for m in chain:
            si, ti = int(m[0]), int(m[1])
            if si >= len(sentences) or ti >= len(sentences[si].tokens):
                raise FormatError(
                    f"mention ({si}, {ti}) points at no token",
                    f"corefs[{ci}]")
            mentions.append((si, ti))
        chains.append(mentions)
    return Document(sentences, CorefMap(chains), data.get("text"))


def document_to_json(doc: Document) -> dict:
    """Inverse of load_document; round-trips bit-exactly."""
    data = {
        "sentences": [
            {
                "tokens": list(d.words),
                "types": [_type_to_json(ty) for _, ty in d.tokens],
                "cups": [list(c) for c in d.cups],
            }
            for d in doc.sentences
        ],
        "corefs": [[list(m) for m in chain] for chain in doc.corefs.chains],
    }
    if doc.source_text is not None:
        data["text"] = doc.source_text
    return data


def save_document(doc: Document, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(document_to_json(doc), f, indent=1)
        f.write("\n")


def _matchings(wires, budget):
    """Cup sets over ``wires`` leaving exactly the ``budget`` types free.

    ``wires`` is a list of (offset, SimpleType).  Cups are non-crossing and
    explored shortest-span-first, so the first yielded solution is the
    deterministic winner.
    """
    if not wires:
        if not budget:
            yield []
        return
    off, ty = wires[0]
    for jpos in range(1, len(wires)):
        joff, jty = wires[jpos]
        if not can_contract(ty, jty):
            continue
        for inner in _matchings(wires[1:jpos], []):
            for outer in _matchings(wires[jpos + 1:], budget):
                yield [(off, joff)] + inner + outer
    if budget and ty == budget[0]:
        for rest in _matchings(wires[1:], budget[1:]):
            yield rest


def lexicon_parse(tokens: list[str], lex: Lexicon,
                  all_parses: bool = False):
    """Parse pre-split tokens into a diagram reducing to a sentence.

    Exhaustive over per-token type choices (lexicon order) and non-crossing
    matchings (shortest span first); the first solution wins unless
    ``all_parses`` asks for every one.
    """
    if len(tokens) > PARSER_TOKEN_CAP:
        raise NoParse(
            f"sentence has {len(tokens)} tokens; the mini parser caps at "
            f"{PARSER_TOKEN_CAP}")
    missing = [w for w in tokens if w not in lex.entries]
    if missing:
        raise NoParse(f"words not in lexicon: {missing}")

    target = [SimpleType("s")]
    solutions = []
    for assignment in itertools.product(*(lex.entries[w] for w in tokens)):
        wires = []
        off = 0
        for ty in assignment:
            for t in ty:
                wires.append((off, t))
                off += 1
        for cups in _matchings(wires, target):
            diagram = PregroupDiagram(list(zip(tokens, assignment)), cups)
            if not all_parses:
                return diagram
            if diagram not in solutions:
                solutions.append(diagram)
    if all_parses and solutions:
        return solutions
    raise NoParse(f"no type assignment of {tokens} reduces to a sentence")


def _compatible(pron_feats: dict, noun_feats: dict) -> bool:
    for key in ("gender", "number"):
        a, b = pron_feats.get(key), noun_feats.get(key)
        if a and b and a != b:
            return False
    return True


def resolve_pronouns(doc: Document, lex: Lexicon) -> CorefMap:
    """Chain each pronoun to its nearest feature-compatible antecedent.

    Nouns with no pronouns become singleton chains; unresolvable pronouns
    are logged and left as fresh singletons.
    """
    chains: list[list[Mention]] = []
    chain_of_noun: dict[Mention, int] = {}
    noun_tokens: list[Mention] = []  # in document order
    for si, sent in enumerate(doc.sentences):
        for ti, (word, ty) in enumerate(sent.tokens):
            mention = (si, ti)
            if word in lex.pronouns:
                feats = lex.features.get(word, {})
                antecedent = None
                for cand in reversed(noun_tokens):
                    cand_word = doc.sentences[cand[0]].words[cand[1]]
                    if cand_word in lex.pronouns:
                        continue
                    if _compatible(feats, lex.features.get(cand_word, {})):
                        antecedent = cand
                        break
                if antecedent is None:
                    log.warning("unresolved pronoun %r at %s", word, mention)
                    chains.append([mention])
                    chain_of_noun[mention] = len(chains) - 1
                else:
                    ci = chain_of_noun[antecedent]
                    chains[ci].append(mention)
                    chain_of_noun[mention] = ci
                noun_tokens.append(mention)
            elif word in lex.nouns:
                chains.append([mention])
                chain_of_noun[mention] = len(chains) - 1
                noun_tokens.append(mention)
    return CorefMap(chains)


def parse_text(sentences: list[list[str]], lex: Lexicon,
               text: str | None = None) -> Document:
    """Parse pre-tokenised sentences and resolve pronouns."""
    diagrams = [lexicon_parse(tokens, lex) for tokens in sentences]
    doc = Document(diagrams, CorefMap([]), text)
    doc.corefs = resolve_pronouns(doc, lex)
    return doc
