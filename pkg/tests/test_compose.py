import json
import random

import pytest

from discocirc.compose import (PermSpec, TextDiagram, apply_layer,
                               compose_document, permutation_to_layers,
                               text_diagram_to_dot, text_diagram_to_json,
                               wire_box_sequences, wire_order)
from discocirc.errors import ChainMismatch
from discocirc.frames import (Box, NounState, Par, Perm, SentenceDiagram,
                              Spider, sentence_diagram)
from discocirc.ingest import CorefMap, Lexicon, load_document
from discocirc.trees import build_trees

FIXTURES = "tests/fixtures"


@pytest.fixture(scope="module")
def lex():
    return Lexicon.builtin()


def document_diagram(path, lex):
    doc = load_document(f"{FIXTURES}/{path}")
    diagrams = []
    for si, d in enumerate(doc.sentences):
        noun_tokens = frozenset(
            ti for ti, (w, _) in enumerate(d.tokens) if lex.is_noun(w))
        forest = build_trees(d).forest
        diagrams.append(sentence_diagram(forest, frozenset(), noun_tokens,
                                         si))
    return compose_document(diagrams, doc.corefs)


def test_three_sentences_share_chains(lex):
    td = document_diagram("treasure_hunt.json", lex)
    assert [s.word for s in td.states] == ["Alice", "map", "clues",
                                           "treasure"]
    assert td.chain_order == {0: 0, 1: 1, 2: 2, 3: 3}
    assert wire_order(td) == [0, 1, 2, 3]


def test_box_sequences_match_golden(lex):
    td = document_diagram("treasure_hunt.json", lex)
    with open(f"{FIXTURES}/treasure_hunt_wires.golden.json",
              encoding="utf-8") as f:
        golden = {int(k): v for k, v in json.load(f).items()}
    assert wire_box_sequences(td) == golden


def test_single_sentence_needs_no_permutation(lex):
    td = document_diagram("reading.json", lex)
    assert len(td.states) == 2
    assert not any(isinstance(l, (Perm, Spider)) for l in td.layers)


def test_permutations_come_in_cancelling_pairs(lex):
    td = document_diagram("treasure_hunt.json", lex)
    perms = [l for l in td.layers if isinstance(l, Perm)]
    assert len(perms) % 2 == 0
    # replaying all layers restores the introduction order
    assert wire_order(td) == [s.chain_id for s in td.states]


def test_within_sentence_duplicate_uses_spiders():
    nouns = [NounState("Bob", 0, 0), NounState("Bob", 0, 2)]
    sd = SentenceDiagram(nouns, Box("saw", (0, 2)))
    td = compose_document([sd], CorefMap([[(0, 0), (0, 2)]]))
    assert len(td.states) == 1
    kinds = [type(l).__name__ for l in td.layers]
    assert kinds == ["Spider", "Box", "Spider"]
    copy, _, merge = td.layers
    assert copy.dagger and not merge.dagger
    assert wire_order(td) == [0]


def test_unchained_noun_rejected():
    sd = SentenceDiagram([NounState("Alice", 0, 0)], Box("runs", (0,)))
    with pytest.raises(ChainMismatch):
        compose_document([sd], CorefMap([]))


def test_empty_sentences_skipped(lex):
    doc = load_document(f"{FIXTURES}/reading.json")
    d = doc.sentences[0]
    noun_tokens = frozenset(
        ti for ti, (w, _) in enumerate(d.tokens) if lex.is_noun(w))
    sd = sentence_diagram(build_trees(d).forest, frozenset(), noun_tokens, 0)
    td = compose_document([None, sd, None], doc.corefs)
    assert len(td.states) == 2


def test_empty_document():
    td = compose_document([], CorefMap([]))
    assert td.states == [] and td.layers == []


def test_permutation_decomposes_into_adjacent_transpositions():
    rng = random.Random(3)
    for _ in range(50):
        n = rng.randint(2, 7)
        wires = list(range(100, 100 + n))
        target = list(range(n))
        rng.shuffle(target)
        spec = PermSpec({i: target[i] for i in range(n)}, [], tuple(wires))
        layers = permutation_to_layers(spec)
        order = wires
        for layer in layers:
            assert isinstance(layer, Perm)
            moved = [i for i, m in enumerate(layer.mapping) if m != i]
            assert moved == [] or (len(moved) == 2
                                   and moved[1] == moved[0] + 1)
            order = apply_layer(order, layer)
        # wire at source position i ends at target position target[i]
        assert [order[target[i]] for i in range(n)] == wires


def test_apply_layer_rejects_wrong_domain():
    layer = Perm((0, 1), (1, 0))
    with pytest.raises(ChainMismatch):
        apply_layer([1, 0], layer)


def test_json_and_dot_dumps(lex):
    td = document_diagram("treasure_hunt.json", lex)
    data = text_diagram_to_json(td)
    assert [s["word"] for s in data["states"]] == ["Alice", "map", "clues",
                                                   "treasure"]
    assert data["chain_order"] == {"0": 0, "1": 1, "2": 2, "3": 3}
    dot = text_diagram_to_dot(td)
    assert dot.startswith("digraph") and "followed" in dot
