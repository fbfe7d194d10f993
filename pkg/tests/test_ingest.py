import io
import json

import pytest

from discocirc.errors import FormatError, InvalidDiagram, NoParse
from discocirc.ingest import (CorefMap, Lexicon, document_to_json,
                              lexicon_parse, load_document, parse_text,
                              resolve_pronouns, save_document)

FIXTURES = "tests/fixtures"


@pytest.fixture(scope="module")
def lex():
    return Lexicon.builtin()


def test_load_fixture(lex):
    doc = load_document(f"{FIXTURES}/treasure_hunt.json")
    assert len(doc.sentences) == 3
    assert doc.sentences[0].words == ("Alice", "found", "a", "map")
    assert doc.corefs.chain_of((1, 0)) == doc.corefs.chain_of((0, 0))


def test_round_trip(tmp_path, lex):
    doc = load_document(f"{FIXTURES}/treasure_hunt.json")
    out = tmp_path / "doc.json"
    save_document(doc, out)
    again = load_document(out)
    assert document_to_json(again) == document_to_json(doc)


def test_load_from_stream():
    with open(f"{FIXTURES}/reading.json", encoding="utf-8") as f:
        data = f.read()
    doc = load_document(io.StringIO(data))
    assert doc.sentences[0].words == ("Alice", "reads", "books")


def test_bad_json_reports_location(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(FormatError) as err:
        load_document(str(path))
    assert err.value.location == str(path)


def test_token_type_mismatch():
    data = {"sentences": [{"tokens": ["a", "b"], "types": [[["n", 0]]]}]}
    with pytest.raises(FormatError):
        load_document(data)


def test_invalid_cups_rejected():
    data = {"sentences": [{
        "tokens": ["Alice", "books"],
        "types": [[["n", 0]], [["n", 0]]],
        "cups": [[0, 1]],
    }]}
    with pytest.raises(InvalidDiagram):
        load_document(data)


def test_dangling_mention_rejected():
    data = {
        "sentences": [{"tokens": ["Alice"], "types": [[["n", 0]]]}],
        "corefs": [[[0, 5]]],
    }
    with pytest.raises(FormatError):
        load_document(data)


def test_mention_in_two_chains_rejected():
    with pytest.raises(FormatError):
        CorefMap([[(0, 0)], [(0, 0)]])


def test_parser_simple_sentence(lex):
    d = lexicon_parse(["Alice", "reads", "books"], lex)
    assert d.cups == ((0, 1), (3, 4))


def test_parser_is_deterministic(lex):
    first = lexicon_parse(["the", "chef", "cooks", "a", "great", "meal"], lex)
    second = lexicon_parse(["the", "chef", "cooks", "a", "great", "meal"],
                           lex)
    assert first == second


def test_all_parses_contains_first(lex):
    tokens = ["Alice", "has", "a", "bike"]
    first = lexicon_parse(tokens, lex)
    everything = lexicon_parse(tokens, lex, all_parses=True)
    assert first == everything[0]
    assert len(everything) >= 1


def test_unknown_word(lex):
    with pytest.raises(NoParse) as err:
        lexicon_parse(["Alice", "defenestrates", "books"], lex)
    assert "defenestrates" in str(err.value)


def test_token_cap(lex):
    with pytest.raises(NoParse):
        lexicon_parse(["Alice"] * 13, lex)


def test_nonsentence_rejected(lex):
    with pytest.raises(NoParse):
        lexicon_parse(["Alice", "books"], lex)


def test_pronoun_resolution_prefers_nearest_compatible(lex):
    doc = parse_text(
        [["Alice", "found", "a", "map"],
         ["She", "followed", "the", "clues"],
         ["It", "led", "to", "treasure"]], lex)
    chains = doc.corefs.chains
    assert [(0, 0), (1, 0)] in chains        # Alice ... She
    assert [(1, 3), (2, 0)] in chains        # clues ... It
    assert [(0, 3)] in chains                # map stays alone
    assert [(2, 3)] in chains                # treasure stays alone


def test_gender_blocks_bad_antecedent(lex):
    doc = parse_text([["Bob", "reads", "books"], ["He", "sleeps"]], lex)
    assert [(0, 0), (1, 0)] in doc.corefs.chains


def test_unresolved_pronoun_logged(lex, caplog):
    with caplog.at_level("WARNING"):
        doc = parse_text([["She", "sleeps"]], lex)
    assert [(0, 0)] in doc.corefs.chains
    assert any("unresolved" in rec.message for rec in caplog.records)


def test_each_noun_starts_a_chain(lex):
    doc = parse_text([["Bob", "cooks", "dinner"],
                      ["Bob", "saw", "himself"]], lex)
    # the second Bob is a fresh entity; himself binds to it
    assert [(0, 0)] in doc.corefs.chains
    assert [(1, 0), (1, 2)] in doc.corefs.chains


def test_lexicon_load_rejects_empty_type(tmp_path):
    path = tmp_path / "lex.json"
    path.write_text(json.dumps({"x": {"types": [[]]}}), encoding="utf-8")
    with pytest.raises(FormatError):
        Lexicon.load(path)
