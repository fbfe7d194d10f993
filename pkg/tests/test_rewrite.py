import json

import pytest

from discocirc.errors import FormatError
from discocirc.grammar import PregroupType
from discocirc.ingest import Lexicon, load_document, parse_text
from discocirc.rewrite import (RewriteRule, builtin_rule, builtin_rules,
                               coordination_rewrite, load_rule, rewrite_tree)
from discocirc.trees import PregroupTreeNode, build_trees

FIXTURES = "tests/fixtures"

N_TYPE = PregroupType.parse("n")


@pytest.fixture(scope="module")
def lex():
    return Lexicon.builtin()


def chain(words, ty=N_TYPE):
    """A single-branch tree word_0 -> word_1 -> ... with one out type."""
    node = PregroupTreeNode(words[-1], len(words) - 1, ty)
    for i in range(len(words) - 2, -1, -1):
        node = PregroupTreeNode(words[i], i, ty, [node])
    return node


def test_determiner_rule_drops_article():
    report = rewrite_tree(chain(["the", "bike"]), builtin_rule("determiner"))
    assert report.merges == 1
    assert report.tree.word == "bike"
    assert report.tree.token_index == 1
    assert report.tree.is_leaf()


def test_rule_leaves_non_matching_words_alone():
    report = rewrite_tree(chain(["blue", "bike"]), builtin_rule("determiner"))
    assert report.merges == 0
    assert report.tree.word == "blue"


def test_word_merger_merge():
    report = rewrite_tree(chain(["blue", "bike"]),
                          builtin_rule("noun_modification"))
    assert report.tree.word == "blue bike"
    assert report.tree.token_index == 1


def test_word_merger_first():
    rule = RewriteRule("keep_head", None, frozenset({N_TYPE}),
                       word_merger="first")
    report = rewrite_tree(chain(["blue", "bike"]), rule)
    assert report.tree.word == "blue"


def test_max_depth_limits_chain():
    # three stacked modifiers: depth-2 rule merges only two per chain
    tree = chain(["big", "blue", "fast", "bike"])
    report = rewrite_tree(tree, builtin_rule("noun_modification"))
    assert report.merges == 2
    assert report.tree.word == "big"
    assert report.tree.children[0].word == "blue fast bike"


def test_original_tree_untouched():
    tree = chain(["the", "bike"])
    rewrite_tree(tree, builtin_rule("determiner"))
    assert tree.word == "the" and tree.children[0].word == "bike"


def test_bad_rule_configs():
    with pytest.raises(ValueError):
        RewriteRule("r", None, frozenset())
    with pytest.raises(ValueError):
        RewriteRule("r", None, frozenset({N_TYPE}), word_merger="random")
    with pytest.raises(ValueError):
        RewriteRule("r", None, frozenset({N_TYPE}), max_depth=0)


def test_builtin_rules_cover_spec_set():
    names = {r.name for r in builtin_rules()}
    assert names == {"determiner", "auxiliary", "noun_modification"}
    with pytest.raises(KeyError):
        builtin_rule("nope")


def test_load_rule_round_trip(tmp_path):
    path = tmp_path / "rule.json"
    path.write_text(json.dumps({
        "name": "custom",
        "match_words": ["very"],
        "match_types": [[["n", 0]]],
        "word_merger": "merge",
        "max_depth": 3,
    }), encoding="utf-8")
    rule = load_rule(path)
    assert rule.name == "custom"
    assert rule.match_words == frozenset({"very"})
    assert rule.max_depth == 3


def test_load_rule_rejects_garbage(tmp_path):
    path = tmp_path / "rule.json"
    path.write_text(json.dumps({"name": "x"}), encoding="utf-8")
    with pytest.raises(FormatError):
        load_rule(path)


def test_rewrites_on_parsed_sentence(lex):
    doc = load_document(f"{FIXTURES}/bike_rewrites.json")
    [root] = build_trees(doc.sentences[0]).forest
    after_det = rewrite_tree(root, builtin_rule("determiner")).tree
    words = [n.word for n in after_det.walk()]
    assert "a" not in words
    after_mod = rewrite_tree(after_det,
                             builtin_rule("noun_modification")).tree
    words = [n.word for n in after_mod.walk()]
    assert "blue bike" in words


def test_coordination_splits_shared_subject(lex):
    doc = load_document(f"{FIXTURES}/music_piano.json")
    parts, coref = coordination_rewrite(doc.sentences[0], doc.corefs, 0)
    assert len(parts) == 2
    assert parts[0].words == ("Alice", "loves", "music")
    assert parts[1].words == ("Alice", "plays", "piano")
    for part in parts:
        from discocirc.grammar import reduce
        assert str(reduce(part)) == "s"
    # the subject copy shares a chain with the original
    assert [(0, 0), (1, 0)] in coref.chains


def test_coordination_renumbers_later_sentences(lex):
    doc = load_document(f"{FIXTURES}/music_piano.json")
    coref = doc.corefs
    coref.chains.append([(1, 0)])  # pretend there is a later sentence
    _, new_coref = coordination_rewrite(doc.sentences[0], coref, 0)
    assert [(2, 0)] in new_coref.chains


def test_sentence_without_conjunction_passes_through(lex):
    doc = load_document(f"{FIXTURES}/reading.json")
    parts, coref = coordination_rewrite(doc.sentences[0], doc.corefs, 0)
    assert parts == [doc.sentences[0]]
    assert coref is doc.corefs
