"""Semantic rewrites: tree branch contraction and coordination splitting.

Rewrite rules contract a node with its single same-typed child when the
node's word and type match the rule, cutting circuit depth without
touching noun wires.  The coordination rewrite splits a shared-subject
conjunction into one diagram per coordinated phrase, duplicating the
subject and linking the copies through the coreference map.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, replace

from .errors import FormatError
from .grammar import PregroupDiagram, PregroupType, SimpleType
from .ingest import CorefMap, Document, Mention
from .trees import PregroupTreeNode

WORD_MERGERS = ("merge", "first", "last")


@dataclass(frozen=True)
class RewriteRule:
    """A (word, type) driven branch contraction.

    ``match_words`` of None is a wildcard; ``word_merger`` picks the
    surviving word: 'merge' joins both with a space, 'first' keeps the
    parent's, 'last' the child's.
    """

    name: str
    match_words: frozenset[str] | None
    match_types: frozenset[PregroupType]
    word_merger: str = "last"
    max_depth: int = 1

    def __post_init__(self):
        if not self.match_types:
            raise ValueError(f"rule {self.name!r} has no match_types")
        if self.word_merger not in WORD_MERGERS:
            raise ValueError(f"unknown word_merger {self.word_merger!r}")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")

    def matches_word(self, word: str) -> bool:
        return self.match_words is None or word in self.match_words


@dataclass
class RewriteReport:
    tree: PregroupTreeNode
    merges: int


def rewrite_tree(root: PregroupTreeNode, rule: RewriteRule) -> RewriteReport:
    """Apply one rule bottom-up; non-matching trees pass through unchanged.

    A node is contracted with its single child when the node matches the
    rule's type and words, the child carries the same output type, and
    fewer than ``max_depth`` merges happened along this contraction chain.
    The surviving node keeps the child's token index so coreference
    indices stay valid.
    """
    total = 0

    def visit(node: PregroupTreeNode) -> tuple[PregroupTreeNode, int]:
        nonlocal total
        new_children = []
        chain_merges = 0
        for child in node.children:
            new_child, merges = visit(child)
            new_children.append(new_child)
            chain_merges = merges  # only a single child can chain upward
        node = replace_children(node, new_children)
        if (len(node.children) == 1
                and node.out_type in rule.match_types
                and node.children[0].out_type == node.out_type
                and rule.matches_word(node.word)
                and chain_merges < rule.max_depth):
            child = node.children[0]
            if rule.word_merger == "merge":
                word = f"{node.word} {child.word}"
            elif rule.word_merger == "first":
                word = node.word
            else:
                word = child.word
            merged = PregroupTreeNode(
                word, child.token_index, node.out_type, child.children)
            total += 1
            return merged, chain_merges + 1
        return node, 0

    tree, _ = visit(copy.deepcopy(root))
    return RewriteReport(tree, total)


def replace_children(node: PregroupTreeNode,
                     children: list[PregroupTreeNode]) -> PregroupTreeNode:
    node.children = children
    return node


_N = PregroupType([SimpleType("n")])
_S = PregroupType([SimpleType("s")])


def builtin_rules() -> list[RewriteRule]:
    """The stock rules: determiner removal, auxiliary removal and
    noun-modifier merging."""
    return [
        RewriteRule(
            name="determiner",
            match_words=frozenset({"a", "an", "the"}),
            match_types=frozenset({_N}),
            word_merger="last",
            max_depth=1,
        ),
        RewriteRule(
            name="auxiliary",
            match_words=frozenset({"has", "does", "is", "was", "had", "will"}),
            match_types=frozenset({_S}),
            word_merger="last",
            max_depth=1,
        ),
        RewriteRule(
            name="noun_modification",
            match_words=None,
            match_types=frozenset({_N}),
            word_merger="merge",
            max_depth=2,
        ),
    ]


def builtin_rule(name: str) -> RewriteRule:
    for rule in builtin_rules():
        if rule.name == name:
            return rule
    raise KeyError(f"no builtin rule named {name!r}")


def load_rule(path) -> RewriteRule:
    """Load a rule from a JSON file
    {name, match_words, match_types, word_merger, max_depth}."""
    with open(path, encoding="utf-8") as f:
        data = json.load(f)
    try:
        words = data.get("match_words")
        types = frozenset(
            PregroupType(SimpleType(b, int(z)) for b, z in ty)
            for ty in data["match_types"])
        return RewriteRule(
            name=data["name"],
            match_words=None if words is None else frozenset(words),
            match_types=types,
            word_merger=data.get("word_merger", "last"),
            max_depth=int(data.get("max_depth", 1)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad rule file: {exc}", str(path)) from None


def _is_conjunction(ty: PregroupType) -> bool:
    if len(ty) != 3:
        return False
    a, b, c = ty.factors
    return (a.base == b.base == c.base and b.z == 0
            and a.z == 1 and c.z == -1)


def coordination_rewrite(
        d: PregroupDiagram, coref: CorefMap, sentence_index: int = 0,
) -> tuple[list[PregroupDiagram], CorefMap]:
    """Split a shared-subject binary conjunction into two diagrams.

    The subject of the left phrase is copied in front of the right phrase
    and both copies are linked through the returned coreference map, so
    document composition later identifies their wires.  Sentences without
    a matching conjunction come back unchanged as a singleton list; the
    coreference map is renumbered for the extra sentence on a split.
    """
    conjs = [ti for ti, (_, ty) in enumerate(d.tokens) if _is_conjunction(ty)]
    if len(conjs) != 1:
        return [d], coref
    ci = conjs[0]
    conj_wires = list(d.wires_of_token(ci))
    left_tokens = d.tokens[:ci]
    right_tokens = d.tokens[ci + 1:]
    if not left_tokens or not right_tokens:
        return [d], coref

    n_left_wires = conj_wires[0]
    right_start = conj_wires[-1] + 1
    wire_types = d.wire_types

    left_cups, right_cups = [], []
    for i, j in d.cups:
        if j < n_left_wires:
            left_cups.append((i, j))
        elif i >= right_start:
            right_cups.append((i - right_start, j - right_start))
        elif i in conj_wires or j in conj_wires:
            continue  # the conjunction's own hooks
        else:
            return [d], coref  # a cup straddles the conjunction: no match

    # the shared subject: leftmost noun wire contracted into a right
    # adjoint within the left phrase
    subject = None
    for i, j in sorted(left_cups):
        if wire_types[i].z == 0 and wire_types[j].z == 1:
            subject = d.token_of_wire(i)
            break
    if subject is None:
        return [d], coref
    subj_word, subj_ty = d.tokens[subject]

    # the right phrase must expose exactly one dangling right adjoint
    # (the missing subject slot) besides its own output
    cupped = {w for cup in right_cups for w in cup}
    dangling = [w for w in range(right_start, d.n_wires)
                if (w - right_start) not in cupped
                and wire_types[w].z == 1]
    if len(dangling) != 1:
        return [d], coref
    slot = dangling[0] - right_start

    first = PregroupDiagram(left_tokens, left_cups)
    shift = len(subj_ty)
    second = PregroupDiagram(
        [(subj_word, subj_ty)] + list(right_tokens),
        [(0, slot + shift)] + [(i + shift, j + shift)
                               for i, j in right_cups])

    def remap(m: Mention) -> Mention:
        si, ti = m
        if si < sentence_index:
            return m
        if si > sentence_index:
            return (si + 1, ti)
        if ti < ci:
            return m
        if ti > ci:
            return (si + 1, ti - ci - 1 + 1)  # +1 for the subject copy
        raise FormatError(
            f"coreference mention on conjunction token {m}")

    chains = [[remap(m) for m in chain] for chain in coref.chains]
    copy_mention = (sentence_index + 1, 0)
    original = (sentence_index, subject)
    for chain in chains:
        if original in chain:
            chain.append(copy_mention)
            break
    else:
        chains.append([original, copy_mention])
    return [first, second], CorefMap(chains)
