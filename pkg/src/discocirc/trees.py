"""Pregroup trees: compact tree form of a sentence's pregroup diagram.

Each node is a token annotated with the type of its output wire(s); its
children are the tokens its argument wires contract with.  Cups that would
give a token a second parent are broken, longest token span first, so the
result is always a forest.  The full compound type of any token can be
recovered from the node and its children's output types.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidDiagram
from .grammar import PregroupDiagram, PregroupType, validate_diagram


@dataclass
class PregroupTreeNode:
    word: str
    token_index: int
    out_type: PregroupType
    children: list["PregroupTreeNode"] = field(default_factory=list)

    def walk(self):
        """Yield this node and all descendants, depth-first pre-order."""
        yield self
        for child in self.children:
            yield from child.walk()

    def is_leaf(self) -> bool:
        return not self.children

    def __repr__(self):
        return (f"PregroupTreeNode({self.word!r}, {self.token_index}, "
                f"[{self.out_type}], {len(self.children)} children)")


@dataclass
class TreeBuildReport:
    forest: list[PregroupTreeNode]
    removed_cups: list[tuple[int, int]]


def find_heads(d: PregroupDiagram) -> list[int]:
    """Token indices owning at least one free wire, in sentence order."""
    heads = []
    for w in d.free_wires:
        t = d.token_of_wire(w)
        if not heads or heads[-1] != t:
            heads.append(t)
    return heads


def _span(d: PregroupDiagram, cup: tuple[int, int]) -> int:
    return abs(d.token_of_wire(cup[1]) - d.token_of_wire(cup[0]))


def build_trees(d: PregroupDiagram) -> TreeBuildReport:
    """Convert a valid diagram into a forest of pregroup trees.

    Roots are the tokens owning free wires.  Children are visited in
    argument order (by token position), depth-first.  When following a cup
    would hand a token a second parent, the competing cup with the larger
    token span is removed and recorded; ties remove the cup whose left
    endpoint is leftmost.
    """
    report = validate_diagram(d)
    if not report.is_valid:
        raise InvalidDiagram(
            f"illegal cups: {report.illegal_cups}, "
            f"crossings: {report.crossing_pairs}")

    wire_types = d.wire_types
    partner = {}
    for i, j in d.cups:
        partner[i] = j
        partner[j] = i
    active = set(d.cups)
    removed: list[tuple[int, int]] = []

    nodes: dict[int, PregroupTreeNode] = {}
    parent_of: dict[int, int] = {}
    parent_cups: dict[int, list[tuple[int, int]]] = {}
    heads = set(find_heads(d))
    # tokens on the live recursion path, outermost first
    path: list[int] = []

    def canonical(i, j):
        return (min(i, j), max(i, j))

    def drop_edge(cups):
        for cup in cups:
            active.discard(cup)
            removed.append(cup)

    def arg_edges(tok: int, out_wires: set[int]):
        """Argument edges of a token: (child_token, [cups]) lists.

        Consecutive wires cupped to consecutive wires of the same token
        merge into one edge (a multi-wire connection).
        """
        edges = []
        for w in d.wires_of_token(tok):
            if w in out_wires or w not in partner:
                continue
            cup = canonical(w, partner[w])
            if cup not in active:
                continue
            other = d.token_of_wire(partner[w])
            if (edges and edges[-1][0] == other
                    and edges[-1][2] == w - 1
                    and edges[-1][3] == partner[w] + 1):
                edges[-1][1].append(cup)
                edges[-1][2] = w
                edges[-1][3] = partner[w]
            else:
                edges.append([other, [cup], w, partner[w]])
        edges.sort(key=lambda e: e[0])
        return [(e[0], e[1]) for e in edges]

    def out_type_of(wires) -> PregroupType:
        return PregroupType(wire_types[w] for w in sorted(wires))

    def build(tok: int, out_wires: list[int]) -> PregroupTreeNode:
        node = PregroupTreeNode(d.words[tok], tok, out_type_of(out_wires))
        nodes[tok] = node
        path.append(tok)
        for child_tok, cups in arg_edges(tok, set(out_wires)):
            cups = [c for c in cups if c in active]
            if not cups:
                continue
            if child_tok not in nodes and child_tok in heads:
                # another head word: trees stay rooted at their heads, so
                # this cup cannot become a parent link
                drop_edge(cups)
                continue
            if child_tok not in nodes:
                child_out = sorted(
                    partner[w] for cup in cups for w in cup
                    if d.token_of_wire(w) == tok)
                parent_of[child_tok] = tok
                parent_cups[child_tok] = cups
                child = build(child_tok, child_out)
                if child_tok in parent_of and parent_of[child_tok] == tok:
                    node.children.append(child)
                continue
            # the target already sits in the tree
            other = nodes[child_tok]
            if parent_of.get(child_tok) == tok and parent_cups.get(child_tok) == cups:
                # assigned to us by an earlier loop resolution
                node.children.append(other)
                continue
            if child_tok in path:
                # an ancestor: this cup would make the current token a
                # second child-of-two-parents; compare with our own
                # parent edge and remove the longer-range one
                own = parent_cups.get(tok)
                if own is None:
                    drop_edge(cups)
                    continue
                span_new = _span(d, cups[0])
                span_own = _span(d, own[0])
                if (span_new, -min(c[0] for c in cups)) >= (
                        span_own, -min(c[0] for c in own)):
                    drop_edge(cups)
                else:
                    # our parent edge loses: detach from the old parent
                    # and hang off the ancestor instead
                    drop_edge(own)
                    parent_of[tok] = child_tok
                    parent_cups[tok] = cups
                    node.out_type = out_type_of(
                        w for cup in cups for w in cup
                        if d.token_of_wire(w) == tok)
                    # leave attachment to the ancestor's pending scan
                continue
            if child_tok not in parent_of:
                # orphaned earlier by a loop resolution: adopt it
                node.children.append(other)
                parent_of[child_tok] = tok
                parent_cups[child_tok] = cups
            else:
                # a genuine second parent for the target
                old = parent_cups[child_tok]
                span_new = _span(d, cups[0])
                span_old = _span(d, old[0])
                if (span_new, -min(c[0] for c in cups)) >= (
                        span_old, -min(c[0] for c in old)):
                    drop_edge(cups)
                else:
                    drop_edge(old)
                    old_parent = nodes[parent_of[child_tok]]
                    old_parent.children.remove(other)
                    other.out_type = out_type_of(
                        w for cup in cups for w in cup
                        if d.token_of_wire(w) == child_tok)
                    node.children.append(other)
                    parent_of[child_tok] = tok
                    parent_cups[child_tok] = cups
        path.pop()
        return node

    forest = []
    free_by_token: dict[int, list[int]] = {}
    for w in d.free_wires:
        free_by_token.setdefault(d.token_of_wire(w), []).append(w)
    for head in find_heads(d):
        forest.append(build(head, free_by_token[head]))
    # components with no free wires: root each at its leftmost token
    for tok in range(len(d.tokens)):
        if tok not in nodes:
            forest.append(build(tok, list(d.wires_of_token(tok))))
    forest.sort(key=lambda n: n.token_index)
    return TreeBuildReport(forest, removed)


def compound_type(node: PregroupTreeNode) -> PregroupType:
    """Recover a token's full pregroup type from its node and children.

    Left children contribute reversed right adjoints before the node's own
    output type; right children contribute reversed left adjoints after it.
    """
    left = [c for c in node.children if c.token_index < node.token_index]
    right = [c for c in node.children if c.token_index > node.token_index]
    result = PregroupType()
    # nearest-first on both sides: adjoints must cancel outside-in
    for c in reversed(left):
        result = result @ c.out_type.r
    result = result @ node.out_type
    for c in reversed(right):
        result = result @ c.out_type.l
    return result


def dump_tree(root: PregroupTreeNode, indent: str = "  ") -> str:
    """Indented text dump, one node per line as ``index:word [type]``."""
    lines = []

    def visit(node, depth):
        lines.append(f"{indent * depth}{node.token_index}:{node.word} "
                     f"[{node.out_type}]")
        for child in node.children:
            visit(child, depth + 1)

    visit(root, 0)
    return "\n".join(lines)


def tree_to_json(node: PregroupTreeNode) -> dict:
    """Nested JSON dump of one tree."""
    return {
        "word": node.word,
        "token": node.token_index,
        "type": [[t.base, t.z] for t in node.out_type],
        "children": [tree_to_json(c) for c in node.children],
    }


def forest_to_json(forest: list[PregroupTreeNode]) -> list[dict]:
    return [tree_to_json(root) for root in forest]


def tree_to_dot(forest: list[PregroupTreeNode]) -> str:
    """DOT graph of a pregroup forest for external rendering."""
    lines = ["digraph pregroup_tree {", '  node [shape=box];']
    for root in forest:
        for node in root.walk():
            lines.append(
                f'  t{node.token_index} '
                f'[label="{node.token_index}:{node.word}\\n{node.out_type}"];')
            for child in node.children:
                lines.append(f"  t{node.token_index} -> t{child.token_index};")
    lines.append("}")
    return "\n".join(lines)
