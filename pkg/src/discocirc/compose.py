"""Stitch sentence diagrams into one document-level text diagram.

Sentences compose along wires carrying the same coreference chain.  Each
sentence contributes: a permutation routing the shared chains next to the
new ones, spider copies for chains mentioned twice within the sentence,
the sentence body, then the daggered spiders and permutation restoring
the global wire order.  Wire ids are chain ids; within-sentence duplicate
mentions use (chain_id, k) copy ids.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .errors import ChainMismatch
from .frames import (
    Box,
    Empty,
    Frame,
    Identity,
    NounState,
    Par,
    Perm,
    SentenceDiagram,
    Spider,
    element_wires,
    iter_boxes,
    map_wires,
)
from .ingest import CorefMap

log = logging.getLogger(__name__)


@dataclass
class TextDiagram:
    """Document-level diagram: one state per chain plus stacked layers."""

    states: list[NounState]
    layers: list
    chain_order: dict[int, int] = field(default_factory=dict)

    @property
    def wire_count(self) -> int:
        return len(self.states)


@dataclass
class PermSpec:
    """A wire permutation plus within-sentence duplication spiders."""

    mapping: dict[int, int]  # source position -> target position
    spiders: list[tuple[int, int]] = field(default_factory=list)
    wires: tuple = ()


def permutation_to_layers(p: PermSpec) -> list:
    """Decompose a permutation into adjacent transpositions (bubble sort),
    followed by the requested spider copies."""
    order = list(p.wires) if p.wires else list(range(len(p.mapping)))
    target = [p.mapping[i] for i in range(len(order))]
    layers = []
    changed = True
    while changed:
        changed = False
        for i in range(len(target) - 1):
            if target[i] > target[i + 1]:
                target[i], target[i + 1] = target[i + 1], target[i]
                mapping = list(range(len(order)))
                mapping[i], mapping[i + 1] = i + 1, i
                layers.append(Perm(tuple(order), tuple(mapping)))
                order[i], order[i + 1] = order[i + 1], order[i]
                changed = True
    for chain_id, multiplicity in p.spiders:
        copies = tuple((chain_id, k) for k in range(1, multiplicity))
        layers.append(Spider((chain_id,) + copies, chain_id, dagger=True))
    return layers


def apply_layer(order: list, layer) -> list:
    """Wire order after a layer (permutations reorder, spiders change
    multiplicity, everything else is width-preserving)."""
    if isinstance(layer, Perm):
        if tuple(order) != layer.wires:
            raise ChainMismatch(
                f"permutation domain {layer.wires} != wire order {order}")
        return [layer.wires[i] for i in layer.mapping]
    if isinstance(layer, Spider):
        if layer.dagger:
            pos = order.index(layer.out_wire)
            return order[:pos] + list(layer.in_wires) + order[pos + 1:]
        pos = order.index(layer.in_wires[0])
        out = [w for w in order if w not in layer.in_wires[1:]]
        out[out.index(layer.in_wires[0])] = layer.out_wire
        return out
    return list(order)


def wire_order(td: TextDiagram) -> list:
    order = [s.chain_id for s in td.states]
    # states are appended over time; replay introductions with the layers
    order = []
    introduced = 0
    for layer in td.layers:
        needed = set()
        for w in element_wires(layer):
            needed.add(w[0] if isinstance(w, tuple) else w)
        while introduced < len(td.states) and not needed <= set(order):
            order.append(td.states[introduced].chain_id)
            introduced += 1
        order = apply_layer(order, layer)
    order += [s.chain_id for s in td.states[introduced:]]
    return order


def compose_document(sentences: list[SentenceDiagram | None],
                     coref: CorefMap) -> TextDiagram:
    """Fold sentence diagrams into a document diagram along chains.

    ``None`` entries (sentences emptied by filtering) are skipped.  Every
    noun state must belong to a chain of ``coref``.
    """
    chain_of = {}
    for ci, chain in enumerate(coref.chains):
        for m in chain:
            chain_of[m] = ci

    states: list[NounState] = []
    known: set[int] = set()
    order: list[int] = []
    layers: list = []

    for sd in sentences:
        if sd is None:
            log.info("skipping empty sentence")
            continue
        local: list[tuple[NounState, int]] = []
        for noun in sd.nouns:
            mention = (noun.sentence_index, noun.token_index)
            if mention not in chain_of:
                raise ChainMismatch(f"noun {noun.word!r} at {mention} "
                                    "belongs to no coreference chain")
            local.append((noun, chain_of[mention]))

        local_unique: list[int] = []
        counts: dict[int, int] = {}
        for _, cid in local:
            counts[cid] = counts.get(cid, 0) + 1
            if cid not in local_unique:
                local_unique.append(cid)
        new = [cid for cid in local_unique if cid not in known]
        shared = [cid for cid in local_unique if cid in known]

        for noun, cid in local:
            if cid in new and all(s.chain_id != cid for s in states):
                states.append(
                    NounState(noun.word, noun.sentence_index,
                              noun.token_index, cid))
        order += new
        known.update(new)

        # wire ids for the body: first mention of a chain keeps the chain
        # id, further mentions get copy ids
        seen: dict[int, int] = {}
        token_to_wire = {}
        for noun, cid in local:
            k = seen.get(cid, 0)
            seen[cid] = k + 1
            token_to_wire[noun.token_index] = cid if k == 0 else (cid, k)
        body = map_wires(sd.body, lambda t: token_to_wire[t])

        spiders = [(cid, counts[cid]) for cid in local_unique
                   if counts[cid] > 1]
        if shared or spiders:
            # route: untouched chains first, then this sentence's chains
            # in local order
            target_order = ([c for c in order if c not in local_unique]
                            + local_unique)
            mapping = {i: target_order.index(c) for i, c in enumerate(order)}
            spec = PermSpec(mapping, spiders, tuple(order))
            pi_layers = permutation_to_layers(spec)
            fwd = [l for l in pi_layers if isinstance(l, Perm)]
            copy_layers = [l for l in pi_layers if isinstance(l, Spider)]
        else:
            fwd, copy_layers = [], []

        cur = list(order)
        for layer in fwd + copy_layers:
            layers.append(layer)
            cur = apply_layer(cur, layer)

        body_wires = element_wires(body)
        rest = tuple(w for w in cur if w not in body_wires)
        layers.append(Par((body, Identity(rest))) if rest else body)

        for cid, m in reversed(spiders):
            merge = Spider(
                (cid,) + tuple((cid, k) for k in range(1, m)), cid,
                dagger=False)
            layers.append(merge)
            cur = apply_layer(cur, merge)
        for layer in reversed(fwd):
            inverse = Perm(tuple(cur), layer.mapping)
            layers.append(inverse)
            cur = apply_layer(cur, inverse)
        if cur != order:
            raise ChainMismatch(
                f"wire order {cur} not restored to {order}")

    td = TextDiagram(states, layers,
                     {cid: i for i, cid in enumerate(order)})
    return td


def wire_box_sequences(td: TextDiagram) -> dict[int, list[str]]:
    """Per-chain sequence of box/frame names, in layer order."""
    seqs: dict[int, list[str]] = {s.chain_id: [] for s in td.states}
    for layer in td.layers:
        for box in iter_boxes(layer):
            for w in box.wires:
                cid = w[0] if isinstance(w, tuple) else w
                seqs[cid].append(box.name)
    return seqs


def text_diagram_to_json(td: TextDiagram) -> dict:
    """JSON dump of a text diagram (states plus typed layers)."""
    def enc(el):
        if isinstance(el, Box):
            d = {"kind": "box", "name": el.name, "wires": list(el.wires)}
            if el.merge:
                d["merge"] = True
            return d
        if isinstance(el, Frame):
            return {"kind": "frame", "name": el.name,
                    "wires": list(el.wires),
                    "components": [enc(c) for c in el.components]}
        if isinstance(el, Identity):
            return {"kind": "id", "wires": list(el.wires)}
        if isinstance(el, Empty):
            return {"kind": "empty"}
        if isinstance(el, Perm):
            return {"kind": "perm", "wires": list(el.wires),
                    "mapping": list(el.mapping)}
        if isinstance(el, Spider):
            return {"kind": "spider", "in_wires": list(el.in_wires),
                    "out_wire": el.out_wire, "dagger": el.dagger}
        if isinstance(el, Par):
            return {"kind": "par", "elements": [enc(c) for c in el.elements]}
        return {"kind": "seq", "elements": [enc(c) for c in el.elements]}

    return {
        "states": [
            {"word": s.word, "sentence": s.sentence_index,
             "token": s.token_index, "chain": s.chain_id}
            for s in td.states
        ],
        "layers": [enc(layer) for layer in td.layers],
        "chain_order": {str(k): v for k, v in td.chain_order.items()},
    }


def text_diagram_to_dot(td: TextDiagram) -> str:
    """DOT dump: states on top, boxes in layer order below."""
    lines = ["digraph text {", "  rankdir=TB;"]
    for s in td.states:
        lines.append(f'  s{s.chain_id} [label="{s.word}" shape=ellipse];')
    last_on: dict[int, str] = {s.chain_id: f"s{s.chain_id}"
                               for s in td.states}
    counter = 0
    for layer in td.layers:
        for box in iter_boxes(layer):
            node = f"b{counter}"
            counter += 1
            shape = "box3d" if isinstance(box, Frame) else "box"
            lines.append(f'  {node} [label="{box.name}" shape={shape}];')
            for w in box.wires:
                cid = w[0] if isinstance(w, tuple) else w
                if cid in last_on:
                    lines.append(f"  {last_on[cid]} -> {node};")
                    last_on[cid] = node
    lines.append("}")
    return "\n".join(lines)
