"""Train a tiny two-topic text classifier end to end.

Paragraphs about cooking or programming are compiled to circuits that
share parameters across texts; a merge box squeezes each text onto one
qubit whose measurement is the class probability.

Run with:  python3 demos/train_toy_classifier.py
"""

import random

from discocirc.ansatz import AnsatzConfig
from discocirc.ingest import Lexicon, parse_text
from discocirc.pipeline import PipelineConfig, circuit, diagrams, treeize
from discocirc.rewrite import builtin_rule
from discocirc.sim import TrainConfig, train

COOKING = {
    "subjects": [("chef", "he"), ("woman", "she")],
    "verbs": ["cooks", "prepares", "bakes", "serves", "tastes"],
    "objects": ["soup", "bread", "dinner", "lunch", "meal"],
    "adjectives": ["tasty", "fresh", "great"],
}
PROGRAMMING = {
    "subjects": [("programmer", "she"), ("man", "he")],
    "verbs": ["writes", "debugs", "fixes", "tests", "solves"],
    "objects": ["code", "program", "bug", "problems"],
    "adjectives": ["efficient", "clever", "new"],
}


def make_text(rng, topic):
    subject, pronoun = rng.choice(topic["subjects"])
    text = [["the", subject, rng.choice(topic["verbs"]),
             rng.choice(topic["adjectives"]), rng.choice(topic["objects"])]]
    for _ in range(2):
        text.append([pronoun, rng.choice(topic["verbs"]),
                     "the", rng.choice(topic["objects"])])
    return text


rng = random.Random(0)
lex = Lexicon.builtin()
cfg = PipelineConfig(
    lexicon=lex,
    rewrites=[builtin_rule("determiner"), builtin_rule("noun_modification")],
    ansatz=AnsatzConfig("sim4", qubits_per_wire=1, layers=1, seed=0))

N_TEXTS = 60
dataset = []
for i in range(N_TEXTS):
    topic = COOKING if i % 2 == 0 else PROGRAMMING
    doc = parse_text(make_text(rng, topic), lex)
    td = diagrams(doc, treeize(doc, cfg), cfg)
    dataset.append((circuit(td, cfg), i % 2))

sample = dataset[0][0]
print(f"{N_TEXTS} texts compiled; a typical circuit has "
      f"{sample.n_qubits} qubits, {len(sample.gates)} gates, "
      f"{len(sample.symbols)} parameters")

params, history = train(
    dataset,
    TrainConfig(epochs=30, batch_size=10, learning_rate=0.01, seed=0,
                gradient="adjoint"))

print("\nepoch  train_loss  train_acc  test_acc")
for epoch, loss, train_acc, test_acc in history.rows:
    if epoch % 5 == 0 or epoch == 1:
        print(f"{epoch:5d}  {loss:10.4f}  {train_acc:9.3f}  {test_acc:8.3f}")
