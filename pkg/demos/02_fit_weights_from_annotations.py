"""Fit correlation weights from paired expert/crowd annotations.

Builds a synthetic paired corpus where a few criteria genuinely track the
crowd's judgment, fits a weight table, and round-trips it through TSV.

Run:  python demos/02_fit_weights_from_annotations.py
"""

import random
import tempfile
import warnings
from pathlib import Path

from aqua import (
    CRITERIA,
    Comment,
    CrowdLabel,
    ExpertAnnotation,
    fit_weights,
    load_weights,
    pair_corpus,
    save_weights,
)
from aqua.errors import DegenerateDataWarning

rng = random.Random(7)

# Synthetic ground truth: justification and solution proposals raise the
# odds a crowd member finds the comment enriching; vulgarity lowers them.
n = 400
comments, expert, crowd = [], [], []
for i in range(n):
    cid = f"c{i}"
    scores = {name: rng.randint(0, 3) for name in CRITERIA}
    signal = (scores["justification"] + scores["solution_proposals"]
              - 2 * scores["vulgar"] + rng.gauss(0, 2))
    label = 1 if signal > 2.5 else 0
    comments.append(Comment(id=cid, text=f"synthetic comment {i}"))
    expert.append(ExpertAnnotation(comment_id=cid, scores=scores))
    crowd.append(CrowdLabel(comment_id=cid, label=label))

# Pairing intersects the three inputs on comment id (here they align).
corpus, report = pair_corpus(comments, expert, crowd)
print(f"paired corpus: {len(corpus)} comments, "
      f"{len(report.dropped_expert)} expert rows dropped")

with warnings.catch_warnings():
    warnings.simplefilter("ignore", DegenerateDataWarning)
    table = fit_weights(corpus)

print("\nstrongest fitted weights:")
for name in sorted(CRITERIA, key=lambda n: -abs(table.weights[n]))[:6]:
    print(f"  {name:<20s} {table.weights[name]:+.4f}")
print("\n(planted signals: justification and solution_proposals positive, vulgar negative)")

# Weight tables persist as TSV and round-trip losslessly.
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "weights.tsv"
    save_weights(table, path)
    reloaded = load_weights(path)
    assert reloaded == table
    print(f"\nsaved and reloaded {path.name}: tables identical "
          f"({table.n_samples} samples, provenance {table.provenance!r})")
