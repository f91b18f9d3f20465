"""Evaluate scores against external binary labels and check coder agreement.

Run:  python demos/03_evaluate_against_labels.py
"""

import random

from aqua import (
    CRITERIA,
    PredictionVector,
    ReliabilityMatrix,
    default_weights,
    f1_scores,
    krippendorff_alpha,
    score_batch,
    threshold_classify,
    tune_threshold,
)

rng = random.Random(13)

# Score a batch of synthetic comments: higher-quality vectors carry more
# justification/facts, lower-quality ones more insults and screaming.
vectors = []
quality = []
for i in range(200):
    good = rng.random() < 0.5
    levels = {name: 0 for name in CRITERIA}
    if good:
        levels["justification"] = rng.randint(2, 3)
        levels["fact"] = rng.randint(1, 3)
        levels["solution_proposals"] = rng.randint(0, 3)
    else:
        levels["insult"] = rng.randint(0, 3)
        levels["screaming"] = rng.randint(0, 2)
        levels["opinion"] = rng.randint(1, 3)
    vectors.append(PredictionVector(f"c{i}", levels))
    quality.append(1 if good else 0)

scores = score_batch(vectors, default_weights())

# Fixed-threshold classification: label 1 iff the score reaches the cutoff.
pred = threshold_classify(scores, 2.3)
per_class, macro, weighted = f1_scores(pred, quality)
print("threshold 2.3:")
print(f"  per-class F1 {per_class}")
print(f"  macro F1 {macro:.4f}, weighted F1 {weighted:.4f}")

# The cutoff is a hyperparameter; a grid scan picks the one that maximizes
# weighted F1 (ties go to the lowest threshold).
best_t, best_f1 = tune_threshold(scores, quality)
print(f"\ntuned threshold: {best_t:.2f} -> weighted F1 {best_f1:.4f}")

# Annotation reliability: agreement between coders, chance-corrected.
# Three coders label 12 items; coder 3 misses some items (None cells).
items = []
for _ in range(12):
    true = rng.randint(0, 1)
    noisy = lambda: true if rng.random() < 0.9 else 1 - true
    items.append((noisy(), noisy(), noisy() if rng.random() < 0.7 else None))
matrix = ReliabilityMatrix(rows=tuple(items))
print(f"\nKrippendorff's alpha over {len(items)} items, 3 coders: "
      f"{krippendorff_alpha(matrix):.3f}")
