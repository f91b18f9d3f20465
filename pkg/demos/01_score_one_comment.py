"""Walk through scoring a single comment, from criterion levels to the
final 0..5 quality score.

Run:  python demos/01_score_one_comment.py
"""

from aqua import (
    CRITERIA,
    PredictionVector,
    aqua_score,
    compute_bounds,
    default_weights,
)

# Every comment is described by 20 criterion levels on a 0..3 scale
# ("clearly not present" .. "clearly present"). Here: a comment that
# justifies a claim, states facts, and addresses the editorial team.
levels = {name: 0 for name in CRITERIA}
levels["justification"] = 3
levels["fact"] = 2
levels["referencing_medium"] = 2

vector = PredictionVector(comment_id="demo-1", predictions=levels)

# The shipped weight table carries one correlation-derived weight per
# criterion: positive weights mark traits of high-quality comments,
# negative weights mark detracting traits.
table = default_weights()
print("weights contributing to this comment:")
for name in CRITERIA:
    if levels[name] > 0:
        print(f"  {name:<20s} level {levels[name]} x weight {table.weights[name]:+.8f}")

# The raw score is the weighted sum of the levels; the bounds are the
# analytic extremes reachable over all level assignments.
bounds = compute_bounds(table)
result = aqua_score(vector, table)
print(f"\nraw score:        {result.raw:.8f}")
print(f"score bounds:     [{bounds.s_min:.8f}, {bounds.s_max:.8f}]")
print(f"normalized score: {result.normalized:.4f}  (0 = worst possible, 5 = best possible)")

# The extremes are attainable: max out every positively weighted
# criterion and zero the negative ones (and vice versa).
best = PredictionVector("best", {n: 3 if table.weights[n] >= 0 else 0 for n in CRITERIA})
worst = PredictionVector("worst", {n: 3 if table.weights[n] <= 0 else 0 for n in CRITERIA})
print(f"\nbest possible comment scores  {aqua_score(best, table).normalized:.1f}")
print(f"worst possible comment scores {aqua_score(worst, table).normalized:.1f}")
