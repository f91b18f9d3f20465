"""Rank comments by score and inspect score vs comment length.

Uses the deterministic keyword mock provider, so the whole pipeline runs
without model checkpoints or a network.

Run:  python demos/04_rank_and_length_reports.py
"""

from aqua import (
    Comment,
    default_weights,
    keyword_mock_provider,
    length_analysis,
    rank_report,
    score_batch,
)

comments = [
    Comment(id="argued", text="Because the budget numbers show a deficit, I propose "
                              "we fund the library differently. Here is the evidence."),
    Comment(id="question", text="Why was the park closed?"),
    Comment(id="shouty", text="THIS IS OUTRAGEOUS!!! Complete nonsense."),
    Comment(id="story", text="When I volunteered last year I saw how the shelter "
                             "struggled; my experience suggests a simple fix."),
    Comment(id="short", text="ok"),
]

# Substring rules stand in for trained per-criterion classifiers.
provider = keyword_mock_provider([
    ("because", "justification", 3),
    ("evidence", "fact", 2),
    ("propose", "solution_proposals", 3),
    ("?", "question", 3),
    ("!!!", "screaming", 3),
    ("nonsense", "insult", 1),
    ("my experience", "storytelling", 3),
    ("i saw", "storytelling", 3),
])

vectors = provider.predict(comments)
scores = score_batch(vectors, default_weights())

report = rank_report(scores, vectors, k=2)
print("top 2:")
for entry in report.top:
    contributing = ", ".join(f"{n}={l}" for n, l in entry.contributing) or "-"
    print(f"  {entry.comment_id:<10s} {entry.aqua:.4f}  ({contributing})")
print("bottom 2:")
for entry in report.bottom:
    contributing = ", ".join(f"{n}={l}" for n, l in entry.contributing) or "-"
    print(f"  {entry.comment_id:<10s} {entry.aqua:.4f}  ({contributing})")

# Length report: word count against score, summarized in width-10 bins.
length = length_analysis(scores, comments)
print("\nword count vs score:")
for wc, aqua in length.pairs:
    print(f"  {wc:3d} words -> {aqua:.4f}")
print("bins (lo-hi: count, mean, max):")
for b in length.bins:
    print(f"  {b.lo:2d}-{b.hi - 1:<2d}: {b.count}, {b.mean:.4f}, {b.max:.4f}")
