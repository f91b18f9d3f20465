import math
import random

import numpy as np
import pytest

from aqua.corpus import Comment, CrowdLabel, ExpertAnnotation, PairedCorpus
from aqua.criteria import CRITERIA
from aqua.errors import (
    DegenerateDataWarning,
    MissingCriterion,
    TooFewSamples,
    WeightOutOfRange,
)
from aqua.weights import (
    DEFAULT_WEIGHTS,
    WeightTable,
    compute_bounds,
    default_weights,
    fit_weights,
    load_weights,
    save_weights,
)

from conftest import zero_vector
from oracles import pearson_two_pass


def paired_corpus_from_columns(criterion_columns: dict[str, list[int]], crowd: list[int]) -> PairedCorpus:
    """Build a PairedCorpus where each criterion takes the given column."""
    n = len(crowd)
    ids = [f"c{i}" for i in range(n)]
    comments = tuple(Comment(id=cid, text=f"text {cid}") for cid in ids)
    expert = {}
    for i, cid in enumerate(ids):
        scores = {name: criterion_columns.get(name, [0] * n)[i] for name in CRITERIA}
        expert[cid] = ExpertAnnotation(cid, scores)
    crowd_map = {cid: CrowdLabel(cid, label) for cid, label in zip(ids, crowd)}
    return PairedCorpus(comments=comments, expert=expert, crowd=crowd_map)


def random_corpus(rng: random.Random, n: int) -> PairedCorpus:
    columns = {name: [rng.randint(0, 3) for _ in range(n)] for name in CRITERIA}
    crowd = [rng.randint(0, 1) for _ in range(n)]
    return paired_corpus_from_columns(columns, crowd)


# ---------------------------------------------------------------------------
# fit_weights


def test_fit_weights_hand_example():
    # single varying criterion against a half/half crowd split
    corpus = paired_corpus_from_columns({"justification": [0, 1, 2, 3]}, [0, 0, 1, 1])
    with pytest.warns(DegenerateDataWarning):
        table = fit_weights(corpus)
    assert table.weights["justification"] == pytest.approx(0.894427, abs=1e-6)
    assert table.n_samples == 4
    # all-zero columns are flagged, the varying one is not
    assert "justification" not in table.zero_variance
    assert "fact" in table.zero_variance
    assert table.weights["fact"] == 0.0


def test_fit_weights_constant_crowd_gives_all_zero():
    corpus = paired_corpus_from_columns({"justification": [0, 1, 2, 3]}, [1, 1, 1, 1])
    with pytest.warns(DegenerateDataWarning):
        table = fit_weights(corpus)
    assert table.weights["justification"] == 0.0
    assert "justification" in table.zero_variance


def test_fit_weights_perfect_correlation():
    crowd = [0, 1, 0, 1, 1]
    corpus = paired_corpus_from_columns({"fact": [3 * c for c in crowd]}, crowd)
    with pytest.warns(DegenerateDataWarning):
        table = fit_weights(corpus)
    assert table.weights["fact"] == 1.0


def test_fit_weights_too_few_samples():
    corpus = paired_corpus_from_columns({"fact": [1]}, [1])
    with pytest.raises(TooFewSamples):
        fit_weights(corpus)


def test_fit_weights_matches_oracle_and_row_permutation():
    rng = random.Random(101)
    for _ in range(50):
        n = rng.randint(2, 50)
        corpus = random_corpus(rng, n)
        table = fit_corpus_quiet(corpus)
        for name in CRITERIA:
            s = [corpus.expert[c.id].scores[name] for c in corpus.comments]
            c = [corpus.crowd[cm.id].label for cm in corpus.comments]
            expected = pearson_two_pass(s, c)
            if expected is None:
                assert table.weights[name] == 0.0
                assert name in table.zero_variance
            else:
                assert table.weights[name] == pytest.approx(expected, abs=1e-9)
        # permuting rows leaves every weight unchanged
        perm = list(range(n))
        rng.shuffle(perm)
        shuffled = PairedCorpus(
            comments=tuple(corpus.comments[i] for i in perm),
            expert=corpus.expert, crowd=corpus.crowd)
        assert fit_corpus_quiet(shuffled).weights == table.weights


def fit_corpus_quiet(corpus):
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateDataWarning)
        return fit_weights(corpus)


def test_fit_weights_label_flip_negates_exactly():
    rng = random.Random(7)
    for _ in range(25):
        n = rng.randint(2, 40)
        corpus = random_corpus(rng, n)
        flipped = PairedCorpus(
            comments=corpus.comments,
            expert=corpus.expert,
            crowd={cid: CrowdLabel(cid, 1 - lab.label) for cid, lab in corpus.crowd.items()})
        w = fit_corpus_quiet(corpus).weights
        wf = fit_corpus_quiet(flipped).weights
        for name in CRITERIA:
            assert wf[name] == -w[name]  # exact, not approximate


def test_fit_weights_bounded_by_one():
    rng = random.Random(11)
    for _ in range(40):
        corpus = random_corpus(rng, rng.randint(2, 30))
        table = fit_corpus_quiet(corpus)
        assert all(-1.0 <= w <= 1.0 for w in table.weights.values())


# ---------------------------------------------------------------------------
# default table and bounds


def test_default_weights_published_values():
    table = default_weights()
    assert table.weights["justification"] == 0.29000763
    assert table.weights["sarcasm"] == -0.15170863
    assert table.n_samples == 0
    assert len(table.weights) == 20


def test_default_weights_sign_tally():
    table = default_weights()
    positive = sum(1 for w in table.weights.values() if w > 0)
    negative = sum(1 for w in table.weights.values() if w < 0)
    assert (positive, negative) == (11, 9)


def test_compute_bounds_default_table():
    bounds = compute_bounds(default_weights())
    assert bounds.s_max == pytest.approx(4.98926754, abs=1e-6)
    assert bounds.s_min == pytest.approx(-1.66928295, abs=1e-6)


def test_compute_bounds_all_zero_table():
    table = WeightTable(weights={name: 0.0 for name in CRITERIA})
    bounds = compute_bounds(table)
    assert (bounds.s_min, bounds.s_max) == (0.0, 0.0)


def test_bounds_span_equals_scaled_weight_mass():
    rng = np.random.default_rng(3)
    for _ in range(20):
        raw = rng.uniform(-1, 1, size=20)
        table = WeightTable(weights=dict(zip(CRITERIA, raw.tolist())))
        for max_level in (1, 2, 3, 5):
            b = compute_bounds(table, max_level)
            assert b.span == pytest.approx(max_level * np.abs(raw).sum(), rel=1e-12)


def test_compute_bounds_rejects_bad_max_level():
    with pytest.raises(ValueError):
        compute_bounds(default_weights(), 0)


# ---------------------------------------------------------------------------
# persistence


def test_weights_tsv_round_trip(tmp_path):
    path = tmp_path / "weights.tsv"
    save_weights(default_weights(), path)
    loaded = load_weights(path)
    assert loaded == default_weights()


def test_weights_tsv_byte_identical_after_first_save(tmp_path):
    p1 = tmp_path / "w1.tsv"
    p2 = tmp_path / "w2.tsv"
    save_weights(default_weights(), p1)
    save_weights(load_weights(p1), p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_load_weights_missing_row(tmp_path):
    path = tmp_path / "weights.tsv"
    save_weights(default_weights(), path)
    lines = [l for l in path.read_text().splitlines() if not l.startswith("storytelling\t")]
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(MissingCriterion):
        load_weights(path)


def test_load_weights_out_of_range(tmp_path):
    path = tmp_path / "weights.tsv"
    save_weights(default_weights(), path)
    lines = [("justification\t1.5" if l.startswith("justification\t") else l)
             for l in path.read_text().splitlines()]
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(WeightOutOfRange):
        load_weights(path)


def test_weight_table_validates_range():
    weights = {name: 0.0 for name in CRITERIA}
    weights["fact"] = math.nan
    with pytest.raises(WeightOutOfRange):
        WeightTable(weights=weights)
