"""Per-criterion prediction heads and checkpoint loading.

A model directory holds one checkpoint per canonical criterion, either

* ``<criterion>.json`` -- a stub head: deterministic, dependency-free,
  meant for CI and protocol testing; or
* ``<criterion>/`` -- a standard transformers sequence-classification
  checkpoint directory (``config.json`` + weights + tokenizer) with 4
  labels, decoded by argmax.

Both kinds answer integers in ``0..max_level`` and are deterministic for a
fixed checkpoint, so a service restart reproduces identical outputs.
"""

from __future__ import annotations

import hashlib
import json
from abc import ABC, abstractmethod
from pathlib import Path

from .protocol import criteria, max_level


class PredictionHead(ABC):
    """One criterion's classifier: text batch in, 0..max_level levels out."""

    criterion: str
    checkpoint: str

    @abstractmethod
    def predict_batch(self, texts: list[str]) -> list[int]:
        raise NotImplementedError


class StubHead(PredictionHead):
    """Deterministic stand-in head.

    Optional substring rules (first match wins) take precedence; otherwise
    the level is a stable hash of (seed, criterion, text). No randomness,
    no state: restarts and repeated requests reproduce identical outputs.
    """

    def __init__(self, criterion: str, seed: int = 0,
                 rules: list[tuple[str, int]] | None = None, checkpoint: str = "<inline>"):
        self.criterion = criterion
        self.seed = seed
        self.rules = [(s.lower(), int(level)) for s, level in (rules or [])]
        self.checkpoint = checkpoint
        for substring, level in self.rules:
            if not substring or not 0 <= level <= max_level():
                raise ValueError(f"bad stub rule ({substring!r}, {level}) for {criterion}")

    def _predict_one(self, text: str) -> int:
        lowered = text.lower()
        for substring, level in self.rules:
            if substring in lowered:
                return level
        digest = hashlib.sha256(f"{self.seed}:{self.criterion}:{text}".encode()).digest()
        return digest[0] % (max_level() + 1)

    def predict_batch(self, texts: list[str]) -> list[int]:
        return [self._predict_one(t) for t in texts]


class TransformerHead(PredictionHead):
    """Sequence-classification checkpoint decoded by argmax.

    Inputs are truncated on the right to at most 512 tokens (or the
    tokenizer's smaller limit); inference runs in eval mode without
    gradients, so outputs are deterministic for a fixed checkpoint.
    """

    def __init__(self, criterion: str, checkpoint_dir: Path):
        try:
            import torch
            from transformers import AutoModelForSequenceClassification, AutoTokenizer
        except ImportError as exc:
            raise RuntimeError(
                f"checkpoint {checkpoint_dir} needs the 'hf' extra (torch + transformers)"
            ) from exc
        self.criterion = criterion
        self.checkpoint = str(checkpoint_dir)
        self._torch = torch
        self._tokenizer = AutoTokenizer.from_pretrained(checkpoint_dir)
        self._model = AutoModelForSequenceClassification.from_pretrained(checkpoint_dir)
        self._model.eval()
        n_labels = self._model.config.num_labels
        if n_labels != max_level() + 1:
            raise ValueError(
                f"checkpoint {checkpoint_dir} has {n_labels} labels, need {max_level() + 1}")
        self._max_length = min(int(getattr(self._tokenizer, "model_max_length", 512)), 512)

    def predict_batch(self, texts: list[str]) -> list[int]:
        encoded = self._tokenizer(texts, return_tensors="pt", padding=True,
                                  truncation=True, max_length=self._max_length)
        with self._torch.no_grad():
            logits = self._model(**encoded).logits
        return [int(v) for v in logits.argmax(dim=-1).tolist()]


def load_head(criterion: str, model_dir: Path) -> PredictionHead:
    stub_path = model_dir / f"{criterion}.json"
    ckpt_dir = model_dir / criterion
    if stub_path.is_file():
        spec = json.loads(stub_path.read_text(encoding="utf-8"))
        if spec.get("kind") != "stub":
            raise ValueError(f"{stub_path}: unknown checkpoint kind {spec.get('kind')!r}")
        rules = [tuple(rule) for rule in spec.get("rules", [])]
        return StubHead(criterion, seed=int(spec.get("seed", 0)), rules=rules,
                        checkpoint=str(stub_path))
    if ckpt_dir.is_dir():
        return TransformerHead(criterion, ckpt_dir)
    raise FileNotFoundError(
        f"no checkpoint for criterion {criterion!r} in {model_dir} "
        f"(expected {criterion}.json or {criterion}/)")


def load_all_heads(model_dir: str | Path) -> dict[str, PredictionHead]:
    """Load one head per canonical criterion; missing checkpoints are fatal."""
    model_dir = Path(model_dir)
    if not model_dir.is_dir():
        raise FileNotFoundError(f"model directory {model_dir} does not exist")
    missing = [name for name in criteria()
               if not (model_dir / f"{name}.json").is_file()
               and not (model_dir / name).is_dir()]
    if missing:
        raise FileNotFoundError(f"model directory {model_dir} missing checkpoints for {missing}")
    return {name: load_head(name, model_dir) for name in criteria()}


def make_stub_checkpoints(model_dir: str | Path, seed: int = 0,
                          rules: dict[str, list[tuple[str, int]]] | None = None) -> None:
    """Write a full set of stub checkpoints (one JSON per criterion)."""
    model_dir = Path(model_dir)
    model_dir.mkdir(parents=True, exist_ok=True)
    for name in criteria():
        spec = {"kind": "stub", "criterion": name, "seed": seed}
        if rules and name in rules:
            spec["rules"] = [list(r) for r in rules[name]]
        (model_dir / f"{name}.json").write_text(
            json.dumps(spec, indent=2) + "\n", encoding="utf-8")
