"""HTTP inference service hosting per-criterion prediction heads behind the
comment-quality wire protocol."""

from .app import ServiceConfig, create_app, serve
from .heads import PredictionHead, StubHead, TransformerHead, load_all_heads, make_stub_checkpoints

__version__ = "0.1.0"
