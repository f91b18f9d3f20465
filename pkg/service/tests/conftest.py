from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from aqua_service import ServiceConfig, create_app, make_stub_checkpoints


@pytest.fixture
def model_dir(tmp_path):
    path = tmp_path / "models"
    make_stub_checkpoints(path, seed=11)
    return path


@pytest.fixture
def client(model_dir):
    app = create_app(ServiceConfig(model_dir=str(model_dir)))
    return TestClient(app)


def comment(cid: str, text: str, language: str = "de") -> dict:
    return {"id": cid, "text": text, "language": language}
