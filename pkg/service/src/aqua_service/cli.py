"""Service launcher: ``aqua-serve --model-dir ... --port ...``."""

from __future__ import annotations

import argparse
import logging
import os
import sys

from .app import ServiceConfig, serve


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="aqua-serve",
                                     description="Serve per-criterion prediction heads over HTTP")
    parser.add_argument("--model-dir", default=os.environ.get("AQUA_MODEL_DIR"),
                        help="directory with one checkpoint per criterion "
                             "(default: env AQUA_MODEL_DIR)")
    parser.add_argument("--port", type=int,
                        default=int(os.environ.get("AQUA_PORT", "8080")),
                        help="listen port (default: env AQUA_PORT or 8080)")
    parser.add_argument("--base-model", default="",
                        help="base model identifier, echoed in the startup log")
    parser.add_argument("--batch-size", type=int, default=16)
    parser.add_argument("--translate-non-german", action="store_true",
                        help="translate non-German comments before inference "
                             "(requires a translator wired in via aqua_service.app.serve)")
    args = parser.parse_args(argv)
    if not args.model_dir:
        parser.error("--model-dir (or AQUA_MODEL_DIR) is required")

    logging.basicConfig(level=logging.INFO, format="%(message)s")
    cfg = ServiceConfig(model_dir=args.model_dir, base_model=args.base_model,
                        port=args.port, batch_size=args.batch_size,
                        translate_non_german=args.translate_non_german)
    try:
        serve(cfg)
    except (OSError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
