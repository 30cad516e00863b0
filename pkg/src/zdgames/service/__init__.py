"""HTTP service wrapping the core package.

`zdgames.service.ops` holds the request -> response functions; the
FastAPI app in `zdgames.service.app` and the CLI both delegate to them.
"""

from .app import create_app

__all__ = ["create_app"]
