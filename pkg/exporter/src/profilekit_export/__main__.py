"""Allow running the exporter as ``python -m profilekit_export``."""

from .cli import main

raise SystemExit(main())
