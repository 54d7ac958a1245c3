"""Allow ``python -m src.experiments``."""

from src.experiments.cli import main

raise SystemExit(main())
