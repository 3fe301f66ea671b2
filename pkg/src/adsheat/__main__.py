"""Allow ``python -m adsheat``."""

from .cli import console_main

console_main()
