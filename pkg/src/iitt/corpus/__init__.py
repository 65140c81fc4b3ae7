"""The bundled example programs.

Each ``.iitt`` file here is checked by the test suite and the CLI; together
they record what the kernel accepts and what it must reject.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path


def corpus_files() -> list[Path]:
    root = resources.files(__name__)
    return sorted(Path(str(p)) for p in root.iterdir() if p.name.endswith(".iitt"))


def corpus_items() -> list:
    """Elaborated items of every corpus file, in file order."""
    from iitt.surface import elaborate, parse

    items = []
    for path in corpus_files():
        items += elaborate(parse(path.read_text(encoding="utf-8")))[0]
    return items
