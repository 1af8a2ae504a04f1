"""Output files: parent directories are created and every write is atomic per path."""
from __future__ import annotations

import os
import tempfile

from utils.errors import OutputWriteError


def ensure_parent_dir(path: str) -> str:
    directory = os.path.dirname(os.path.abspath(path))
    try:
        os.makedirs(directory, exist_ok=True)
    except OSError as e:
        raise OutputWriteError(f"cannot create directory for {path}: {e}") from e
    return directory


def write_text_atomic(path: str, text: str) -> str:
    """Write ``text`` to a temp file next to ``path``, then rename it over ``path``."""
    directory = ensure_parent_dir(path)
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    except OSError as e:
        raise OutputWriteError(f"cannot write {path}: {e}") from e
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException as e:
        if os.path.exists(tmp):
            os.remove(tmp)
        if isinstance(e, OSError):
            raise OutputWriteError(f"cannot write {path}: {e}") from e
        raise
    return path
