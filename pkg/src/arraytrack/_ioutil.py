"""Small file-output helper used by every serializer."""

import os
import tempfile


def atomic_write_text(path, text):
    """Write ``text`` to ``path`` via a temp file + rename.

    Guarantees no partial file is left behind if writing fails mid-way.
    """
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
