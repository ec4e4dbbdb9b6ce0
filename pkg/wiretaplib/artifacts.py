#
# Copyright 2021 Splunk Inc.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#

"""This module provides atomic writers for JSON, CSV and text artifacts."""

import csv
import io
import json
import os
import os.path as op
from typing import Any, Iterable, Optional, Sequence

__all__ = ["ArtifactException", "write_atomic", "ArtifactWriter", "dump_json", "dump_csv"]


class ArtifactException(Exception):
    """Exception raised by artifact writers."""

    pass


def write_atomic(path: str, text: str):
    """Write `text` to `path` through a temporary file and a rename.

    Arguments:
        path: Destination file.
        text: Content.

    Raises:
        ArtifactException: If the file can not be written.
    """

    directory = op.dirname(op.abspath(path))
    try:
        os.makedirs(directory, exist_ok=True)
        with open(path + "_new", "w", newline="") as fp:
            fp.write(text)
        os.replace(path + "_new", path)
    except OSError as e:
        raise ArtifactException(f"Failed to write {path}: {e}.")


def _json_text(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


class ArtifactWriter:
    """Artifact directory.

    Examples:
        >>> from wiretaplib import artifacts
        >>> out = artifacts.ArtifactWriter('/tmp/run1')
        >>> out.write_json('derived.json', derivation.to_json())
        >>> out.read_json('derived.json')
    """

    def __init__(self, directory: str):
        """Initializes ArtifactWriter.

        Arguments:
            directory: Output directory, created on first write.
        """
        self._directory = directory

    def path(self, name: str) -> str:
        return op.join(self._directory, name)

    def write_json(self, name: str, obj: Any) -> str:
        path = self.path(name)
        write_atomic(path, _json_text(obj))
        return path

    def write_csv(self, name: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
        path = self.path(name)
        write_atomic(path, _csv_text(header, rows))
        return path

    def write_text(self, name: str, text: str) -> str:
        path = self.path(name)
        write_atomic(path, text if text.endswith("\n") else text + "\n")
        return path

    def read_json(self, name: str) -> Optional[Any]:
        try:
            with open(self.path(name)) as fp:
                return json.load(fp)
        except (OSError, ValueError):
            return None


def dump_json(path: str, obj: Any):
    """Write one JSON artifact atomically."""
    write_atomic(path, _json_text(obj))


def dump_csv(path: str, header: Sequence[str], rows: Iterable[Sequence[Any]]):
    """Write one CSV artifact atomically."""
    write_atomic(path, _csv_text(header, rows))
