#!/usr/bin/env python3
"""Download the published 90-diagram corpus for the conditional acceptance test.

Fetches the corpus repository archive, extracts the enriched .puml files and
the methodless baseline into a local directory, and prints the environment
variable to export so `pytest tests/test_acceptance.py` can find it.

Usage:
    python scripts/fetch_corpus.py [--dest reference_corpus]
"""

from __future__ import annotations

import argparse
import io
import sys
import zipfile
from pathlib import Path

REPO_ZIP = ("https://github.com/Djaber1979/"
            "-Behavioral-Augmentation-of-UML-Class-Diagrams/archive/refs/heads/main.zip")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dest", default="reference_corpus",
                        help="destination directory (default: reference_corpus)")
    parser.add_argument("--url", default=REPO_ZIP,
                        help="archive URL (override for mirrors)")
    args = parser.parse_args()

    try:
        import requests
    except ImportError:
        print("requests is required: pip install requests", file=sys.stderr)
        return 1

    dest = Path(args.dest)
    puml_dir = dest / "puml"
    puml_dir.mkdir(parents=True, exist_ok=True)

    print(f"downloading {args.url} ...")
    response = requests.get(args.url, timeout=300)
    response.raise_for_status()

    count = 0
    baseline_written = False
    with zipfile.ZipFile(io.BytesIO(response.content)) as archive:
        for info in archive.infolist():
            name = Path(info.filename).name
            if info.is_dir():
                continue
            lower = name.lower()
            if lower.endswith(".puml") and "_run" in lower:
                (puml_dir / name).write_bytes(archive.read(info))
                count += 1
            elif lower in ("methodless.txt", "methodless.puml"):
                (dest / "Methodless.puml").write_bytes(archive.read(info))
                baseline_written = True

    print(f"extracted {count} corpus diagrams to {puml_dir}")
    if not baseline_written:
        print("warning: no methodless baseline found in the archive",
              file=sys.stderr)
    print(f"\nexport PUMLEVAL_REFERENCE_CORPUS={dest.resolve()}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
