#!/usr/bin/env python3
"""Download the six benchmark datasets into ./data (network required).

Files whose class column comes first in the raw UCI layout (hepatitis,
primary-tumor) are rewritten with the label moved to the last column,
which is the layout the loader and the experiment configs expect.

Usage:
    python scripts/fetch_uci_data.py [target-dir]
"""

import sys
import urllib.request
from pathlib import Path

BASE = "https://archive.ics.uci.edu/ml/machine-learning-databases"

# filename -> (url, label_first)
FILES = {
    "processed.va.data": (f"{BASE}/heart-disease/processed.va.data", False),
    "processed.hungarian.data": (f"{BASE}/heart-disease/processed.hungarian.data", False),
    "processed.switzerland.data": (f"{BASE}/heart-disease/processed.switzerland.data", False),
    "hepatitis.data": (f"{BASE}/hepatitis/hepatitis.data", True),
    "primary-tumor.data": (f"{BASE}/primary-tumor/primary-tumor.data", True),
    "arrhythmia.data": (f"{BASE}/arrhythmia/arrhythmia.data", False),
}


def move_label_to_last_column(text: str) -> str:
    lines = []
    for line in text.splitlines():
        if not line.strip():
            continue
        cells = line.split(",")
        lines.append(",".join(cells[1:] + cells[:1]))
    return "\n".join(lines) + "\n"


def main() -> int:
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("data")
    target.mkdir(parents=True, exist_ok=True)
    failures = 0
    for name, (url, label_first) in FILES.items():
        destination = target / name
        if destination.exists():
            print(f"{name}: already present")
            continue
        try:
            with urllib.request.urlopen(url, timeout=60) as response:
                text = response.read().decode("utf-8", errors="replace")
        except OSError as exc:
            print(f"{name}: FAILED ({exc})")
            failures += 1
            continue
        if label_first:
            text = move_label_to_last_column(text)
        destination.write_text(text)
        print(f"{name}: saved ({len(text.splitlines())} rows)")
    if failures:
        print(f"{failures} download(s) failed; see messages above",
              file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
