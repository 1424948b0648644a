#!/usr/bin/env python3
"""Download the public WDC product-matching files used by the baseline tests.

Fetches, per category (cameras, computers, shoes, watches):
  - the gold-standard pair file        -> data/wdc/{category}_gs.json.gz
  - small/medium/large training sets   -> data/wdc/{category}_train_{size}.json.gz

The v2 corpus is hosted by the University of Mannheim; if the layout moves,
pass --base-url with the current data root (see the corpus homepage,
webdatacommons.org/largescaleproductcorpus/v2/).

Usage:
    python scripts/fetch_wdc.py [--dest data/wdc] [--base-url URL]
"""

from __future__ import annotations

import argparse
import io
import sys
import urllib.request
import zipfile
from pathlib import Path

DEFAULT_BASE = "http://data.dws.informatik.uni-mannheim.de/largescaleproductcorpus/data/v2"
CATEGORIES = ("cameras", "computers", "shoes", "watches")
SIZES = ("small", "medium", "large")


def download(url: str) -> bytes:
    print(f"  GET {url}")
    with urllib.request.urlopen(url, timeout=120) as resp:
        return resp.read()


def fetch_gold(base: str, dest: Path, category: str) -> None:
    out = dest / f"{category}_gs.json.gz"
    if out.exists():
        print(f"  {out} already present")
        return
    out.write_bytes(download(f"{base}/goldstandards/{category}_gs.json.gz"))


def fetch_train(base: str, dest: Path, category: str) -> None:
    targets = {size: dest / f"{category}_train_{size}.json.gz" for size in SIZES}
    if all(p.exists() for p in targets.values()):
        print(f"  {category} training sets already present")
        return
    # Training sets ship as one zip per category; fall back to direct files
    # if the zip is not available.
    try:
        blob = download(f"{base}/trainsets/{category}_train.zip")
    except Exception as exc:
        print(f"  zip fetch failed ({exc}); trying direct files")
        for size, out in targets.items():
            if not out.exists():
                out.write_bytes(
                    download(f"{base}/trainsets/{category}_train_{size}.json.gz")
                )
        return
    with zipfile.ZipFile(io.BytesIO(blob)) as zf:
        for member in zf.namelist():
            for size, out in targets.items():
                if member.endswith(f"_train_{size}.json.gz") and not out.exists():
                    out.write_bytes(zf.read(member))
                    print(f"  extracted {member} -> {out}")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dest", default="data/wdc", help="output directory")
    parser.add_argument("--base-url", default=DEFAULT_BASE)
    args = parser.parse_args()

    dest = Path(args.dest)
    dest.mkdir(parents=True, exist_ok=True)
    failures = []
    for category in CATEGORIES:
        print(f"{category}:")
        try:
            fetch_gold(args.base_url, dest, category)
            fetch_train(args.base_url, dest, category)
        except Exception as exc:
            failures.append((category, str(exc)))
            print(f"  FAILED: {exc}")
    if failures:
        print("\nSome downloads failed; check the corpus homepage for the current layout.")
        return 1
    print(f"\nAll files under {dest}. The baseline acceptance test will now run.")
    return 0


if __name__ == "__main__":
    sys.exit(main())
