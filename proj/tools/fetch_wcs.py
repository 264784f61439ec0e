#!/usr/bin/env python3
# Copyright 2026 The nilcolor Authors.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Downloads the World Color Survey files into a data directory.

Writes term.txt and dict.txt as published, plus chip_ids.tsv
(wcs_chip, row, col) converted from the chip coordinate table. SHA-256 sums
go to SHA256SUMS on the first fetch; later fetches, or a SHA256SUMS placed
there beforehand, are verified against it.

    python3 tools/fetch_wcs.py wcs-data
    nilcolor --data wcs-data analyze --references
"""
import argparse
import hashlib
import pathlib
import sys
import urllib.request

BASE = "https://www1.icsi.berkeley.edu/wcs/data"
FILES = {
    "term.txt": "20021219/txt/term.txt",
    "dict.txt": "20021219/txt/dict.txt",
    "cnum-vhcm-lab-new.txt": "cnum-maps/cnum-vhcm-lab-new.txt",
}


def sha256(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def chip_ids(coord_table):
    """cnum, V (row letter), H (column) -> wcs_chip<TAB>row<TAB>col."""
    rows = ["wcs_chip\trow\tcol"]
    for line in coord_table.read_text(encoding="latin-1").splitlines():
        f = line.split()
        if len(f) < 3 or not f[0].isdigit():
            continue
        rows.append(f"{f[0]}\t{f[1]}\t{f[2]}")
    if len(rows) != 331:
        sys.exit(f"expected 330 chips in {coord_table.name}, found {len(rows) - 1}")
    return "\n".join(rows) + "\n"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("dest", type=pathlib.Path)
    ap.add_argument("--base-url", default=BASE)
    args = ap.parse_args()
    args.dest.mkdir(parents=True, exist_ok=True)

    for name, rel in FILES.items():
        target = args.dest / name
        if not target.exists():
            url = f"{args.base_url}/{rel}"
            print(f"fetching {url}")
            urllib.request.urlretrieve(url, target)

    sums_file = args.dest / "SHA256SUMS"
    sums = {name: sha256(args.dest / name) for name in FILES}
    if sums_file.exists():
        expected = dict(reversed(l.split(maxsplit=1)) for l in sums_file.read_text().splitlines() if l.strip())
        bad = [n for n in FILES if expected.get(n) not in (None, sums[n])]
        if bad:
            sys.exit("checksum mismatch: " + ", ".join(bad))
    else:
        sums_file.write_text("".join(f"{h}  {n}\n" for n, h in sums.items()))

    (args.dest / "chip_ids.tsv").write_text(chip_ids(args.dest / "cnum-vhcm-lab-new.txt"))
    print(f"WCS data ready in {args.dest}")


if __name__ == "__main__":
    main()
