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
"""Regenerates data/chips.tsv from the Munsell renotation data.

The 330-cell naming grid: column 0 holds ten achromatic chips (rows A-J,
N9.5 down to N1.5); columns 1-40 hold chromatic chips in rows B-I (values
9..2) on the 2.5R..10RP hue circle at the highest renotation chroma that
exists for that hue/value (capped at MAX_CHROMA). CIELAB is computed under
illuminant C, the renotation's reference white.

Requires colour-science (pip install colour-science).
"""
import sys

import colour
import numpy as np

MAX_CHROMA = 14
HUE_FAMILIES = ["R", "YR", "Y", "GY", "G", "BG", "B", "PB", "P", "RP"]
HUE_STEPS = ["2.5", "5", "7.5", "10"]
ROWS = "ABCDEFGHIJ"
ACHROMATIC_VALUES = [9.5, 9, 8, 7, 6, 5, 4, 3, 2, 1.5]
ILLUMINANT_C = colour.CCS_ILLUMINANTS["CIE 1931 2 Degree Standard Observer"]["C"]


def max_real_chroma():
    table = {}
    for (hue, value, chroma), _ in colour.notation.MUNSELL_COLOURS_REAL:
        key = (hue, value)
        table[key] = max(table.get(key, 0), chroma)
    return table


def lab_of(spec):
    xyY = colour.munsell_colour_to_xyY(spec)
    XYZ = colour.xyY_to_XYZ(xyY)
    lab = colour.XYZ_to_Lab(XYZ, ILLUMINANT_C)
    return tuple(0.0 if abs(v) < 5e-5 else float(v) for v in lab)


def main(out):
    chroma = max_real_chroma()
    hues = [s + f for f in HUE_FAMILIES for s in HUE_STEPS]
    out.write("index\trow\tcol\tL\ta\tb\n")
    index = 0
    for r, row in enumerate(ROWS):
        lab = lab_of("N%s" % ACHROMATIC_VALUES[r])
        out.write("%d\t%s\t0\t%.4f\t%.4f\t%.4f\n" % (index, row, *lab))
        index += 1
        if row in "AJ":
            continue
        value = 10 - r
        for col, hue in enumerate(hues, start=1):
            c = min(chroma.get((hue, value), 2), MAX_CHROMA)
            c = c - (c % 2)
            lab = lab_of("%s %d/%d" % (hue, value, c))
            out.write("%d\t%s\t%d\t%.4f\t%.4f\t%.4f\n" % (index, row, col, *lab))
            index += 1
    assert index == 330, index


if __name__ == "__main__":
    main(open(sys.argv[1], "w") if len(sys.argv) > 1 else sys.stdout)
