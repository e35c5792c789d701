#!/usr/bin/env python3
"""Convert a LINQS-style citation dataset (`<name>.content` + `<name>.cites`)
into the toolkit's edge-list, sparse-attribute and label text formats.

usage: convert_linqs.py <content> <cites> <out_prefix>

Writes <out_prefix>.edges, <out_prefix>.attrs and <out_prefix>.labels.
Each `.cites` line `cited citing` becomes the edge `citing cited`; line order
and multiplicity are preserved.
"""
import sys


def main():
    content, cites, prefix = sys.argv[1:4]
    rows = []
    dim = None
    for line in open(content, encoding="utf-8"):
        tok = line.split()
        if not tok:
            continue
        values = tok[1:-1]
        if dim is None:
            dim = len(values)
        elif dim != len(values):
            sys.exit(f"inconsistent attribute width for {tok[0]}")
        rows.append((tok[0], values, tok[-1]))

    with open(prefix + ".edges", "w", encoding="utf-8") as out:
        for line in open(cites, encoding="utf-8"):
            tok = line.split()
            if len(tok) == 2:
                out.write(f"{tok[1]} {tok[0]}\n")

    with open(prefix + ".attrs", "w", encoding="utf-8") as out:
        out.write(f"@dim {dim}\n")
        for node, values, _ in rows:
            nz = [f"{i}:{v}" for i, v in enumerate(values) if float(v) != 0.0]
            out.write(" ".join([node] + nz) + "\n")

    with open(prefix + ".labels", "w", encoding="utf-8") as out:
        for node, _, label in rows:
            out.write(f"{node} {label}\n")


if __name__ == "__main__":
    main()
