"""Writes the small two-community fixture used by the CLI tests."""
import random
import sys
from pathlib import Path

out = Path(sys.argv[1] if len(sys.argv) > 1 else "data/toy")
out.mkdir(parents=True, exist_ok=True)
rng = random.Random(3)
n, dims = 40, 12
group = [i * 2 // n for i in range(n)]
edges = []
for u in range(n):
    for v in range(u + 1, n):
        p = 0.3 if group[u] == group[v] else 0.02
        if rng.random() < p:
            edges.append((u, v))
# chain within each community so nobody is isolated
for u in range(n - 1):
    if group[u] == group[u + 1] and (u, u + 1) not in edges:
        edges.append((u, u + 1))
edges.sort()
(out / "toy.edges").write_text("".join(f"n{u} n{v}\n" for u, v in edges))
lines = ["@dim %d\n" % dims]
for u in range(n):
    base = 0 if group[u] == 0 else dims // 2
    feats = sorted(rng.sample(range(base, base + dims // 2), 3))
    lines.append("n%d %s\n" % (u, " ".join(f"{f}:1" for f in feats)))
(out / "toy.attrs").write_text("".join(lines))
(out / "toy.labels").write_text("".join(f"n{u} c{group[u]}\n" for u in range(n)))
