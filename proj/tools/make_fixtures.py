#!/usr/bin/env python3
"""Regenerate the group fixtures under data/."""
import itertools
import json
import pathlib

OUT = pathlib.Path(__file__).resolve().parent.parent / "data"


def cyclic(n):
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    return {"order": n, "table": table, "generators": [1]}


def product(n, m):
    elems = [(a, b) for a in range(n) for b in range(m)]
    idx = {e: k for k, e in enumerate(elems)}
    table = [[idx[((a[0] + b[0]) % n, (a[1] + b[1]) % m)] for b in elems] for a in elems]
    return {"order": n * m, "table": table, "generators": [idx[(1, 0)], idx[(0, 1)]]}


def s3():
    perms = sorted(itertools.permutations(range(3)))
    idx = {p: k for k, p in enumerate(perms)}
    comp = lambda a, b: tuple(a[b[i]] for i in range(3))
    table = [[idx[comp(a, b)] for b in perms] for a in perms]
    swap, rot = idx[(1, 0, 2)], idx[(1, 2, 0)]
    return {"order": 6, "table": table, "generators": [swap, rot]}


def write(name, doc):
    (OUT / name).write_text(json.dumps(doc, indent=1) + "\n")


def trivial(n, p):
    return {"prime": p, "group": cyclic(n), "representation": {"blocks": [1], "matrices": [[[1]]]}}


write("z2_p2.json", trivial(2, 2))
write("z3_p3.json", trivial(3, 3))
write("z4_p2.json", trivial(4, 2))
write("z5_p5.json", trivial(5, 5))
write("z2_p3.json", trivial(2, 3))

zz = {"prime": 3, "group": product(3, 3), "representation": {"blocks": [1], "matrices": [[[1]], [[1]]]}}
write("z3xz3_p3.json", zz)
bad = dict(zz)
bad["debug"] = {"corrupt_relation_sign": True}
write("z3xz3_p3_corrupt.json", bad)

# 2-dimensional irreducible over F_2 (projective)
write("s3_std_p2.json", {"prime": 2, "group": s3(), "representation": {
    "blocks": [2], "matrices": [[[0, 1], [1, 0]], [[0, 1], [1, 1]]]}})

# trivial plus sign over F_3, two blocks
write("s3_triv_sgn_p3.json", {"prime": 3, "group": s3(), "representation": {
    "blocks": [1, 1], "matrices": [[[1, 0], [0, 2]], [[1, 0], [0, 1]]]}})

# synthetic quivers: arrows named per block, x{i}{j}_{k} when a block holds several
write("quadric.json", {"prime": 3, "r": 2, "h1": [[0, 2], [2, 0]], "h2": [[0, 0], [0, 0]]})
write("quadric_h2.json", {
    "prime": 3, "r": 2, "h1": [[0, 2], [2, 0]], "h2": [[1, 0], [0, 0]],
    "relations": [{"block": [1, 1], "terms": [{"coeff": 1, "word": ["x12_1", "x21_1"]},
                                               {"coeff": -1, "word": ["x12_2", "x21_2"]}]}],
})
write("triangle.json", {"prime": 3, "r": 3, "h1": [[0, 1, 1], [1, 0, 1], [1, 1, 0]]})
write("one_way.json", {"prime": 3, "r": 2, "h1": [[0, 1], [0, 0]]})
write("two_components.json", {"prime": 3, "r": 3, "h1": [[0, 2, 0], [2, 0, 0], [0, 0, 1]]})

# negative controls
write("z2_dup_p3.json", {"prime": 3, "group": cyclic(2), "representation": {
    "blocks": [1, 1], "matrices": [[[1, 0], [0, 1]]]}})
broken = cyclic(3)
broken["table"][1][2] = 1
write("bad_table.json", {"prime": 3, "group": broken, "representation": {"blocks": [1], "matrices": [[[1]]]}})

# eps_2 over F_3 as an explicit test-ring file
(OUT / "rings").mkdir(exist_ok=True)
mul = lambda a, b: [1 if k == a + b else 0 for k in range(3)]
(OUT / "rings" / "eps2_p3.json").write_text(json.dumps(
    {"prime": 3, "label": "eps2-file", "basis": ["1", "e", "e2"],
     "table": [[mul(a, b) for b in range(3)] for a in range(3)], "degrees": [0, 1, 2]}, indent=1) + "\n")
