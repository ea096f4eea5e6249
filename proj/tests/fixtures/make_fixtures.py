#!/usr/bin/env python3
"""Regenerates the test fixtures: a 50-word, 10-dim model (text + binary),
synset files, and the golden `analyze --output json` report.

The golden report is computed here by brute force, independently of the C++
code: every subset of S \\ {v} is enumerated naively and every block sum is
recomputed from the word vectors.

    python3 tests/fixtures/make_fixtures.py
"""
import itertools
import json
import math
import struct
from pathlib import Path

import numpy as np

HERE = Path(__file__).resolve().parent
DIM = 10
EPS = 1e-9
SUFFIXES = ["_NOUN"]


def unit(v):
    v = np.asarray(v, dtype=np.float64)
    return v / np.linalg.norm(v)


def build_vocabulary():
    rng = np.random.default_rng(20180917)
    vocab = {}

    # A loose cluster of war words.
    war = unit(rng.normal(size=DIM))
    for w in ["battle", "combat", "fight", "engagement", "skirmish"]:
        vocab[w] = war + 0.45 * rng.normal(size=DIM) / math.sqrt(DIM) * 3

    # Four scattered words plus one lying exactly on their mean direction.
    base = unit(rng.normal(size=DIM))
    spokes = [base + 0.9 * unit(rng.normal(size=DIM)) for _ in range(4)]
    for i, s in enumerate(spokes, 1):
        vocab[f"spoke{i}"] = s
    vocab["hub"] = unit(sum(unit(s) for s in spokes))

    # Two tight pairs pointing in nearly orthogonal directions.
    x = unit(rng.normal(size=DIM))
    y = rng.normal(size=DIM)
    y = unit(y - y.dot(x) * x)
    vocab["north"] = x + 0.05 * unit(rng.normal(size=DIM))
    vocab["northward"] = x + 0.05 * unit(rng.normal(size=DIM))
    vocab["east"] = y + 0.05 * unit(rng.normal(size=DIM))
    vocab["eastward"] = y + 0.05 * unit(rng.normal(size=DIM))

    # Identical vectors under different tokens.
    same = rng.normal(size=DIM)
    for w in ["echo1", "echo2", "echo3", "echo4"]:
        vocab[w] = same.copy()

    # Cyrillic lemmas keyed with a part-of-speech tag.
    ru = unit(rng.normal(size=DIM))
    for w in ["битва", "сражение", "баталия", "бой"]:
        vocab[w + "_NOUN"] = ru + 0.6 * unit(rng.normal(size=DIM))

    # A small triple.
    tri = unit(rng.normal(size=DIM))
    for w in ["glad", "happy", "joyful"]:
        vocab[w] = tri + 0.7 * unit(rng.normal(size=DIM))

    i = 0
    while len(vocab) < 50:
        vocab[f"filler{i:02d}"] = rng.normal(size=DIM)
        i += 1
    # Store raw (unnormalized, arbitrarily scaled) float32 rows.
    scales = rng.uniform(0.5, 3.0, size=len(vocab))
    return {w: (np.asarray(v) * s).astype(np.float32) for (w, v), s in zip(vocab.items(), scales)}


SYNSETS = [
    ("war", "battle", ["battle", "combat", "fight", "engagement", "skirmish"]),
    ("hub", "hub", ["spoke1", "spoke2", "hub", "spoke3", "spoke4"]),
    ("compass", "north", ["north", "northward", "east", "eastward"]),
    ("echo", "echo1", ["echo1", "echo2", "echo3", "echo4"]),
    ("ru-battle", "битва", ["баталия", "бой", "битва", "сражение"]),
    ("joy", "", ["glad", "happy", "joyful"]),
    ("joy-oov", "glad", ["glad", "cheerful", "happy", "joyful"]),
    ("tiny", "fight", ["fight", "melee", "combat", "brawl"]),
]


def write_models(vocab):
    words = list(vocab)
    with open(HERE / "fixture_model.txt", "w", encoding="utf-8") as f:
        f.write(f"{len(words)} {DIM}\n")
        for w in words:
            f.write(w + " " + " ".join(repr_float(c) for c in vocab[w]) + "\n")
    with open(HERE / "fixture_model.bin", "wb") as f:
        f.write(f"{len(words)} {DIM}\n".encode())
        for w in words:
            f.write(w.encode("utf-8") + b" " + struct.pack(f"<{DIM}f", *vocab[w]) + b"\n")


def repr_float(c):
    # %.9g round-trips float32
    return "%.9g" % float(c)


def write_synsets():
    with open(HERE / "fixture_synsets.tsv", "w", encoding="utf-8") as f:
        for sid, head, words in SYNSETS:
            f.write(f"{sid}\t{head}\t{'|'.join(words)}\n")
    with open(HERE / "fixture_synsets.jsonl", "w", encoding="utf-8") as f:
        for sid, head, words in SYNSETS:
            obj = {"id": sid, "words": words}
            if head:
                obj["headword"] = head
            f.write(json.dumps(obj, ensure_ascii=False) + "\n")


# ---------------------------------------------------------------------------
# brute-force oracle


def load_normalized(vocab):
    out = {}
    for w, raw in vocab.items():
        r64 = raw.astype(np.float64)
        norm = math.sqrt(float(np.dot(r64, r64)))
        stored = (r64 / norm).astype(np.float32).astype(np.float64)
        out[w] = stored / math.sqrt(float(np.dot(stored, stored)))
    return out


def sim(a_vecs, b_vecs):
    a = np.sum(a_vecs, axis=0)
    b = np.sum(b_vecs, axis=0)
    na, nb = math.sqrt(a.dot(a)), math.sqrt(b.dot(b))
    assert na > 1e-12 and nb > 1e-12
    return min(1.0, max(-1.0, a.dot(b) / (na * nb)))


def sgn(x):
    return 0 if abs(x) <= EPS else (1 if x > 0 else -1)


def word_attributes(vecs, v):
    others = [i for i in range(len(vecs)) if i != v]
    rank2, centrality, interior, count = 0, 0.0, True, 0
    for bits in itertools.product([0, 1], repeat=len(others)):
        s1 = [others[k] for k, b in enumerate(bits) if b]
        s2 = [others[k] for k, b in enumerate(bits) if not b]
        # proper split; first remaining word on the S1 side counts each split once
        if not s1 or not s2 or others[0] not in s1:
            continue
        count += 1
        base = sim([vecs[i] for i in s1], [vecs[i] for i in s2])
        d1 = sim([vecs[i] for i in s1] + [vecs[v]], [vecs[i] for i in s2]) - base
        d2 = sim([vecs[i] for i in s1], [vecs[i] for i in s2] + [vecs[v]]) - base
        rank2 += sgn(d1) + sgn(d2)
        centrality += d1 + d2
        interior = interior and d1 > EPS and d2 > EPS
    assert count == 2 ** (len(vecs) - 2) - 1
    return rank2, centrality, interior


def fixed4(x):
    s = "%.4f" % x
    if s.startswith("-") and set(s[1:]) <= set("0."):
        s = s[1:]
    return s


def rank_text(r2):
    neg = r2 < 0
    m = -r2 if neg else r2
    return ("-" if neg else "") + str(m // 2) + (".5" if m % 2 else "")


def jstr(s):
    return json.dumps(s, ensure_ascii=False)


def resolve(word, model):
    for key in [word] + [word + s for s in SUFFIXES]:
        if key in model:
            return key
    return None


def golden(model):
    analyzed, skipped = [], []
    for sid, head, words in SYNSETS:
        keys = [(w, resolve(w, model)) for w in words]
        dropped = [(w, "out of vocabulary (tried " + ", ".join([w] + [w + s for s in SUFFIXES]) + ")")
                   for w, k in keys if k is None]
        kept = [(w, k) for w, k in keys if k is not None]
        if len(kept) < 3:
            skipped.append((sid, len(kept), len(words), dropped))
            continue
        vecs = [model[k] for _, k in kept]
        rows = []
        for v, (w, k) in enumerate(kept):
            r2, c, inside = word_attributes(vecs, v)
            rows.append((w, k, r2, c, inside))
        rows.sort(key=lambda r: (-r[2], -math.floor(r[3] / EPS + 0.5), r[0].encode("utf-8")))
        analyzed.append((sid, head or None, len(kept), len(words), rows, dropped))

    def dropped_json(dropped):
        return "[" + ", ".join('{"token": %s, "reason": %s}' % (jstr(t), jstr(r)) for t, r in dropped) + "]"

    out = ['{\n  "command": "analyze",\n  "synsets": [']
    blocks = []
    for sid, head, n, src, rows, dropped in analyzed:
        interior = [w for w, _, _, _, inside in rows if inside]
        words_json = ",\n".join(
            '        {"token": %s, "model_key": %s, "rank": %s, "centrality": %s, "interior": %s}'
            % (jstr(w), jstr(k), rank_text(r2), fixed4(c), "true" if inside else "false")
            for w, k, r2, c, inside in rows)
        blocks.append(
            "    {\n"
            f'      "id": {jstr(sid)},\n'
            f'      "headword": {jstr(head) if head else "null"},\n'
            f'      "n": {n},\n'
            f'      "source_size": {src},\n'
            f'      "partition_count": {2 ** (n - 2) - 1},\n'
            f'      "interior": [{", ".join(jstr(w) for w in interior)}],\n'
            '      "words": [\n'
            f"{words_json}\n"
            "      ],\n"
            f'      "dropped": {dropped_json(dropped)}\n'
            "    }")
    out.append("\n" + ",\n".join(blocks) + "\n  ],\n")
    out.append('  "skipped": [')
    if skipped:
        out.append("\n" + ",\n".join(
            '    {"id": %s, "status": "too-small-after-filter", "reason": %s, "dropped": %s}'
            % (jstr(sid), jstr(f"{kept} of {src} words resolved, need at least 3"), dropped_json(dropped))
            for sid, kept, src, dropped in skipped) + "\n  ]")
    else:
        out.append("]")
    out.append(',\n  "summary": {"total": %d, "analyzed": %d, "skipped": %d}\n}\n'
               % (len(SYNSETS), len(analyzed), len(skipped)))
    return "".join(out), analyzed


def main():
    vocab = build_vocabulary()
    assert len(vocab) == 50
    write_models(vocab)
    write_synsets()
    model = load_normalized(vocab)
    text, analyzed = golden(model)
    (HERE / "golden_analyze.json").write_text(text, encoding="utf-8")
    for sid, _, n, _, rows, _ in analyzed:
        print(sid, n, [(w, rank_text(r2), fixed4(c), inside) for w, _, r2, c, inside in rows])


if __name__ == "__main__":
    main()
