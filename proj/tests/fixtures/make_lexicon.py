#!/usr/bin/env python3
"""Builds lexicon.json from source/groups.txt.

Each group line becomes one synset under a small per-pos taxonomy. Members
without a trailing '*' also receive a singleton sense elsewhere in the
taxonomy, which makes them homographs. Information content is computed from
synthetic word counts propagated up the hypernym tree.
"""
import json
import math
import pathlib
import zlib

HERE = pathlib.Path(__file__).resolve().parent
NOUN_UPPER = {
    "event": "abstraction", "act": "abstraction", "communication": "abstraction",
    "cognition": "abstraction", "attribute": "abstraction", "measure": "abstraction",
    "quantity": "abstraction", "group": "abstraction", "relation": "abstraction",
    "object": "physical_entity", "location": "physical_entity",
    "artifact": "physical_entity", "person": "physical_entity",
}
ROOTS = {"n": "entity", "v": "verb_root", "a": "adjective_root", "r": "adverb_root"}


def h(text):
    return zlib.crc32(text.encode())


def parse_groups(path):
    groups = []
    for raw in path.read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fixed_id = None
        if line.startswith("="):
            fixed_id, line = line[1:].split(None, 1)
        head, members = line.split(":", 1)
        pos, category = head.split()
        words = []
        for m in members.split(","):
            m = m.strip()
            words.append((m.rstrip("*"), m.endswith("*")))
        groups.append({"id": fixed_id, "pos": pos, "category": category, "words": words})
    return groups


def build(groups):
    nodes = {}  # id -> dict

    def node(nid, pos, members, parent):
        if nid not in nodes:
            nodes[nid] = {"id": nid, "pos": pos, "members": members,
                          "hypernyms": [parent] if parent else []}
        return nid

    def category_node(pos, path):
        parent = node(f"{ROOTS[pos]}.{pos}.01", pos, [ROOTS[pos]], None)
        parts = path.split("/")
        if pos == "n":
            upper = NOUN_UPPER[parts[0]]
            parent = node(f"{upper}.n.01", "n", [upper], parent)
        for depth in range(1, len(parts) + 1):
            name = "_".join(parts[:depth])
            parent = node(f"{name}_class.{pos}.01", pos, [name + "_class"], parent)
        return parent

    counters = {}

    def fresh_id(word, pos, base=1):
        key = (word, pos)
        n = counters.get(key, base - 1) + 1
        while f"{word}.{pos}.{n:02d}" in nodes:
            n += 1
        counters[key] = n
        return f"{word}.{pos}.{n:02d}"

    for g in groups:
        if g["id"]:
            node(g["id"], g["pos"], [w for w, _ in g["words"]], category_node(g["pos"], g["category"]))
    for g in groups:
        if g["id"]:
            continue
        parent = category_node(g["pos"], g["category"])
        node(fresh_id(g["words"][0][0], g["pos"]), g["pos"], [w for w, _ in g["words"]], parent)

    leaf_parents = {}
    for g in groups:
        leaf_parents.setdefault(g["pos"], set()).add(category_node(g["pos"], g["category"]))
    singles = {}
    fixed_words = {w for g in groups if g["id"] for w, _ in g["words"]}
    for g in groups:
        own = category_node(g["pos"], g["category"])
        for w, mono in g["words"]:
            key = (w, g["pos"])
            if mono or key in singles or w in fixed_words:
                continue
            choices = sorted(leaf_parents[g["pos"]] - {own})
            singles[key] = choices[h(w + g["pos"]) % len(choices)]
    for (w, pos), parent in sorted(singles.items()):
        node(fresh_id(w, pos, base=90), pos, [w], parent)
        if h(w) % 5 == 0:
            choices = sorted(leaf_parents[pos] - {parent})
            node(fresh_id(w, pos, base=90), pos, [w], choices[h(w + "#") % len(choices)])
    return nodes


def annotate(nodes):
    children = {}
    for n in nodes.values():
        for p in n["hypernyms"]:
            children.setdefault(p, []).append(n["id"])
    senses = {}
    for n in nodes.values():
        for m in n["members"]:
            senses[(m, n["pos"])] = senses.get((m, n["pos"]), 0) + 1

    def depth(nid):
        n = nodes[nid]
        return 1 if not n["hypernyms"] else 1 + depth(n["hypernyms"][0])

    cum = {}

    def total(nid):
        if nid in cum:
            return cum[nid]
        n = nodes[nid]
        own = sum((1 + h(m) % 40) / senses[(m, n["pos"])] for m in n["members"])
        cum[nid] = own + sum(total(c) for c in children.get(nid, []))
        return cum[nid]

    max_depth = {}
    for n in nodes.values():
        n["depth"] = depth(n["id"])
        max_depth[n["pos"]] = max(max_depth.get(n["pos"], 1), n["depth"])
    for pos, root in ROOTS.items():
        rid = f"{root}.{pos}.01"
        if rid not in nodes:
            continue
        base = total(rid)
        members = [n for n in nodes.values() if n["pos"] == pos]
        raw = {n["id"]: -math.log(total(n["id"]) / base) for n in members}
        # Keep every ic within [0, ln N] for this taxonomy.
        scale = min(1.0, math.log(len(members)) / max(max(raw.values()), 1e-9))
        for n in members:
            n["ic"] = round(raw[n["id"]] * scale, 6)
    return max_depth


def main():
    groups = parse_groups(HERE / "source" / "groups.txt")
    nodes = build(groups)
    max_depth = annotate(nodes)
    doc = {
        "version": 1,
        "pos_taxonomies": {p: {"max_depth": d} for p, d in sorted(max_depth.items())},
        "synsets": [
            {k: n[k] for k in ("id", "pos", "members", "ic", "depth", "hypernyms")}
            for n in sorted(nodes.values(), key=lambda n: n["id"])
        ],
    }
    out = HERE / "lexicon.json"
    out.write_text(json.dumps(doc, indent=1, ensure_ascii=False) + "\n")
    print(f"{len(doc['synsets'])} synsets -> {out}")


if __name__ == "__main__":
    main()
