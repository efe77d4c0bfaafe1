#!/usr/bin/env python3
"""Brute-force Q1-Q5 over a canonical JSON Lines dump.

Reads only the dump (one {"t":"n"|"e", ...} record per line) and recomputes,
for one project:

  Q1  every project node and edge, ordered by (label, id) / (label, src, dst)
  Q2  #loc history of every file
  Q3  complexity history of every method of every file
  Q4  files edited by every developer, grouped by file type
  Q5  mean complexity over every developer's method updates
  worst-case targets for Q2-Q5

Rows are emitted as JSON objects keyed by column name, the same shape the
`grepo mine --format json` output has.

Usage: oracle_queries.py DUMP --project P
"""

import argparse
import json
from collections import defaultdict


def canonical(props):
    return json.dumps(props, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def pick_worst(degrees):
    """(id, degree, workload) with the largest degree, ties to the smallest id."""
    best = None
    for node, degree, workload in sorted(degrees):
        if best is None or degree > best[1]:
            best = (node, degree, workload)
    return None if best is None else {"target": best[0], "degree": best[1], "workload": best[2]}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("dump")
    ap.add_argument("--project", required=True)
    args = ap.parse_args()

    nodes = {}
    edges = []
    with open(args.dump, encoding="utf-8") as fh:
        for line in fh:
            rec = json.loads(line)
            if rec["t"] == "n":
                nodes[rec["id"]] = (rec["l"], rec["p"])
            else:
                edges.append((rec["l"], rec["s"], rec["d"], rec["p"]))

    project = args.project
    in_project = {i for i, (_, p) in nodes.items() if p.get("project_id") == project}
    commits = {i for i in in_project if nodes[i][0] == "Commit"}
    files = sorted(i for i in in_project if nodes[i][0] == "File")

    out_edges = defaultdict(list)  # (label, src) -> [(dst, props)]
    in_edges = defaultdict(list)  # (label, dst) -> [(src, props)]
    for label, s, d, p in edges:
        out_edges[(label, s)].append((d, p))
        in_edges[(label, d)].append((s, p))

    developers = sorted({s for label, s, d, _ in edges if label == "Author" and d in commits})
    scope = in_project | set(developers)

    q1_nodes = [
        {"label": nodes[i][0], "id": i, "props": canonical(nodes[i][1])}
        for i in sorted(scope, key=lambda i: (nodes[i][0], i))
    ]
    q1_edges = [
        {"label": label, "src": s, "dst": d, "props": canonical(p)}
        for label, s, d, p in sorted(edges, key=lambda e: (e[0], e[1], e[2]))
        if s in in_project or d in in_project
    ]

    def sha(commit):
        return nodes[commit][1]["sha"]

    def methods_of(file_id):
        return sorted((nodes[m][1]["long_name"], m) for m, _ in out_edges[("HasMethod", file_id)])

    q2 = {}
    q3 = {}
    q2_degrees = []
    q3_degrees = []
    for f in files:
        ups = in_edges[("UpdateFile", f)]
        rows = sorted((p["timestamp"], sha(c), p["nloc"]) for c, p in ups)
        q2[f] = [{"commit_sha": s, "nloc": n, "timestamp": t} for t, s, n in rows]
        q2_degrees.append((f, len(ups), len(ups)))

        rows = []
        for long_name, m in methods_of(f):
            hist = sorted((p["timestamp"], sha(c), p["complexity"]) for c, p in in_edges[("UpdateMethod", m)])
            rows += [{"commit_sha": s, "complexity": x, "method_long_name": long_name, "timestamp": t}
                     for t, s, x in hist]
        q3[f] = rows
        q3_degrees.append((f, len(rows), len(methods_of(f))))

    q4 = {}
    q5 = {}
    q4_degrees = []
    q5_degrees = []
    for dev in developers:
        authored = [c for c, _ in out_edges[("Author", dev)] if c in commits]
        edited = {f for c in authored for f, _ in out_edges[("UpdateFile", c)]}
        groups = defaultdict(list)
        for f in edited:
            groups[nodes[f][1]["file_type"]].append(nodes[f][1]["current_path"])
        ordered = sorted(groups.items(), key=lambda g: (-len(g[1]), g[0]))
        q4[dev] = [{"count": len(paths), "file_paths": ";".join(sorted(paths)), "file_type": ty}
                   for ty, paths in ordered]
        q4_degrees.append((dev, len(edited), len(edited)))

        ccns = [p["complexity"] for c in authored for _, p in out_edges[("UpdateMethod", c)]]
        q5[dev] = sum(ccns) / len(ccns) if ccns else None
        q5_degrees.append((dev, len(ccns), len(ccns)))

    print(json.dumps({
        "Q1": {"nodes": q1_nodes, "edges": q1_edges},
        "Q2": q2,
        "Q3": q3,
        "Q4": q4,
        "Q5": q5,
        "targets": {
            "Q2": pick_worst(q2_degrees),
            "Q3": pick_worst(q3_degrees),
            "Q4": pick_worst(q4_degrees),
            "Q5": pick_worst(q5_degrees),
        },
    }, sort_keys=True))


if __name__ == "__main__":
    main()
