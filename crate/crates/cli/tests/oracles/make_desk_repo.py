#!/usr/bin/env python3
"""Builds a deterministic desk-scale repository with git fast-import.

The history has about 700 commits by a dozen authors over five languages
plus documentation and binary assets, with function edits, file renames and
deletions, feature branches merged back with merge commits, and a few
branches left unmerged. Some commits carry a committer time that differs
from their author time.

Usage: make_desk_repo.py OUT_DIR [--commits N] [--seed S]
"""

import argparse
import os
import random
import subprocess

START_TS = 1_500_000_000
AUTHORS = [
    ("Ada Park", "ada@desk.dev"),
    ("Ada Park", "Ada@Desk.dev"),
    ("Ben Ode", "ben@desk.dev"),
    ("Cy Lu", "cy@desk.dev"),
    ("Dee Roy", "dee@desk.dev"),
    ("Eli Moss", "eli@desk.dev"),
    ("Fay Ng", "fay@desk.dev"),
    ("Gus Ray", "gus@desk.dev"),
    ("Hal Kim", "hal@desk.dev"),
    ("Ivy Poe", "ivy@desk.dev"),
    ("Jo Vance", "jo@desk.dev"),
    ("Jo V.", "jo@desk.dev"),
    ("Kai Bell", "kai@desk.dev"),
]
LANGS = ["py", "java", "c", "go", "js"]
WORDS = ["load", "parse", "merge", "score", "index", "flush", "scan", "route",
         "pack", "check", "sync", "trim", "fold", "emit", "probe", "drain"]
NOUNS = ["cache", "queue", "table", "graph", "token", "frame", "batch", "store",
         "chunk", "index", "entry", "block"]


class Function:
    def __init__(self, rng, name):
        self.name = name
        self.params = rng.randint(0, 3)
        self.branches = [rng.choice(["if", "for", "and", "while", "else-if"])
                         for _ in range(rng.randint(0, 4))]
        self.constant = rng.randint(1, 99)

    def mutate(self, rng):
        roll = rng.random()
        if roll < 0.35 and self.branches:
            self.branches.pop(rng.randrange(len(self.branches)))
        elif roll < 0.7:
            self.branches.insert(rng.randint(0, len(self.branches)),
                                 rng.choice(["if", "for", "and", "while", "else-if"]))
        else:
            self.constant = rng.randint(1, 999)

    def args(self):
        return [f"a{i}" for i in range(self.params)]


def render_py(fn, indent=""):
    args = ", ".join(["self"] * bool(indent) + fn.args())
    out = [f"{indent}def {fn.name}({args}):", f"{indent}    total = {fn.constant}"]
    for i, b in enumerate(fn.branches):
        if b == "if":
            out += [f"{indent}    if total > {i}:", f"{indent}        total -= 1"]
        elif b == "else-if":
            out += [f"{indent}    if total == {i}:", f"{indent}        total += 2",
                    f"{indent}    elif total < {i}:", f"{indent}        total += 3"]
        elif b == "for":
            out += [f"{indent}    for k in range({i + 2}):", f"{indent}        total += k"]
        elif b == "while":
            out += [f"{indent}    while total > {100 + i}:", f"{indent}        total //= 2"]
        else:
            out += [f"{indent}    if total > {i} and total < {i + 50}:", f"{indent}        total += 1"]
    out.append(f"{indent}    return total")
    return "\n".join(out) + "\n"


def render_braced(fn, lang, indent=""):
    t = {"c": "int ", "java": "int ", "js": "", "go": ""}[lang]
    if lang == "c":
        params = ", ".join(f"int {a}" for a in fn.args()) or "void"
        head = f"int {fn.name}({params})"
    elif lang == "java":
        head = f"public int {fn.name}({', '.join(f'int {a}' for a in fn.args())})"
    elif lang == "go":
        head = f"func {fn.name}({', '.join(f'{a} int' for a in fn.args())}) int"
    else:
        head = f"function {fn.name}({', '.join(fn.args())})"
    decl = "total := " if lang == "go" else ("let total = " if lang == "js" else f"{t}total = ")
    semi = "" if lang == "go" else ";"
    i1, i2 = indent + "    ", indent + "        "
    out = [f"{indent}{head} {{", f"{i1}{decl}{fn.constant}{semi}"]

    def cond(c):
        return c if lang == "go" else f"({c})"

    for i, b in enumerate(fn.branches):
        if b == "if":
            out += [f"{i1}if {cond(f'total > {i}')} {{", f"{i2}total -= 1{semi}", f"{i1}}}"]
        elif b == "else-if":
            out += [f"{i1}if {cond(f'total == {i}')} {{", f"{i2}total += 2{semi}",
                    f"{i1}}} else if {cond(f'total < {i}')} {{", f"{i2}total += 3{semi}", f"{i1}}}"]
        elif b == "for":
            if lang == "go":
                loop = f"for k := 0; k < {i + 2}; k++"
            elif lang == "js":
                loop = f"for (let k = 0; k < {i + 2}; k++)"
            else:
                loop = f"for (int k = 0; k < {i + 2}; k++)"
            out += [f"{i1}{loop} {{", f"{i2}total += k{semi}", f"{i1}}}"]
        elif b == "while":
            kw = "for" if lang == "go" else "while"
            out += [f"{i1}{kw} {cond(f'total > {100 + i}')} {{", f"{i2}total /= 2{semi}", f"{i1}}}"]
        else:
            out += [f"{i1}if {cond(f'total > {i} && total < {i + 50}')} {{", f"{i2}total += 1{semi}", f"{i1}}}"]
    out += [f"{i1}return total{semi}", f"{indent}}}"]
    return "\n".join(out) + "\n"


class SourceFile:
    def __init__(self, rng, path, lang, taken):
        self.path = path
        self.lang = lang
        self.functions = []
        for _ in range(rng.randint(2, 6)):
            self.add_function(rng, taken)

    def add_function(self, rng, taken):
        while True:
            name = f"{rng.choice(WORDS)}_{rng.choice(NOUNS)}_{rng.randint(0, 999)}"
            if name not in taken:
                taken.add(name)
                self.functions.append(Function(rng, name))
                return

    def render(self):
        stem = os.path.splitext(os.path.basename(self.path))[0]
        header = f"module {stem}: generated helpers for the desk fixture"
        if self.lang == "py":
            body = "\n\n".join(render_py(f) for f in self.functions)
            return f'"""{header}."""\n\nLIMIT = 10\n\n\n' + body
        if self.lang == "java":
            cls = "".join(p.capitalize() for p in stem.split("_"))
            body = "\n".join(render_braced(f, "java", "    ") for f in self.functions)
            return f"// {header}\npackage desk;\n\npublic class {cls} {{\n{body}}}\n"
        if self.lang == "go":
            body = "\n".join(render_braced(f, "go") for f in self.functions)
            return f"// {header}\npackage desk\n\n{body}"
        if self.lang == "c":
            body = "\n".join(render_braced(f, "c") for f in self.functions)
            return f"/* {header} */\n#include <stdio.h>\n\n{body}"
        body = "\n".join(render_braced(f, "js") for f in self.functions)
        return f"// {header}\n'use strict';\n\n{body}"


class Repo:
    def __init__(self, rng):
        self.rng = rng
        self.taken = set()
        self.sources = {}
        self.docs = {}
        self.assets = {}
        self.serial = 0

    def fresh_path(self, lang):
        self.serial += 1
        folder = self.rng.choice(["core", "io", "util", "net", "app"])
        stem = f"{self.rng.choice(NOUNS)}_{self.rng.choice(WORDS)}_{self.serial}"
        if lang == "java":
            stem = "".join(p.capitalize() for p in stem.split("_"))
        return f"src/{folder}/{stem}.{lang}"

    def add_source(self):
        lang = self.rng.choice(LANGS)
        f = SourceFile(self.rng, self.fresh_path(lang), lang, self.taken)
        self.sources[f.path] = f
        return [f.path]

    def tree(self):
        files = {p: f.render().encode() for p, f in self.sources.items()}
        files.update({p: t.encode() for p, t in self.docs.items()})
        files.update(self.assets)
        return files

    def clone(self):
        import copy
        return copy.deepcopy(self)


def edit(repo, owned=None):
    """One random change; returns the paths it touched."""
    rng = repo.rng
    pool = [p for p in repo.sources if owned is None or p in owned]
    roll = rng.random()
    if not pool or roll < 0.08:
        return repo.add_source()
    path = rng.choice(pool)
    src = repo.sources[path]
    if roll < 0.55:
        for fn in rng.sample(src.functions, k=min(len(src.functions), rng.randint(1, 2))):
            fn.mutate(rng)
        return [path]
    if roll < 0.68:
        src.add_function(rng, repo.taken)
        return [path]
    if roll < 0.76 and len(src.functions) > 1:
        src.functions.pop(rng.randrange(len(src.functions)))
        return [path]
    if roll < 0.82 and owned is None:
        new = repo.fresh_path(src.lang)
        del repo.sources[path]
        src.path = new
        if rng.random() < 0.5:
            rng.choice(src.functions).constant += 1
        repo.sources[new] = src
        return [path, new]
    if roll < 0.86 and owned is None and len(repo.sources) > 12:
        del repo.sources[path]
        return [path]
    if roll < 0.95:
        doc = rng.choice(["README.md", "docs/design.md", "docs/ops.txt", "CHANGES.md"])
        prev = repo.docs.get(doc, f"# {doc}\n")
        repo.docs[doc] = prev + f"- note {rng.randint(0, 10**6)}\n"
        return [doc]
    name = f"assets/blob_{rng.randint(0, 30)}.bin"
    repo.assets[name] = bytes(rng.randrange(256) for _ in range(rng.randint(40, 400))) + b"\x00"
    return [name]


class Stream:
    def __init__(self, out):
        self.out = out
        self.mark = 0
        self.clock = START_TS

    def commit(self, rng, ref, files, message, parents=(), merges=()):
        self.mark += 1
        self.clock += rng.randint(600, 36 * 3600)
        name, email = rng.choice(AUTHORS)
        committed = self.clock + (rng.randint(60, 7200) if rng.random() < 0.2 else 0)
        w = self.out.write
        w(f"commit {ref}\nmark :{self.mark}\n".encode())
        w(f"author {name} <{email}> {self.clock} +0000\n".encode())
        w(f"committer {name} <{email}> {committed} +0000\n".encode())
        msg = message.encode()
        w(f"data {len(msg)}\n".encode() + msg + b"\n")
        for p in parents:
            w(f"from :{p}\n".encode())
        for m in merges:
            w(f"merge :{m}\n".encode())
        w(b"deleteall\n")
        for path in sorted(files):
            data = files[path]
            w(f"M 100644 inline {path}\ndata {len(data)}\n".encode() + data + b"\n")
        w(b"\n")
        return self.mark


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("out")
    ap.add_argument("--commits", type=int, default=700)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    rng = random.Random(args.seed)

    os.makedirs(args.out, exist_ok=True)
    subprocess.run(["git", "init", "-q", args.out], check=True)
    subprocess.run(["git", "-C", args.out, "symbolic-ref", "HEAD", "refs/heads/master"], check=True)
    proc = subprocess.Popen(["git", "-C", args.out, "fast-import", "--quiet"], stdin=subprocess.PIPE)
    stream = Stream(proc.stdin)

    main_repo = Repo(rng)
    for _ in range(8):
        main_repo.add_source()
    main_repo.docs["README.md"] = "# desk\n"
    tip = stream.commit(rng, "refs/heads/master", main_repo.tree(), "initial import")
    made = 1
    feature = None  # (ref, repo copy, owned paths, tip mark, remaining, merge?)
    serial = 0

    while made < args.commits:
        if feature is None and rng.random() < 0.06 and len(main_repo.sources) > 4:
            serial += 1
            owned = set(rng.sample(sorted(main_repo.sources), k=2))
            ref = f"refs/heads/feature-{serial}"
            feature = [ref, main_repo.clone(), owned, tip, rng.randint(2, 6), rng.random() < 0.8]
            continue
        if feature is not None and rng.random() < 0.45:
            ref, work, owned, ftip, remaining, merge = feature
            touched = edit(work, owned)
            owned.update(p for p in touched if p in work.sources)
            feature[3] = stream.commit(rng, ref, work.tree(), f"{ref.rsplit('/', 1)[1]}: update {touched[-1]}",
                                       parents=[ftip])
            made += 1
            feature[4] -= 1
            if feature[4] == 0:
                if merge and made < args.commits:
                    for p in owned:
                        if p in work.sources:
                            main_repo.sources[p] = work.sources[p]
                    main_repo.taken |= work.taken
                    tip = stream.commit(rng, "refs/heads/master", main_repo.tree(),
                                        f"Merge {ref.rsplit('/', 1)[1]}", parents=[tip], merges=[feature[3]])
                    made += 1
                    # Merged branches are deleted; unmerged ones stay.
                    stream.out.write(f"reset {ref}\nfrom 0000000000000000000000000000000000000000\n\n".encode())
                feature = None
            continue
        owned = feature[2] if feature is not None else set()
        for _ in range(5):
            snapshot = main_repo.clone()
            touched = edit(main_repo)
            if not owned.intersection(touched):
                break
            main_repo = snapshot
        else:
            touched = main_repo.add_source()
        tip = stream.commit(rng, "refs/heads/master", main_repo.tree(), f"update {touched[-1]}", parents=[tip])
        made += 1

    proc.stdin.close()
    if proc.wait() != 0:
        raise SystemExit("fast-import failed")
    subprocess.run(["git", "-C", args.out, "checkout", "-q", "-f", "master"], check=True)


if __name__ == "__main__":
    main()
