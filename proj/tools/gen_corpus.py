#!/usr/bin/env python3
"""Generate the end-to-end test corpus and its expected results.

Writes into tests/data (or the directory given as the first argument):

  corpus.txt          mixed text lines: athlete mentions, quoted paths,
                      near misses, non-ASCII lines, over-long lines, CRLF
  sports.txt          word list for the Sportsperson query
  fstree/             small directory tree for the Path query
  oracles.conf        bindings for both queries
  golden_sports.txt   lines selected by  <Sportsperson>
  golden_paths.txt    lines selected by  "[^"]+&<Path>"

The golden files are computed here directly from the definitions (substring
membership, file existence), not by running the matcher. Output is
deterministic for a given seed.
"""

import os
import random
import shutil
import sys

SEED = 20240611
LINES = 2000
MAX_LINE_LEN = 1000

ATHLETES = [
    "Simone Biles", "Lionel Messi", "Serena Williams", "Usain Bolt",
    "Katie Ledecky", "Eliud Kipchoge", "Naomi Osaka", "LeBron James",
    "Allyson Felix", "Roger Federer", "Megan Rapinoe", "Caeleb Dressel",
    "Shelly-Ann Fraser-Pryce", "Mo Farah", "Kylian Mbappe", "Rafael Nadal",
    "Zinédine Zidane",
]

NEAR_MISSES = [
    "Simone Bile", "simone biles", "Lionel  Messi", "Serena William",
    "Usain", "Bolt", "Katie L.", "Roger Federer's", "Mo Fara", "Nadal",
]

FILES = [
    "etc/hosts", "etc/passwd", "etc/ssh/sshd_config", "usr/bin/env",
    "usr/share/doc/readme.txt", "home/ada/notes.txt", "home/ada/.profile",
    "var/log/syslog", "srv/data/2024/report.csv", "opt/tool/config.yaml",
]

MISSING = [
    "etc/shadow", "usr/bin/python9", "home/bob/notes.txt", "var/log/missing.log",
    "srv/data/2025/report.csv", "tmp/scratch", "opt/tool/config.yml", "home/ada/Notes.txt",
]

WORDS = (
    "the a an and or of to in on for with at by from yesterday today team final "
    "record season coach crowd match game race pool track court field goal point "
    "win lost scored ran swam served against during after before report news "
    "fans cheered quietly again new old best second third".split()
)

VERBS = ["won", "lost", "trained", "scored", "announced", "retired", "returned", "celebrated"]


def filler(rng, lo, hi):
    return " ".join(rng.choice(WORDS) for _ in range(rng.randint(lo, hi)))


def path_text(rng, existing):
    p = rng.choice(FILES if existing else MISSING)
    return "/" + p if rng.random() < 0.5 else p


def make_line(rng):
    kind = rng.random()
    if kind < 0.22:
        name = rng.choice(ATHLETES)
        templates = [
            "{f} {n} {v} {g}",
            "{n} {v} {g}",
            "{f}: {n}!",
            "{n} and {m} {v}",
        ]
        return rng.choice(templates).format(
            f=filler(rng, 1, 3), n=name, m=rng.choice(ATHLETES), v=rng.choice(VERBS), g=filler(rng, 1, 3))
    if kind < 0.34:
        return "{} {} {}".format(filler(rng, 1, 3), rng.choice(NEAR_MISSES), filler(rng, 1, 3))
    if kind < 0.46:
        quoted = ['"{}"'.format(path_text(rng, rng.random() < 0.5)) for _ in range(rng.randint(1, 2))]
        return "{} {} {}".format(rng.choice(["open", "read", "cp", "stat", "cat"]), " ".join(quoted),
                                 filler(rng, 0, 2)).rstrip()
    if kind < 0.50:
        return '{} "{}" said'.format(filler(rng, 1, 2), filler(rng, 1, 3))
    if kind < 0.52:
        return "{} {} café".format(rng.choice(ATHLETES), filler(rng, 1, 2))
    return filler(rng, 2, 8)


def write_lines(path, lines, crlf_every=0):
    with open(path, "wb") as out:
        for i, line in enumerate(lines):
            end = b"\r\n" if crlf_every and i % crlf_every == 0 else b"\n"
            out.write(line.encode("utf-8") + end)


def selectable(line):
    return len(line.encode("utf-8")) <= MAX_LINE_LEN and all(ord(c) < 128 for c in line)


def sports_match(line):
    return any(a in line for a in ATHLETES)


def path_exists(root, segment):
    return segment != "" and os.path.exists(os.path.join(root, segment.lstrip("/")))


def paths_match(root, line):
    parts = line.split('"')
    return any(path_exists(root, seg) for seg in parts[1:-1])


def main():
    here = os.path.dirname(os.path.abspath(__file__))
    out = sys.argv[1] if len(sys.argv) > 1 else os.path.join(here, "..", "tests", "data")
    out = os.path.abspath(out)
    os.makedirs(out, exist_ok=True)
    rng = random.Random(SEED)

    root = os.path.join(out, "fstree")
    shutil.rmtree(root, ignore_errors=True)
    for f in FILES:
        os.makedirs(os.path.join(root, os.path.dirname(f)), exist_ok=True)
        with open(os.path.join(root, f), "w") as fh:
            fh.write(f + "\n")

    write_lines(os.path.join(out, "sports.txt"), ATHLETES)
    with open(os.path.join(out, "oracles.conf"), "w") as fh:
        fh.write("# Query bindings for the end-to-end corpus.\n")
        fh.write("Sportsperson = words:sports.txt\n")
        fh.write('Path = exec:"$SEMRE_PATH_ORACLE" "$SEMRE_CONFIG_DIR/fstree"\n')

    lines = [make_line(rng) for _ in range(LINES - 6)]
    # Over-long lines are skipped by the line filter even when they mention a name.
    for k in range(3):
        pad = filler(rng, 400, 420)
        lines.insert(rng.randrange(len(lines)), "{} {} {}".format(pad[:600], ATHLETES[k], pad[:600]))
    lines.insert(rng.randrange(len(lines)), 'stat "etc/hosts" ' + "x" * (MAX_LINE_LEN + 1))
    lines.insert(rng.randrange(len(lines)), "")
    lines.insert(rng.randrange(len(lines)), '""')
    write_lines(os.path.join(out, "corpus.txt"), lines, crlf_every=17)

    kept = [l for l in lines if selectable(l)]
    write_lines(os.path.join(out, "golden_sports.txt"), [l for l in kept if sports_match(l)])
    write_lines(os.path.join(out, "golden_paths.txt"), [l for l in kept if paths_match(root, l)])


if __name__ == "__main__":
    main()
