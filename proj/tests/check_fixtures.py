#!/usr/bin/env python3
"""Independent check of the bundled transcript and nugget bank fixtures.

Parses the PageMarked sample on its own (no project code), recomputes the
transcript id, and confirms every bank is structurally valid and cites only
lines that exist.
"""
import json
import re
import sys
from pathlib import Path

MARKER = re.compile(r"^\s*===\s*PAGE\s+(\d+)\s*===\s*$", re.IGNORECASE)
NUMBERED = re.compile(r"^\s*(\d{1,3})\s(.*)$")
REF = re.compile(r"^(\d+):(\d+)(?:-(\d+):(\d+))?$")
COLLOQUY = ("MR.", "MS.", "MRS.", "THE COURT", "THE WITNESS")


def turn_of(text):
    s = text.lstrip()
    if s[:2] in ("Q.", "Q:"):
        return "question"
    if s[:2] in ("A.", "A:"):
        return "answer"
    if any(s.startswith(tag) for tag in COLLOQUY):
        return "colloquy"
    return "other"


def parse_pagemarked(raw):
    pages = []
    for line in raw.split("\n"):
        m = MARKER.match(line)
        if m:
            pages.append((int(m.group(1)), []))
        elif pages:
            pages[-1][1].append(line)
        elif line.strip():
            raise ValueError("text before the first page marker")
    out = []
    for number, lines in pages:
        body = [l for l in lines if l.strip()]
        records = []
        for expected, l in enumerate(body, start=1):
            m = NUMBERED.match(l)
            if not m or int(m.group(1)) != expected:
                raise ValueError(f"page {number}: line {expected} is not numbered {expected}")
            records.append((expected, m.group(2)))
        out.append((number, records))
    return out


def fnv1a64(data):
    h = 14695981039346656037
    for b in data:
        h ^= b
        h = (h * 1099511628211) & 0xFFFFFFFFFFFFFFFF
    return h


def transcript_id(pages):
    records = "".join(
        f"{p}\t{n}\t{turn_of(text)}\t{text}\n" for p, lines in pages for n, text in lines)
    return "t%016x" % fnv1a64(records.encode("utf-8"))


def check_bank(path, pages, tid):
    bank = json.loads(path.read_text(encoding="utf-8"))
    lines = {(p, n) for p, ls in pages for n, _ in ls}
    problems = []
    if bank["transcript_id"] != tid:
        problems.append(f"transcript_id {bank['transcript_id']} != {tid}")
    seen = set()
    for nugget in bank["nuggets"]:
        nid = nugget["id"]
        if nid in seen:
            problems.append(f"{nid}: duplicate id")
        seen.add(nid)
        if not nugget["text"].strip() or "\n" in nugget["text"]:
            problems.append(f"{nid}: bad text")
        if nugget["importance"] not in ("unlabeled", "vital", "okay", "non_relevant"):
            problems.append(f"{nid}: bad importance {nugget['importance']}")
        if not nugget["citations"]:
            problems.append(f"{nid}: no citations")
        for ref in nugget["citations"]:
            m = REF.match(ref)
            if not m:
                problems.append(f"{nid}: unparseable {ref}")
                continue
            sp, sl = int(m.group(1)), int(m.group(2))
            ep, el = (int(m.group(3)), int(m.group(4))) if m.group(3) else (sp, sl)
            if (sp, sl) > (ep, el) or (sp, sl) not in lines or (ep, el) not in lines:
                problems.append(f"{nid}: {ref} does not resolve")
    return problems


def main():
    samples, fixtures = Path(sys.argv[1]), Path(sys.argv[2])
    pages = parse_pagemarked((samples / "holloway-deposition.txt").read_text(encoding="utf-8"))
    failures = []
    if [p for p, _ in pages] != [1, 2, 3] or any(len(ls) != 25 for _, ls in pages):
        failures.append("sample transcript is not 3 pages of 25 lines")
    tid = transcript_id(pages)
    for bank in (samples / "holloway-bank.json", fixtures / "three-nugget" / "bank.json"):
        failures += [f"{bank.name}: {p}" for p in check_bank(bank, pages, tid)]

    citation = json.loads((samples / "life-insurance-citation.json").read_text(encoding="utf-8"))
    m = REF.match(citation["ref"])
    if not m or (int(m.group(1)), int(m.group(2))) != (2, 14):
        failures.append("life insurance fixture does not cite 2:14")
    span = "\n".join(t for p, ls in pages for n, t in ls if p == 2 and 14 <= n <= 15)
    if "$10 million" not in span or "life" in span.lower():
        failures.append("cited span must state $10 million without naming life insurance")

    for f in failures:
        print("FAIL", f)
    print("fixtures ok" if not failures else f"{len(failures)} fixture problem(s)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
