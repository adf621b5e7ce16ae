#!/usr/bin/env python3
"""Regenerates the bundled fixtures under fixtures/.

The output is deterministic. Run from the repository root:

    python3 tools/fixtures/make_fixtures.py

Besides writing the fixture files, the script evaluates the forestry-desk
corpus with a naive definition-level implementation (no shared code with the
C++ library) and prints the values the acceptance suite freezes.
"""

import csv
import json
import math
import os
import re
import sys

ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", ".."))
HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(ROOT, "fixtures")


def placeholder_issn(prefix4, seq):
    """ISSN-shaped key with a valid mod-11 check digit."""
    digits = f"{prefix4}{seq:03d}"
    total = sum(int(d) * w for d, w in zip(digits, range(8, 1, -1)))
    check = (11 - total % 11) % 11
    return f"{digits[:4]}-{digits[4:]}{'X' if check == 10 else check}"


def slug(text):
    s = text.lower()
    s = re.sub(r"[^a-z0-9]+", "-", s).strip("-")
    return s


def write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow(r)


# ---------------------------------------------------------------- journals

def annex1_journals():
    names = [l.strip() for l in open(os.path.join(HERE, "annex1_journal_names.txt"), encoding="utf-8") if l.strip()]
    rows = []
    for i, name in enumerate(names, start=1):
        codes = "0401;0705" if name == "Agricultural and Forest Meteorology" else "0705"
        rows.append((placeholder_issn("0705", i), name, codes))
    return rows


# Journals outside Annex 1 used by the desk corpus.
EXTRA_JOURNALS = [
    (placeholder_issn("0700", 1), "Agricultural and Forest Entomology", "07"),
    (placeholder_issn("0700", 2), "Science", "MD"),
    (placeholder_issn("0602", 1), "Journal of Ecology", "0602"),
    (placeholder_issn("0602", 2), "Landscape Ecology", "0602;0501"),
    (placeholder_issn("0701", 1), "Agronomy Journal", "0701"),
    (placeholder_issn("0912", 1), "Wood Composites", "0912"),
]


# ------------------------------------------------------------ institutions

def annex2_institutions():
    rows = []
    seen = set()
    for line in open(os.path.join(HERE, "annex2_h2_groups.tsv"), encoding="utf-8"):
        level, body = line.rstrip("\n").split("\t")
        for part in body.split(";"):
            part = part.strip().rstrip(".")
            if not part or ":" not in part:
                continue
            country, rest = part.split(":", 1)
            for name in (x.strip() for x in rest.split(",")):
                if not name:
                    continue
                iid = slug(country + " " + name)
                base, k = iid, 2
                while iid in seen:
                    iid = f"{base}-{k}"
                    k += 1
                seen.add(iid)
                rows.append((iid, name, country.strip(), int(level)))
    return rows


# ------------------------------------------------------------ desk corpus

YEARS = list(range(2005, 2011))
CENSUS = 2011
# global mean citations per article for each publication year, 40 articles/yr
CPP_TARGET = {2005: 9.5, 2006: 7.6, 2007: 5.4, 2008: 4.0, 2009: 2.3, 2010: 0.9}
ARTICLES_PER_YEAR = 40

# focal institution: strictly-0705 articles, (citations, single-publication h)
STRICT = {
    2005: [(40, 6), (30, 6), (22, 6), (16, 6), (12, 4), (9, 3), (6, 2), (4, 1), (2, 1), (1, 0), (0, 0)],
    2006: [(25, 6), (18, 6), (13, 4), (10, 3), (8, 3), (6, 2), (4, 2), (3, 1), (1, 1), (1, 0), (0, 0)],
    2007: [(14, 5), (11, 4), (9, 3), (7, 3), (5, 2), (4, 2), (2, 1), (2, 1), (1, 0), (0, 0), (0, 0)],
    2008: [(10, 4), (8, 3), (7, 3), (5, 2), (4, 2), (3, 1), (2, 1), (1, 1), (1, 0), (0, 0), (0, 0)],
    2009: [(7, 3), (5, 2), (4, 2), (3, 2), (3, 1), (2, 1), (2, 1), (1, 0), (1, 0), (0, 0), (0, 0)],
    2010: [(4, 2), (3, 1), (2, 1), (1, 1), (1, 0), (1, 0), (1, 0), (0, 0), (0, 0), (0, 0), (0, 0)],
}
# focal institution: keyword-matched articles outside 0705 journals
REASSIGNABLE = {
    2005: [(35, 5), (28, 5), (20, 5), (17, 4), (15, 4), (14, 4), (3, 1), (0, 0)],
    2006: [(14, 4), (9, 3), (2, 1), (0, 0), (0, 0)],
    2007: [(9, 3), (8, 3), (1, 0), (0, 0), (0, 0)],
    2008: [(9, 3), (8, 3), (7, 3), (1, 0), (0, 0), (0, 0)],
    2009: [(7, 3), (6, 3), (6, 2), (5, 2), (1, 0), (0, 0), (0, 0)],
    2010: [(4, 2), (4, 2), (3, 1), (3, 1), (3, 1), (2, 1), (2, 1), (1, 0), (0, 0), (0, 0)],
}
KEYWORDS = ["forestry", "silviculture", "timber", "eucalyptus"]
FOCAL = "scu"
PEERS = ["utas", "melb", "anu"]


def background_counts(total, n):
    """Skewed split of `total` citations over `n` articles (descending)."""
    weights = [1.0 / (k + 1) ** 1.1 for k in range(n)]
    raw = [total * w / sum(weights) for w in weights]
    counts = [int(math.floor(x)) for x in raw]
    rem = total - sum(counts)
    order = sorted(range(n), key=lambda k: (-(raw[k] - counts[k]), k))
    for k in order[:rem]:
        counts[k] += 1
    # leave the tail uncited, as in real field-years
    return counts


def build_desk():
    j_0705 = [r[0] for r in annex1_journals()]
    afm = next(r[0] for r in annex1_journals() if r[1] == "Agricultural and Forest Meteorology")
    implicit_07, md, ecol, land, agro, wood = (j[0] for j in EXTRA_JOURNALS)
    pubs, cites = [], []

    def add_pub(pid, year, issn, insts, kws):
        pubs.append({"id": pid, "year": year, "issn": issn, "institutions": insts, "keywords": kws})

    max_c = 0
    citing = {}  # pid -> (citations, sp_h)
    for y in YEARS:
        focal_total = sum(c for c, _ in STRICT[y])
        bg_n = ARTICLES_PER_YEAR - len(STRICT[y])
        bg_total = round(CPP_TARGET[y] * ARTICLES_PER_YEAR) - focal_total
        assert bg_total >= 0
        for k, (c, s) in enumerate(STRICT[y], start=1):
            pid = f"scu-s{y}-{k:02d}"
            issn = afm if (y, k) == (2006, 2) else j_0705[(y * 7 + k) % len(j_0705)]
            add_pub(pid, y, issn, [FOCAL], ["forestry"] if k % 3 == 0 else ["stand", "growth"])
            citing[pid] = (c, s)
        for k, (c, s) in enumerate(REASSIGNABLE[y], start=1):
            pid = f"scu-r{y}-{k:02d}"
            issn = [implicit_07, md, ecol, land, agro, wood][(y + k) % 6]
            add_pub(pid, y, issn, [FOCAL], [KEYWORDS[(y + k) % 4]])
            citing[pid] = (c, s)
        # focal, not eligible by keywords
        for k in range(1, 3):
            pid = f"scu-o{y}-{k:02d}"
            issn = ecol if k == 1 else None
            add_pub(pid, y, issn, [FOCAL], ["coral", "sediment"])
            citing[pid] = (k, 0)
        for k, c in enumerate(background_counts(bg_total, bg_n), start=1):
            pid = f"g{y}-{k:02d}"
            inst = PEERS[k % 3] if k % 4 != 0 else f"global-{k % 5}"
            insts = [inst] if k % 7 != 0 else [inst, PEERS[(k + 1) % 3]]
            s = min(c, int(math.isqrt(c)) + (1 if c >= 16 else 0), 6)
            add_pub(pid, y, j_0705[(y * 11 + k) % len(j_0705)], insts, [])
            citing[pid] = (c, s)
        max_c = max(max_c, max(c for c, _ in citing.values()))

    # citers: hubs H<s>-<k> are cited exactly s times; C-#### are uncited
    n_plain = max_c + 1
    plain = [f"c-{i:04d}" for i in range(1, n_plain + 1)]
    for p in plain:
        add_pub(p, CENSUS, None, [], [])
    max_s = max(s for _, s in citing.values())
    for s in range(1, max_s + 1):
        for k in range(1, s + 1):
            hub = f"h{s}-{k}"
            add_pub(hub, CENSUS, None, [], [])
            for p in plain[:s]:
                cites.append((p, hub))
    for pid, (c, s) in citing.items():
        for k in range(1, s + 1):
            cites.append((f"h{s}-{k}", pid))
        for p in plain[: c - s]:
            cites.append((p, pid))

    journals = annex1_journals() + EXTRA_JOURNALS
    insts = [(FOCAL, "Southern Cross University", "Australia", 28),
             ("utas", "University of Tasmania", "Australia", 40),
             ("melb", "University of Melbourne", "Australia", 55),
             ("anu", "Australian National University", "Australia", 35)]
    insts += [(f"global-{k}", f"Global Institution {k}", "", "") for k in range(5)]
    return pubs, cites, journals, insts


# -------------------------------------------------------------- oracle

def oracle(pubs, cites, journals, field="0705", window=(2005, 2010)):
    codes = {j[0]: set(j[2].split(";")) for j in journals}
    year = {p["id"]: p["year"] for p in pubs}
    citers = {p["id"]: set() for p in pubs}
    for a, b in cites:
        citers[b].add(a)

    def count(p):
        return len(citers[p])

    def hscan(values):
        best = 0
        for n in range(0, len(values) + 1):
            if sum(1 for v in values if v >= n) >= n:
                best = n
        return best

    def sph(p):
        return hscan([count(q) for q in citers[p]])

    field_pubs = [p for p in pubs if p["issn"] and field in codes.get(p["issn"], ()) and window[0] <= p["year"] <= window[1]]
    bench = {}
    for y in range(window[0], window[1] + 1):
        cs = [count(p["id"]) for p in field_pubs if p["year"] == y]
        thr = {}
        for pct in (1, 5, 10, 25, 50):
            # largest c such that at least pct% of articles have >= c
            thr[pct] = max(c for c in range(0, max(cs) + 2) if 100 * sum(1 for x in cs if x >= c) >= pct * len(cs))
        bench[y] = {"cpp": sum(cs) / len(cs), "n": len(cs), "thr": thr}

    def report(ids):
        rcis = [count(p) / bench[year[p]]["cpp"] for p in ids]
        bounds = [0.8, 1.2, 2.0, 4.0, 8.0]

        def cls(r):
            if r == 0:
                return 0
            return 1 + sum(1 for b in bounds if r >= b)
        shares = [sum(1 for r in rcis if cls(r) == k) / len(ids) for k in range(7)]
        pct = {q: sum(1 for p in ids if count(p) > 0 and count(p) >= bench[year[p]]["thr"][q]) / len(ids)
               for q in (1, 5, 10, 25, 50)}
        return {
            "n": len(ids),
            "mean_rci": sum(rcis) / len(rcis),
            "class_shares": shares,
            "percentile_shares": pct,
            "uncited": sum(1 for p in ids if count(p) == 0) / len(ids),
            "h": hscan([count(p) for p in ids]),
            "h2": hscan([sph(p) for p in ids]),
        }

    strict = [p["id"] for p in pubs if p["id"].startswith("scu-") and p["id"] in {q["id"] for q in field_pubs}]
    allinc = sorted(set(strict) | {p["id"] for p in pubs if FOCAL in p["institutions"]
                                   and window[0] <= p["year"] <= window[1]
                                   and set(p["keywords"]) & set(KEYWORDS)})
    ranked = sorted(allinc, key=lambda p: (-count(p) / bench[year[p]]["cpp"], p))
    selective = ranked[:50]
    return bench, report(strict), report(allinc), report(selective)


def main():
    os.makedirs(OUT, exist_ok=True)
    write_csv(os.path.join(OUT, "annex1_journals.csv"), ["issn", "name", "for_codes"], annex1_journals())
    a2 = annex2_institutions()
    write_csv(os.path.join(OUT, "annex2_institutions.csv"), ["id", "name", "country", "staff_count"],
              [(i, n, c, "") for i, n, c, _ in a2])
    write_csv(os.path.join(OUT, "annex2_h2.csv"), ["institution", "h2"], [(i, h) for i, _, _, h in a2])
    # Dentistry ratings paired with H2, one row per institution
    write_csv(os.path.join(OUT, "dentistry_ratings.csv"), ["institution", "rating", "h2"],
              [("dent-a", 2, 4), ("dent-b", 3, 5), ("dent-c", 4, 6), ("dent-d", 4, 7), ("dent-e", 5, 4), ("dent-f", 5, 8)])

    pubs, cites, journals, insts = build_desk()
    desk = os.path.join(OUT, "forestry-desk")
    os.makedirs(desk, exist_ok=True)
    with open(os.path.join(desk, "publications.jsonl"), "w", encoding="utf-8") as f:
        for p in pubs:
            f.write(json.dumps(p, ensure_ascii=False) + "\n")
    with open(os.path.join(desk, "citations.jsonl"), "w", encoding="utf-8") as f:
        for a, b in cites:
            f.write(json.dumps({"citing": a, "cited": b}) + "\n")
    write_csv(os.path.join(desk, "journals.csv"), ["issn", "name", "for_codes"], journals)
    write_csv(os.path.join(desk, "institutions.csv"), ["id", "name", "country", "staff_count"], insts)

    bench, strict, allinc, sel = oracle(pubs, cites, journals)
    print(f"pubs={len(pubs)} cites={len(cites)} institutions(annex2)={len(a2)}")
    for y, b in bench.items():
        print(y, f"cpp={b['cpp']:.4f}", "n=", b["n"], "thr=", [b["thr"][q] for q in (1, 5, 10, 25, 50)])
    for name, r in (("all-inclusive", allinc), ("strict", strict), ("selective", sel)):
        print(name, json.dumps(r))
    print("selective/strict mean RCI ratio", sel["mean_rci"] / strict["mean_rci"])


if __name__ == "__main__":
    sys.exit(main())
