"""Writes a 100-record corpus and its descriptive statistics, computed with
the statistics module, for the describe() regression test."""
import json
import random
import statistics

rng = random.Random(20240611)
authors = [f"a{i:02d}" for i in range(40)]
records = []
for i in range(100):
    size = rng.choice([1, 1, 2, 3, 3, 4, 5])
    records.append({
        "pub_id": f"p{i:03d}",
        "year": rng.choice([2010, 2011, 2012]),
        "authors": rng.sample(authors, size),
        "abstract": "placeholder abstract",
        "sjr": round(rng.uniform(0.1, 3.0), 3),
        "citations": int(rng.paretovariate(1.3)) - 1,
    })

with open("data/describe_100.jsonl", "w") as f:
    for r in records:
        f.write(json.dumps(r) + "\n")


def stats(rs):
    sizes = [len(r["authors"]) for r in rs]
    cites = [r["citations"] for r in rs]
    return {
        "unique_authors": len({a for r in rs for a in r["authors"]}),
        "publications": len(rs),
        "solo_author_share": sum(1 for s in sizes if s == 1) / len(rs),
        "authors_mean": statistics.mean(sizes),
        "authors_max": max(sizes),
        "authors_sd": statistics.stdev(sizes),
        "citations_mean": statistics.mean(cites),
        "citations_max": max(cites),
        "citations_sd": statistics.stdev(cites),
    }


groups = {str(y): stats([r for r in records if r["year"] == y]) for y in (2010, 2011, 2012)}
groups["total"] = stats(records)
with open("data/describe_100.expected.csv", "w") as f:
    keys = list(groups["total"].keys())
    f.write("statistic," + ",".join(groups.keys()) + "\n")
    for k in keys:
        f.write(k + "," + ",".join(repr(float(groups[g][k])) for g in groups) + "\n")
