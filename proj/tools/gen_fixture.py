#!/usr/bin/env python3
"""Generate the bundled 25-institution fixture under data/fixture.

Output:
  institutions.csv   abbreviation,name
  roster.csv         institution,department,member,rank,author_ids
  tags.csv           institution,department,tags
  records/authors/*.json, records/docs/*.json   provider records

The generator is deterministic; rerunning it reproduces the same bytes.
The golden export is produced separately by tests/oracle/golden_oracle.py.
"""

import argparse
import csv
import json
import random
import shutil
from pathlib import Path

INSTITUTIONS = [
    ("AUTH", "Aristotle University of Thessaloniki"),
    ("NKUA", "National and Kapodistrian University of Athens"),
    ("UThessaly", "University of Thessaly"),
    ("UPatras", "University of Patras"),
    ("UNIWA", "University of West Attica"),
    ("UoI", "University of Ioannina"),
    ("DUTH", "Democritus University of Thrace"),
    ("UoC", "University of Crete"),
    ("NTUA", "National Technical University of Athens"),
    ("IHU", "International Hellenic University"),
    ("UAegean", "University of the Aegean"),
    ("UoP", "University of the Peloponnese"),
    ("UoWM", "University of Western Macedonia"),
    ("AUA", "Agricultural University of Athens"),
    ("Panteion", "Panteion University of Social and Political Sciences"),
    ("UNIPI", "University of Piraeus"),
    ("IONIO", "Ionian University"),
    ("AUEB", "Athens University of Economics and Business"),
    ("UoM", "University of Macedonia"),
    ("HMU", "Hellenic Mediterranean University"),
    ("TUC", "Technical University of Crete"),
    ("HUA", "Harokopio University of Athens"),
    ("ASPAITE", "Higher School of Pedagogical and Technological Education"),
    ("HOU", "Hellenic Open University"),
    ("ASFA", "Athens School of Fine Arts"),
]

DEPARTMENTS = {
    "AUTH": ["School of Mathematics", "School of Physics", "School of Psychology", "School of Agriculture"],
    "NKUA": ["Department of Mathematics", "Department of Physics", "School of Medicine",
             "Department of Psychology", "Department of Dentistry"],
    "UThessaly": ["Department of Physical Education and Sport Science",
                  "Department of Computer Science and Telecommunications", "School of Medicine"],
    "UPatras": ["Department of Mathematics", "Department of Chemistry", "Department of Physics"],
    "UNIWA": ["Department of Informatics and Computer Engineering", "Department of Public Health Policies"],
    "UoI": ["Department of Mathematics", "Department of Economics", "School of Medicine"],
    "DUTH": ["Department of Physical Education and Sport Science", "Department of Civil Engineering",
             "Department of Molecular Biology and Genetics"],
    "UoC": ["Department of Mathematics and Applied Mathematics", "Department of Biology"],
    "NTUA": ["School of Applied Mathematical and Physical Sciences", "School of Electrical and Computer Engineering",
             "School of Chemical Engineering"],
    "IHU": ["Department of Physics", "Department of Economics"],
    "UAegean": ["Department of Mathematics", "Department of Geography"],
    "UoP": ["Department of Informatics and Telecommunications", "Department of Economics"],
    "UoWM": ["Department of Mechanical Engineering", "Department of Chemical Engineering"],
    "AUA": ["Department of Crop Science", "Department of Food Science and Human Nutrition"],
    "Panteion": ["Department of Psychology", "Department of Sociology"],
    "UNIPI": ["Department of Informatics", "Department of Statistics and Insurance Science"],
    "IONIO": ["Department of Informatics", "Department of History"],
    "AUEB": ["Department of Economics", "Department of Statistics"],
    "UoM": ["Department of Applied Informatics", "Department of Economics"],
    "HMU": ["Department of Electrical and Computer Engineering", "Department of Nursing"],
    "TUC": ["School of Production Engineering and Management", "School of Mineral Resources Engineering"],
    "HUA": ["Department of Geography", "Department of Nutrition and Dietetics"],
    "ASPAITE": ["Department of Education"],
    "HOU": ["School of Science and Technology"],
    "ASFA": ["School of Fine Arts"],
}

# Curated tags so that thematic search also reaches departments whose name
# does not contain the keyword.
TAGS = [
    ("NTUA", "School of Applied Mathematical and Physical Sciences", ["mathematics", "physics"]),
    ("HOU", "School of Science and Technology", ["informatics", "mathematics"]),
    ("UNIPI", "Department of Statistics and Insurance Science", ["statistics"]),
]

SUBJECTS = {
    "Mathemat": ["MATH"], "Physic": ["PHYS"], "Psycholog": ["PSYC"], "Agricult": ["AGRI"],
    "Medicine": ["MEDI"], "Dentistry": ["DENT"], "Sport": ["HEAL"], "Comput": ["COMP"],
    "Informatic": ["COMP"], "Chemi": ["CHEM"], "Econom": ["ECON"], "Engineering": ["ENGI"],
    "Biolog": ["BIOC"], "Geograph": ["SOCI"], "Health": ["MEDI"], "Crop": ["AGRI"],
    "Food": ["AGRI"], "Nutrition": ["NURS"], "Sociolog": ["SOCI"], "Statistic": ["MATH"],
    "History": ["ARTS"], "Nursing": ["NURS"], "Education": ["SOCI"], "Science and Technology": ["COMP"],
    "Fine Arts": ["ARTS"],
}

GIVEN = ["Georgios", "Ioannis", "Konstantinos", "Dimitrios", "Nikolaos", "Panagiotis", "Vasileios",
         "Christos", "Athanasios", "Michail", "Maria", "Eleni", "Aikaterini", "Vasiliki", "Sofia",
         "Angeliki", "Dimitra", "Georgia", "Eirini", "Panagiota"]
FAMILY = ["Papadopoulos", "Papadakis", "Georgiou", "Oikonomou", "Karagiannis", "Vlachos", "Nikolaidis",
          "Dimitriou", "Konstantinidis", "Ioannou", "Athanasiou", "Christodoulou", "Pappas", "Makris",
          "Antoniou", "Alexiou", "Stavrou", "Theodorou", "Kyriakou", "Raptis", "Zervas", "Lamprou"]
GREEK_NAMES = ["Γεώργιος Παπαδόπουλος", "Ελένη Σταύρου", "Δημήτρης Ραφτόπουλος", "Άννα Κωνσταντίνου"]
RANKS = ["Professor", "Associate Professor", "Assistant Professor", "Lecturer"]
DOC_TYPES = ["Article", "Article", "Article", "Review", "Conference Paper"]


def subjects_for(department):
    for key, subjects in SUBJECTS.items():
        if key in department:
            return subjects
    return ["MULT"]


def build(rng):
    roster = []          # (abbrev, department, member, rank, author_ids cell)
    members = []         # dicts with author ids and subject for doc generation
    profiles = []
    next_author = 100001
    greek_pool = list(GREEK_NAMES)

    for abbrev, inst_name in INSTITUTIONS:
        for department in DEPARTMENTS[abbrev]:
            size = rng.randint(2, 5)
            used = set()
            dept_members = []
            for m in range(size):
                if greek_pool and rng.random() < 0.08:
                    name = greek_pool.pop(0)
                else:
                    name = f"{rng.choice(GIVEN)} {rng.choice(FAMILY)}"
                    while name in used:
                        name = f"{rng.choice(GIVEN)} {rng.choice(FAMILY)}"
                used.add(name)
                rank = rng.choice(RANKS)
                roll = rng.random()
                ids = []
                if roll < 0.10:
                    cell = "-"
                elif roll < 0.14:
                    cell = ""
                else:
                    count = 2 if rng.random() < 0.12 else 1
                    for _ in range(count):
                        ids.append(f"fixture:{next_author}")
                        given, family = name.split(" ", 1)
                        profiles.append({
                            "author_id": f"fixture:{next_author}",
                            "indexed_name": f"{family}, {given[0]}.",
                            "name_variants": [name, f"{given[0]}. {family}"],
                            "affiliation_history": [inst_name],
                            "document_count": 0,
                            "subject_areas": subjects_for(department),
                        })
                        next_author += 1
                    cell = "|".join(ids)
                roster.append((abbrev, department, name, rank, cell))
                dept_members.append({"ids": ids, "dept": (abbrev, department)})
            members.append(dept_members)

    docs = []
    next_doc = 1
    external = 900001
    flat = [m for dept in members for m in dept if m["ids"]]
    for dept_members in members:
        with_ids = [m for m in dept_members if m["ids"]]
        subjects = subjects_for(with_ids[0]["dept"][1]) if with_ids else ["MULT"]
        for member in with_ids:
            for _ in range(rng.randint(0, 6)):
                authors = [rng.choice(member["ids"])]
                others = [o for o in with_ids if o is not member]
                if others and rng.random() < 0.3:
                    authors.append(rng.choice(rng.choice(others)["ids"]))
                if rng.random() < 0.08:
                    authors.append(rng.choice(rng.choice(flat)["ids"]))
                for _ in range(rng.randint(0, 3)):
                    authors.append(f"fixture:{external}")
                    external += 1
                authors = list(dict.fromkeys(authors))
                rng.shuffle(authors)
                year = rng.choice([2016, 2017, 2017, 2018, 2019, 2020, 2021, 2021, 2022])
                docs.append({
                    "doc_id": f"fx-{next_doc:06d}",
                    "title": f"Fixture study {next_doc}",
                    "year": year,
                    "citation_count": rng.choice([0, 0, 1, 2, 3, 5, 8, 13, 21, 34, 55, 120]),
                    "author_ids": authors,
                    "source_title": f"Journal of {subjects[0].title()} Research",
                    "doc_type": rng.choice(DOC_TYPES),
                    "subject_areas": subjects,
                })
                next_doc += 1

    counts = {}
    for doc in docs:
        for author in doc["author_ids"]:
            counts[author] = counts.get(author, 0) + 1
    for profile in profiles:
        profile["document_count"] = counts.get(profile["author_id"], 0)
    return roster, profiles, docs


def write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data" / "fixture"))
    parser.add_argument("--seed", type=int, default=20221)
    args = parser.parse_args()

    out = Path(args.out)
    roster, profiles, docs = build(random.Random(args.seed))
    if (out / "records").exists():
        shutil.rmtree(out / "records")
    (out / "records" / "authors").mkdir(parents=True)
    (out / "records" / "docs").mkdir(parents=True)

    write_csv(out / "institutions.csv", ["abbreviation", "name"], INSTITUTIONS)
    write_csv(out / "roster.csv", ["institution", "department", "member", "rank", "author_ids"], roster)
    write_csv(out / "tags.csv", ["institution", "department", "tags"],
              [(a, d, "|".join(t)) for a, d, t in TAGS])
    for profile in profiles:
        name = profile["author_id"].split(":")[1]
        (out / "records" / "authors" / f"{name}.json").write_text(
            json.dumps(profile, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
    for doc in docs:
        (out / "records" / "docs" / f"{doc['doc_id']}.json").write_text(
            json.dumps(doc, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
    print(f"{len(roster)} members, {len(profiles)} profiles, {len(docs)} documents")


if __name__ == "__main__":
    main()
