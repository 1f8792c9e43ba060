"""Regenerates the fixture CSVs.

VENTES rows are split from the per-(department, class) totals below so that
summing them by (Région, DeptN) x Classe gives the reference table exactly.
"""
import random
from pathlib import Path

OUT = Path(__file__).parent / "data"
MONTHS = ["janvier", "février", "mars", "avril", "mai", "juin", "juillet",
          "août", "septembre", "octobre", "novembre", "décembre"]

CLIENTS = [  # CodeCli, Ville, DeptN, Région
    ("C01", "Toulouse", "31", "Midi-Pyrénées"),
    ("C02", "Toulouse", "31", "Midi-Pyrénées"),
    ("C03", "Muret", "31", "Midi-Pyrénées"),
    ("C04", "Albi", "81", "Midi-Pyrénées"),
    ("C05", "Castres", "81", "Midi-Pyrénées"),
    ("C06", "Bordeaux", "33", "Aquitaine"),
    ("C07", "Arcachon", "33", "Aquitaine"),
    ("C08", "Saint-Brieuc", "22", "Bretagne"),
    ("C09", "Lannion", "22", "Bretagne"),
    ("C10", "Brest", "29", "Bretagne"),
    ("C11", "Quimper", "29", "Bretagne"),
]
PRODUITS = [
    ("P01", "Technologique"), ("P02", "Technologique"),
    ("P03", "Habillement"), ("P04", "Habillement"),
    ("P05", "Mobilier"), ("P06", "Mobilier"),
]
TOTALS = {  # DeptN -> Classe -> SUM(Montant)
    "31": {"Technologique": 1200, "Habillement": 2000, "Mobilier": 1000},
    "81": {"Technologique": 800, "Habillement": 1500, "Mobilier": 500},
    "33": {"Technologique": 1800, "Habillement": 3000, "Mobilier": 2000},
    "22": {"Technologique": 800, "Habillement": 2000, "Mobilier": 1000},
    "29": {"Technologique": 800, "Habillement": 1200, "Mobilier": 900},
}


def month_rows():
    rows = []
    for year in (2006, 2007):
        for m in range(1, 13):
            rows.append((f"{year}-{m:02d}", f"{MONTHS[m - 1]} {year}",
                         f"{year}-T{(m - 1) // 3 + 1}", str(year)))
    return rows


def main():
    rng = random.Random(2007)
    OUT.mkdir(exist_ok=True)
    months = month_rows()
    with open(OUT / "TEMPS.csv", "w", encoding="utf-8") as f:
        f.write("MoisN,LibelléM,Trimestre,Année\n")
        for r in months:
            f.write(",".join(r) + "\n")
    with open(OUT / "CLIENTS.csv", "w", encoding="utf-8") as f:
        f.write("CodeCli,Ville,DeptN,Région\n")
        for r in CLIENTS:
            f.write(",".join(r) + "\n")
    with open(OUT / "PRODUITS.csv", "w", encoding="utf-8") as f:
        f.write("CodeProduit,Classe\n")
        for r in PRODUITS:
            f.write(",".join(r) + "\n")

    with open(OUT / "VENTES.csv", "w", encoding="utf-8") as f:
        f.write("Montant,temps_ref,clients_ref,produits_ref\n")
        for dept, per_class in TOTALS.items():
            custs = [c[0] for c in CLIENTS if c[2] == dept]
            for classe, total in per_class.items():
                prods = [p[0] for p in PRODUITS if p[1] == classe]
                parts = [total * 5 // 10, total * 3 // 10]
                parts.append(total - sum(parts))
                for i, amount in enumerate(parts):
                    f.write(f"{amount},{rng.choice(months)[0]},{custs[i % len(custs)]},"
                            f"{prods[i % len(prods)]}\n")

    with open(OUT / "ACHATS.csv", "w", encoding="utf-8") as f:
        f.write("Montant,temps_ref,produits_ref\n")
        for month in months:
            prod = rng.choice(PRODUITS)[0]
            f.write(f"{rng.randrange(5, 40) * 100},{month[0]},{prod}\n")


if __name__ == "__main__":
    main()
