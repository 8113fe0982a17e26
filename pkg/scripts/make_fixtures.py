"""Regenerate the bundled fixture data under src/phonodist/data/.

The five frequency tables are synthetic stand-ins shaped like classic
single-language phoneme counts: each is a multinomial sample from a
symmetric-Dirichlet draw whose concentration follows the default scaling
law, with inventory sizes matching the languages they stand in for.
Deterministic given the seed.
"""

from pathlib import Path

import numpy as np

from phonodist.analysis import band_coverage
from phonodist.dirichlet import predict_alpha
from phonodist.entropy import CountVector

DATA = Path(__file__).resolve().parents[1] / "src" / "phonodist" / "data"

TABLES = {
    # name: (inventory size, token count, seed)
    "amenglish": (35, 40000, 11),
    "bengali": (40, 12000, 12),
    "kaiwa": (17, 5000, 13),
    "samoan": (13, 8000, 14),
    "swedish": (36, 20000, 15),
}

LEXICONS = {
    "toy_a": [
        (3, "p a t"),
        (2, "p a k"),
        (4, "t a"),
        (1, "k a t a"),
        (2, "a k"),
        (5, "t a k"),
        (1, "p i t"),
        (2, "k i"),
    ],
    "toy_b": [
        (6, "m o"),
        (3, "m o k o"),
        (2, "k o m"),
        (4, "o m i"),
        (1, "i k o"),
        (2, "m i"),
    ],
}

INCIDENCE = {
    "a": (1800, 2000),
    "i": (1700, 2000),
    "o": (1500, 2000),
    "t": (1400, 2000),
    "k": (1300, 2000),
    "p": (1100, 2000),
    "m": (1500, 2000),
}


def write_tables() -> None:
    for name, (n, tokens, seed) in TABLES.items():
        rng = np.random.default_rng(seed)
        alpha = predict_alpha(n)
        while True:
            probs = rng.dirichlet(np.full(n, alpha))
            counts = rng.multinomial(tokens, probs)
            if np.count_nonzero(counts) == n:
                break
        order = np.argsort(-counts, kind="stable")
        lines = [f"ph{i + 1:02d}\t{counts[idx]}" for i, idx in enumerate(order)]
        (DATA / f"{name}.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")
        cov = band_coverage(CountVector({f"ph{i}": int(c) for i, c in enumerate(counts)}))
        print(f"{name}: n={n} tokens={tokens} alpha={alpha:.3f} band coverage={cov:.2f}")


def write_lexicons() -> None:
    for name, rows in LEXICONS.items():
        lines = [f"{count}\t{word}" for count, word in rows]
        (DATA / f"{name}.lex").write_text("\n".join(lines) + "\n", encoding="utf-8")
    header = "phoneme\tlanguages_with\tlanguages_total"
    lines = [header] + [f"{p}\t{w}\t{t}" for p, (w, t) in sorted(INCIDENCE.items())]
    (DATA / "toy_incidence.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")


if __name__ == "__main__":
    DATA.mkdir(parents=True, exist_ok=True)
    write_tables()
    write_lexicons()
