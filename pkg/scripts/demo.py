"""End-to-end demo over the bundled fixtures.

Prints the scaling-law endpoints, a rank-frequency reconstruction for a
small inventory, per-language entropy/concentration fits with the pooled
regression, and a maxent fit of the toy lexicon.
"""

import math
from importlib.resources import files

from phonodist import (
    DirichletSpec,
    build_feature_table,
    compensation_report,
    constraint_expectations,
    expected_entropy,
    predict_alpha,
    reconstruct_from_inventory,
)
from phonodist import io, maxent

DATA = files("phonodist") / "data"


def main() -> None:
    print("== scaling law ==")
    for n in (11, 23, 160):
        alpha = predict_alpha(n)
        rel = expected_entropy(DirichletSpec(n, alpha)) / math.log(n)
        print(f"  n={n:3d}  alpha={alpha:.3f}  relative entropy={rel:.2f}")

    print("\n== reconstruction, n=11 ==")
    summary = reconstruct_from_inventory(11)
    print("  rank   mean     95% band")
    for rank, mean, _, lo, hi in summary.rank_rows():
        print(f"  {rank:4d}  {mean:.4f}  [{lo:.4f}, {hi:.4f}]")

    print("\n== per-language fits and pooled regression ==")
    names = ("amenglish", "bengali", "kaiwa", "samoan", "swedish")
    languages = [
        (name, io.load_frequency_table(str(DATA / f"{name}.tsv")), None)
        for name in names
    ]
    report = compensation_report(languages)
    for row in report.rows:
        print(
            f"  {row.name:10s} n={row.n:3d}  H={row.entropy_cwj:.3f}  "
            f"H/Hmax={row.relative_entropy:.2f}  alpha_hat={row.alpha_hat:.3f}"
        )
    law = report.law
    print(f"  implied law: alpha(n) = {law.coeff_a:.2f} * n^{law.exponent_b:.2f}")

    print("\n== maxent over the toy lexicon ==")
    table = build_feature_table(
        io.load_lexicon(str(DATA / "toy_a.lex")),
        io.load_incidence(str(DATA / "toy_incidence.tsv")),
    )
    problem = maxent.MaxEntProblem(
        support=table.phonemes,
        features=table.feature_matrix(),
        targets=constraint_expectations(table).as_array(),
    )
    solution = maxent.solve(problem)
    lams = ", ".join(f"{v:+.3f}" for v in solution.lambdas)
    print(f"  multipliers (cost, seg_info, lex_div): {lams}")
    for p, obs, guess in zip(table.phonemes, table.observed_prob, solution.probs):
        print(f"  {p}: observed={obs:.4f}  guessed={guess:.4f}")


if __name__ == "__main__":
    main()
