"""Recompute the Kruskal-Wallis and Dunn tables from the per-image entropy fixture.

Prints our p-values next to the reference values in data/, the adjustment calibration report,
and the effect of the single pe1 edit discussed in the README.
"""

import argparse

from tessentropy.stats import (
    DATA_DIR,
    GroupSample,
    calibrate_adjustment,
    dunn_test,
    find_pair,
    read_dunn_reference,
    read_group_table,
    read_kw_reference,
)


def edited_pe1(samples, old=8.436416, new=8.42) -> GroupSample:
    groups = []
    for name, vals in samples["pe1"].groups:
        vals = list(vals)
        if name == "dWL":
            vals[vals.index(old)] = new
        groups.append((name, vals))
    return GroupSample(groups)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--data", default=str(DATA_DIR))
    args = ap.parse_args()

    samples = read_group_table(f"{args.data}/table2.csv")
    kw_ref = read_kw_reference(f"{args.data}/table3.csv")
    dunn_ref = read_dunn_reference(f"{args.data}/table4.csv")

    report = calibrate_adjustment(samples, dunn_ref)
    print(report.format())
    method = report.chosen

    print("\nKruskal-Wallis")
    print(f"{'var':8s} {'H':>9s} {'p':>12s} {'reference':>12s} {'rel err':>8s}")
    for var, ref in kw_ref.items():
        res = dunn_test(samples[var], method)
        print(f"{var:8s} {res.statistic:9.4f} {res.p_value:12.4e} {ref:12.4e} {abs(res.p_value / ref - 1):8.2%}")

    print(f"\nDunn ({method})")
    print(f"{'var':8s} {'pair':10s} {'p adj':>12s} {'reference':>12s} {'rel err':>8s}")
    for var, a, b, ref in dunn_ref:
        p = find_pair(dunn_test(samples[var], method), a, b).p_adjusted
        print(f"{var:8s} {a + '-' + b:10s} {p:12.4e} {ref:12.4e} {abs(p / ref - 1):8.2%}")

    print("\npe1 with one duplicated dWL value 8.436416 moved to 8.42")
    res = dunn_test(edited_pe1(samples), method)
    print(f"KW p {res.p_value:.4e} (reference {kw_ref['pe1']:.4e})")
    for var, a, b, ref in dunn_ref:
        if var == "pe1":
            p = find_pair(res, a, b).p_adjusted
            print(f"{a + '-' + b:10s} {p:12.4e} {ref:12.4e} {abs(p / ref - 1):8.2%}")


if __name__ == "__main__":
    main()
