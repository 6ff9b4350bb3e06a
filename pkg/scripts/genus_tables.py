"""Write instanton series tables (rank 1 and rank 2, 5d and 6d) as CSV files."""

import argparse
from pathlib import Path

from elltor import gauge
from elltor.qseries import DEFAULT


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="genus_tables")
    ap.add_argument("--charges", type=int, default=3)
    ap.add_argument("--p-order", type=int, default=3)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    k, P = args.charges, args.p_order
    tables = {
        "chi_y_rank1.csv": gauge.chi_y_u1(k, DEFAULT, P),
        "elliptic_rank1.csv": gauge.elliptic_genus_u1(k, DEFAULT, P, 2),
        "chi_y_rank2.csv": gauge.chi_y_uM(2, min(k, 2), DEFAULT, min(P, 2), x_order=2),
        "elliptic_rank2.csv": gauge.elliptic_genus_uM(2, 1, DEFAULT, 1, 1, x_order=1),
    }
    for name, table in tables.items():
        (out / name).write_text(table.to_csv())
        print(f"{name}: {len(table.to_rows())} rows, charges 0..{table.max_charge}")


if __name__ == "__main__":
    main()
