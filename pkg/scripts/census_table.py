"""Exhaustive class counts for small domains.

    python scripts/census_table.py
"""

from nestcan.funcspace import ProductDomain
from nestcan.generators import census

CASES = [((2,), 2), ((3,), 3), ((4,), 2), ((2, 2), 2), ((2, 2), 3), ((2, 3), 2), ((2, 2, 2), 2), ((3, 3), 2)]


def main():
    cols = ["total", "weakly_canalizing", "canalizing", "nc", "wnc"]
    print(f"{'domain':<12}{'|codomain|':>11}" + "".join(f"{c:>19}" for c in cols))
    for ks, m in CASES:
        counts = census(ProductDomain.full(ks), range(m))
        print(f"{str(ks):<12}{m:>11}" + "".join(f"{counts[c]:>19}" for c in cols))


if __name__ == "__main__":
    main()
