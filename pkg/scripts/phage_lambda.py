"""Two-gene phage lambda model: state graph, DOT export and rule classification.

    python scripts/phage_lambda.py --out phage/
"""

import argparse
from pathlib import Path

from nestcan.canalization import format_nc, recognize_nc
from nestcan.dynamics import build_stg, classify_rules, export_dot, phage_lambda, serialize_mvnet, stg_equal


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="phage")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    graphs = {}
    for variant in (1, 2):
        net = phage_lambda(variant)
        (out / f"phage_f{variant}.mvnet").write_text(serialize_mvnet(net))
        stg = build_stg(net)
        graphs[variant] = stg
        (out / f"phage_f{variant}.dot").write_text(export_dot(stg))
        print(f"Cro rule {variant}: {len(stg.edges)} edges, sinks {stg.sinks}")
        for name, c in classify_rules(net).items():
            print(f"  {name}: nc={c.nc} wnc={c.wnc}")
        dec = recognize_nc(net.rules[1])
        if dec is not None:
            print("  Cro decomposition:", format_nc(dec).strip())
    print("same trajectories:", stg_equal(graphs[1], graphs[2]))


if __name__ == "__main__":
    main()
