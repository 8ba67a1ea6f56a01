#!/usr/bin/env python3
"""Write the table fixtures under data/fixtures/.

- table5_scaling.csv: Pythia parameter counts and r (DAIS).
- table10_dais.tsv: DAIS bias per verb.
- table10_scores.jsonl: a ScoreSet whose per-verb delta S equals the
  printed values. Each frame is one single-token word; conventional
  surprisal varies by frame and unconventional = conventional + delta S.
- table10_r_oracle.txt: product-moment r over the 12 printed pairs,
  computed in exact rational arithmetic.
- table12_seeds.csv: per-seed ddelta S values.
"""
import json
import math
import pathlib
import random
from fractions import Fraction

ROOT = pathlib.Path(__file__).resolve().parent.parent
OUT = ROOT / "data" / "fixtures"

TABLE5 = [(160e6, 0.52), (410e6, 0.61), (1e9, 0.69), (2.8e9, 0.74), (6.9e9, 0.76), (12e9, 0.78)]

TABLE10 = [
    ("donate", "3.12", "0.97"), ("explain", "2.89", "0.95"), ("whisper", "2.64", "0.92"),
    ("announce", "2.51", "0.91"), ("return", "1.43", "0.71"), ("ship", "1.28", "0.67"),
    ("lend", "0.89", "0.58"), ("pass", "0.74", "0.55"), ("give", "0.21", "0.48"),
    ("send", "0.31", "0.50"), ("offer", "0.28", "0.49"), ("show", "0.38", "0.52"),
]

TABLE12 = {
    "Amplified": [0.76, 0.68, 0.84, 0.71, 0.66],
    "Attenuated": [-0.47, -0.39, -0.49, -0.42, -0.38],
    "Reverse": [-0.32, -0.24, -0.35, -0.28, -0.26],
    "Control": [0.05, 0.01, 0.06, -0.02, 0.04],
}
SEEDS = [42, 123, 456, 789, 1024]
MODEL = "llama-2-7b-table10"


def pearson_exact(xs, ys):
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    sxx = sum((x - mx) ** 2 for x in xs)
    syy = sum((y - my) ** 2 for y in ys)
    # r = sxy / sqrt(sxx * syy); square root taken once, at the end
    r2 = sxy * sxy / (sxx * syy)
    return math.copysign(math.sqrt(r2.numerator / r2.denominator), float(sxy))


def record(verb, frame, variant, bits):
    return {"verb": verb, "construction": "Dative", "frame": frame, "variant": variant, "condition": None,
            "words": 1, "tokens": [verb], "logprobs": [-bits * math.log(2)], "model_id": MODEL}


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    with (OUT / "table5_scaling.csv").open("w") as f:
        f.write("n_params,r\n")
        for n, r in TABLE5:
            f.write(f"{n:.6g},{r}\n")
    with (OUT / "table10_dais.tsv").open("w") as f:
        f.write("lemma\tbias\n")
        for verb, _, dais in TABLE10:
            f.write(f"{verb}\t{dais}\n")
    with (OUT / "table10_scores.jsonl").open("w") as f:
        for verb, ds, _ in TABLE10:
            for frame in range(5):
                conv = 4.0 + 0.25 * frame
                f.write(json.dumps(record(verb, frame, "conv", conv)) + "\n")
                f.write(json.dumps(record(verb, frame, "unconv", conv + float(ds))) + "\n")
    r = pearson_exact([Fraction(d) for _, d, _ in TABLE10], [Fraction(b) for _, _, b in TABLE10])
    (OUT / "table10_r_oracle.txt").write_text(f"{r:.15f}\n")
    with (OUT / "table12_seeds.csv").open("w") as f:
        f.write("condition,seed,ddelta\n")
        for cond, vals in TABLE12.items():
            for seed, v in zip(SEEDS, vals):
                f.write(f"{cond},{seed},{v:+.2f}\n")
    write_smoke_frequencies()


def write_smoke_frequencies():
    """Seeded dative counts for every stimulus verb, for CLI runs without a parsed corpus."""
    rng = random.Random(7)
    reasons = ["too_short", "too_long", "boilerplate", "pos_mismatch", "low_confidence",
               "no_pattern_match", "single_argument", "periphrastic"]
    verbs = []
    with (ROOT / "data" / "stimuli.tsv").open() as f:
        for line in f:
            cols = line.rstrip("\n").split("\t")
            if cols[0] == "lemma" or line.startswith("#") or cols[1] != "Dative" or cols[5] != "0":
                continue
            verbs.append(cols[0])
    with (OUT / "smoke_frequencies.csv").open("w") as f:
        f.write("lemma,construction,f_conv,f_unconv," + ",".join("reject_" + r for r in reasons) + "\n")
        for v in sorted(verbs):
            f.write(f"{v},Dative,{rng.randint(5, 400)},{rng.randint(5, 400)}," + ",".join("0" * 1 for _ in reasons) + "\n")


if __name__ == "__main__":
    main()
