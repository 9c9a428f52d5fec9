#!/usr/bin/env python3
"""Generate the synthetic demo corpus (tagged sentences, toy embeddings,
seed file, gold pairs) into a directory, ready for `brex run`."""

import argparse

from brex.synth import build_planted_fixture


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="demo_data", help="output directory")
    parser.add_argument("--sentences", type=int, default=200)
    parser.add_argument("--seed", type=int, default=13, help="shuffle seed")
    args = parser.parse_args()

    fixture = build_planted_fixture(n_sentences=args.sentences, rng_seed=args.seed)
    paths = fixture.write(args.out)
    for name, path in paths.items():
        print(f"{name:<12} {path}")
    print()
    print("try:")
    print(f"  brex run --corpus {paths['corpus']} --embeddings {paths['embeddings']}"
          f" --seeds {paths['seeds']} --mode brej --out runs/brej")
    print(f"  brex eval --run runs/brej --gold {paths['gold']}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
