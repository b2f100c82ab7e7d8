#!/usr/bin/env python3
"""Write mixing-spec JSON files for the synthetic benchmarks.

  make_config.py separable   # 10 labels, disjoint 50-token vocabularies
  make_config.py biased      # 2 labels sharing 60% of a 50-token vocabulary, bias 9:1
"""
import json
import sys


def separable(n_labels=10, vocab=50, tokens_per_label=20):
    return {
        "labels": [
            {"label": f"L{i}", "vocabulary": [f"l{i}w{j}" for j in range(vocab)]}
            for i in range(n_labels)
        ],
        "noise_fraction": 0.0,
        "tokens_per_label": tokens_per_label,
        "labels_per_document": [1.0],
    }


def biased(vocab=50, shared=30, tokens_per_label=8, bias=(9.0, 1.0)):
    common = [f"c{j}" for j in range(shared)]
    return {
        "labels": [
            {"label": name, "vocabulary": common + [f"{name.lower()}{j}" for j in range(vocab - shared)]}
            for name in ("major", "minor")
        ],
        "noise_fraction": 0.0,
        "tokens_per_label": tokens_per_label,
        "labels_per_document": [1.0],
        "label_bias": {"major": bias[0], "minor": bias[1]},
    }


if __name__ == "__main__":
    kind = sys.argv[1] if len(sys.argv) > 1 else "separable"
    spec = {"separable": separable, "biased": biased}[kind]()
    json.dump(spec, sys.stdout, indent=2)
    print()
