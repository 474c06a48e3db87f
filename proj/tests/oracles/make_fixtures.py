#!/usr/bin/env python3
# Copyright 2026 The glossmt Authors
# SPDX-License-Identifier: Apache-2.0
"""Freezes reference values computed with sacrebleu into tests/fixtures.

The C++ metrics must agree with these numbers; the script is kept so the
values can be re-derived, not run as part of the test suite.
"""

import json
import pathlib
import random

import sacrebleu
from sacrebleu.metrics import BLEU, CHRF

HERE = pathlib.Path(__file__).resolve().parent
FIXTURES = HERE.parent / "fixtures"

MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed):
        self.state = seed & MASK

    def next(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def below(self, n):
        return (self.next() * n) >> 64


def bleu_score(hyps, refs):
    return BLEU().corpus_score(hyps, [refs]).score


def chrf_score(hyps, refs):
    return CHRF(word_order=2, eps_smoothing=True).corpus_score(hyps, [refs]).score


def bootstrap(hyps_a, hyps_b, refs, scorer, seed, resamples):
    n = len(refs)
    rng = SplitMix64(seed)
    observed = scorer(hyps_b, refs) - scorer(hyps_a, refs)
    fails = 0
    total = 0.0
    for _ in range(resamples):
        idx = [rng.below(n) for _ in range(n)]
        a = scorer([hyps_a[i] for i in idx], [refs[i] for i in idx])
        b = scorer([hyps_b[i] for i in idx], [refs[i] for i in idx])
        delta = b - a
        total += delta
        if observed > 0:
            fails += delta <= 0
        elif observed < 0:
            fails += delta >= 0
        else:
            fails += 1
    return {
        "score_a": scorer(hyps_a, refs),
        "score_b": scorer(hyps_b, refs),
        "mean_delta": total / resamples,
        "p_value": fails / resamples,
    }


def random_corpora(count, seed):
    rng = random.Random(seed)
    vocab = ["the", "cat", "Sat", "on", "mat.", "a", "dog,", "ran", "(to)",
             "12.5", "don't", "x-ray", "über", "ñu"]
    out = []
    for _ in range(count):
        size = rng.randint(1, 6)
        words = rng.sample(vocab, 10)
        def sentence():
            return " ".join(rng.choice(words) for _ in range(rng.randint(0, 8)))
        hyps = [sentence() for _ in range(size)]
        refs = [sentence() for _ in range(size)]
        # Make some overlap likely.
        for i in range(size):
            if rng.random() < 0.3:
                hyps[i] = refs[i]
        out.append({"hyps": hyps, "refs": refs,
                    "bleu": bleu_score(hyps, refs),
                    "chrf_pp": chrf_score(hyps, refs)})
    return out


def main():
    # sacrebleu README example, first reference stream only.
    spot_hyps = ["The dog bit the man.", "It wasn't surprising.",
                 "The man had just bitten him."]
    spot_refs = ["The dog bit the man.", "It was not unexpected.",
                 "The man bit him first."]
    examples = {
        "readme_first_stream": {
            "hyps": spot_hyps, "refs": spot_refs,
            "bleu": bleu_score(spot_hyps, spot_refs),
            "chrf_pp": chrf_score(spot_hyps, spot_refs),
            "sacrebleu_version": sacrebleu.__version__,
        },
        "the_cat": {
            "hyps": ["the cat"], "refs": ["the cat sat"],
            "bleu": bleu_score(["the cat"], ["the cat sat"]),
        },
        "cat_on_mat": {
            "hyps": ["cat on mat"], "refs": ["the cat sat on the mat"],
            "chrf_pp": chrf_score(["cat on mat"], ["the cat sat on the mat"]),
        },
    }
    (FIXTURES / "metric_examples.json").write_text(
        json.dumps(examples, indent=2, ensure_ascii=False) + "\n")
    (FIXTURES / "random_corpora.json").write_text(
        json.dumps(random_corpora(40, 7), indent=2, ensure_ascii=False) + "\n")

    toy = FIXTURES / "toy_pair"
    read = lambda name: (toy / name).read_text().splitlines()
    a, b, refs = read("hyps_a.txt"), read("hyps_b.txt"), read("refs.txt")
    boot = {
        "seed": 42,
        "resamples": 1000,
        "bleu": bootstrap(a, b, refs, bleu_score, 42, 1000),
        "chrf_pp": bootstrap(a, b, refs, chrf_score, 42, 1000),
        "first_draw": (lambda r: [r.below(8) for _ in range(8)])(SplitMix64(42)),
    }
    (toy / "bootstrap_seed42.json").write_text(json.dumps(boot, indent=2) + "\n")


if __name__ == "__main__":
    main()
