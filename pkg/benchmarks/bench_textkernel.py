#!/usr/bin/env python3
"""Benchmark the compiled text kernels against the pure-Python fallback.

Times the two hot operations on synthetic news-like documents: token
counting (tokenize + filter + count) and sparse cosine between term
vectors. Run after an editable install:

    python benchmarks/bench_textkernel.py [--docs 200] [--words 800] [--repeat 5]
"""

import argparse
import random
import time

from seedsmith.stopwords import STOPWORDS
from seedsmith.textkernel import _pykernel

try:
    from seedsmith.textkernel import _ckernel
except ImportError:
    _ckernel = None

VOCAB = (
    "flood river levee water rainfall evacuation crest rescue damage bridge "
    "eclipse solar corona totality shadow moon viewing astronomy telescope "
    "strike rail union workers trains negotiation walkout commuters service "
    "the of and to in a is that for on with as by at from it this are was "
    "2018 2014 report update coverage photos story analysis details numbers"
).split()


def make_docs(n_docs, words_per_doc, seed=7):
    rng = random.Random(seed)
    return [
        " ".join(rng.choice(VOCAB) for _ in range(words_per_doc))
        for _ in range(n_docs)
    ]


def bench(label, fn, repeat):
    best = min(_timed(fn) for _ in range(repeat))
    print(f"  {label:<14} {best * 1000:9.2f} ms")
    return best


def _timed(fn):
    start = time.perf_counter()
    fn()
    return time.perf_counter() - start


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--docs", type=int, default=200)
    parser.add_argument("--words", type=int, default=800)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    docs = make_docs(args.docs, args.words)
    print(f"corpus: {args.docs} docs x {args.words} words, best of {args.repeat}")

    impls = [("python", _pykernel)] + ([("c", _ckernel)] if _ckernel else [])
    if _ckernel is None:
        print("compiled kernel not built; timing the fallback only")

    results = {}
    print("\ntoken_counts (tokenize + stopword filter + count):")
    for name, impl in impls:
        results[("tok", name)] = bench(
            name, lambda impl=impl: [impl.token_counts(d, STOPWORDS) for d in docs],
            args.repeat,
        )

    vectors = [_pykernel.token_counts(d, STOPWORDS) for d in docs]
    gold = _pykernel.token_counts(" ".join(docs[: args.docs // 4]), STOPWORDS)
    print("\nsparse_cosine (every doc vs one large vector):")
    for name, impl in impls:
        results[("cos", name)] = bench(
            name, lambda impl=impl: [impl.sparse_cosine(v, gold) for v in vectors],
            args.repeat,
        )

    if _ckernel is not None:
        sanity = [
            _pykernel.sparse_cosine(v, gold) == _ckernel.sparse_cosine(v, gold)
            for v in vectors
        ]
        counts_equal = all(
            _pykernel.token_counts(d, STOPWORDS) == _ckernel.token_counts(d, STOPWORDS)
            for d in docs[:20]
        )
        print(f"\nresult parity: cosine {all(sanity)}, token_counts {counts_equal}")
        print(
            f"speedup: token_counts x{results[('tok', 'python')] / results[('tok', 'c')]:.2f}, "
            f"cosine x{results[('cos', 'python')] / results[('cos', 'c')]:.2f}"
        )


if __name__ == "__main__":
    main()
