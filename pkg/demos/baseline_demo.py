#!/usr/bin/env python3
"""Score offer pairs with the classical matchers and tune a threshold.

Shows the TF-IDF cosine and token-Jaccard scorers side by side on a few
hand-picked pairs, then tunes the decision threshold on a small labeled
sample and reports the resulting metrics.
"""

from pmkit import (
    OfferPair,
    Scorer,
    ThresholdMatcher,
    compute_metrics,
    fit_tfidf,
    score_pair,
    tune_threshold,
)

CORPUS = [
    "Coca-Cola Zero 0,5L",
    "Coca Cola zero 500 ml",
    "Pepsi Max 0,5l butelka",
    "Woda mineralna gazowana 1,5l",
    "Woda źródlana niegazowana 1.5 L",
    "Proszek do prania kolor 3kg",
    "Proszek do prania białego 3 kg",
]

LABELED_PAIRS = [
    # (left, right, is same product)
    ("Coca-Cola Zero 0,5L", "Coca Cola zero 500 ml", 1),
    ("Woda mineralna gazowana 1,5l", "Woda mineralna gazowana 1,5 l", 1),
    ("Proszek do prania kolor 3kg", "Proszek do prania kolor 3 kg", 1),
    ("Coca-Cola Zero 0,5L", "Pepsi Max 0,5l butelka", 0),
    ("Woda mineralna gazowana 1,5l", "Proszek do prania kolor 3kg", 0),
    ("Proszek do prania kolor 3kg", "Proszek do prania białego 3 kg", 0),
]


def main() -> None:
    model = fit_tfidf(CORPUS)
    tfidf = ThresholdMatcher(scorer=Scorer.TFIDF_COSINE, threshold=0.5, model=model)
    jac = ThresholdMatcher(scorer=Scorer.JACCARD, threshold=0.5)

    print(f"{'tfidf':>7} {'jaccard':>7}  pair")
    for left, right, _ in LABELED_PAIRS:
        print(f"{tfidf.score_titles(left, right):7.3f} "
              f"{jac.score_titles(left, right):7.3f}  {left!r} vs {right!r}")

    scores = [(tfidf.score_titles(l, r), label) for l, r, label in LABELED_PAIRS]
    tfidf.threshold = tune_threshold(scores)
    print(f"\ntuned tf-idf threshold: {tfidf.threshold:.3f}")

    pairs = [
        OfferPair(pair_id=str(i), id_left="l", title_left=l,
                  id_right="r", title_right=r, label=label)
        for i, (l, r, label) in enumerate(LABELED_PAIRS)
    ]
    predictions = [score_pair(tfidf, p) for p in pairs]
    metrics = compute_metrics(predictions, [p.label for p in pairs])
    print("metrics on the labeled sample (percentage points):")
    for name, value in metrics.as_dict().items():
        print(f"  {name}: {100 * value:.1f}")


if __name__ == "__main__":
    main()
