__version__ = "0.1.0"

# Identifiers of the pinned canonical recipes; cached artifacts depend on them.
RECIPES = {
    "completion": "nonpivot-std-v1",
    "extension": "complete-images-v1",
    "gamma": "rref-first-outside-swap-v1",
    "pbw": "drop-jth-completion-v1",
    "labels": "rank-desc-rref-v1",
}
