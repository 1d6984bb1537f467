"""Chain-level GF(2) toolkit for Legendrian contact homology, augmentations,
action-filtered SFT complexes, two-copy Floer complexes and duality sequences."""

__version__ = "0.1.0"
