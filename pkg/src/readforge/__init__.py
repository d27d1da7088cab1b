"""readforge: compiles annotated reading texts plus a personal reading
history into a static hyperlinked site with frequency-banded words,
per-lemma concordance pages, and per-segment audio links resolved through
distributed resource manifests."""

__version__ = "0.1.0"
