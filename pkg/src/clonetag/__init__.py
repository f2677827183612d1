"""Clone-class clustering and tagging toolkit.

Detects type-1/2 code clones between a target product and many reference
products, clusters each clone class's fragments by topic similarity of
their word sequences, names every cluster with a short discriminating tag
(one word or one filename), and serves the resulting investigation report
over HTTP.
"""

__version__ = "0.1.0"
