"""Even-cycle-free graph counting toolkit: cycle oracles, refined
supersaturation hypergraphs, path-family machinery, hypergraph containers
with replayable fingerprints, coloured-graph encodings, blow-up
constructions, random-host Turán sweeps, and a complete-bipartite analogue.
"""

__version__ = "0.1.0"
