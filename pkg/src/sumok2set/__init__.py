"""Compiler from a SUMO fragment into higher-order set theory problems.

The pipeline: s-expression parsing (sexpr), lowering to the supported
fragment (sumo), signature analysis of declared argument domains
(signature), translation into set-theoretic terms with membership guards
(translate, guards, catalog, hostterm), rendering and re-parsing of typed
problem files (th0), brute-force identity checking over hereditarily finite
sets (hforacle), and batch prover runs (harness, cli).
"""

__version__ = "0.1.0"

__all__ = [
    "catalog",
    "cli",
    "guards",
    "harness",
    "hforacle",
    "hostterm",
    "sexpr",
    "signature",
    "sumo",
    "th0",
    "translate",
]
