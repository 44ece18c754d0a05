"""Data clump toolkit.

A pipeline for finding data clumps (groups of variables that recur together
across classes and method signatures) in source projects:

    extract   parse a project tree into portable class documents
    detect    find clumps over the extracted declarations
    report    persist findings as a stable, diffable document
    graph     build the clump graph for visualization
    plan      turn selected clumps into extract-class refactoring plans

The library surface lives in the submodules (:mod:`dct.model`,
:mod:`dct.extractor`, :mod:`dct.detector`, :mod:`dct.report`,
:mod:`dct.graph`, :mod:`dct.planner`); ``dct.cli`` ties them together.
"""

__version__ = "0.1.0"

DETECTOR_NAME = "dct"
