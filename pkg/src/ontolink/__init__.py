"""Structure-only link analysis for ontology graphs: parsing, projection,
link-prediction benchmarking, candidate recommendation, and explanations."""

__version__ = "0.1.0"
