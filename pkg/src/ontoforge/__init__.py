"""ontoforge: ontology-driven knowledge graph construction and completion.

Generates prompts from an ontology (and optionally an existing knowledge
graph or a text corpus), executes them against an instruction-following
language model, parses the triplet output into candidate facts, validates
the candidates, and exports curator-approved facts as deterministic RDF.
"""

__version__ = "0.1.0"
