"""pumleval: evaluation toolkit for method-enriched PlantUML class-diagram corpora."""

__version__ = "0.1.0"
