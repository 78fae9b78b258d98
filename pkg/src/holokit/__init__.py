"""holokit: holonomy and consistency on discrete structures, with exact verdicts."""

__version__ = "0.1.0"
