"""Production-rule surface realizer."""

from ._core import (
    GenerationError,
    InflectionError,
    ParseError,
    Session,
    canonical_gil,
    parse_gil,
    validate,
)


def generate(grammar, input, *, start="", max=1, criteria=None, weights=False, memo=True,
             formula="once", lexicon=None):
    """Solutions for one input as dicts with text, weight, rules and step."""
    session = Session(grammar, input, start=start, criteria=criteria, weights=weights,
                      memo=memo, formula=formula, lexicon=lexicon)
    return session.take(max)


__all__ = [
    "GenerationError",
    "InflectionError",
    "ParseError",
    "Session",
    "canonical_gil",
    "generate",
    "parse_gil",
    "validate",
]
