"""Small instances shipped with the package (fig1, fig2a, fig2b, fig3)."""
from __future__ import annotations

from importlib import resources

from .core import BipartiteGraph, EditOp
from .textio import parse_graph, parse_witness

NAMES = ("fig1", "fig2a", "fig2b", "fig3")


def fixture_text(name: str, suffix: str = "graph") -> str:
    return resources.files(__package__).joinpath("fixtures", f"{name}.{suffix}").read_text()


def load_fixture(name: str) -> BipartiteGraph:
    if name not in NAMES:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(NAMES)}")
    return parse_graph(fixture_text(name))


def load_fixture_witness(name: str) -> list[EditOp]:
    return parse_witness(fixture_text(name, "witness"))
