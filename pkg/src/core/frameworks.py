"""
Body-and-hinge and panel-and-hinge realizations, their validity checks, the affine
and rotational moves used to glue sub-realizations, and the text dump format:

    d <d>
    panels
    <vertex> : c_1 ... c_d
    hinges
    <edge> : (d-1) homogeneous points, d+1 rationals each

A body-and-hinge dump omits the panels section.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.core import linalg
from src.core.geometry import (
    Hinge,
    Panel,
    PanelRelation,
    hinge_extensor,
    panel_intersection,
)
from src.core.linalg import Vector, format_rational, frac
from src.core.multigraph import Dimension, EdgeId, Multigraph, _sort_key
from src.exceptions import GraphParseException, PreconditionException

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BodyHingeRealization:
    dim: Dimension
    hinges: Dict[EdgeId, Hinge]

    def validate(self, graph: Multigraph) -> None:
        missing = [e.id for e in graph.edges if e.id not in self.hinges]
        if missing:
            raise PreconditionException(f"edges {missing} have no hinge", operation="realization")
        for e in graph.edges:
            hinge_extensor(self.hinges[e.id], self.dim)

    def dump(self) -> str:
        return _dump(self.dim, None, self.hinges)


@dataclass(frozen=True)
class PanelHingeRealization:
    dim: Dimension
    panels: Dict[int, Panel]
    hinges: Dict[EdgeId, Hinge] = field(default_factory=dict)

    def body(self) -> BodyHingeRealization:
        return BodyHingeRealization(self.dim, dict(self.hinges))

    def relation(self, u: int, v: int) -> Union[Hinge, PanelRelation]:
        return panel_intersection(self.panels[u], self.panels[v], self.dim)

    def proportional_pairs(self) -> List[Tuple[int, int]]:
        """Vertex pairs whose panels are parallel or coincident."""
        vertices = sorted(self.panels)
        return [
            (u, v) for u, v in combinations(vertices, 2)
            if linalg.proportional(self.panels[u].c, self.panels[v].c)
        ]

    def is_nonparallel(self) -> bool:
        return not self.proportional_pairs()

    def is_nondegenerate(self) -> bool:
        return all(self.panels[u].c == self.panels[v].c for u, v in self.proportional_pairs())

    def validate(self, graph: Multigraph, require_common_panel: bool = True) -> None:
        """
        With ``require_common_panel`` off, parallel edges between non-coincident panels
        may share their hinge (edges re-added after minimization).
        """
        missing_panels = [v for v in graph.vertices if v not in self.panels]
        if missing_panels:
            raise PreconditionException(f"vertices {missing_panels} have no panel", operation="realization")
        BodyHingeRealization(self.dim, self.hinges).validate(graph)
        for e in graph.edges:
            hinge = self.hinges[e.id]
            if not (hinge.lies_in(self.panels[e.u]) and hinge.lies_in(self.panels[e.v])):
                raise PreconditionException(
                    f"hinge of edge {e.id} is not inside the panels of {e.u} and {e.v}",
                    operation="realization",
                    details={"edge": e.id},
                )
        for parallel in graph.parallel_classes():
            first = parallel[0]
            if self.panels[first.u].c != self.panels[first.v].c:
                if not require_common_panel:
                    continue
                raise PreconditionException(
                    f"parallel edges between {first.u} and {first.v} need a common panel", operation="realization"
                )
            extensors = [hinge_extensor(self.hinges[e.id], self.dim).coords for e in parallel]
            for x, y in combinations(extensors, 2):
                if linalg.proportional(x, y):
                    raise PreconditionException(
                        f"parallel edges between {first.u} and {first.v} share a hinge", operation="realization"
                    )

    def merged(self, other: "PanelHingeRealization") -> "PanelHingeRealization":
        return PanelHingeRealization(self.dim, {**self.panels, **other.panels}, {**self.hinges, **other.hinges})

    def with_hinges(self, hinges: Dict[EdgeId, Hinge]) -> "PanelHingeRealization":
        return PanelHingeRealization(self.dim, dict(self.panels), {**self.hinges, **hinges})

    def transformed(self, matrix: np.ndarray, shift: Sequence) -> Optional["PanelHingeRealization"]:
        """
        Image under x -> Ax + b. A panel c goes to w / (1 + w.b) with w = A^-T c;
        None when some image panel would pass through the origin.
        """
        shift = tuple(frac(x) for x in shift)
        inverse_transpose = linalg.inverse(matrix).T
        panels = {}
        for v, panel in self.panels.items():
            w = tuple(sum((inverse_transpose[i, j] * panel.c[j] for j in range(self.dim.d)), Fraction(0))
                      for i in range(self.dim.d))
            scale = 1 + linalg.dot(w, shift)
            if scale == 0:
                return None
            panels[v] = Panel(tuple(x / scale for x in w))
        hinges = {e: Hinge(tuple(_apply(matrix, shift, p) for p in h.points)) for e, h in self.hinges.items()}
        return PanelHingeRealization(self.dim, panels, hinges)

    def rotated(self, graph: Multigraph, moved: Iterable[int], direction: Sequence,
                t: Fraction) -> Optional["PanelHingeRealization"]:
        """
        Turn the common panel of the vertices in ``moved`` to c + t n, where n . x = 0 on the
        rotation axis. Hinges inside the class follow by central projection x -> x / (1 + t n.x);
        boundary hinges stay when still inside the new panel, otherwise they are recut.
        None when a recut meets a parallel panel.
        """
        moved = set(moved)
        c = self.panels[min(moved)].c
        n = tuple(frac(x) for x in direction)
        new_c = tuple(x + t * y for x, y in zip(c, n))
        if linalg.is_zero(new_c):
            return None
        new_panel = Panel(new_c)
        panels = dict(self.panels)
        for v in moved:
            panels[v] = new_panel
        hinges = dict(self.hinges)
        for e in graph.edges:
            inside = (e.u in moved, e.v in moved)
            if not any(inside):
                continue
            hinge = self.hinges[e.id]
            if all(inside):
                projected = []
                for p in hinge.points:
                    scale = 1 + t * linalg.dot(n, p)
                    if scale == 0:
                        return None
                    projected.append(tuple(x / scale for x in p))
                hinges[e.id] = Hinge(tuple(projected))
            elif not hinge.lies_in(new_panel):
                other = e.v if inside[0] else e.u
                cut = panel_intersection(new_panel, panels[other], self.dim)
                if not isinstance(cut, Hinge):
                    return None
                hinges[e.id] = cut
        return PanelHingeRealization(self.dim, panels, hinges)

    def dump(self) -> str:
        return _dump(self.dim, self.panels, self.hinges)


def _apply(matrix: np.ndarray, shift: Vector, point: Vector) -> Vector:
    d = len(point)
    return tuple(sum((matrix[i, j] * point[j] for j in range(d)), Fraction(0)) + shift[i] for i in range(d))


def _dump(dim: Dimension, panels: Optional[Dict[int, Panel]], hinges: Dict[EdgeId, Hinge]) -> str:
    lines = [f"d {dim.d}"]
    if panels is not None:
        lines.append("panels")
        for v in sorted(panels):
            lines.append(f"{v} : " + " ".join(format_rational(x) for x in panels[v].c))
    lines.append("hinges")
    for e in sorted(hinges, key=_sort_key):
        coords = [x for p in hinges[e].homogeneous_points() for x in p]
        lines.append(f"{e} : " + " ".join(format_rational(x) for x in coords))
    return "\n".join(lines) + "\n"


def _parse_rationals(fields: Sequence[str], lineno: int) -> List[Fraction]:
    try:
        return [Fraction(f) for f in fields]
    except (ValueError, ZeroDivisionError):
        raise GraphParseException(f"expected rationals num/den, got {' '.join(fields)!r}", line=lineno)


def parse_realization(text: str) -> Union[PanelHingeRealization, BodyHingeRealization]:
    dim: Optional[Dimension] = None
    section: Optional[str] = None
    panels: Dict[int, Panel] = {}
    hinges: Dict[EdgeId, Hinge] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if dim is None:
            fields = line.split()
            if len(fields) != 2 or fields[0] != "d" or not fields[1].isdigit():
                raise GraphParseException("first line must be 'd <dimension>'", line=lineno)
            dim = Dimension(int(fields[1]))
            continue
        if line in ("panels", "hinges"):
            section = line
            continue
        if section is None or ":" not in line:
            raise GraphParseException("expected '<id> : values' inside a section", line=lineno)
        key, values = (part.strip() for part in line.split(":", 1))
        try:
            ident = int(key)
        except ValueError:
            raise GraphParseException(f"id must be an integer, got {key!r}", line=lineno)
        numbers = _parse_rationals(values.split(), lineno)
        if section == "panels":
            if len(numbers) != dim.d:
                raise GraphParseException(f"panel needs {dim.d} coordinates", line=lineno)
            if linalg.is_zero(numbers):
                raise GraphParseException("panel normal must be nonzero", line=lineno)
            panels[ident] = Panel(tuple(numbers))
        else:
            width = dim.d + 1
            if len(numbers) != (dim.d - 1) * width:
                raise GraphParseException(f"hinge needs {(dim.d - 1) * width} coordinates", line=lineno)
            points = [numbers[i:i + width] for i in range(0, len(numbers), width)]
            if any(p[-1] == 0 for p in points):
                raise GraphParseException("hinge points must be finite", line=lineno)
            hinges[ident] = Hinge(tuple(tuple(x / p[-1] for x in p[:-1]) for p in points))
    if dim is None:
        raise GraphParseException("empty realization dump")
    if panels:
        return PanelHingeRealization(dim, panels, hinges)
    return BodyHingeRealization(dim, hinges)


def load_realization(path: Union[str, Path]) -> Union[PanelHingeRealization, BodyHingeRealization]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise GraphParseException(f"cannot read {path}: {exc}")
    return parse_realization(text)
