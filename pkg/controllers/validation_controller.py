"""
Checks for oriented vertex and arc colorings.
"""
import logging
from typing import Dict, Optional, Tuple

from models.color_graph import ColorGraph
from models.digraph import ArcColoring, OrientedDigraph, VertexColoring
from models.errors import PartialColoringError
from models.solve_result import ValidationReport


class ColoringValidator:
    """Validates colorings against the two oriented coloring conditions.

    A vertex coloring is oriented when no arc joins two vertices of the same
    color and no two arcs run in opposite directions between the same pair of
    color classes. Reports name the first offending arc, or arc pair, in arc id
    order.
    """

    def __init__(self):
        self.logger = logging.getLogger(self.__class__.__name__)

    def validate_vertex_coloring(self, graph: OrientedDigraph, coloring: VertexColoring,
                                 color_graph: Optional[ColorGraph] = None) -> ValidationReport:
        """Check ``coloring`` and, when given, that it maps into ``color_graph``."""
        colors = coloring.colors
        for vertex in graph.vertices:
            if vertex not in colors:
                raise PartialColoringError(f"Vertex {vertex!r} has no color", vertex)

        if color_graph is not None:
            labels = set(color_graph.label_set())
            for vertex in graph.vertices:
                if colors[vertex] not in labels:
                    return ValidationReport(
                        False, (vertex,),
                        f"color {colors[vertex]} of {vertex!r} is not a vertex of the color graph"
                    )

        first_arc_of_pair: Dict[Tuple[int, int], int] = {}
        for arc_id, (tail, head) in enumerate(graph.arcs):
            a, b = colors[tail], colors[head]
            if a == b:
                return ValidationReport(
                    False, (arc_id,),
                    f"arc {arc_id} ({tail!r}, {head!r}) joins two vertices of color {a}"
                )
            if (b, a) in first_arc_of_pair:
                other = first_arc_of_pair[(b, a)]
                return ValidationReport(
                    False, (other, arc_id),
                    f"arcs {other} and {arc_id} run in opposite directions between colors {a} and {b}"
                )
            if color_graph is not None and not color_graph.has_arc(a, b):
                return ValidationReport(
                    False, (arc_id,),
                    f"arc {arc_id} maps to ({a}, {b}) which is not an arc of the color graph"
                )
            first_arc_of_pair.setdefault((a, b), arc_id)
        return ValidationReport.ok()

    def validate_arc_coloring(self, graph: OrientedDigraph, coloring: ArcColoring) -> ValidationReport:
        """Same check on the line digraph; violations are reported in arc ids of ``graph``."""
        for arc_id in range(graph.arc_count):
            if arc_id not in coloring.colors:
                raise PartialColoringError(f"Arc {arc_id} has no color", arc_id)
        line = graph.line_digraph()
        report = self.validate_vertex_coloring(line, VertexColoring(
            {arc_id: coloring.colors[arc_id] for arc_id in range(graph.arc_count)}, coloring.r
        ))
        if report.valid:
            return report
        if len(report.violation) == 1:
            first, second = line.arcs[report.violation[0]]
            return ValidationReport(
                False, (first, second),
                f"consecutive arcs {first} and {second} share color {coloring.colors[first]}"
            )
        one, two = (line.arcs[i] for i in report.violation)
        return ValidationReport(
            False, one + two,
            f"arc pairs {one} and {two} induce opposite directions between two color classes"
        )

    def realized_color_graph(self, graph: OrientedDigraph, coloring: VertexColoring) -> ColorGraph:
        """Homomorphic image: used colors and the color pairs realized by arcs."""
        return ColorGraph.from_arcs(
            ((coloring[t], coloring[h]) for t, h in graph.arcs),
            (coloring[v] for v in graph.vertices),
        )
