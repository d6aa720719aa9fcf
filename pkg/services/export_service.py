"""
JSON and DOT serialization of digraphs, colorings and color graphs.
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

from models.color_graph import ColorGraph
from models.digraph import ArcColoring, OrientedDigraph, VertexColoring
from models.errors import InvalidDigraphError


def _quote(value: Any) -> str:
    text = str(value).replace('\\', '\\\\').replace('"', '\\"')
    return f'"{text}"'


class ExportService:
    """Writes and reads the interchange formats of the command line tool.

    JSON digraph: ``{"vertices": [...], "arcs": [[tail, head], ...]}`` with the
    array position as arc id. DOT: one node line per vertex and one edge line
    per arc instance.
    """

    def __init__(self):
        self.logger = logging.getLogger(self.__class__.__name__)

    def digraph_to_dict(self, graph: OrientedDigraph) -> Dict[str, Any]:
        return {
            'vertices': [str(v) for v in graph.vertices],
            'arcs': [[str(t), str(h)] for t, h in graph.arcs],
        }

    def digraph_to_json(self, graph: OrientedDigraph) -> str:
        return json.dumps(self.digraph_to_dict(graph), indent=2)

    def load_digraph_json(self, source: Union[str, Path, Dict]) -> OrientedDigraph:
        """Digraph from a JSON document, a path to one, or an already decoded dict."""
        if isinstance(source, dict):
            data = source
        elif isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith('{')):
            with open(source, 'r', encoding='utf-8') as f:
                data = json.load(f)
        else:
            data = json.loads(source)
        if not isinstance(data, dict) or 'vertices' not in data or 'arcs' not in data:
            raise InvalidDigraphError("JSON digraph needs 'vertices' and 'arcs' keys")
        arcs = []
        for position, arc in enumerate(data['arcs']):
            if not isinstance(arc, (list, tuple)) or len(arc) != 2:
                raise InvalidDigraphError(f"Arc {position} must be a [tail, head] pair")
            arcs.append((str(arc[0]), str(arc[1])))
        return OrientedDigraph(tuple(str(v) for v in data['vertices']), tuple(arcs))

    def coloring_to_dict(self, coloring: Union[VertexColoring, ArcColoring]) -> Dict[str, int]:
        return {str(key): color for key, color in coloring.colors.items()}

    def coloring_to_json(self, coloring: Union[VertexColoring, ArcColoring]) -> str:
        return json.dumps(self.coloring_to_dict(coloring), indent=2)

    def digraph_to_dot(self, graph: OrientedDigraph, name: str = "G",
                       vertex_coloring: Optional[VertexColoring] = None,
                       arc_coloring: Optional[ArcColoring] = None) -> str:
        lines = [f"digraph {name} {{"]
        for vertex in graph.vertices:
            if vertex_coloring is not None and vertex in vertex_coloring.colors:
                lines.append(f'   {_quote(vertex)} [ label = {_quote(f"{vertex}:{vertex_coloring[vertex]}")} ];')
            else:
                lines.append(f"   {_quote(vertex)};")
        for arc_id, (tail, head) in enumerate(graph.arcs):
            line = f"   {_quote(tail)} -> {_quote(head)}"
            if arc_coloring is not None and arc_id in arc_coloring.colors:
                line += f" [ label = {arc_coloring[arc_id]} ]"
            lines.append(line + ";")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def color_graph_to_dot(self, color_graph: ColorGraph, name: str = "H") -> str:
        lines = [f"digraph {name} {{"]
        for label in color_graph.label_set():
            lines.append(f'   "{label}";')
        for tail, head in color_graph.arc_list():
            lines.append(f'   "{tail}" -> "{head}";')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def save(self, text: str, path: Union[str, Path]) -> str:
        """Write ``text`` to ``path``, creating parent directories."""
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding='utf-8')
        self.logger.info(f"Wrote {target}")
        return str(target)
