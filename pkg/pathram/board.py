"""
Game board: a coloured forest with component tracking
"""

import logging
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx
from networkx.utils import UnionFind

from .exceptions import CycleViolationError, InvariantViolationError, WalkValidationError

logger = logging.getLogger(__name__)


class GameBoard:
    """Forest built by Builder; every vertex carries the colour Painter gave it"""

    def __init__(self, colors: int):
        if colors < 1:
            raise WalkValidationError(f"Number of colours must be at least 1, got {colors}")
        self.colors = colors
        self.graph = nx.Graph()
        # weights are current only at roots
        self.components = UnionFind()

    def __len__(self) -> int:
        return self.graph.number_of_nodes()

    def color(self, vertex: int) -> int:
        return self.graph.nodes[vertex]["color"]

    def check_attachable(self, attach_to: Iterable[int]) -> List[int]:
        """Validate that the vertices exist and lie in pairwise distinct components"""
        attach_to = list(attach_to)
        roots: Set[int] = set()
        for vertex in attach_to:
            if vertex not in self.graph:
                raise WalkValidationError(f"Unknown board vertex {vertex}")
            root = self.root(vertex)
            if root in roots:
                raise CycleViolationError(
                    f"Attaching to {attach_to} would close a cycle through vertex {vertex}"
                )
            roots.add(root)
        return attach_to

    def add_vertex(self, color: int, attach_to: Sequence[int] = ()) -> int:
        """
        Add a coloured vertex joined to attach_to

        Args:
            color: Painter's colour for the vertex
            attach_to: Existing vertices in distinct components

        Returns:
            The new vertex id
        """
        if not 1 <= color <= self.colors:
            raise WalkValidationError(f"Colour {color} outside 1..{self.colors}")
        attach_to = self.check_attachable(attach_to)
        vertex = self.graph.number_of_nodes()
        self.graph.add_node(vertex, color=color)
        self.components.union(vertex, *attach_to)
        self.graph.add_edges_from((neighbor, vertex) for neighbor in attach_to)
        return vertex

    def root(self, vertex: int) -> int:
        """Representative of the component containing vertex"""
        return self.components[vertex]

    def roots(self) -> List[int]:
        return [vertex for vertex, parent in self.components.parents.items() if vertex == parent]

    def component_size(self, vertex: int) -> int:
        return self.components.weights[self.root(vertex)]

    def largest_component(self) -> int:
        return max((self.components.weights[root] for root in self.roots()), default=0)

    def longest_path_from(self, start: int, color: int) -> int:
        """Vertices on the longest path in `color` starting at start (0 if start has another colour)"""
        if self.color(start) != color:
            return 0
        nodes = self.graph.nodes
        best = 0
        stack: List[Tuple[int, Optional[int], int]] = [(start, None, 1)]
        while stack:
            vertex, came_from, depth = stack.pop()
            best = max(best, depth)
            for neighbor in self.graph.adj[vertex]:
                if neighbor != came_from and nodes[neighbor]["color"] == color:
                    stack.append((neighbor, vertex, depth + 1))
        return best

    def _farthest(self, sub: nx.Graph, source: int) -> Tuple[int, int]:
        distances = nx.single_source_shortest_path_length(sub, source)
        far = max(distances, key=lambda vertex: (distances[vertex], -vertex))
        return far, distances[far]

    def longest_monochromatic_paths(self, color: int) -> Dict[int, int]:
        """Longest path in `color` (in vertices) for each component root that contains the colour"""
        members = [vertex for vertex, value in self.graph.nodes(data="color") if value == color]
        sub = self.graph.subgraph(members)
        result: Dict[int, int] = {}
        for piece in nx.connected_components(sub):
            # diameter of a tree: two sweeps
            end, _ = self._farthest(sub, next(iter(piece)))
            _, length = self._farthest(sub, end)
            root = self.root(end)
            result[root] = max(result.get(root, 0), length + 1)
        return result

    def check_invariants(self) -> None:
        """Raise unless the board is a forest whose component sizes match the union-find"""
        if len(self) and not nx.is_forest(self.graph):
            raise InvariantViolationError("Board contains a cycle")
        pieces = list(nx.connected_components(self.graph))
        tracked = len(self.roots())
        if len(pieces) != tracked:
            raise InvariantViolationError(f"{len(pieces)} components on the board, {tracked} tracked")
        for piece in pieces:
            vertex = next(iter(piece))
            if self.component_size(vertex) != len(piece):
                raise InvariantViolationError(
                    f"Component of {vertex} has {len(piece)} vertices, tracked {self.component_size(vertex)}"
                )
