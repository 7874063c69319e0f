"""
Builder-versus-Painter simulation on forests

Builder keeps, per colour s, a list T_s of trees where T_(s,j) holds a monochromatic
P_j in colour s with one path end as anchor. Each step joins a new vertex to fresh
copies of the two listed trees per colour whose sizes sum to the least.
"""

import logging
import random
from typing import Iterator, List, NamedTuple, Optional, Sequence, Tuple

from .board import GameBoard
from .exceptions import InvariantViolationError, TerminalPositionError, WalkValidationError
from .models import (
    GameResult,
    GameSnapshot,
    InvariantVerdict,
    PainterView,
    StrategyWalk,
    Targets,
    TranscriptEntry,
)
from .walks import choose_color

logger = logging.getLogger(__name__)


class TreeTemplate(NamedTuple):
    """A tree Builder can copy: vertex colours, earlier neighbours per vertex, and its path"""
    colors: Tuple[int, ...]
    neighbors: Tuple[Tuple[int, ...], ...]
    path: Tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.colors)


NULL_TREE = TreeTemplate(colors=(), neighbors=(), path=())


def longest_completed_paths(board: GameBoard, attach_to: Sequence[int], targets: Sequence[int]) -> PainterView:
    """
    Longest monochromatic path each colour would complete at a new vertex joined to attach_to

    Args:
        board: Current board
        attach_to: Neighbours of the new vertex, one per component
        targets: (l_1, ..., l_r) used for clamping

    Returns:
        PainterView with lambda'_s = 1 + the two longest colour-s paths ending at neighbours
    """
    attach_to = board.check_attachable(attach_to)
    raw = []
    for color in range(1, board.colors + 1):
        arms = sorted((board.longest_path_from(vertex, color) for vertex in attach_to), reverse=True)
        raw.append(1 + sum(arms[:2]))
    clamped = tuple(min(value, ell) for value, ell in zip(raw, targets))
    return PainterView(raw=tuple(raw), clamped=clamped)


class Painter:
    """Base class for deterministic Painter strategies"""

    name = "painter"

    def decide(self, view: PainterView) -> int:
        raise NotImplementedError


class StrategyPainter(Painter):
    """Painter A_alpha: colour alpha_(i+1) where the walk leaves the box [1, lambda]"""

    name = "strategy"

    def __init__(self, walk: StrategyWalk):
        self.walk = walk

    def decide(self, view: PainterView) -> int:
        _, color = choose_color(self.walk, view.clamped)
        return color


class GreedyPainter(Painter):
    """Highest-numbered colour that does not complete its forbidden path, else colour 1"""

    name = "greedy"

    def __init__(self, targets: Sequence[int]):
        self.targets = tuple(targets)

    def decide(self, view: PainterView) -> int:
        for color in range(len(self.targets), 0, -1):
            if view.raw[color - 1] < self.targets[color - 1]:
                return color
        return 1


class RandomPainter(Painter):
    """Seeded Painter whose colour depends only on (seed, lambda')"""

    name = "random"

    def __init__(self, colors: int, seed: int = 0):
        self.colors = colors
        self.seed = seed

    def decide(self, view: PainterView) -> int:
        rng = random.Random(f"{self.seed}:{view.raw}")
        return rng.randint(1, self.colors)


def painter_decide(painter: Painter, view: PainterView) -> int:
    """Colour chosen by painter; A_alpha raises TerminalPositionError when lambda equals the targets"""
    color = painter.decide(view)
    if not 1 <= color <= len(view.raw):
        raise InvariantViolationError(f"{painter.name} painter chose colour {color}")
    return color


def _cheapest_split(trees: List[TreeTemplate]) -> Tuple[int, int]:
    """(j1, j2) with j1 + j2 = len(trees) - 1 minimising the size sum, smallest j1 on ties"""
    last = len(trees) - 1
    return min(
        ((j, last - j) for j in range((last + 2) // 2)),
        key=lambda pair: trees[pair[0]].size + trees[pair[1]].size,
    )


class _Builder:
    """Builder's lists T_s and the materialisation of tree copies"""

    def __init__(self, targets: Targets, board: GameBoard, transcript: Optional[List[TranscriptEntry]]):
        self.targets = targets
        self.board = board
        self.transcript = transcript
        self.trees: List[List[TreeTemplate]] = [[NULL_TREE] for _ in targets]

    @property
    def position(self) -> Tuple[int, ...]:
        return tuple(len(trees) for trees in self.trees)

    def plan(self) -> List[Tuple[TreeTemplate, TreeTemplate]]:
        pairs = []
        for trees in self.trees:
            j1, j2 = _cheapest_split(trees)
            pairs.append((trees[j1], trees[j2]))
        return pairs

    def place(self, color: int, attach_to: Sequence[int], copy: bool) -> int:
        vertex = self.board.add_vertex(color, attach_to)
        if self.transcript is not None:
            self.transcript.append(TranscriptEntry(
                new_vertex=vertex,
                edges=[(neighbor, vertex) for neighbor in attach_to],
                color=color,
                component_size=self.board.component_size(vertex),
                copy_of_tree=copy,
            ))
        return vertex

    def materialise(self, tree: TreeTemplate) -> List[int]:
        """Place a fresh copy of tree; returns board ids in template order"""
        ids: List[int] = []
        for color, earlier in zip(tree.colors, tree.neighbors):
            ids.append(self.place(color, [ids[index] for index in earlier], copy=True))
        return ids

    def step(self, pairs: List[Tuple[TreeTemplate, TreeTemplate]]) -> Tuple[List[int], List[List[Tuple[int, ...]]], TreeTemplate]:
        """Copy the planned trees; returns board anchors, local paths per colour and the
        combined template, whose last neighbour entry belongs to the new vertex"""
        colors: List[int] = []
        neighbors: List[Tuple[int, ...]] = []
        anchors: List[int] = []
        local_anchors: List[int] = []
        paths: List[List[Tuple[int, ...]]] = []
        for pair in pairs:
            color_paths = []
            for tree in pair:
                offset = len(colors)
                ids = self.materialise(tree)
                colors.extend(tree.colors)
                neighbors.extend(tuple(offset + index for index in earlier) for earlier in tree.neighbors)
                color_paths.append(tuple(offset + index for index in tree.path))
                if tree.path:
                    anchors.append(ids[tree.path[0]])
                    local_anchors.append(offset + tree.path[0])
            paths.append(color_paths)
        combined = TreeTemplate(
            colors=tuple(colors),
            neighbors=tuple(neighbors) + (tuple(local_anchors),),
            path=(),
        )
        return anchors, paths, combined

    def record(self, color: int, combined: TreeTemplate, paths: List[List[Tuple[int, ...]]]) -> None:
        new_local = len(combined.colors)
        first, second = paths[color - 1]
        path = tuple(reversed(first)) + (new_local,) + second
        self.trees[color - 1].append(TreeTemplate(
            colors=combined.colors + (color,),
            neighbors=combined.neighbors,
            path=path,
        ))


def _check_game_targets(targets: Sequence[int]) -> Targets:
    targets = tuple(int(ell) for ell in targets)
    if not targets:
        raise WalkValidationError("Targets must name at least one colour")
    for color, ell in enumerate(targets, start=1):
        if ell < 1:
            raise WalkValidationError(f"Target l_{color}={ell} must be at least 1")
    return targets


def iter_game(
    targets: Sequence[int],
    painter: Painter,
    cap: Optional[int] = None,
    transcript: Optional[List[TranscriptEntry]] = None,
) -> Iterator[GameSnapshot]:
    """
    Play Builder's strategy against painter, yielding the board after each step

    Args:
        targets: (l_1, ..., l_r)
        painter: Deterministic Painter
        cap: Tree size restriction; the game halts before a step would exceed it
        transcript: List receiving one TranscriptEntry per placed vertex

    Yields:
        GameSnapshot per Builder step; the last one is final or halted
    """
    targets = _check_game_targets(targets)
    board = GameBoard(len(targets))
    builder = _Builder(targets, board, transcript)
    guard = sum(ell - 1 for ell in targets) + 1

    for step in range(guard + 1):
        if step == guard:
            raise InvariantViolationError(f"Game did not end within {guard} steps for targets {targets}")
        position = builder.position
        pairs = builder.plan()
        tree_size = 1 + sum(first.size + second.size for first, second in pairs)
        if cap is not None and tree_size > cap:
            logger.debug(f"Halting before step {step}: tree of {tree_size} vertices exceeds cap {cap}")
            yield GameSnapshot(step=step, position=position, tree_size=tree_size, halted=True, board=board)
            return

        anchors, paths, combined = builder.step(pairs)
        view = longest_completed_paths(board, anchors, targets)
        try:
            color = painter_decide(painter, view)
        except TerminalPositionError:
            color = 1
        vertex = builder.place(color, anchors, copy=False)
        final = view.raw[color - 1] >= targets[color - 1]
        if not final:
            builder.record(color, combined, paths)
        yield GameSnapshot(
            step=step,
            position=position,
            view=view,
            color=color,
            vertex=vertex,
            tree_size=board.component_size(vertex),
            final=final,
            board=board,
        )
        if final:
            logger.debug(f"Colour {color} completed P_{view.raw[color - 1]} at step {step}")
            return


def run_game(
    targets: Sequence[int],
    painter: Painter,
    cap: Optional[int] = None,
    record_transcript: bool = False,
) -> GameResult:
    """Run iter_game to the end and summarise it"""
    targets = _check_game_targets(targets)
    transcript: Optional[List[TranscriptEntry]] = [] if record_transcript else None
    decisions: List[int] = []
    tree_sizes: List[int] = []
    last: Optional[GameSnapshot] = None
    steps = 0
    for snapshot in iter_game(targets, painter, cap=cap, transcript=transcript):
        last = snapshot
        if snapshot.halted:
            break
        steps += 1
        tree_sizes.append(snapshot.tree_size)
        if not snapshot.final:
            decisions.append(snapshot.color)

    if last is None:
        raise InvariantViolationError("Game produced no steps")
    won = last.final
    return GameResult(
        targets=targets,
        decisions=decisions,
        tree_sizes=tree_sizes,
        outcome="builder_wins" if won else "cap_respected",
        losing_color=last.color if won else None,
        final_path_length=last.view.raw[last.color - 1] if won else None,
        largest_component=last.board.largest_component(),
        steps=steps,
        cap=cap,
        transcript=transcript or [],
    )


def check_strategy_invariant(
    snapshots: Iterator[GameSnapshot], x_sequences: Sequence[Sequence[int]]
) -> InvariantVerdict:
    """
    Check that every monochromatic P_t in colour s lies in a component of at least x_(s,t) vertices

    Args:
        snapshots: Stream from iter_game with a StrategyPainter
        x_sequences: x_1, ..., x_r from evaluate on the painter's walk

    Returns:
        InvariantVerdict with the first violation, if any; final steps are not checked
    """
    # running maxima tolerate perturbed (non-monotone) sequences
    required_at = []
    for xs in x_sequences:
        running, peak = [], 0
        for value in xs:
            peak = max(peak, value)
            running.append(peak)
        required_at.append(running)

    checked = 0
    for snapshot in snapshots:
        if snapshot.final or snapshot.halted:
            continue
        board: GameBoard = snapshot.board
        for color in range(1, board.colors + 1):
            required = required_at[color - 1]
            for root, length in board.longest_monochromatic_paths(color).items():
                need = required[min(length, len(required) - 1)]
                size = board.component_size(root)
                if size < need:
                    return InvariantVerdict(
                        passed=False,
                        steps_checked=checked,
                        step=snapshot.step,
                        color=color,
                        path_length=length,
                        component_size=size,
                        required=need,
                    )
        checked += 1
    return InvariantVerdict(passed=True, steps_checked=checked)
