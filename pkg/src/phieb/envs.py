"""Small hard-exploration environments with tabular and factored feature maps.

Every environment exposes ``reset(seed) -> FeatureVector`` and
``step(action) -> (reward, FeatureVector, terminal)``. The feature map is
chosen at construction: ``"tabular"`` gives one id per distinct state,
``"factored"`` gives a few ids per state that are shared between states.
"""

from __future__ import annotations

import random
from pathlib import Path
from typing import Callable

from .features import FeatureVector

FEATURE_MAPS = ("tabular", "factored")


class Env:
    name = "env"
    num_actions = 0
    step_cap = 0

    def __init__(self, feature_map: str = "tabular", seed: int | None = None):
        if feature_map not in FEATURE_MAPS:
            raise ValueError(f"unknown feature map {feature_map!r}; expected one of {FEATURE_MAPS}")
        self.feature_map = feature_map
        self.rng = random.Random(seed)
        self.terminal = True

    def reset(self, seed: int | None = None) -> FeatureVector:
        if seed is not None:
            self.rng.seed(seed)
        self.terminal = False
        self._reset()
        return self.features()

    def step(self, action: int) -> tuple[float, FeatureVector, bool]:
        if self.terminal:
            raise RuntimeError(f"{self.name}: step() called on a terminal or un-reset environment")
        if not 0 <= action < self.num_actions:
            raise IndexError(f"{self.name}: action {action} out of range")
        reward, done = self._step(action)
        self.terminal = done
        return reward, self.features(), done

    def features(self) -> FeatureVector:
        if self.feature_map == "tabular":
            return self.features_tabular()
        return self.features_factored()

    def _reset(self) -> None:
        raise NotImplementedError

    def _step(self, action: int) -> tuple[float, bool]:
        raise NotImplementedError

    def features_tabular(self) -> FeatureVector:
        raise NotImplementedError

    def features_factored(self) -> FeatureVector:
        raise NotImplementedError


class SparseChain(Env):
    """A chain of ``length`` cells; only reaching the last cell pays 1.0.

    RIGHT advances one cell but slips back one cell with probability ``slip``.
    LEFT returns to cell 0. A uniform-random walker therefore needs a long run
    of successful RIGHTs, which it almost never gets.
    """

    name = "sparse_chain"
    num_actions = 2
    LEFT, RIGHT = 0, 1

    def __init__(self, length: int = 20, slip: float = 0.1, step_cap: int = 200,
                 feature_map: str = "tabular", seed: int | None = None):
        super().__init__(feature_map, seed)
        if length < 2:
            raise ValueError("chain needs at least two cells")
        self.length = length
        self.slip = slip
        self.step_cap = step_cap
        self.cell = 0

    def _reset(self) -> None:
        self.cell = 0

    def _step(self, action: int) -> tuple[float, bool]:
        if action == self.LEFT:
            self.cell = 0
        elif self.rng.random() < self.slip:
            self.cell = max(0, self.cell - 1)
        else:
            self.cell += 1
        if self.cell == self.length - 1:
            return 1.0, True
        return 0.0, False

    def features_tabular(self) -> FeatureVector:
        return FeatureVector._trusted((self.cell,))

    def features_factored(self) -> FeatureVector:
        # coarse block of 5 cells plus position within the block
        return FeatureVector._trusted((self.cell % 5, 5 + self.cell // 5))


DEFAULT_ROOMS = """\
###################
#S.......#........#
#........#........#
#........#........#
#........D........#
#........#........#
#........#........#
#........#........#
#.......K#........#
####D#########D####
#........#........#
#........#........#
#........#........#
#........#........#
#........D........#
#........#........#
#........#........#
#........#.......G#
###################
"""


class KeyedRooms(Env):
    """Rooms joined by doors that stay locked until the key is picked up.

    The layout is a character grid: ``#`` wall, ``.`` floor, ``K`` key,
    ``D`` door, ``S`` start, ``G`` goal. Rooms are the connected floor regions
    once doors are removed; door cells get a room id of their own.
    """

    name = "keyed_rooms"
    num_actions = 4
    MOVES = ((-1, 0), (1, 0), (0, -1), (0, 1))  # UP, DOWN, LEFT, RIGHT

    def __init__(self, layout: str = DEFAULT_ROOMS, step_cap: int = 500,
                 feature_map: str = "factored", seed: int | None = None):
        super().__init__(feature_map, seed)
        self.step_cap = step_cap
        rows = [line for line in layout.splitlines() if line.strip()]
        width = max(len(r) for r in rows)
        self.grid = [r.ljust(width, "#") for r in rows]
        self.height, self.width = len(self.grid), width
        self.start = self.key = self.goal = None
        for r, line in enumerate(self.grid):
            for c, ch in enumerate(line):
                if ch not in "#.KDSG":
                    raise ValueError(f"unknown layout character {ch!r} at ({r}, {c})")
                if ch in "SKG":
                    pos = (r, c)
                    attr = {"S": "start", "K": "key", "G": "goal"}[ch]
                    if getattr(self, attr) is not None:
                        raise ValueError(f"layout has more than one {ch!r}")
                    setattr(self, attr, pos)
        if self.start is None or self.goal is None or self.key is None:
            raise ValueError("layout needs exactly one S, K and G")
        self.room = self._label_rooms()
        self.num_rooms = 1 + max(self.room.values())
        self.pos = self.start
        self.has_key = False

    @classmethod
    def from_file(cls, path: str | Path, **kwargs) -> KeyedRooms:
        return cls(Path(path).read_text(), **kwargs)

    def _label_rooms(self) -> dict[tuple[int, int], int]:
        room: dict[tuple[int, int], int] = {}
        label = 0
        for r in range(self.height):
            for c in range(self.width):
                if self.grid[r][c] in "#D" or (r, c) in room:
                    continue
                stack = [(r, c)]
                room[(r, c)] = label
                while stack:
                    y, x = stack.pop()
                    for dy, dx in self.MOVES:
                        q = (y + dy, x + dx)
                        if (0 <= q[0] < self.height and 0 <= q[1] < self.width
                                and self.grid[q[0]][q[1]] not in "#D" and q not in room):
                            room[q] = label
                            stack.append(q)
                label += 1
        doorway = label
        for r in range(self.height):
            for c in range(self.width):
                if self.grid[r][c] == "D":
                    room[(r, c)] = doorway
        return room

    def passable(self, pos: tuple[int, int], has_key: bool) -> bool:
        r, c = pos
        if not (0 <= r < self.height and 0 <= c < self.width):
            return False
        ch = self.grid[r][c]
        return ch != "#" and (ch != "D" or has_key)

    def _reset(self) -> None:
        self.pos = self.start
        self.has_key = False

    def _step(self, action: int) -> tuple[float, bool]:
        dy, dx = self.MOVES[action]
        nxt = (self.pos[0] + dy, self.pos[1] + dx)
        if self.passable(nxt, self.has_key):
            self.pos = nxt
        if self.pos == self.key:
            self.has_key = True
        if self.pos == self.goal:
            return 1.0, True
        return 0.0, False

    def features_tabular(self) -> FeatureVector:
        r, c = self.pos
        return FeatureVector._trusted(((self.has_key * self.height + r) * self.width + c,))

    def features_factored(self) -> FeatureVector:
        r, c = self.pos
        h, w = self.height, self.width
        base = h + w
        return FeatureVector._trusted(
            (r, h + c, base + self.room[self.pos], base + self.num_rooms + self.has_key)
        )

    def feature_ids(self) -> range:
        if self.feature_map == "tabular":
            return range(2 * self.height * self.width)
        return range(self.height + self.width + self.num_rooms + 2)

    def shortest_success(self) -> int:
        """Breadth-first length of the shortest start -> key -> goal trajectory."""
        from collections import deque

        start = (self.start, self.start == self.key)
        dist = {start: 0}
        queue = deque([start])
        while queue:
            pos, key = queue.popleft()
            if pos == self.goal:
                return dist[(pos, key)]
            for dy, dx in self.MOVES:
                q = (pos[0] + dy, pos[1] + dx)
                if not self.passable(q, key):
                    q = pos
                nk = key or q == self.key
                if (q, nk) not in dist:
                    dist[(q, nk)] = dist[(pos, key)] + 1
                    queue.append((q, nk))
        return -1


class DenseGrid(Env):
    """Square grid paying ``reward`` on the first visit to each cell.

    ``distractors`` adds that many extra feature bits that are redrawn at
    random on every step, so the observed feature vector keeps changing even
    when the agent stands still.
    """

    name = "dense_grid"
    num_actions = 4
    MOVES = KeyedRooms.MOVES

    def __init__(self, size: int = 8, reward: float = 0.1, step_cap: int = 300,
                 distractors: int = 0, feature_map: str = "tabular", seed: int | None = None):
        super().__init__(feature_map, seed)
        self.size = size
        self.reward = reward
        self.step_cap = step_cap
        self.distractors = distractors
        self.pos = (0, 0)
        self.visited: set[tuple[int, int]] = set()
        self._noise: tuple[int, ...] = ()

    def _draw_noise(self) -> None:
        base = self.size * self.size if self.feature_map == "tabular" else 2 * self.size
        rand = self.rng.random
        self._noise = tuple(base + k for k in range(self.distractors) if rand() < 0.5)

    def _reset(self) -> None:
        self.pos = (0, 0)
        self.visited = {self.pos}
        self._draw_noise()

    def _step(self, action: int) -> tuple[float, bool]:
        dy, dx = self.MOVES[action]
        r, c = self.pos[0] + dy, self.pos[1] + dx
        if 0 <= r < self.size and 0 <= c < self.size:
            self.pos = (r, c)
        self._draw_noise()
        reward = 0.0
        if self.pos not in self.visited:
            self.visited.add(self.pos)
            reward = self.reward
        return reward, len(self.visited) == self.size * self.size

    def features_tabular(self) -> FeatureVector:
        r, c = self.pos
        return FeatureVector._trusted((r * self.size + c,) + self._noise)

    def features_factored(self) -> FeatureVector:
        r, c = self.pos
        return FeatureVector._trusted((r, self.size + c) + self._noise)


ENVIRONMENTS: dict[str, Callable[..., Env]] = {
    "sparse_chain": SparseChain,
    "keyed_rooms": KeyedRooms,
    "dense_grid": DenseGrid,
}


def make_env(name: str, **params) -> Env:
    """Build an environment by name; a ``layout_file`` param loads a KeyedRooms grid."""
    key = name.lower().replace("-", "_")
    aliases = {"sparsechain": "sparse_chain", "keyedrooms": "keyed_rooms", "densegrid": "dense_grid"}
    key = aliases.get(key, key)
    if key not in ENVIRONMENTS:
        raise KeyError(f"unknown environment {name!r}; known: {sorted(ENVIRONMENTS)}")
    params = dict(params)
    layout_file = params.pop("layout_file", None)
    if layout_file is not None:
        if key != "keyed_rooms":
            raise ValueError("layout_file only applies to keyed_rooms")
        params["layout"] = Path(layout_file).read_text()
    return ENVIRONMENTS[key](**params)
