import numpy as np


def random_hole_layout(rng, min_side=5, max_side=19, max_holes=9, attempts=400, num_holes=None):
    """Random grid size and well-separated cell-aligned holes.

    Coordinates are grid units (bounds ``(0, 0, cols - 1, rows - 1)``). Holes
    keep a gap of at least one cell from each other and from the border; fewer
    than requested are returned if they do not fit.
    """
    rows = int(rng.integers(min_side, max_side + 1))
    cols = int(rng.integers(min_side, max_side + 1))
    want = int(rng.integers(0, max_holes + 1)) if num_holes is None else num_holes
    holes = []
    for _ in range(attempts):
        if len(holes) == want:
            break
        w, h = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        if cols - 2 - w < 1 or rows - 2 - h < 1:
            continue
        x = int(rng.integers(1, cols - 1 - w))
        y = int(rng.integers(1, rows - 1 - h))
        cand = (x, y, x + w, y + h)
        if all(cand[2] + 1 <= o[0] or o[2] + 1 <= cand[0] or cand[3] + 1 <= o[1] or o[3] + 1 <= cand[1]
               for o in holes):
            holes.append(cand)
    return rows, cols, holes


def random_walk(surface, rng, start, steps):
    nodes = [start]
    for _ in range(steps):
        nb = surface.neighbors(nodes[-1])
        nodes.append(int(nb[rng.integers(len(nb))]))
    return nodes
