#!/usr/bin/env python3
"""Regenerates the bundled maps, room annotations and scenarios in this directory.

Maps are 0.1 m per cell with one-cell walls. Room polygons run along wall
cell centers, nudged so that no free cell center lies on a shared edge.
"""

from pathlib import Path

import numpy as np
import yaml

HERE = Path(__file__).resolve().parent
RES = 0.1


class Grid:
    def __init__(self, width, height):
        self.occ = np.zeros((height, width), dtype=bool)  # [j, i], j grows with y

    def wall(self, i0, j0, i1, j1):
        """Occupies the inclusive cell rectangle."""
        self.occ[j0 : j1 + 1, i0 : i1 + 1] = True

    def clear(self, i0, j0, i1, j1):
        self.occ[j0 : j1 + 1, i0 : i1 + 1] = False

    def border(self):
        h, w = self.occ.shape
        self.wall(0, 0, w - 1, 0)
        self.wall(0, h - 1, w - 1, h - 1)
        self.wall(0, 0, 0, h - 1)
        self.wall(w - 1, 0, w - 1, h - 1)


def rect(x0, y0, x1, y1):
    return [[round(x0, 3), round(y0, 3)], [round(x1, 3), round(y0, 3)], [round(x1, 3), round(y1, 3)],
            [round(x0, 3), round(y1, 3)]]


def write_map(name, grid):
    h, w = grid.occ.shape
    image = np.where(np.flipud(grid.occ), 0, 255).astype(np.uint8)
    with open(HERE / f"{name}.pgm", "wb") as f:
        f.write(f"P5\n# {name}\n{w} {h}\n255\n".encode())
        f.write(image.tobytes())
    meta = {"image": f"{name}.pgm", "resolution": RES, "origin_x": 0.0, "origin_y": 0.0, "occupied_threshold": 0.5}
    (HERE / f"{name}.yaml").write_text(yaml.safe_dump(meta, sort_keys=False))


def write_yaml(path, data, header=None):
    text = yaml.safe_dump(data, sort_keys=False, default_flow_style=None)
    (HERE / path).write_text((header + "\n" if header else "") + text)


def door_h(name, a, b, i0, i1, j):
    """Doorway through a horizontal wall row j over cells i0..i1."""
    y = (j + 0.5) * RES
    return {"id": name, "room_a": a, "room_b": b,
            "segment": [[round((i0 + 0.5) * RES, 3), round(y, 3)], [round((i1 + 0.5) * RES, 3), round(y, 3)]]}


def door_v(name, a, b, j0, j1, i):
    """Doorway through a vertical wall column i over cells j0..j1."""
    x = (i + 0.5) * RES
    return {"id": name, "room_a": a, "room_b": b,
            "segment": [[round(x, 3), round((j0 + 0.5) * RES, 3)], [round(x, 3), round((j1 + 0.5) * RES, 3)]]}


def corridor():
    g = Grid(128, 20)
    g.border()
    write_map("corridor", g)
    write_yaml("corridor_rooms.yaml", {"rooms": [{"id": "corridor", "polygon": rect(0.1, 0.1, 12.7, 1.9)}]})
    write_yaml("scenarios/corridor.yaml", {
        "map": "../corridor.yaml", "rooms": "../corridor_rooms.yaml", "dt": 0.06, "seed": 0,
        "squads": [{"id": 1, "agents": 3, "start": {"room": "corridor", "point": [1.0, 1.0]},
                    "goal": {"room": "corridor", "point": [11.6, 1.0]}, "tactic": "FREE"}]})


def office():
    g = Grid(120, 80)
    g.border()
    g.wall(1, 19, 118, 19)  # corridor / office wall
    g.wall(40, 20, 40, 78)
    g.wall(80, 20, 80, 78)
    for i0 in (16, 56, 96):
        g.clear(i0, 19, i0 + 8, 19)
    # desks
    g.wall(8, 55, 27, 60)
    g.wall(55, 40, 60, 65)
    g.wall(90, 60, 110, 64)
    write_map("office", g)
    yc = 1.96  # just above the door cell centers, which belong to the corridor
    rooms = [
        {"id": "corridor", "polygon": rect(0.1, 0.1, 11.9, yc)},
        {"id": "office_a", "polygon": rect(0.1, yc, 4.05, 7.9)},
        {"id": "office_b", "polygon": rect(4.05, yc, 8.05, 7.9)},
        {"id": "office_c", "polygon": rect(8.05, yc, 11.9, 7.9)},
    ]
    doors = [
        door_h("door_a", "corridor", "office_a", 16, 24, 19),
        door_h("door_b", "corridor", "office_b", 56, 64, 19),
        door_h("door_c", "corridor", "office_c", 96, 104, 19),
    ]
    write_yaml("office_rooms.yaml", {"rooms": rooms, "doorways": doors})
    write_yaml("scenarios/office.yaml", {
        "map": "../office.yaml", "rooms": "../office_rooms.yaml", "dt": 0.06, "seed": 0,
        "squads": [{"id": 1, "agents": 3, "start": {"room": "corridor", "point": [0.8, 1.0]},
                    "goal": {"room": "corridor", "point": [11.2, 1.0]}, "tactic": "WALL_RHR",
                    "search": ["office_b"]}]})


def apartment():
    g = Grid(100, 100)
    g.border()
    g.wall(1, 50, 98, 50)  # living/kitchen | hall
    g.wall(1, 68, 98, 68)  # hall | bedrooms
    g.wall(60, 1, 60, 49)
    g.wall(50, 69, 50, 98)
    g.wall(75, 69, 75, 98)
    g.clear(20, 50, 28, 50)  # living - hall
    g.clear(75, 50, 83, 50)  # kitchen - hall
    g.clear(60, 10, 60, 18)  # living - kitchen
    g.clear(20, 68, 28, 68)  # bedroom - hall
    g.clear(58, 68, 66, 68)  # bath - hall
    g.clear(84, 68, 92, 68)  # study - hall
    g.wall(20, 20, 35, 30)  # table
    g.wall(85, 25, 98, 35)  # kitchen counter
    g.wall(5, 85, 25, 98)  # bed
    write_map("apartment", g)
    rooms = [
        {"id": "living", "polygon": rect(0.1, 0.1, 6.05, 5.06)},
        {"id": "kitchen", "polygon": rect(6.05, 0.1, 9.9, 5.06)},
        {"id": "hall", "polygon": rect(0.1, 5.06, 9.9, 6.86)},
        {"id": "bedroom", "polygon": rect(0.1, 6.86, 5.05, 9.9)},
        {"id": "bath", "polygon": rect(5.05, 6.86, 7.55, 9.9)},
        {"id": "study", "polygon": rect(7.55, 6.86, 9.9, 9.9)},
    ]
    doors = [
        door_h("d_living", "living", "hall", 20, 28, 50),
        door_h("d_kitchen", "kitchen", "hall", 75, 83, 50),
        door_v("d_living_kitchen", "living", "kitchen", 10, 18, 60),
        door_h("d_bedroom", "hall", "bedroom", 20, 28, 68),
        door_h("d_bath", "hall", "bath", 58, 66, 68),
        door_h("d_study", "hall", "study", 84, 92, 68),
    ]
    write_yaml("apartment_rooms.yaml", {"rooms": rooms, "doorways": doors})
    write_yaml("scenarios/apartment.yaml", {
        "map": "../apartment.yaml", "rooms": "../apartment_rooms.yaml", "dt": 0.06, "seed": 0,
        "squads": [{"id": 1, "agents": 3, "start": {"room": "hall", "point": [0.8, 5.9]},
                    "goal": {"room": "kitchen", "point": [7.5, 1.0]}, "tactic": "WALL_LHR",
                    "search": ["bedroom"]}]})


def loop():
    g = Grid(400, 200)
    g.border()
    g.wall(19, 19, 380, 180)  # central block
    g.wall(200, 1, 200, 18)  # partition in the south corridor
    write_map("loop", g)
    # Virtual doorways cross the side corridors away from the corners, so each
    # corner turn lies inside a room.
    rooms = [
        {"id": "south_west", "polygon": [[0.1, 0.1], [20.0, 0.1], [20.0, 1.9], [1.9, 1.9], [1.9, 5.0], [0.1, 5.0]]},
        {"id": "south_east", "polygon": [[20.1, 0.1], [39.9, 0.1], [39.9, 5.0], [38.1, 5.0], [38.1, 1.9], [20.1, 1.9]]},
        {"id": "east", "polygon": rect(38.1, 5.0, 39.9, 15.0)},
        {"id": "north", "polygon": [[38.1, 15.0], [39.9, 15.0], [39.9, 19.9], [0.1, 19.9], [0.1, 15.0], [1.9, 15.0],
                                    [1.9, 18.1], [38.1, 18.1]]},
        {"id": "west", "polygon": rect(0.1, 5.0, 1.9, 15.0)},
    ]
    doors = [
        {"id": "se_e", "room_a": "south_east", "room_b": "east", "segment": [[38.15, 5.0], [39.85, 5.0]]},
        {"id": "e_n", "room_a": "east", "room_b": "north", "segment": [[38.15, 15.0], [39.85, 15.0]]},
        {"id": "n_w", "room_a": "north", "room_b": "west", "segment": [[0.15, 15.0], [1.85, 15.0]]},
        {"id": "w_sw", "room_a": "west", "room_b": "south_west", "segment": [[0.15, 5.0], [1.85, 5.0]]},
    ]
    write_yaml("loop_rooms.yaml", {"rooms": rooms, "doorways": doors})
    write_yaml("scenarios/loop.yaml", {
        "map": "../loop.yaml", "rooms": "../loop_rooms.yaml", "dt": 0.06, "seed": 0,
        "squads": [{"id": 1, "agents": 3, "start": {"room": "south_east", "point": [21.0, 1.0]},
                    "goal": {"room": "south_west", "point": [19.0, 1.0]}, "tactic": "WALL_LHR"}]})


def main():
    (HERE / "scenarios").mkdir(exist_ok=True)
    corridor()
    office()
    apartment()
    loop()


if __name__ == "__main__":
    main()
