"""Known first terms |I_n(p)|, n = 1..8, for the thirteen length-3 patterns."""

from __future__ import annotations

from .core import Word

KNOWN_LENGTH3: dict[Word, tuple[int, ...]] = {
    (0, 1, 2): (1, 2, 5, 17, 70, 349, 2017, 13358),
    (0, 2, 1): (1, 2, 6, 23, 107, 585, 3671, 25986),
    (1, 0, 2): (1, 2, 6, 22, 96, 492, 2902, 19350),
    (1, 2, 0): (1, 2, 6, 23, 107, 582, 3622, 25369),
    (2, 0, 1): (1, 2, 6, 24, 118, 684, 4548, 34036),
    (2, 1, 0): (1, 2, 6, 24, 118, 684, 4554, 34192),
    (0, 0, 0): (1, 2, 5, 19, 91, 531, 3641, 28673),
    (0, 0, 1): (1, 2, 4, 11, 42, 210, 1292, 9352),
    (0, 1, 0): (1, 2, 5, 17, 76, 417, 2701, 20199),
    (0, 1, 1): (1, 2, 5, 17, 75, 407, 2621, 19524),
    (1, 0, 0): (1, 2, 6, 23, 109, 618, 4098, 31173),
    (1, 1, 0): (1, 2, 6, 23, 109, 618, 4098, 31173),
    (1, 0, 1): (1, 2, 6, 23, 109, 619, 4113, 31352),
}
