"""Shared setup for the demo scripts: puts src/ on the path and builds
the small standard realizations."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from heckekit import QQ, CoxeterSystem, Realization  # noqa: E402


def system(name):
    data = {
        "A1": (("s",), ((1,),)),
        "A1xA1": (("s", "t"), ((1, 2), (2, 1))),
        "A2": (("s", "t"), ((1, 3), (3, 1))),
        "B2": (("s", "t"), ((1, 4), (4, 1))),
        "A3": (("s", "t", "u"), ((1, 3, 2), (3, 1, 3), (2, 3, 1))),
    }
    labels, matrix = data[name]
    return CoxeterSystem(labels, matrix)


CARTAN = {
    "A1": [[2]],
    "A1xA1": [[2, 0], [0, 2]],
    "A2": [[2, -1], [-1, 2]],
    "B2": [[2, -1], [-2, 2]],
    "A3": [[2, -1, 0], [-1, 2, -1], [0, -1, 2]],
}


def realization(name, field=QQ):
    sys_ = system(name)
    cartan = CARTAN[name]
    n = sys_.rank
    coroots = [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    roots = [[cartan[j][i] for i in range(n)] for j in range(n)]
    return Realization(sys_, field, n, coroots, roots)


def banner(text):
    print()
    print("=" * 72)
    print(text)
    print("=" * 72)
