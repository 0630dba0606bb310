"""Golden summary-table data: the published codimensions and polarization
regions for every block, as exact formulas in n.

``expected_region`` returns ("point", value), ("interval", lo, hi, lo_strict,
hi_strict), ("segment", (v, w)) or ("polygon", vertices); vertices are
lexicographically sorted pairs of Fractions, matching Region.vertices.
"""

from __future__ import annotations

from fractions import Fraction as F

__all__ = ["expected_codim", "expected_region", "expected_region_vertices"]


def expected_codim(case_id: str, n: int) -> int:
    table = {
        "M(n+1,n):h0m1=0": 0,
        "M(n+2,n):omega0": 0,
        "M(n+2,n):omega1": n - 1,
        "M(4,2):omega0": 0,
        "M(4,2):omega1": 1,
        "M(n+3,n):omega0": 0,
        "M(6,3):omega0": 0,
        "M(n+3,n):omega1": n - 2,
        "M(6,3):omega1": 1,
        "M(7,4):omega2": 6,
        "M(6,3):omega2": 4,
        "M(6,3):h1=1": 4,
        "M(4,1):h1=1": 2,
        "M(5,2):h1=1": 3,
        "M(6,3):h0m1=1": 4,
        "M(n,3):h0m1=1": n - 2,
        "M(n,3):h0m1=1+ker": n - 2,
    }
    return table[case_id]


def _sorted(*verts):
    return tuple(sorted(tuple(F(x) for x in v) for v in verts))


def expected_region(case_id: str, n: int):
    if case_id == "M(n+1,n):h0m1=0":
        return ("interval", F(0), F(1, n), True, True)
    if case_id == "M(n+2,n):omega0":
        return ("interval", F(1, 2 * n), F(1, n), False, True)
    if case_id == "M(n+3,n):omega0":
        return ("interval", F(2, 3 * n), F(1, n), False, True)
    if case_id == "M(n+2,n):omega1":
        return (
            "polygon",
            _sorted(
                (0, 0),
                (F(1, n + 1), F(1, n + 1)),
                (F(1, n * n - n + 2), F(2, n * n - n + 2)),
            ),
        )
    if case_id in ("M(4,2):omega0",):
        return ("point", F(1, 2))
    if case_id in ("M(6,3):omega0",):
        return ("point", F(1, 3))
    if case_id == "M(4,2):omega1":
        return ("polygon", _sorted((0, 0), (F(1, 3), F(1, 3)), (F(1, 2), 1), (0, 1)))
    if case_id in ("M(n+3,n):omega1", "M(6,3):omega1"):
        if n == 3:
            return ("segment", _sorted((F(1, 4), F(1, 4)), (F(1, 5), F(2, 5))))
        if n == 4:
            return (
                "polygon",
                _sorted((F(1, 9), F(1, 9)), (F(1, 5), F(1, 5)), (F(1, 6), F(1, 3))),
            )
        if n == 5:
            return (
                "polygon",
                _sorted((F(1, 6), F(1, 6)), (F(1, 11), F(1, 11)), (F(1, 9), F(1, 6))),
            )
        if n == 6:
            return ("segment", _sorted((F(1, 7), F(1, 7)), (F(3, 29), F(5, 29))))
        raise ValueError(f"no published region at n={n}")
    if case_id == "M(7,4):omega2":
        return (
            "polygon",
            _sorted((0, 0), (F(1, 3), F(1, 2)), (F(17, 24), 1), (1, 1)),
        )
    if case_id == "M(6,3):omega2":
        return ("polygon", _sorted((0, 0), (F(1, 5), F(1, 5)), (F(1, 3), F(1, 2))))
    if case_id in ("M(6,3):h1=1", "M(4,1):h1=1", "M(5,2):h1=1"):
        return ("interval", F(0), F(1, n + 1), True, True)
    if case_id == "M(6,3):h0m1=1":
        return ("interval", F(0), F(1, 4), True, True)
    if case_id in ("M(n,3):h0m1=1", "M(n,3):h0m1=1+ker"):
        return (
            "polygon",
            _sorted((0, 0), (F(1, n), F(1, n)), (F(1, n - 2), F(1, n - 3))),
        )
    raise KeyError(case_id)


def expected_region_vertices(case_id: str, n: int):
    """Closure vertex set of the published region, matching Region.vertices."""
    data = expected_region(case_id, n)
    if data[0] == "point":
        return ((data[1],),)
    if data[0] == "interval":
        return tuple(sorted([(data[1],), (data[2],)]))
    return data[1]
