"""
Taffin Cartan Catalog

Standard finite and affine simply-laced Cartan matrices and brute-force
enumeration of their diagram automorphisms.
"""
import itertools
import re
from typing import List, Sequence, Tuple

Matrix = List[List[int]]


def _from_edges(size: int, edges: Sequence[Tuple[int, int]]) -> Matrix:
    a = [[2 if i == j else 0 for j in range(size)] for i in range(size)]
    for i, j in edges:
        a[i][j] = a[j][i] = -1
    return a


def type_a(n: int) -> Matrix:
    return _from_edges(n, [(i, i + 1) for i in range(n - 1)])


def type_d(n: int) -> Matrix:
    """Path 0..n-2 with node n-1 attached to n-3"""
    if n < 4:
        raise ValueError("D_n needs n >= 4")
    edges = [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    return _from_edges(n, edges)


def type_e6() -> Matrix:
    """Bourbaki labelling 1-3-4-5-6 with 2 attached to 4"""
    return _from_edges(6, [(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)])


def type_a_affine(l: int) -> Matrix:
    """A_l^(1): cycle on l+1 nodes, l >= 2"""
    if l < 2:
        raise ValueError("A_l^(1) is simply laced only for l >= 2")
    n = l + 1
    return _from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def type_d4_affine() -> Matrix:
    """Center 0 with leaves 1..4"""
    return _from_edges(5, [(0, k) for k in range(1, 5)])


def cartan_type(name: str) -> Matrix:
    """
    Matrix for a catalog name such as "A3", "D5", "E6", "A2^(1)", "D4^(1)".

    Raises:
        ValueError: unknown name
    """
    m = re.fullmatch(r"([ADE])(\d+)(\^\(1\))?", name.strip())
    if not m:
        raise ValueError(f"Unknown Cartan type {name!r}")
    letter, rank, affine = m.group(1), int(m.group(2)), bool(m.group(3))
    if affine:
        if letter == "A":
            return type_a_affine(rank)
        if letter == "D" and rank == 4:
            return type_d4_affine()
    elif letter == "A":
        return type_a(rank)
    elif letter == "D":
        return type_d(rank)
    elif letter == "E" and rank == 6:
        return type_e6()
    raise ValueError(f"Cartan type {name!r} is not in the catalog")


def diagram_automorphisms(a: Matrix) -> List[Tuple[int, ...]]:
    """All permutations p with a[i][j] == a[p[i]][p[j]], identity first"""
    n = len(a)
    found = []
    for perm in itertools.permutations(range(n)):
        if all(a[i][j] == a[perm[i]][perm[j]] for i in range(n) for j in range(n)):
            found.append(perm)
    return found


FINITE_TYPES = ("A1", "A2", "A3", "A4", "A5", "D4", "D5", "E6")
AFFINE_TYPES = ("A2^(1)", "A3^(1)", "A4^(1)", "D4^(1)")
