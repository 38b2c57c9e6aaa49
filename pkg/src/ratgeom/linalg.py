"""
精确有理线性代数

基于 fractions.Fraction 的向量与矩阵运算：内积、消元、秩、求解、行列式、零空间
"""

from fractions import Fraction
from math import gcd
from typing import List, Optional, Sequence, Tuple

Rat = Fraction
QVec = Tuple[Fraction, ...]


def qvec(values: Sequence) -> QVec:
    """把任意数值序列转换为有理向量"""
    return tuple(Fraction(v) for v in values)


def zeros(n: int) -> QVec:
    return tuple(Fraction(0) for _ in range(n))


def unit(n: int, i: int) -> QVec:
    return tuple(Fraction(1 if k == i else 0) for k in range(n))


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def add(u: Sequence[Fraction], v: Sequence[Fraction]) -> QVec:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence[Fraction], v: Sequence[Fraction]) -> QVec:
    return tuple(a - b for a, b in zip(u, v))


def scale(k: Fraction, u: Sequence[Fraction]) -> QVec:
    return tuple(k * a for a in u)


def combine(coeffs: Sequence[Fraction], vectors: Sequence[Sequence[Fraction]], dim: int) -> QVec:
    """线性组合 Σ cᵢ vᵢ"""
    out = [Fraction(0)] * dim
    for c, v in zip(coeffs, vectors):
        if c:
            for i, a in enumerate(v):
                out[i] += c * a
    return tuple(out)


def is_zero(u: Sequence[Fraction]) -> bool:
    return all(a == 0 for a in u)


def mat_vec(matrix: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> QVec:
    return tuple(dot(row, v) for row in matrix)


def bilinear(matrix: Sequence[Sequence[Fraction]], u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    """uᵀ M v"""
    return dot(u, mat_vec(matrix, v))


def primitive(u: Sequence[Fraction]) -> QVec:
    """
    缩放为本原整数向量(正倍数)

    Args:
        u: 非零有理向量

    Returns:
        QVec: 同方向的本原整数向量
    """
    den = 1
    for a in u:
        den = den * a.denominator // gcd(den, a.denominator)
    ints = [int(a * den) for a in u]
    g = 0
    for a in ints:
        g = gcd(g, abs(a))
    if g == 0:
        return tuple(Fraction(0) for _ in u)
    return tuple(Fraction(a // g) for a in ints)


def rref(rows: Sequence[Sequence[Fraction]], ncols: int) -> Tuple[List[List[Fraction]], List[int]]:
    """
    行最简形

    Returns:
        (非零行, 主元列)
    """
    mat = [list(Fraction(a) for a in r) for r in rows]
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(mat)):
            if mat[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [a * inv for a in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    if not rows:
        return 0
    return len(rref(rows, len(rows[0]))[1])


def affine_rank(points: Sequence[Sequence[Fraction]], directions: Sequence[Sequence[Fraction]] = ()) -> int:
    """点集(加方向)的仿射维数；空集返回 -1"""
    if not points:
        return -1
    base = points[0]
    diffs = [sub(p, base) for p in points[1:]] + [tuple(d) for d in directions]
    return rank(diffs) if diffs else 0


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> List[QVec]:
    """齐次方程组 rows·x = 0 的零空间基"""
    if not rows:
        return [unit(ncols, i) for i in range(ncols)]
    reduced, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row, pc in zip(reduced, pivots):
            v[pc] = -row[fc]
        basis.append(tuple(v))
    return basis


def solve(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Optional[QVec]:
    """
    求解方阵线性方程组 M x = b

    Returns:
        唯一解；奇异时返回None
    """
    n = len(matrix)
    aug = [list(matrix[i]) + [Fraction(rhs[i])] for i in range(n)]
    reduced, pivots = rref(aug, n + 1)
    if len(pivots) != n or (pivots and pivots[-1] == n):
        return None
    return tuple(row[n] for row in reduced)


def det(matrix: Sequence[Sequence[Fraction]]) -> Fraction:
    """高斯消元计算行列式"""
    n = len(matrix)
    mat = [list(Fraction(a) for a in r) for r in matrix]
    result = Fraction(1)
    for c in range(n):
        pivot = None
        for i in range(c, n):
            if mat[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            mat[c], mat[pivot] = mat[pivot], mat[c]
            result = -result
        result *= mat[c][c]
        inv = 1 / mat[c][c]
        for i in range(c + 1, n):
            if mat[i][c] != 0:
                f = mat[i][c] * inv
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[c])]
    return result


def inverse(matrix: Sequence[Sequence[Fraction]]) -> Optional[List[QVec]]:
    """方阵求逆，奇异时返回None"""
    n = len(matrix)
    aug = [list(Fraction(a) for a in matrix[i]) + [Fraction(1 if j == i else 0) for j in range(n)]
           for i in range(n)]
    reduced, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(reduced) < n:
        return None
    return [tuple(row[n:]) for row in reduced]


def transpose(matrix: Sequence[Sequence[Fraction]]) -> List[QVec]:
    if not matrix:
        return []
    return [tuple(row[j] for row in matrix) for j in range(len(matrix[0]))]


def cross3(u: Sequence[Fraction], v: Sequence[Fraction]) -> QVec:
    """三维叉积"""
    return (u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0])
