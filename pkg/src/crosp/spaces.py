"""Catalog and geometry of the compact rank-one symmetric spaces Q(d, d0).

Covers point representations, geodesic and chordal metrics, the canonical
embedding into a Euclidean sphere, ball volumes, the invariance-principle
constant gamma(Q), the mean chordal distance, and uniform sampling.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import algebra
from .errors import ConsistencyError, DomainError, UnsupportedSpaceError
from .specfun import beta, reg_inc_beta

__all__ = [
    "Family",
    "SpaceSpec",
    "Point",
    "PointSet",
    "RadiusMeasure",
    "make_space",
    "parse_space",
    "catalog",
    "geodesic",
    "chordal",
    "embed",
    "ball_volume",
    "gamma_const",
    "avg_chordal",
    "sample_uniform",
    "chart_point_oct",
    "cos_geodesic_matrix",
    "cos_geodesic_pairs",
    "geodesic_matrix",
]


class Family(enum.Enum):
    """Space families, with the short codes used in the JSON formats."""

    SPHERE = "s"
    REAL_PROJ = "rp"
    COMPLEX_PROJ = "cp"
    QUAT_PROJ = "hp"
    OCT_PROJ = "op"


_D0 = {
    Family.REAL_PROJ: 1,
    Family.COMPLEX_PROJ: 2,
    Family.QUAT_PROJ: 4,
    Family.OCT_PROJ: 8,
}


@dataclass(frozen=True)
class SpaceSpec:
    """A catalog entry identifying the space Q(d, d0)."""

    family: Family
    n: int
    d: int
    d0: int
    m: int

    @property
    def code(self) -> str:
        return f"{self.family.value}{self.n}"

    def __str__(self) -> str:
        return self.code


def make_space(family, n: int) -> SpaceSpec:
    """Build the SpaceSpec for the given family and projective dimension n."""
    if isinstance(family, str):
        try:
            family = Family(family.lower())
        except ValueError:
            raise UnsupportedSpaceError(f"unknown family {family!r}") from None
    if n < 1 or n != int(n):
        raise UnsupportedSpaceError(f"projective dimension must be a positive integer, got {n}")
    n = int(n)
    if family is Family.SPHERE:
        return SpaceSpec(family, n, n, n, n + 1)
    if family is Family.OCT_PROJ and n != 2:
        raise UnsupportedSpaceError("the octonionic projective space exists only for n = 2")
    d0 = _D0[family]
    d = n * d0
    m = (n + 1) * (d + 2) // 2
    return SpaceSpec(family, n, d, d0, m)


def parse_space(code: str) -> SpaceSpec:
    """Parse a code like 's2', 'rp2', 'cp2', 'hp2', 'op2'."""
    code = code.strip().lower()
    for fam in Family:
        pref = fam.value
        if code.startswith(pref) and code[len(pref):].isdigit():
            return make_space(fam, int(code[len(pref):]))
    raise UnsupportedSpaceError(f"cannot parse space code {code!r}")


def catalog() -> list[SpaceSpec]:
    """The seven default spaces."""
    return [
        make_space(Family.SPHERE, 1),
        make_space(Family.SPHERE, 2),
        make_space(Family.SPHERE, 3),
        make_space(Family.REAL_PROJ, 2),
        make_space(Family.COMPLEX_PROJ, 2),
        make_space(Family.QUAT_PROJ, 2),
        make_space(Family.OCT_PROJ, 2),
    ]


@dataclass(frozen=True)
class Point:
    """A point of Q: a unit representative vector, or a Jordan idempotent.

    Spheres store a unit vector of length d + 1.  The R/C/H projective spaces
    store a unit representative in F^{n+1} as an (n+1, d0) real array (the
    class is taken modulo a unit scalar).  The octonionic plane stores the
    3 x 3 Hermitian idempotent itself, shape (3, 3, 8).
    """

    space: SpaceSpec
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)
        self.validate()

    def validate(self):
        fam = self.space.family
        if fam is Family.SPHERE:
            if self.data.shape != (self.space.d + 1,):
                raise DomainError(f"sphere point must have shape ({self.space.d + 1},)")
            if abs(np.linalg.norm(self.data) - 1) > 1e-12:
                raise DomainError("sphere point is not on the unit sphere")
        elif fam is Family.OCT_PROJ:
            P = self.data
            if P.shape != (3, 3, 8):
                raise DomainError("octonionic point must have shape (3, 3, 8)")
            herm = algebra.cd_conj(P).transpose(1, 0, 2)
            if np.max(np.abs(P - herm)) > 1e-10:
                raise DomainError("octonionic point matrix is not Hermitian")
            if abs(P[0, 0, 0] + P[1, 1, 0] + P[2, 2, 0] - 1) > 1e-10:
                raise DomainError("octonionic point matrix must have trace 1")
            sq = _oct_mat_mul(P, P)
            if np.max(np.abs(sq - P)) > 1e-10:
                raise DomainError("octonionic point matrix is not idempotent")
        else:
            if self.data.shape != (self.space.n + 1, self.space.d0):
                raise DomainError(
                    f"projective point must have shape ({self.space.n + 1}, {self.space.d0})"
                )
            if abs(np.linalg.norm(self.data) - 1) > 1e-12:
                raise DomainError("projective representative must have unit norm")

    @property
    def flat(self) -> np.ndarray:
        return self.data.reshape(-1)


@dataclass(frozen=True)
class PointSet:
    """An ordered finite collection of points of one space."""

    space: SpaceSpec
    points: np.ndarray = field(repr=False)  # stacked, shape (N, ...) per family
    label: str = ""

    def __post_init__(self):
        arr = np.asarray(self.points, dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "points", arr)
        if arr.size and arr.shape[1:] != _point_shape(self.space):
            raise DomainError(
                f"point array shape {arr.shape[1:]} does not match space {self.space}"
            )

    def __len__(self) -> int:
        return 0 if self.points.size == 0 else self.points.shape[0]

    def __getitem__(self, i) -> Point:
        return Point(self.space, self.points[i])

    @classmethod
    def from_points(cls, space: SpaceSpec, pts, label: str = "") -> "PointSet":
        rows = []
        for p in pts:
            if isinstance(p, Point):
                if p.space != space:
                    raise DomainError("mixed spaces in point set")
                rows.append(p.data)
            else:
                rows.append(Point(space, np.asarray(p, float)).data)
        if not rows:
            return cls(space, np.zeros((0,) + _point_shape(space)), label)
        return cls(space, np.stack(rows), label)


def _point_shape(space: SpaceSpec):
    if space.family is Family.SPHERE:
        return (space.d + 1,)
    if space.family is Family.OCT_PROJ:
        return (3, 3, 8)
    return (space.n + 1, space.d0)


@dataclass(frozen=True)
class RadiusMeasure:
    """A finite measure on the radius interval [0, pi].

    The canonical choice has density sin(r) dr (total mass 2); any other
    measure is a finite nonnegative quadrature combination of point masses.
    """

    kind: str  # "sine" | "quadrature"
    nodes: tuple = ()
    weights: tuple = ()

    def __post_init__(self):
        if self.kind not in ("sine", "quadrature"):
            raise DomainError(f"unknown measure kind {self.kind!r}")
        if self.kind == "quadrature":
            nodes = np.asarray(self.nodes, float)
            weights = np.asarray(self.weights, float)
            if nodes.shape != weights.shape:
                raise DomainError("nodes and weights must have matching shapes")
            if nodes.size and (nodes.min() < 0 or nodes.max() > math.pi):
                raise DomainError("measure nodes must lie in [0, pi]")
            if weights.size and weights.min() < 0:
                raise DomainError("measure weights must be nonnegative")

    @classmethod
    def canonical(cls) -> "RadiusMeasure":
        return cls("sine")

    @classmethod
    def from_nodes(cls, nodes, weights) -> "RadiusMeasure":
        return cls("quadrature", tuple(float(r) for r in nodes),
                   tuple(float(w) for w in weights))

    @property
    def total_mass(self) -> float:
        if self.kind == "sine":
            return 2.0
        return float(sum(self.weights))


# ---------------------------------------------------------------------------
# metrics


def _oct_mat_mul(A, B):
    """Product of 3x3 octonionic matrices stored as (3, 3, 8)."""
    out = np.zeros((3, 3, 8))
    for i in range(3):
        for j in range(3):
            acc = np.zeros(8)
            for k in range(3):
                acc += algebra.cd_mul(A[i, k], B[k, j])
            out[i, j] = acc
    return out


def _check_same_space(space, *pts):
    for p in pts:
        if isinstance(p, Point) and p.space != space:
            raise DomainError(f"point belongs to {p.space}, expected {space}")


def _as_data(space, x):
    if isinstance(x, Point):
        return x.data
    return Point(space, np.asarray(x, float)).data


def cos_geodesic_matrix(space: SpaceSpec, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """cos(theta) between all rows of X and Y (stacked point arrays)."""
    fam = space.family
    if X.size == 0 or Y.size == 0:
        return np.zeros((X.shape[0] if X.ndim else 0, Y.shape[0] if Y.ndim else 0))
    if fam is Family.SPHERE:
        c = X @ Y.T
    elif fam is Family.OCT_PROJ:
        tf = X.reshape(X.shape[0], -1) @ Y.reshape(Y.shape[0], -1).T
        c = 2.0 * tf - 1.0
    else:
        d0 = space.d0
        T = algebra.sesquilinear_tensor(d0)
        # inner product components: sum_i (conj(x_i) y_i)_c
        comps = np.einsum("cab,nia,mib->cnm", T, X, Y, optimize=True)
        c = 2.0 * np.sum(comps**2, axis=0) - 1.0
    return np.clip(c, -1.0, 1.0)


def geodesic_matrix(space: SpaceSpec, X: np.ndarray, Y: np.ndarray = None) -> np.ndarray:
    """Pairwise geodesic distances (radians) between stacked point arrays."""
    if Y is None:
        Y = X
    return np.arccos(cos_geodesic_matrix(space, X, Y))


def cos_geodesic_pairs(space: SpaceSpec, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """cos(theta) between matching rows of X and Y (element-wise)."""
    fam = space.family
    if X.shape != Y.shape:
        raise DomainError("paired arrays must have identical shapes")
    if X.size == 0:
        return np.zeros(0)
    if fam is Family.SPHERE:
        c = np.einsum("ni,ni->n", X, Y)
    elif fam is Family.OCT_PROJ:
        tf = np.einsum("n...,n...->n", X, Y)
        c = 2.0 * tf - 1.0
    else:
        T = algebra.sesquilinear_tensor(space.d0)
        comps = np.einsum("cab,nia,nib->cn", T, X, Y, optimize=True)
        c = 2.0 * np.sum(comps**2, axis=0) - 1.0
    return np.clip(c, -1.0, 1.0)


def geodesic(space: SpaceSpec, x, y) -> float:
    """Geodesic distance in [0, pi], normalized so every space has diameter pi."""
    _check_same_space(space, x, y)
    xd = _as_data(space, x)[None]
    yd = _as_data(space, y)[None]
    return float(np.arccos(cos_geodesic_matrix(space, xd, yd)[0, 0]))


def chordal(space: SpaceSpec, x, y) -> float:
    """Chordal distance sin(theta / 2), normalized to diameter 1."""
    return math.sin(0.5 * geodesic(space, x, y))


def embed(space: SpaceSpec, x) -> np.ndarray:
    """Canonical embedding into the unit sphere of R^m.

    Projective points map to the flattened Hermitian projection x x* with
    off-diagonal blocks scaled by sqrt(2), so the Euclidean norm equals the
    Frobenius norm and chordal(x, y) = ||embed(x) - embed(y)|| / sqrt(2).
    Sphere points embed identically.
    """
    data = _as_data(space, x)
    fam = space.family
    if fam is Family.SPHERE:
        return data.copy()
    if fam is Family.OCT_PROJ:
        P = data
        out = [np.array([P[0, 0, 0], P[1, 1, 0], P[2, 2, 0]])]
        for i in range(3):
            for j in range(i + 1, 3):
                out.append(math.sqrt(2.0) * P[i, j])
        return np.concatenate(out)
    n1, d0 = data.shape
    diag = np.sum(data**2, axis=1)
    off = []
    for i in range(n1):
        for j in range(i + 1, n1):
            # entry x_i conj(x_j) of the projection matrix
            pij = algebra.cd_mul(data[i], algebra.cd_conj(data[j]))
            off.append(math.sqrt(2.0) * pij)
    return np.concatenate([diag] + off) if off else diag


def ball_volume(space: SpaceSpec, r):
    """Normalized volume of a geodesic ball of radius r in [0, pi].

    Equals the regularized incomplete beta I_{sin^2(r/2)}(d/2, d0/2).
    """
    arr = np.asarray(r, dtype=float)
    if np.any(arr < 0) or np.any(arr > math.pi + 1e-12):
        raise DomainError("ball radius must lie in [0, pi]")
    x = np.clip(np.sin(np.minimum(arr, math.pi) / 2) ** 2, 0.0, 1.0)
    out = reg_inc_beta(x, space.d / 2, space.d0 / 2)
    if np.isscalar(r) or arr.ndim == 0:
        return float(out)
    return out


def _gamma_sphere(d: int) -> float:
    return d * math.sqrt(math.pi) * math.exp(math.lgamma(d / 2) - math.lgamma((d + 1) / 2)) / 2


def gamma_const(space: SpaceSpec) -> float:
    """The constant gamma(Q) of the invariance principle.

    Two equivalent gamma-quotient forms are evaluated and must agree.
    """
    d, d0 = space.d, space.d0
    direct = (math.sqrt(math.pi) / 4 * (d + d0)
              * math.exp(math.lgamma(d0 / 2) - math.lgamma((d0 + 1) / 2)))
    via_sphere = (d + d0) / (2 * d0) * _gamma_sphere(d0)
    if abs(direct - via_sphere) > 1e-13 * abs(direct):
        raise ConsistencyError(
            f"gamma(Q) forms disagree for {space}: {direct} vs {via_sphere}"
        )
    return direct


def avg_chordal(space: SpaceSpec) -> float:
    """Mean chordal distance between two independent uniform points."""
    d, d0 = space.d, space.d0
    return beta((d + 1) / 2, d0 / 2) / beta(d / 2, d0 / 2)


def sample_uniform(space: SpaceSpec, count: int, rng: np.random.Generator,
                   label: str = "") -> PointSet:
    """count i.i.d. points from the invariant probability measure.

    Gaussian vectors normalized to the unit sphere of R^{d+1} or F^{n+1};
    invariance of the Gaussian law under the isometry group makes the
    pushforward uniform.  Not available on the octonionic plane.
    """
    if count < 0 or count != int(count):
        raise DomainError(f"count must be a nonnegative integer, got {count}")
    if space.family is Family.OCT_PROJ:
        raise UnsupportedSpaceError(
            "uniform sampling on the octonionic projective plane is not supported; "
            "no elementary vector representative exists - use chart_point_oct or "
            "distance-matrix inputs instead"
        )
    count = int(count)
    shape = _point_shape(space)
    if count == 0:
        return PointSet(space, np.zeros((0,) + shape), label)
    g = rng.standard_normal((count,) + shape)
    norms = np.sqrt(np.sum(g.reshape(count, -1) ** 2, axis=1))
    # a Gaussian vector is never numerically zero at these dimensions
    g /= norms.reshape((count,) + (1,) * len(shape))
    return PointSet(space, g, label)


def chart_point_oct(c1, c2) -> Point:
    """Point of the octonionic plane from affine chart coordinates.

    Maps octonions (c1, c2) to the Jordan idempotent of (c1, c2, 1)/norm.
    The chart covers a dense open subset; (0, 0) gives diag(0, 0, 1).
    """
    space = make_space(Family.OCT_PROJ, 2)
    v = np.zeros((3, 8))
    v[0] = algebra.as_element(c1, 8)
    v[1] = algebra.as_element(c2, 8)
    v[2, 0] = 1.0
    v /= np.linalg.norm(v)
    P = np.zeros((3, 3, 8))
    for i in range(3):
        for j in range(3):
            P[i, j] = algebra.cd_mul(v[i], algebra.cd_conj(v[j]))
    return Point(space, P)
