"""
Geometry value types

HalfspaceSystem: rows normal·x <= offset plus equalities normal·x = offset.
Polytope: vertex and/or halfspace representation of a bounded convex set.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple

from menuforge.core.exceptions import InputError, RepresentationError
from menuforge.geometry.rational import Vector, as_vector, dot, unit, neg, ONE, ZERO


Constraint = Tuple[Vector, Fraction]


def _constraint(normal: Sequence, offset, dim: int) -> Constraint:
    vec = as_vector(normal)
    if len(vec) != dim:
        raise InputError(f"Constraint normal has dimension {len(vec)}, system dimension is {dim}")
    return vec, Fraction(offset)


@dataclass(frozen=True)
class HalfspaceSystem:
    dim: int
    rows: Tuple[Constraint, ...] = ()
    equalities: Tuple[Constraint, ...] = ()

    def __post_init__(self):
        if self.dim <= 0:
            raise InputError(f"System dimension must be positive, got {self.dim}")
        object.__setattr__(self, "rows", tuple(_constraint(a, b, self.dim) for a, b in self.rows))
        object.__setattr__(self, "equalities", tuple(_constraint(a, b, self.dim) for a, b in self.equalities))

    @classmethod
    def simplex(cls, dim: int) -> "HalfspaceSystem":
        """The probability simplex: x >= 0 and sum(x) = 1"""
        rows = tuple((neg(unit(dim, k)), ZERO) for k in range(dim))
        return cls(dim=dim, rows=rows, equalities=(((ONE,) * dim, ONE),))

    def with_rows(self, rows: Iterable[Tuple[Sequence, object]]) -> "HalfspaceSystem":
        return HalfspaceSystem(self.dim, self.rows + tuple(rows), self.equalities)

    def with_equalities(self, equalities: Iterable[Tuple[Sequence, object]]) -> "HalfspaceSystem":
        return HalfspaceSystem(self.dim, self.rows, self.equalities + tuple(equalities))

    def satisfied_by(self, point: Sequence[Fraction]) -> bool:
        if len(point) != self.dim:
            raise InputError(f"Point has dimension {len(point)}, system dimension is {self.dim}")
        return all(dot(a, point) <= b for a, b in self.rows) and all(dot(a, point) == b for a, b in self.equalities)

    def tight_rows(self, point: Sequence[Fraction]) -> Tuple[int, ...]:
        return tuple(i for i, (a, b) in enumerate(self.rows) if dot(a, point) == b)


@dataclass(frozen=True)
class Polytope:
    dim: int
    vertices: Optional[Tuple[Vector, ...]] = None
    halfspaces: Optional[HalfspaceSystem] = field(default=None, compare=False)

    def __post_init__(self):
        if self.vertices is None and self.halfspaces is None:
            raise InputError("A polytope needs a vertex or a halfspace representation")
        if self.vertices is not None:
            verts = tuple(as_vector(v) for v in self.vertices)
            for v in verts:
                if len(v) != self.dim:
                    raise InputError(f"Vertex of dimension {len(v)} in a {self.dim}-dimensional polytope")
            object.__setattr__(self, "vertices", verts)
        if self.halfspaces is not None and self.halfspaces.dim != self.dim:
            raise InputError("Halfspace system dimension differs from polytope dimension")

    @property
    def is_empty(self) -> bool:
        return self.vertices is not None and len(self.vertices) == 0

    def require_vertices(self) -> Tuple[Vector, ...]:
        if self.vertices is None:
            raise RepresentationError("Operation needs a vertex representation")
        return self.vertices

    def __contains__(self, point) -> bool:
        from menuforge.geometry.polytope import contains_point

        return contains_point(self, as_vector(point))

    def __len__(self) -> int:
        return len(self.require_vertices())
