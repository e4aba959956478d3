"""Exception hierarchy. Every error carries a stable ``code`` used by the CLI."""

from __future__ import annotations


class SurfOrbitError(Exception):
    code = "E_GENERIC"


class ParseError(SurfOrbitError, ValueError):
    code = "E_PARSE"


class FamilyError(SurfOrbitError):
    code = "E_FAMILY"


class ShapeError(SurfOrbitError):
    code = "E_SHAPE"


class SubgroupError(SurfOrbitError):
    code = "E_SUBGROUP"


class SectionError(SurfOrbitError):
    code = "E_SECTION"


class BuildError(SurfOrbitError):
    code = "E_BUILD"


class SquareFreeError(SurfOrbitError):
    code = "E_SQUAREFREE"


class AmbiguousSymmetry(SurfOrbitError):
    code = "E_AMBIGUOUS_SYMMETRY"


class UnannotatedTorusSymmetry(SurfOrbitError):
    code = "E_TORUS_SYMMETRY"


class UnsupportedSurface(SurfOrbitError):
    code = "E_UNSUPPORTED_SURFACE"


class UnsupportedAdaptedSet(SurfOrbitError):
    code = "E_UNSUPPORTED_X"


class NotExceptional(SurfOrbitError):
    code = "E_NOT_EXCEPTIONAL"


class InternalInvariantError(SurfOrbitError):
    code = "E_INTERNAL"


class ModelError(SurfOrbitError):
    """Raised when a model fails validation; ``diagnostics`` holds the details."""

    code = "E_INVALID_MODEL"

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        msg = "; ".join(f"{d.code} at {d.where}: {d.message}" for d in self.diagnostics)
        super().__init__(msg or "invalid model")


REGISTRY = {
    cls.code: cls
    for cls in (
        SurfOrbitError, ParseError, FamilyError, ShapeError, SubgroupError, SectionError,
        BuildError, SquareFreeError, AmbiguousSymmetry, UnannotatedTorusSymmetry,
        UnsupportedSurface, UnsupportedAdaptedSet, NotExceptional, InternalInvariantError,
        ModelError,
    )
}
