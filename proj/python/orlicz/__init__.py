"""Orlicz affine and geominimal surface areas of convex bodies."""

from ._core import (
    ConvexBody,
    OrliczError,
    OrliczFunction,
    SphereGrid,
    affine_orlicz,
    build_grid,
    ellipsoid_closed_form,
    geominimal_orlicz,
    golden_corpus,
    lp_affine_closed_form,
    random_sl,
    run_suite,
    s_phi,
    suite_names,
    v_p,
    v_phi,
)

__all__ = [
    "ConvexBody",
    "OrliczError",
    "OrliczFunction",
    "SphereGrid",
    "affine_orlicz",
    "build_grid",
    "ellipsoid_closed_form",
    "geominimal_orlicz",
    "golden_corpus",
    "lp_affine_closed_form",
    "random_sl",
    "run_suite",
    "s_phi",
    "suite_names",
    "v_p",
    "v_phi",
]
