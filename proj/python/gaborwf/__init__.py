"""Gabor frames, sector-wise decay classification and quadratic propagators."""

from ._gaborwf import (
    BadPartition,
    DecayClass,
    DecayKind,
    DegenerateFit,
    DomainError,
    Error,
    Grid,
    GridMismatch,
    InsufficientLattice,
    Lattice,
    NearSingularTime,
    NoConvergence,
    NotAFrame,
    NotSymplectic,
    UnsupportedAtom,
    WaveFrontEstimate,
    Window,
    classical_flow,
    default_propagation_grid,
    dual_window,
    estimate_wavefront,
    frame_bounds,
    gabor_coefficients,
    normalize_atom,
    propagate,
    sample,
    stft,
    verify_propagation,
)

__version__ = "0.1.0"
