"""Flat cone surfaces built from Euclidean polygons with edge gluings.

The main entry points:

* :func:`load_surface` / :func:`build_surface` make a :class:`FlatConeSurface`;
* :func:`trace` follows a geodesic, :func:`enumerate_saddle_connections` lists
  saddle connections up to a length;
* :func:`is_quadratic_differential_metric` decides whether the metric comes
  from a holomorphic quadratic differential;
* :func:`sweep_count` and :func:`chain_invariants` work with chains of
  directions at a cone point;
* :func:`geodesic_length` gives the length of the closed geodesic in the
  class of a crossing word.
"""

__version__ = "0.1.0"

from .chains import (AngleInterval, Chain, ChainInvariants, InterlaceDecision, SweepCount,
                     chain_invariants, cone_angle_bounds, estimate_cone_angle_from_surface,
                     perfectly_interlaced, sweep_count, sweep_counts)
from .errors import (ChartError, CurvatureError, Disconnected, EdgeLengthMismatch, Explosion,
                     FlatConeError, GaussBonnetViolation, InexactAngle, NonClosed, NonConvergent,
                     NonOrientable, NullHomotopic, NumericalStall, OpenLoop, OrientationError,
                     SurfaceError, WordInvalidOnB)
from .geodesics import (ConePointHit, DensityProfile, DirectedPoint, GeodesicPath, LengthReached,
                        Side, continue_at_cone_point, density_profile, is_admissible_limit_path,
                        reverse_trace, trace, trace_from_cone, trace_through_cones)
from .holonomy import (Crossing, DualGraphLoop, HolonomyReport, QDDecision, cone_loop,
                       generating_loops, holonomy_condition, is_quadratic_differential_metric,
                       transport)
from .rational import RotationClass
from .saddles import SaddleConnection, enumerate_saddle_connections
from .spectrum import (CurveWord, SpectrumComparison, SpectrumEntry, compare_spectra,
                       geodesic_length, load_words, marked_spectrum)
from .surface import (ConePoint, EdgeGluing, EdgeRef, FlatConeSurface, PlanePoint, PolygonChart,
                      angle_condition, build_surface, cone_angles, euler_characteristic, genus,
                      load_surface, relabeled, scaled)
