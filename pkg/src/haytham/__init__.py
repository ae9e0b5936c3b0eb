"""Machine-checked geometry of seasonal hours, burning spheres and culminations.

Modules:

* ``geometry``   shared primitives (chords, projection, conic fit, mediant)
* ``lemma``      monotonicity of sin x / sin(cx) with replayable proof transcripts
* ``euclid``     Cartesian figure of the local proof and its neighbourhoods
* ``gnomonics``  horizontal sundial hour lines and their departure from straightness
* ``dioptrics``  double refraction through a glass sphere
* ``kinematics`` altitude maximum versus meridian transit for moving bodies
"""
from .geometry import DegenerateError, DomainError, Interval, Point2, Vec3
from .lemma import HourFraction, f_ratio
from .transcript import ProofTranscript

__all__ = ["DegenerateError", "DomainError", "Interval", "Point2", "Vec3", "HourFraction", "f_ratio", "ProofTranscript"]
__version__ = "0.1.0"
