"""Decision procedures and certificates for switched linear consensus systems.

The state space is analysed through the open faces of the unit ball
``P = {x : (max x - min x) / 2 <= 1}`` of the consensus seminorm.  Every
matrix of a validated system maps each open face of ``P`` into exactly one
open face, which yields a finite graph on which both convergence questions
become plain graph questions.
"""

from consensus_faces.exactnum import (
    RationalMatrix,
    SwitchedSystem,
    consensus_seminorm,
    dobrushin_seminorm,
    parse_rational,
    validate_system,
)
from consensus_faces.faces import INTERIOR, FaceId, classify_point, enumerate_faces, face_census
from consensus_faces.facegraph import FaceGraph, build_custom_face_graph, build_face_graph, map_face
from consensus_faces.decide import decide_problem1, decide_problem2, universal_steering_word

__version__ = "0.1.0"

__all__ = [
    "INTERIOR",
    "FaceGraph",
    "FaceId",
    "RationalMatrix",
    "SwitchedSystem",
    "build_custom_face_graph",
    "build_face_graph",
    "classify_point",
    "consensus_seminorm",
    "decide_problem1",
    "decide_problem2",
    "dobrushin_seminorm",
    "enumerate_faces",
    "face_census",
    "map_face",
    "parse_rational",
    "universal_steering_word",
    "validate_system",
]
