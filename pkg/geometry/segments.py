from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .curves import CurvatureProfile, CurveError


STRAIGHT = "straight"
ARC = "arc"


@dataclass(frozen=True)
class PiecewiseSegment:
    """ Straight or circular nano-bar

    Args:
        kind (str): "straight" or "arc"
        length (float): Length along the centerline
        radius (float): Bending radius R (arcs only)
    """
    kind: str
    length: float
    radius: Optional[float] = None

    def __post_init__(self):
        if self.kind not in (STRAIGHT, ARC):
            raise CurveError(f"Invalid segment kind: {self.kind}")
        if not self.length > 0:
            raise CurveError(f"Invalid segment length: {self.length}")
        if self.kind == ARC and (self.radius is None or not self.radius > 0):
            raise CurveError(f"Invalid arc radius: {self.radius}")

    @property
    def kappa(self):
        return 1.0 / self.radius if self.kind == ARC else 0.0

    @classmethod
    def straight(cls, length):
        return cls(STRAIGHT, length)

    @classmethod
    def arc(cls, radius, length=None):
        """ Circular arc, a quarter circle unless a length is given """
        if length is None:
            length = np.pi * radius / 2.0
        return cls(ARC, length, radius)


def compose_segments(segments: List[PiecewiseSegment]):
    """ Concatenate nano-bars into a piecewise-constant curvature profile

    Each junction carries two samples, the left value at the junction and the right value
    one ulp further, so the profile stays strictly increasing and a trapezoidal integral is
    exact on every plateau.

    Args:
        segments (list): Non-empty list of PiecewiseSegment

    Returns:
        CurvatureProfile: Open profile starting at s = 0 whose last sample is the total length
    """
    if len(segments) == 0:
        raise CurveError("Invalid segment list: empty")

    ends = np.cumsum([seg.length for seg in segments])
    s, kappa = [0.0], [segments[0].kappa]
    for i, seg in enumerate(segments):
        s.append(ends[i])
        kappa.append(seg.kappa)
        if i + 1 < len(segments) and segments[i + 1].kappa != seg.kappa:
            s.append(np.nextafter(ends[i], np.inf))
            kappa.append(segments[i + 1].kappa)
    return CurvatureProfile(np.array(s), np.array(kappa))


def nanobar_segments(radius, d, lead=None):
    """ Bent-rod device: lead, quarter arc, central bar of length d, quarter arc, lead

    d = 0 drops the central bar and merges the two arcs.
    """
    if lead is None:
        lead = 2.0 * radius
    segments = [PiecewiseSegment.straight(lead), PiecewiseSegment.arc(radius)]
    if d > 0:
        segments.append(PiecewiseSegment.straight(d))
    elif d < 0:
        raise CurveError(f"Invalid bar length: {d}")
    segments += [PiecewiseSegment.arc(radius), PiecewiseSegment.straight(lead)]
    return segments
