from dataclasses import dataclass

import numpy as np


CONSTANT = "constant"
LINEAR = "linear"
HARD_WALL = "hard-wall"
OPEN = "open"


@dataclass(frozen=True)
class PotentialProfile:
    """ Potential energy along the arclength

    Two representations are supported:
        - "constant": values[j] holds on the j-th interval cut by the breakpoints, so there
          is one more value than breakpoints; the outer values extend to infinity.
        - "linear": values are node values at the breakpoints, interpolated linearly and
          held constant beyond the first and last node.

    Args:
        breakpoints (np.ndarray): Strictly increasing positions
        values (np.ndarray): Interval values or node values, see above
        representation (str): "constant" or "linear"
        boundary (str): "hard-wall" (infinite walls at the domain ends) or "open"
        domain (tuple): (s_min, s_max) extent of the device
    """
    breakpoints: np.ndarray
    values: np.ndarray
    representation: str = CONSTANT
    boundary: str = OPEN
    domain: tuple = None

    def __post_init__(self):
        breakpoints = np.atleast_1d(np.asarray(self.breakpoints, dtype=float))
        values = np.atleast_1d(np.asarray(self.values, dtype=float))
        if self.representation not in (CONSTANT, LINEAR):
            raise ValueError(f"Invalid representation: {self.representation}")
        if self.boundary not in (HARD_WALL, OPEN):
            raise ValueError(f"Invalid boundary: {self.boundary}")
        if np.any(np.diff(breakpoints) <= 0):
            raise ValueError("Invalid breakpoints: must be strictly increasing")
        expected = len(breakpoints) + 1 if self.representation == CONSTANT else len(breakpoints)
        if len(values) != expected:
            raise ValueError(
                f"Invalid value count: {len(values)} for {len(breakpoints)} breakpoints "
                f"({self.representation})")
        if self.representation == LINEAR and len(breakpoints) < 2:
            raise ValueError("Invalid linear profile: at least two nodes required")
        domain = self.domain
        if domain is None:
            if len(breakpoints) == 0:
                domain = (-np.inf, np.inf)
            else:
                domain = (float(breakpoints[0]), float(breakpoints[-1]))
        domain = (float(domain[0]), float(domain[1]))
        if not domain[1] > domain[0]:
            raise ValueError(f"Invalid domain: {domain}")
        if self.boundary == HARD_WALL and not np.all(np.isfinite(domain)):
            raise ValueError("Invalid domain: hard walls need finite ends")
        object.__setattr__(self, "breakpoints", breakpoints)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "domain", domain)

    ### EVALUATION ###

    def evaluate(self, s):
        """ Potential at positions s """
        s = np.asarray(s, dtype=float)
        if self.representation == CONSTANT:
            return self.values[np.searchsorted(self.breakpoints, s, side="right")]
        return np.interp(s, self.breakpoints, self.values)

    def antiderivative(self, s):
        """ Integral of V from the first breakpoint to s (exact for both representations) """
        s = np.asarray(s, dtype=float)
        b, v = self.breakpoints, self.values
        if self.representation == CONSTANT:
            if len(b) == 0:
                return v[0] * s
            at_breaks = np.concatenate([[0.0], np.cumsum(v[1:-1] * np.diff(b))])
            region = np.searchsorted(b, s, side="right")
            anchor = np.maximum(region - 1, 0)
            return at_breaks[anchor] + v[region] * (s - b[anchor])
        widths = np.diff(b)
        at_nodes = np.concatenate([[0.0], np.cumsum(0.5 * (v[1:] + v[:-1]) * widths)])
        inside = np.clip(np.searchsorted(b, s, side="right") - 1, 0, len(b) - 2)
        t = np.clip(s, b[0], b[-1]) - b[inside]
        slope = (v[inside + 1] - v[inside]) / widths[inside]
        result = at_nodes[inside] + v[inside] * t + 0.5 * slope * t ** 2
        result = result + np.where(s < b[0], v[0] * (s - b[0]), 0.0)
        result = result + np.where(s > b[-1], v[-1] * (s - b[-1]), 0.0)
        return result

    def cell_average(self, nodes):
        """ Mean of V over [s_i - h/2, s_i + h/2] on a uniform node set """
        nodes = np.asarray(nodes, dtype=float)
        h = nodes[1] - nodes[0]
        return (self.antiderivative(nodes + 0.5 * h) - self.antiderivative(nodes - 0.5 * h)) / h

    def minimum(self):
        return float(np.min(self.values))

    def maximum_magnitude(self):
        return float(np.max(np.abs(self.values)))

    def shortest_feature(self):
        """ Shortest distance between breakpoints of a piecewise-constant profile """
        if self.representation != CONSTANT or len(self.breakpoints) < 2:
            return np.inf
        return float(np.min(np.diff(self.breakpoints)))

    ### TRANSFORMATIONS ###

    def mirror(self):
        """ Profile reflected about s = 0 """
        breakpoints = -self.breakpoints[::-1]
        return PotentialProfile(breakpoints, self.values[::-1].copy(), self.representation,
                                self.boundary, (-self.domain[1], -self.domain[0]))

    def is_even(self, tol=1e-12):
        mirrored = self.mirror()
        if self.domain != mirrored.domain:
            return False
        if len(self.breakpoints) != len(mirrored.breakpoints):
            return False
        scale = max(1.0, float(np.max(np.abs(self.breakpoints), initial=0.0)))
        return bool(np.allclose(self.breakpoints, mirrored.breakpoints, rtol=0, atol=tol * scale)
                    and np.allclose(self.values, mirrored.values, rtol=0, atol=tol))

    def to_linear(self):
        """ Piecewise-linear copy; each step becomes a jump across one ulp """
        if self.representation == LINEAR:
            return self
        if not np.all(np.isfinite(self.domain)):
            raise ValueError("Invalid conversion: an unbounded profile has no end nodes")
        s_min, s_max = self.domain
        inside = [j for j, b in enumerate(self.breakpoints) if s_min <= b <= s_max]
        nodes, values = [], []
        if not inside or self.breakpoints[inside[0]] > s_min:
            nodes.append(s_min)
            values.append(float(self.evaluate(s_min)))
        for j in inside:
            b = self.breakpoints[j]
            if not nodes or b > nodes[-1]:
                nodes.append(b)
                values.append(self.values[j])
            nodes.append(np.nextafter(b, np.inf))
            values.append(self.values[j + 1])
        if s_max > nodes[-1]:
            nodes.append(s_max)
            values.append(float(self.evaluate(s_max)))
        return PotentialProfile(np.array(nodes), np.array(values, dtype=float), LINEAR,
                                self.boundary, self.domain)

    def to_dict(self):
        return {
            "breakpoints": self.breakpoints.tolist(),
            "values": self.values.tolist(),
            "representation": self.representation,
            "boundary": self.boundary,
            "domain": list(self.domain),
        }

    @classmethod
    def from_dict(cls, data):
        return cls(np.array(data["breakpoints"], dtype=float), np.array(data["values"], dtype=float),
                   data["representation"], data["boundary"], tuple(data["domain"]))
