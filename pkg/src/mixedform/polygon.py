"""Deformation space of a convex polygon in support-number coordinates.

A convex polygon with fixed outward edge normals u_0..u_{n-1} (listed
counterclockwise) is described by its support vector h, where h_i is the
signed distance from the origin to the line carrying edge i.  Writing
gamma_i for the angle from u_i to u_{i+1} (so each gamma_i lies in (0, pi)
and they sum to 2 pi), the side lengths are linear in h:

    l_i(h) = (h_{i-1} - h_i cos gamma_{i-1}) / sin gamma_{i-1}
           + (h_{i+1} - h_i cos gamma_i)     / sin gamma_i

The set { h : l_i(h) > 0 for all i } is an open convex polyhedral cone --
the deformation space of the polygon.  The area is the quadratic form
a(h) = (1/2) sum h_i l_i(h); its polarization a(h, k) = (1/2) sum h_i l_i(k)
is symmetric, has signature (1, 2, n-3) (the kernel is spanned by the
support vectors of points, i.e. translations), and satisfies the Minkowski
inequality a(h,k)^2 >= a(h)a(k) on the cone, with equality exactly at
translate + homothety pairs h = h^x + lambda k.

The chart embedding realizes an interior h as the complex edge-vector list
z_i = l_i(h) e^{i psi_i} (psi_i = normal angle + pi/2); the closure
sum z_i = 0 holds and the shoelace Hermitian form returns the area.
"""

from collections import namedtuple

import numpy as np

from .errors import ConsistencyError, DomainError, InvalidInput, InvariantFalsified
from .forms import HermitianForm, SymmetricForm

TWO_PI = 2.0 * np.pi
MEMBERSHIP_TOL = 1e-12
CLOSURE_TOL = 1e-10
EMBED_AREA_TOL = 1e-12
EQUALITY_TOL = 1e-10
WITNESS_TOL = 1e-7
ARCCOSH_SLACK = 1e-12


# =============================================================================
# NORMAL FAN
# =============================================================================

class NormalFan2D:
    """Cyclic list of outward unit normal directions of a convex polygon.

    ``angles`` are radians in [0, 2 pi), strictly increasing cyclically
    (exactly one wrap-around descent).  Consecutive gaps -- the turning
    angles of the polygon boundary -- must lie strictly in (0, pi); a gap
    of pi would mean parallel consecutive edges.
    """

    def __init__(self, angles):
        a = np.asarray(angles, dtype=float)
        if a.ndim != 1 or len(a) < 3:
            raise InvalidInput("NormalFan2D: need at least 3 normal angles")
        if not np.all(np.isfinite(a)):
            raise InvalidInput("NormalFan2D: angles must be finite")
        if np.any(a < 0.0) or np.any(a >= TWO_PI):
            raise InvalidInput("NormalFan2D: angles must lie in [0, 2*pi)")
        n = len(a)
        gaps = np.mod(np.roll(a, -1) - a, TWO_PI)
        descents = int(np.sum(np.roll(a, -1) < a))
        if descents != 1:
            raise InvalidInput("NormalFan2D: angles must be strictly increasing cyclically")
        if np.any(gaps <= 0.0) or np.any(gaps >= np.pi):
            raise InvalidInput(
                "NormalFan2D: every gap between consecutive normals must lie in (0, pi)")
        total = float(np.sum(gaps))
        if abs(total - TWO_PI) > 1e-9:
            raise InvalidInput(f"NormalFan2D: gaps sum to {total!r}, expected 2*pi")

        self.n = n
        self.angles = a.copy()
        self.angles.setflags(write=False)
        #: turning angle of the boundary between edges i and i+1
        self.gaps = gaps
        self.gaps.setflags(write=False)
        self.normals = np.column_stack([np.cos(a), np.sin(a)])
        self.normals.setflags(write=False)
        #: edge direction angles (counterclockwise boundary orientation)
        self.edge_angles = np.mod(a + 0.5 * np.pi, TWO_PI)
        self.edge_angles.setflags(write=False)
        self._L = None
        self._area_form = None

    @classmethod
    def from_degrees(cls, degrees):
        return cls(np.deg2rad(np.asarray(degrees, dtype=float)))

    @classmethod
    def regular(cls, n, offset=0.0):
        """Fan of the regular n-gon (normals evenly spaced, rotated by offset)."""
        return cls(np.mod(offset + TWO_PI * np.arange(n) / n, TWO_PI))

    @property
    def length_matrix(self):
        """Matrix L with (L h)_i = l_i(h); symmetric by construction."""
        if self._L is None:
            n = self.n
            L = np.zeros((n, n))
            sin_g = np.sin(self.gaps)
            cot_g = np.cos(self.gaps) / sin_g
            for i in range(n):
                nxt = (i + 1) % n
                prv = (i - 1) % n
                L[i, nxt] += 1.0 / sin_g[i]
                L[i, prv] += 1.0 / sin_g[prv]
                L[i, i] -= cot_g[i] + cot_g[prv]
            L.setflags(write=False)
            self._L = L
        return self._L

    def _vector(self, h, what):
        v = np.asarray(h, dtype=float)
        if v.shape != (self.n,):
            raise InvalidInput(f"{what}: expected a support vector of length {self.n}")
        if not np.all(np.isfinite(v)):
            raise InvalidInput(f"{what}: support vector must be finite")
        return v


ConeLocation = namedtuple("ConeLocation", ["status", "edges"])


# =============================================================================
# SUPPORT GEOMETRY
# =============================================================================

def edge_lengths(fan, h):
    """Side lengths l_i(h); linear in h, negative values allowed."""
    return fan.length_matrix @ fan._vector(h, "edge_lengths")


def cone_membership(fan, h, tol=MEMBERSHIP_TOL):
    """Classify h against the deformation cone by the signs of l_i(h).

    Returns ConeLocation(status, edges) with status one of "interior",
    "boundary", "outside"; edges lists the degenerate (boundary) or
    violated (outside) side indices.
    """
    v = fan._vector(h, "cone_membership")
    lengths = fan.length_matrix @ v
    tau = tol * float(np.linalg.norm(v))
    negative = np.flatnonzero(lengths < -tau)
    if len(negative):
        return ConeLocation("outside", negative.tolist())
    degenerate = np.flatnonzero(lengths <= tau)
    if len(degenerate):
        return ConeLocation("boundary", degenerate.tolist())
    return ConeLocation("interior", [])


def area_form(fan):
    """The area of the polygon as a quadratic form in h: a(h) = h'Mh.

    M = L/2 where L is the edge-length matrix; the symmetry of the raw
    matrix is a theorem and is asserted before symmetrizing.
    """
    if fan._area_form is None:
        fan._area_form = SymmetricForm(0.5 * fan.length_matrix, symmetry_tol=1e-12)
    return fan._area_form


def point_support_vector(fan, x):
    """Support vector h^x of the single point x: h^x_i = <x, u_i>."""
    p = np.asarray(x, dtype=float)
    if p.shape != (2,):
        raise InvalidInput("point_support_vector: x must be a point in the plane")
    return fan.normals @ p


def vertices(fan, h):
    """Polygon vertices: vertex i is the meet of support lines i and i+1."""
    v = fan._vector(h, "vertices")
    c = fan.normals[:, 0]
    s = fan.normals[:, 1]
    cn = np.roll(c, -1)
    sn = np.roll(s, -1)
    hn = np.roll(v, -1)
    det = np.sin(fan.gaps)
    x = (v * sn - hn * s) / det
    y = (hn * c - v * cn) / det
    return np.column_stack([x, y])


class PolygonSupport:
    """A fan together with a support vector in (the closure of) its cone."""

    def __init__(self, fan, h):
        self.fan = fan
        self.h = fan._vector(h, "PolygonSupport")
        self.membership = cone_membership(fan, self.h)
        if self.membership.status == "outside":
            raise DomainError(
                f"support vector lies outside the cone: negative sides {self.membership.edges}")

    @property
    def interior(self):
        return self.membership.status == "interior"

    def edge_lengths(self):
        return edge_lengths(self.fan, self.h)

    @classmethod
    def from_json_dict(cls, data):
        try:
            normals_deg = data["normals_deg"]
            h = data["h"]
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"polygon JSON needs 'normals_deg' and 'h': {exc}") from exc
        fan = NormalFan2D.from_degrees(normals_deg)
        if len(h) != fan.n:
            raise InvalidInput(f"polygon JSON: h has length {len(h)}, fan has {fan.n} normals")
        return cls(fan, h)


# =============================================================================
# MINKOWSKI INEQUALITY
# =============================================================================

MinkowskiResult = namedtuple("MinkowskiResult",
                             ["residual", "scale", "equality", "witness_x", "witness_lambda"])


def minkowski_check(fan, h, k, equality_tol=EQUALITY_TOL, witness_tol=WITNESS_TOL):
    """Verify a(h,k)^2 >= a(h)a(k) and detect the equality case.

    Both vectors must lie in the closed cone with positive area.  When the
    residual vanishes (relative to scale), the translate + homothety witness
    h = h^x + lambda k is recovered by least squares; an equality without a
    witness would falsify the equality-case theorem and raises.
    """
    u = fan._vector(h, "minkowski_check")
    v = fan._vector(k, "minkowski_check")
    for name, w in (("h", u), ("k", v)):
        if cone_membership(fan, w).status == "outside":
            raise DomainError(f"minkowski_check: {name} lies outside the closed cone")
    form = area_form(fan)
    qh = form.q(u)
    qk = form.q(v)
    if qh <= 0.0 or qk <= 0.0:
        raise DomainError(f"minkowski_check: needs positive areas, got {qh:.3e}, {qk:.3e}")
    bhk = form.b(u, v)
    residual = bhk * bhk - qh * qk
    scale = max(bhk * bhk, abs(qh * qk))
    if residual < -1e-12 * scale:
        raise InvariantFalsified(
            f"Minkowski inequality violated: residual {residual:.3e} at scale {scale:.3e}")
    if residual > equality_tol * scale:
        return MinkowskiResult(residual, scale, False, None, None)

    # equality case: fit h = h^x + lambda k over (x, lambda)
    A = np.column_stack([fan.normals[:, 0], fan.normals[:, 1], v])
    sol, *_ = np.linalg.lstsq(A, u, rcond=None)
    fit = float(np.linalg.norm(u - A @ sol))
    if fit >= witness_tol * float(np.linalg.norm(u)):
        raise InvariantFalsified(
            f"equality case without translate+homothety witness (fit residual {fit:.3e})")
    return MinkowskiResult(residual, scale, True, np.array(sol[:2]), float(sol[2]))


def hyperbolic_distance(fan, h, k):
    """Distance arccosh( a(h,k) / sqrt(a(h)a(k)) ) between interior rays.

    Well-defined by the Minkowski inequality; zero exactly at homotheties.
    """
    u = fan._vector(h, "hyperbolic_distance")
    v = fan._vector(k, "hyperbolic_distance")
    for name, w in (("h", u), ("k", v)):
        if cone_membership(fan, w).status != "interior":
            raise DomainError(f"hyperbolic_distance: {name} is not interior")
    form = area_form(fan)
    qh = form.q(u)
    qk = form.q(v)
    if qh <= 0.0 or qk <= 0.0:
        raise DomainError("hyperbolic_distance: needs positive areas")
    arg = form.b(u, v) / np.sqrt(qh * qk)
    if arg < 1.0 - ARCCOSH_SLACK:
        raise InvariantFalsified(
            f"normalized pairing {arg!r} < 1: Minkowski inequality violated")
    return float(np.arccosh(max(arg, 1.0)))


# =============================================================================
# CHART EMBEDDING
# =============================================================================

def shoelace_hermitian_form(n):
    """Hermitian matrix of the shoelace area (1/2) Im sum_{j<k} conj(z_j) z_k."""
    if n < 3:
        raise InvalidInput("shoelace_hermitian_form: need n >= 3")
    M = np.zeros((n, n), dtype=complex)
    for j in range(n):
        for k in range(j + 1, n):
            M[j, k] = -0.25j
            M[k, j] = 0.25j
    return HermitianForm(M)


def double_chart_embedding(fan, h):
    """Complex edge vectors z_i = l_i(h) e^{i psi_i} plus the shoelace form.

    Returns (z, form).  Checks the closure sum z_i = 0 and that the
    Hermitian area of z reproduces the polygon area a(h); the double of the
    polygon (two copies glued along the boundary) has total area 2 a(h).
    """
    u = fan._vector(h, "double_chart_embedding")
    if cone_membership(fan, u).status != "interior":
        raise DomainError("double_chart_embedding: h is not interior")
    lengths = fan.length_matrix @ u
    z = lengths * np.exp(1j * fan.edge_angles)
    znorm = float(np.linalg.norm(z))
    closure = abs(complex(np.sum(z)))
    if closure > CLOSURE_TOL * znorm:
        raise ConsistencyError(
            f"edge vectors do not close up: defect {closure:.3e} vs norm {znorm:.3e}")
    form = shoelace_hermitian_form(fan.n)
    area_z = form.q(z)
    area_h = area_form(fan).q(u)
    if abs(area_z - area_h) > EMBED_AREA_TOL * max(abs(area_z), abs(area_h)):
        raise ConsistencyError(
            f"shoelace area {area_z!r} disagrees with the support-number area {area_h!r}")
    return z, form


# =============================================================================
# SAMPLING
# =============================================================================

def sample_interior(fan, rng, spread=0.5, margin=1e-6):
    """Random interior support vector near h = 1 (which is always interior).

    The perturbation is shrunk geometrically until every side length
    clears a small positive margin, so the draw always succeeds.
    """
    ones = np.ones(fan.n)
    delta = rng.standard_normal(fan.n)
    L = fan.length_matrix
    s = spread
    for _ in range(80):
        h = ones + s * delta
        lengths = L @ h
        if np.min(lengths) > margin * max(1.0, float(np.linalg.norm(h))):
            return h
        s *= 0.5
    return ones
