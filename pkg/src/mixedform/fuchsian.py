"""Convex polyhedra invariant under a cocompact Lorentz lattice, via quotients.

A Gamma-polyhedron in Minkowski 3-space with space-like faces is described
modulo the group by a finite quotient fan: face classes 1..m, and for each
class a cyclic list of adjacency entries (to, phi, omega), where

  * ``to``    is the neighboring face class (possibly the class itself --
              self-adjacency across the group action),
  * ``phi``   is the hyperbolic distance between the two faces' unit
              normals on the hyperboloid; several parallel entries with
              distinct phi may join the same pair of classes,
  * ``omega`` is the in-face Euclidean turning angle to the next entry;
              per face the omegas form a 2D normal fan (sum 2 pi).

Support numbers h_i > 0 (distances of the space-like face planes from the
origin) determine the in-face support numbers linearly:

    h_ij = (h_i cosh phi_ij - h_j) / sinh phi_ij

(for a self-adjacency this is h_i (cosh phi - 1)/sinh phi = h_i tanh(phi/2)).
The covolume -- the volume between the light cone and the polyhedron per
fundamental domain -- is the cubic covol(h) = (1/3) sum h_i a_i(h_{i.}).
Its Hessian is the Jacobian of the face areas,

    d(area_i)/dh_j = - sum_{entries i->j} l_e / sinh phi_e        (j != i)
    d(area_i)/dh_i =   sum_{cross}  cosh phi_e l_e / sinh phi_e
                     + sum_{self}   (cosh phi_e - 1) l_e / sinh phi_e,

which is strictly diagonally dominant with positive diagonal on the open
cone, hence positive definite.  The boundary area form
area(h) = 3 covol(1, h, h) is positive definite as well, so the
Cauchy-Schwarz inequality (and hence the reversed Alexandrov-Fenchel
inequality for covolumes) holds with equality exactly at homotheties.
"""

import math
from collections import namedtuple

import numpy as np

from . import polygon as poly
from .errors import (
    ConsistencyError,
    DomainError,
    InvalidInput,
    InvariantFalsified,
)
from .forms import SymmetricForm, TrilinearForm

TWO_PI = 2.0 * math.pi
PAIRING_TOL = 1e-9
ANGLE_SUM_TOL = 1e-9
HOMOTHETY_TOL = 1e-7
ARCCOS_SLACK = 1e-12

AdjacencyEntry = namedtuple("AdjacencyEntry", ["to", "phi", "omega"])


# =============================================================================
# QUOTIENT FAN
# =============================================================================

class QuotientFan:
    """Face classes with hyperbolic adjacency angles and per-face 2D fans.

    ``faces`` is a list over classes; each class is a cyclic list of
    (to, phi, omega) entries.  Validation is local: per-face fan
    invariants, strict positivity of phi, and pairing symmetry -- the
    multiset of phi values from i to j must match the one from j to i
    (self-adjacency entries must pair up within the face).
    """

    def __init__(self, faces, genus, vertices=None):
        if not isinstance(genus, int) or genus < 2:
            raise InvalidInput(f"QuotientFan: genus must be an integer >= 2, got {genus!r}")
        m = len(faces)
        if m < 1:
            raise InvalidInput("QuotientFan: need at least one face class")
        parsed = []
        for i, entries in enumerate(faces):
            if len(entries) < 3:
                raise InvalidInput(f"QuotientFan: face {i} needs at least 3 adjacency entries")
            face = []
            for e in entries:
                to, phi, omega = int(e[0]), float(e[1]), float(e[2])
                if not (0 <= to < m):
                    raise InvalidInput(f"QuotientFan: face {i} refers to missing class {to}")
                if not (math.isfinite(phi) and phi > 0.0):
                    raise InvalidInput(f"QuotientFan: face {i}: phi must be positive, got {phi!r}")
                if not (math.isfinite(omega) and 0.0 < omega < math.pi):
                    raise InvalidInput(
                        f"QuotientFan: face {i}: omega must lie in (0, pi), got {omega!r}")
                face.append(AdjacencyEntry(to, phi, omega))
            total = sum(e.omega for e in face)
            if abs(total - TWO_PI) > ANGLE_SUM_TOL:
                raise InvalidInput(
                    f"QuotientFan: face {i}: turning angles sum to {total!r}, expected 2*pi")
            parsed.append(face)

        # pairing symmetry of the phi multisets
        by_pair = {}
        for i, face in enumerate(parsed):
            for e in face:
                by_pair.setdefault((i, e.to), []).append(e.phi)
        for (i, j), phis in by_pair.items():
            if i < j:
                back = by_pair.get((j, i), [])
                if len(back) != len(phis) or any(
                        abs(a - b) > PAIRING_TOL * max(1.0, a)
                        for a, b in zip(sorted(phis), sorted(back))):
                    raise ConsistencyError(
                        f"QuotientFan: phi multisets of {i}->{j} and {j}->{i} disagree")
            elif i == j:
                s = sorted(phis)
                if len(s) % 2:
                    raise ConsistencyError(
                        f"QuotientFan: face {i} has an odd number of self-adjacencies")
                for a, b in zip(s[0::2], s[1::2]):
                    if abs(a - b) > PAIRING_TOL * max(1.0, a):
                        raise ConsistencyError(
                            f"QuotientFan: self-adjacency phi values of face {i} do not pair up")
        total_entries = sum(len(face) for face in parsed)
        if total_entries % 2:
            raise ConsistencyError("QuotientFan: odd total number of directed adjacencies")

        self.m = m
        self.genus = genus
        self.faces = parsed
        self.num_edges = total_entries // 2
        self.declared_vertices = vertices
        if vertices is not None:
            expected_faces = vertices / 2 + 2 - 2 * genus
            if expected_faces != m:
                raise ConsistencyError(
                    f"QuotientFan: declared vertex count {vertices} gives "
                    f"{expected_faces} faces by Euler bookkeeping, fan has {m}")

        # per-face Euclidean fans: normal angles are cumulative turnings
        self.face_fans = []
        for face in parsed:
            omegas = [e.omega for e in face]
            angles = np.concatenate([[0.0], np.cumsum(omegas[:-1])])
            self.face_fans.append(poly.NormalFan2D(angles))
        self._support_maps = None
        self._covolume_form = None
        self._area_form = None

    def _vector(self, h, what, positive=True):
        v = np.asarray(h, dtype=float)
        if v.shape != (self.m,):
            raise InvalidInput(f"{what}: expected a support vector of length {self.m}")
        if not np.all(np.isfinite(v)):
            raise InvalidInput(f"{what}: support vector must be finite")
        if positive and np.any(v <= 0.0):
            raise DomainError(f"{what}: support numbers must be strictly positive")
        return v

    def support_map(self, i):
        """Matrix S_i with h_{i.} = S_i h (rows follow face i's entries)."""
        if self._support_maps is None:
            self._support_maps = [None] * self.m
        if self._support_maps[i] is None:
            face = self.faces[i]
            S = np.zeros((len(face), self.m))
            for k, e in enumerate(face):
                sh = math.sinh(e.phi)
                S[k, i] += math.cosh(e.phi) / sh
                S[k, e.to] -= 1.0 / sh
            S.setflags(write=False)
            self._support_maps[i] = S
        return self._support_maps[i]

    def to_json_dict(self, h=None):
        data = {
            "genus": self.genus,
            "faces": [{"adjacencies": [{"to": e.to, "phi": e.phi, "omega": e.omega}
                                       for e in face]}
                      for face in self.faces],
        }
        if self.declared_vertices is not None:
            data["vertices"] = self.declared_vertices
        if h is not None:
            data["h"] = list(map(float, h))
        return data

    @classmethod
    def from_json_dict(cls, data):
        try:
            genus = data["genus"]
            faces = [[(a["to"], a["phi"], a["omega"]) for a in f["adjacencies"]]
                     for f in data["faces"]]
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"fuchsian JSON needs 'genus' and 'faces': {exc}") from exc
        return cls(faces, int(genus), vertices=data.get("vertices"))


def fan_from_json_dict(data):
    """QuotientFan plus support vector from the fuchsian JSON schema."""
    fan = QuotientFan.from_json_dict(data)
    try:
        h = data["h"]
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"fuchsian JSON needs 'h': {exc}") from exc
    return fan, fan._vector(h, "fuchsian JSON h")


def regular_genus2_fan():
    """One face class adjacent to itself 8 times: the regular octagon pattern.

    phi is the side length 2 arccosh(cot(pi/8)) of the regular hyperbolic
    octagon with corner angles pi/4 (the one-vertex genus-2 pattern); the
    in-face turnings are pi/4.
    """
    phi = 2.0 * math.acosh(1.0 / math.tan(math.pi / 8.0))
    entries = [(0, phi, math.pi / 4.0)] * 8
    return QuotientFan([entries], genus=2)


# =============================================================================
# SUPPORT NUMBERS AND COVOLUME
# =============================================================================

def face_support_numbers_lorentz(fan, h, i):
    """In-face support numbers h_{i.} = S_i h for face class i."""
    if not (0 <= i < fan.m):
        raise InvalidInput(f"face_support_numbers_lorentz: no face class {i}")
    return fan.support_map(i) @ fan._vector(h, "face_support_numbers_lorentz")


def cone_membership(fan, h, tol=1e-12):
    """Classify h by the signs of all in-face edge lengths."""
    v = fan._vector(h, "cone_membership")
    tau = tol * float(np.linalg.norm(v))
    degenerate = []
    outside = []
    for i in range(fan.m):
        lengths = poly.edge_lengths(fan.face_fans[i], fan.support_map(i) @ v)
        for k, ell in enumerate(lengths):
            if ell < -tau:
                outside.append((i, k))
            elif ell <= tau:
                degenerate.append((i, k))
    if outside:
        return poly.ConeLocation("outside", outside)
    if degenerate:
        return poly.ConeLocation("boundary", degenerate)
    return poly.ConeLocation("interior", [])


def covolume(fan, h):
    """covol(h) = (1/3) sum_i h_i a_i(h_{i.})."""
    v = fan._vector(h, "covolume")
    total = 0.0
    for i in range(fan.m):
        hi = fan.support_map(i) @ v
        total += v[i] * poly.area_form(fan.face_fans[i]).q(hi)
    return total / 3.0


def _face_grams(fan):
    """G_i = S_i' A_i S_i: the form h -> a_i(h_{i.}) as an m x m matrix."""
    grams = []
    for i in range(fan.m):
        S = fan.support_map(i)
        A = poly.area_form(fan.face_fans[i]).entries
        grams.append(S.T @ A @ S)
    return grams


def covolume_form(fan):
    """The mixed covolume as a symmetric trilinear form.

    Raw slices T[i] = (1/3) G_i; total symmetry is a theorem and doubles
    as a data-integrity check before symmetrizing.
    """
    if fan._covolume_form is None:
        T = np.stack(_face_grams(fan)) / 3.0
        fan._covolume_form = TrilinearForm(T, symmetry_tol=1e-10)
    return fan._covolume_form


def covolume_hessian(fan, h):
    """Hessian of the covolume at h: the Jacobian of the face areas.

    Assembled entrywise from the edge lengths (see the module docstring);
    checked to be symmetric and to equal 6 covol(., ., h) from the
    polarized tensor, then returned as a SymmetricForm.  Strict diagonal
    dominance with positive diagonal (hence positive definiteness) holds
    on the open cone.
    """
    v = fan._vector(h, "covolume_hessian")
    J = np.zeros((fan.m, fan.m))
    for i in range(fan.m):
        lengths = poly.edge_lengths(fan.face_fans[i], fan.support_map(i) @ v)
        if np.any(lengths <= 0.0):
            raise DomainError(
                f"covolume_hessian: h is not in the open cone (face {i} has a "
                f"non-positive edge)")
        for k, e in enumerate(fan.faces[i]):
            sh = math.sinh(e.phi)
            ell = float(lengths[k])
            if e.to != i:
                J[i, e.to] -= ell / sh
                J[i, i] += math.cosh(e.phi) * ell / sh
            else:
                J[i, i] += (math.cosh(e.phi) - 1.0) * ell / sh

    scale = max(1.0, float(np.max(np.abs(J))))
    defect = float(np.max(np.abs(J - J.T)))
    if defect > 1e-10 * scale:
        raise ConsistencyError(
            f"covolume Hessian is not symmetric: defect {defect:.3e} at scale {scale:.3e}")
    via_tensor = 6.0 * covolume_form(fan).contract(v).entries
    cross = float(np.max(np.abs(J - via_tensor)))
    if cross > 1e-10 * scale:
        raise ConsistencyError(
            f"covolume Hessian disagrees with 6 covol(.,.,h): defect {cross:.3e}")
    return SymmetricForm(J, symmetry_tol=1e-10)


def fuchsian_area_form(fan):
    """area(h) = sum_i a_i(h_{i.}) as a positive definite m x m form.

    Cross-checked against 3 covol(1, ., .); a non-positive eigenvalue is
    reported as a falsified invariant, not silently returned.
    """
    if fan._area_form is None:
        M = np.add.reduce(_face_grams(fan))
        form = SymmetricForm(M, symmetry_tol=1e-10)
        ones = np.ones(fan.m)
        via_tensor = 3.0 * covolume_form(fan).contract(ones).entries
        scale = max(1.0, float(np.max(np.abs(M))))
        defect = float(np.max(np.abs(form.entries - via_tensor)))
        if defect > 1e-10 * scale:
            raise ConsistencyError(
                f"area form disagrees with 3 covol(1,.,.): defect {defect:.3e}")
        min_eig = float(form.eigenvalues()[0])
        if min_eig <= 0.0:
            raise InvariantFalsified(
                f"Fuchsian area form is not positive definite: min eigenvalue {min_eig!r}")
        fan._area_form = form
    return fan._area_form


# =============================================================================
# SPHERICAL STRUCTURE
# =============================================================================

def spherical_distance(fan, h, k):
    """arccos( b(h,k) / sqrt(q(h)q(k)) ) -- zero exactly at homotheties."""
    u = fan._vector(h, "spherical_distance")
    v = fan._vector(k, "spherical_distance")
    for name, w in (("h", u), ("k", v)):
        if cone_membership(fan, w).status != "interior":
            raise DomainError(f"spherical_distance: {name} is not interior")
    form = fuchsian_area_form(fan)
    arg = form.b(u, v) / math.sqrt(form.q(u) * form.q(v))
    if arg > 1.0 + ARCCOS_SLACK:
        raise InvariantFalsified(
            f"normalized pairing {arg!r} > 1: Cauchy-Schwarz violated for a "
            f"positive definite form")
    return float(math.acos(_clamp(arg)))


def is_homothety_pair(fan, h, k, tol=HOMOTHETY_TOL):
    """Whether k = lambda h within tol * ||k|| (lambda = b(h,k)/q(h))."""
    u = fan._vector(h, "is_homothety_pair")
    v = fan._vector(k, "is_homothety_pair")
    form = fuchsian_area_form(fan)
    lam = form.b(u, v) / form.q(u)
    return float(np.linalg.norm(v - lam * u)) <= tol * float(np.linalg.norm(v))


def _clamp(x):
    return min(1.0, max(-1.0, x))


class FuchsianSupport:
    """A quotient fan with a positive support vector in its closed cone."""

    def __init__(self, fan, h):
        self.fan = fan
        self.h = fan._vector(h, "FuchsianSupport")
        self.membership = cone_membership(fan, self.h)
        if self.membership.status == "outside":
            raise DomainError(
                f"support vector lies outside the cone: negative edges "
                f"{self.membership.edges}")

    @property
    def interior(self):
        return self.membership.status == "interior"
