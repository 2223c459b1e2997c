"""Access to the packaged sphere-ring fixture.

The fixture lives over Q[x,y,z]/(x^2+y^2+z^2-1) and ships two sibling
pairs of systems with the same endomorphisms but different input
modules, each with a certificate that their one-step dynamic
enlargements are feedback isomorphic:

* ``Sigma`` / ``SigmaPrime`` carry the input module spanned by
  (x, y, z, 0) and e4; ``cert_main`` certifies the enlargements
  isomorphic through a unit lower-triangular state map.
* ``SigmaLB`` / ``SigmaPrimeLB`` carry the free input module spanned by
  e1, e2, e3 (these two are reachable with projective layer modules,
  and their Z-layers differ by a stably free, non-free summand, so the
  unenlarged systems are not feedback isomorphic); ``cert_orth``
  certifies the enlargements isomorphic through an orthogonal state
  map built from the quaternion completion of the row (0, x, y, z).

Certificate verification is pure ring arithmetic, so both certificates
are checkable even though membership in submodules over this ring is
undecidable for the rest of the package.
"""

from __future__ import annotations

from pathlib import Path


def sphere_fixture_path() -> Path:
    """Path of the packaged sphere fixture file."""
    return Path(__file__).parent / "data" / "sphere.json"
