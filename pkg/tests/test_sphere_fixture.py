"""Integrity of the packaged quotient-ring fixture.

The fixture is the one place the package exercises certificate
verification over a ring where submodule membership is undecidable for
us, so these tests pin its contents tightly: byte-identical
regeneration, exact matrix entries, acceptance of both certificates,
and rejection of every single-entry perturbation.
"""

from __future__ import annotations

import importlib.util
from pathlib import Path

import pytest

from ringsys import (
    IsoCertificate,
    PolyQuotient,
    RingMatrix,
    UnsupportedRing,
    compute_chain,
    det,
    dynamic_enlarge,
    verify_certificate,
)
from ringsys.fixtures import sphere_fixture_path
from ringsys.sysfile import emit, parse


@pytest.fixture(scope="module")
def fixture():
    return parse(sphere_fixture_path())


def test_ring_block(fixture):
    ring = fixture.ring
    assert isinstance(ring, PolyQuotient)
    assert ring.variables == ("x", "y", "z")
    assert ring.element("x^2+y^2+z^2") == ring.element("1")


def test_pinned_endomorphisms(fixture):
    f = fixture.systems["Sigma"].endo
    fp = fixture.systems["SigmaPrime"].endo
    assert f.to_str_rows() == [
        ["0", "0", "0", "0"],
        ["0", "0", "0", "0"],
        ["0", "0", "0", "0"],
        ["1", "0", "0", "0"],
    ]
    assert fp.to_str_rows() == [
        ["0", "0", "0", "0"],
        ["0", "0", "0", "0"],
        ["0", "0", "0", "0"],
        ["x", "y", "z", "0"],
    ]
    assert fixture.systems["SigmaLB"].endo == f
    assert fixture.systems["SigmaPrimeLB"].endo == fp


def test_pinned_state_map(fixture):
    phi = fixture.certificates["cert_main"].certificate.phi
    assert phi.to_str_rows() == [
        ["1", "0", "0", "0", "0"],
        ["x", "1", "0", "0", "0"],
        ["y", "0", "1", "0", "0"],
        ["z", "0", "0", "1", "0"],
        ["0", "0", "0", "0", "1"],
    ]
    assert str(det(phi)) == "1"


def test_enlargements_match_library_construction(fixture):
    for base in ("Sigma", "SigmaPrime", "SigmaLB", "SigmaPrimeLB"):
        assert fixture.system(f"G1+{base}") == dynamic_enlarge(fixture.system(base), 1)


@pytest.mark.parametrize("name", ["cert_main", "cert_orth"])
def test_certificates_accept(fixture, name):
    entry = fixture.certificates[name]
    result = verify_certificate(
        fixture.system(entry.source), fixture.system(entry.target), entry.certificate
    )
    assert result.accepted


@pytest.mark.parametrize("name", ["cert_main", "cert_orth"])
def test_every_single_entry_perturbation_rejects(fixture, name):
    entry = fixture.certificates[name]
    src = fixture.system(entry.source)
    tgt = fixture.system(entry.target)
    cert = entry.certificate
    ring = fixture.ring
    phi = cert.phi
    for i in range(phi.rows):
        for j in range(phi.cols):
            entries = list(phi.entries)
            entries[i * phi.cols + j] = ring.add(entries[i * phi.cols + j], ring.one())
            bad = RingMatrix(ring, phi.rows, phi.cols, tuple(entries))
            result = verify_certificate(
                src, tgt, IsoCertificate(bad, cert.psi, cert.U, cert.V, cert.Kw)
            )
            assert not result.accepted
            assert result.reason == "inverse"


def test_chain_computation_refuses_this_ring(fixture):
    with pytest.raises(UnsupportedRing):
        compute_chain(fixture.system("Sigma"))


def test_fixture_regenerates_byte_identically():
    spec = importlib.util.spec_from_file_location(
        "make_sphere_fixture",
        Path(__file__).resolve().parent.parent / "scripts" / "make_sphere_fixture.py",
    )
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    regenerated = emit(module.build())
    committed = sphere_fixture_path().read_text(encoding="utf-8")
    assert regenerated == committed


def test_orthogonal_map_inverse_is_transpose(fixture):
    cert = fixture.certificates["cert_orth"].certificate
    # psi is phi's transpose: orthogonality over the sphere relation
    assert cert.psi == cert.phi.transpose()
    assert cert.phi @ cert.psi == RingMatrix.identity(fixture.ring, 5)
