import math
from fractions import Fraction

import numpy as np
import pytest

from crawford.linalg import ComplexMatrix, GaussianRational, hermitian_split
from crawford.oracle import (
    chi_oracle,
    minimizing_witness,
    sample_boundary,
    support_profile,
    support_search,
    write_boundary_csv,
    write_boundary_svg,
    zero_membership,
)
from helpers import (
    CHI_EXAMPLE,
    DIAG_PM,
    EXAMPLE,
    EXAMPLE_TILDE,
    IDENTITY2,
    gr,
    identity,
    random_gaussian_integer,
)


def float_parts(mat: ComplexMatrix):
    pen = hermitian_split(mat)
    return pen.a.to_complex(), pen.b.to_complex()


class TestChiOracle:
    def test_reference_example(self):
        got = chi_oracle(EXAMPLE, 1e-4)
        assert abs(got - 1.923) < 1e-3
        assert abs(got - CHI_EXAMPLE) < 1e-4

    def test_indefinite_diagonal(self):
        assert chi_oracle(DIAG_PM, 1e-4) == 0.0

    def test_identity(self):
        assert chi_oracle(IDENTITY2, 1e-4) == pytest.approx(1.0, abs=1e-9)

    def test_scalar_matrix(self):
        c = ComplexMatrix([[gr(3, 4)]])
        assert chi_oracle(c, 1e-4) == pytest.approx(5.0, abs=1e-9)

    def test_grid_size_formula(self):
        delta = 1e-2
        prof = support_profile(EXAMPLE, delta)
        want = math.ceil(2.0 * math.pi * prof.lipschitz_L / delta) + 8
        assert prof.thetas.shape[0] == want
        assert prof.lipschitz_L == pytest.approx(
            math.sqrt(28.0) + math.sqrt(12.0)
        )

    def test_rejects_bad_delta(self):
        with pytest.raises(ValueError):
            support_profile(EXAMPLE, 0.0)

    def test_lipschitz_between_adjacent_nodes(self):
        prof = support_profile(EXAMPLE, 1e-2)
        step = 2.0 * math.pi / prof.thetas.shape[0]
        diffs = np.abs(np.diff(prof.gmin))
        assert diffs.max() <= prof.lipschitz_L * step * (1.0 + 1e-9)

    def test_search_angle_matches_reference(self):
        # golden refinement converges far below the grid delta
        s = support_search(EXAMPLE, 1e-4)
        assert s.chi == pytest.approx(CHI_EXAMPLE, abs=1e-6)
        assert s.theta == pytest.approx(0.6478507, abs=1e-4)


class TestSampleBoundary:
    def test_identity_collapses(self):
        for z in sample_boundary(IDENTITY2, 12):
            assert abs(z - 1.0) < 1e-12

    def test_normal_matrix_endpoints(self):
        for z in sample_boundary(DIAG_PM, 4):
            assert min(abs(z - 1.0), abs(z + 1.0)) < 1e-9

    def test_reference_min_modulus(self):
        pts = sample_boundary(EXAMPLE, 720)
        assert abs(min(abs(z) for z in pts) - 1.923) < 1e-2

    def test_membership_via_support_inequalities(self):
        a_f, b_f = float_parts(EXAMPLE)
        for z in sample_boundary(EXAMPLE, 60):
            for phi in np.linspace(0.0, 2.0 * math.pi, 37):
                h = math.cos(phi) * a_f + math.sin(phi) * b_f
                support = np.linalg.eigvalsh(h)[-1]
                assert math.cos(phi) * z.real + math.sin(phi) * z.imag <= support + 1e-8

    def test_convexity_consistency(self):
        rng = np.random.default_rng(37)
        for _ in range(5):
            c = random_gaussian_integer(rng, 3, -2, 2)
            m = 400
            pts = sample_boundary(c, m)
            prof = support_profile(c, 1e-2)
            gap = 2.0 * math.pi * prof.lipschitz_L / m
            chi = chi_oracle(c, 1e-2)
            assert min(abs(z) for z in pts) >= chi - gap - 1e-2

    def test_rotation_equivariance(self):
        phi = math.pi / 7
        den = 10**12
        q = GaussianRational(
            Fraction(round(math.cos(phi) * den), den),
            Fraction(round(math.sin(phi) * den), den),
        )
        rotated = EXAMPLE.scale(q)
        m = 90
        a_f, b_f = float_parts(EXAMPLE)
        cf = EXAMPLE.to_complex()
        got = sample_boundary(rotated, m)
        for k, zr in enumerate(got):
            # cos(t)A' + sin(t)B' = H(t - phi) for the unrotated pencil
            t = 2.0 * math.pi * k / m - phi
            h = math.cos(t) * a_f + math.sin(t) * b_f
            _, vec = np.linalg.eigh(h)
            x = vec[:, -1]
            z = complex(x.conj() @ cf @ x) * complex(math.cos(phi), math.sin(phi))
            assert abs(zr - z) < 1e-9

    def test_rejects_tiny_m(self):
        with pytest.raises(ValueError):
            sample_boundary(EXAMPLE, 2)


class TestZeroMembership:
    def test_untranslated_reference_contains_zero(self):
        assert zero_membership(EXAMPLE_TILDE, 1e-4)

    def test_default_delta_agrees(self):
        assert zero_membership(EXAMPLE_TILDE)

    def test_translated_reference_does_not(self):
        assert not zero_membership(EXAMPLE, 1e-4)

    def test_identity_does_not(self):
        for n in (1, 2, 4):
            assert not zero_membership(identity(n), 1e-4)


class TestMinimizingWitness:
    def test_reference_witness_modulus(self):
        s = support_search(EXAMPLE, 1e-4)
        a_f, b_f = float_parts(EXAMPLE)
        x = minimizing_witness(a_f, b_f, s.theta)
        assert np.linalg.norm(x) == pytest.approx(1.0, abs=1e-12)
        z = complex(x.conj() @ EXAMPLE.to_complex() @ x)
        assert abs(z) == pytest.approx(CHI_EXAMPLE, abs=1e-6)

    def test_degenerate_eigenspace_mixture(self):
        # normal matrix diag(1, 1+2i): support at theta = 0 is doubly
        # degenerate, nearest point of the segment [1, 1+2i] is 1
        c = ComplexMatrix([[gr(1), gr(0)], [gr(0), gr(1, 2)]])
        a_f, b_f = float_parts(c)
        x = minimizing_witness(a_f, b_f, 0.0)
        z = complex(x.conj() @ c.to_complex() @ x)
        assert abs(z - 1.0) < 1e-9
        assert chi_oracle(c, 1e-6) == pytest.approx(1.0, abs=1e-6)

    def test_witness_agrees_with_chi_randomized(self):
        rng = np.random.default_rng(41)
        for _ in range(8):
            c = random_gaussian_integer(rng, 3, -2, 2)
            s = support_search(c, 1e-3)
            if s.chi == 0.0:
                continue
            a_f, b_f = float_parts(c)
            x = minimizing_witness(a_f, b_f, s.theta)
            z = complex(x.conj() @ c.to_complex() @ x)
            # golden refinement drives the theta error well below the
            # grid delta, so the witness modulus is much tighter than 1e-3
            assert abs(abs(z) - s.chi) <= 1e-4


class TestWriters:
    def test_csv_layout(self, tmp_path):
        path = tmp_path / "boundary.csv"
        pts = write_boundary_csv(EXAMPLE, 720, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "theta,re,im"
        assert len(lines) == 721
        assert len(pts) == 720
        first = lines[1].split(",")
        assert float(first[0]) == 0.0
        assert complex(float(first[1]), float(first[2])) == pytest.approx(pts[0])

    def test_csv_io_error(self, tmp_path):
        with pytest.raises(OSError, match="boundary.csv"):
            write_boundary_csv(EXAMPLE, 8, tmp_path / "nope" / "boundary.csv")

    def test_svg_layout(self, tmp_path):
        path = tmp_path / "range.svg"
        pts = sample_boundary(EXAMPLE, 64)
        write_boundary_svg(pts, path, marker=complex(1.533, 1.161))
        text = path.read_text()
        assert text.startswith("<svg ")
        assert "<polyline" in text
        assert '<circle' in text and 'fill="red"' in text
        assert text.rstrip().endswith("</svg>")

    def test_svg_marker_optional(self, tmp_path):
        path = tmp_path / "plain.svg"
        write_boundary_svg(sample_boundary(IDENTITY2, 8), path)
        assert "<circle" not in path.read_text()
