import math
from fractions import Fraction

import numpy as np
import pytest

from crawford.linalg import frobenius_ceiling, hermitian_split
from crawford.sdp import (
    BlockDiagSymmetric,
    SdpInstance,
    assemble_feasible_point,
    block_project,
    build_instance,
    export_sdpa,
    modulus_psd_block,
    read_sdpa,
    subspace_basis,
)
from helpers import EXAMPLE, random_density, random_hermitian_gaussian_integer


def example_instance() -> SdpInstance:
    pen = hermitian_split(EXAMPLE)
    return build_instance(pen, frobenius_ceiling(EXAMPLE))


def sym_unit(m, i, j):
    out = np.zeros((m, m))
    out[i, j] = 1.0
    out[j, i] = 1.0
    return out


class TestModulusBlock:
    def test_three_four_five(self):
        m = modulus_psd_block(3.0, 4.0, 5.0)
        assert np.array_equal(m, [[8.0, 4.0], [4.0, 2.0]])
        assert abs(np.linalg.det(m)) < 1e-12
        assert np.linalg.eigvalsh(m)[0] >= 0.0

    def test_origin(self):
        assert np.array_equal(modulus_psd_block(0.0, 0.0, 0.0), np.zeros((2, 2)))

    def test_boundary_irrational(self):
        r = math.sqrt(10.0)
        m = modulus_psd_block(3.0, 1.0, r)
        assert np.allclose(m, [[r + 3, 1.0], [1.0, r - 3]])
        assert abs(np.linalg.det(m)) < 1e-12


class TestSubspaceBasis:
    def test_n2_matches_displayed_family(self):
        m = 7
        expected = []
        for i in range(4):
            for j in (4, 5, 6):
                expected.append(sym_unit(m, i, j))
        for i in (4, 5):
            expected.append(sym_unit(m, i, 6))
        expected.append(sym_unit(m, 0, 2))
        expected.append(sym_unit(m, 1, 3))
        expected.append(sym_unit(m, 0, 3) + sym_unit(m, 1, 2))
        for i in range(2):
            for j in range(i, 2):
                expected.append(sym_unit(m, i, j) - sym_unit(m, 2 + i, 2 + j))
        got = subspace_basis(2)
        assert len(got) == 20 == len(expected)
        for f, e in zip(got, expected):
            assert np.array_equal(f.astype(float), e)

    def test_n1_count_and_independence(self):
        fs = [f.astype(float).ravel() for f in subspace_basis(1)]
        assert len(fs) == 10
        gram = np.array([[u @ v for v in fs] for u in fs])
        assert np.linalg.matrix_rank(gram) == 10

    def test_entries_in_minus_one_zero_one(self):
        for n in (1, 2, 3, 5):
            for f in subspace_basis(n):
                vals = set(f.ravel().tolist())
                assert vals <= {Fraction(-1), Fraction(0), Fraction(1)}

    def test_annihilates_structured_points(self):
        rng = np.random.default_rng(21)
        for n in (1, 2, 3):
            basis = [f.astype(float) for f in subspace_basis(n)]
            for _ in range(100 // len((1, 2, 3)) + 1):
                h = random_hermitian_gaussian_integer(rng, n).to_complex()
                yh = np.block([[h.real, -h.imag], [h.imag, h.real]])
                tt = rng.standard_normal((2, 2))
                z = BlockDiagSymmetric(
                    y=yh, uv=tt + tt.T, t=float(rng.standard_normal())
                )
                full = z.embed()
                for f in basis:
                    assert abs((f * full).sum()) < 1e-9

    def test_dimension_identity(self):
        for n in range(1, 9):
            fs = [f.astype(float).ravel() for f in subspace_basis(n)]
            N = n * n + 7 * n + 2
            assert len(fs) == N
            # annihilator count + structured-subspace dim fills the ambient space
            assert N + (n * n + 4) == (n + 2) * (2 * n + 3)
            gram = np.array([[u @ v for v in fs] for u in fs])
            assert np.linalg.matrix_rank(gram) == N

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            subspace_basis(0)


class TestBuildInstance:
    def test_reference_tail_blocks(self):
        inst = example_instance()
        assert inst.n == 2
        assert inst.N == 20
        assert inst.m == 24
        assert inst.block_sizes == (4, 2, 1)
        tails = inst.tail_constraints()
        f1, b1 = tails[0]
        assert np.array_equal(f1.y, -inst.ahat)
        assert np.array_equal(
            f1.uv.astype(float), np.array([[1.0, 0.0], [0.0, -1.0]])
        )
        assert f1.t == 0 and b1 == 0
        f2, b2 = tails[1]
        assert np.array_equal(f2.y, -inst.bhat)
        assert np.array_equal(
            f2.uv.astype(float), np.array([[0.0, 1.0], [1.0, 0.0]])
        )
        assert b2 == 0
        f3, b3 = tails[2]
        assert np.array_equal(f3.y.astype(float), np.eye(4))
        assert b3 == 2
        f4, b4 = tails[3]
        assert np.array_equal(f4.uv.astype(float), np.eye(2))
        assert f4.t == 2
        assert b4 == 18

    def test_objective_reads_half_u_plus_w(self):
        inst = example_instance()
        rng = np.random.default_rng(5)
        for _ in range(20):
            vec = rng.standard_normal(inst.ambient_dim**2 + 1)
            z = BlockDiagSymmetric.from_flat(inst.n, vec[: 16 + 4 + 1])
            u, w = z.uv[0, 0], z.uv[1, 1]
            assert abs(inst.f0.to_float().inner(z) - 0.5 * (u + w)) < 1e-12

    def test_feasible_iff_r_dominates_modulus(self):
        inst = example_instance()
        pen = hermitian_split(EXAMPLE)
        a_f = pen.a.to_complex()
        b_f = pen.b.to_complex()
        rng = np.random.default_rng(9)
        for _ in range(40):
            x = random_density(rng, 2)
            zval = complex((a_f.conj() * x).sum().real, (b_f.conj() * x).sum().real)
            for r in (abs(zval) * 1.01 + 1e-6, abs(zval) + 1.0):
                z = assemble_feasible_point(inst, x, r)
                full = z.embed()
                for f, b in inst.constraints:
                    assert abs((f.astype(float) * full).sum() - float(b)) < 1e-8
                assert np.linalg.eigvalsh(z.y)[0] >= -1e-9
                assert np.linalg.eigvalsh(z.uv)[0] >= -1e-9
                assert z.t >= -1e-9
            if abs(zval) > 1e-3:
                bad = assemble_feasible_point(inst, x, abs(zval) * 0.98)
                assert np.linalg.eigvalsh(bad.uv)[0] < 0.0

    def test_structured_points_lie_in_affine_slice(self):
        inst = example_instance()
        rng = np.random.default_rng(13)
        for _ in range(10):
            z = assemble_feasible_point(inst, random_density(rng, 2), 3.0)
            full = z.embed()
            for f, _ in inst.constraints[: inst.N]:
                assert abs((f.astype(float) * full).sum()) < 1e-9

    def test_rejects_zero_pencil(self):
        from crawford.linalg import ComplexMatrix

        pen = hermitian_split(ComplexMatrix.zeros(2))
        with pytest.raises(ValueError):
            build_instance(pen, 1)

    def test_rejects_bad_ceiling(self):
        pen = hermitian_split(EXAMPLE)
        with pytest.raises(ValueError):
            build_instance(pen, 0)


class TestExportSdpa:
    def test_header_and_key_lines(self, tmp_path):
        inst = example_instance()
        path = tmp_path / "example.dat-s"
        export_sdpa(inst, path)
        text = path.read_bytes().decode()
        assert "\r" not in text
        lines = text.splitlines()
        assert lines[0] == "24"
        assert lines[1] == "3"
        assert lines[2] == "4 2 1"
        assert lines[3].endswith("2.0 18.0")
        assert lines[3].split()[:20] == ["0.0"] * 20
        f0_lines = [ln for ln in lines if ln.startswith("0 ")]
        assert f0_lines == ["0 2 1 1 0.5", "0 2 2 2 0.5"]

    def test_cross_block_annihilators_emit_nothing(self, tmp_path):
        inst = example_instance()
        path = tmp_path / "example.dat-s"
        export_sdpa(inst, path)
        matnos = {
            int(ln.split()[0]) for ln in path.read_text().splitlines()[4:]
        }
        # families coupling distinct blocks vanish against the variable
        assert matnos.isdisjoint(range(1, 15))
        assert "15 1 1 3 1.0" in path.read_text()

    def test_reexport_is_byte_identical(self, tmp_path):
        inst = example_instance()
        p1 = tmp_path / "a.dat-s"
        p2 = tmp_path / "b.dat-s"
        export_sdpa(inst, p1)
        export_sdpa(inst, p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_round_trip_blockwise(self, tmp_path):
        inst = example_instance()
        path = tmp_path / "rt.dat-s"
        export_sdpa(inst, path)
        data = read_sdpa(path)
        assert data.mdim == inst.m
        assert data.block_sizes == (4, 2, 1)
        assert np.allclose(
            data.b, [float(b) for _, b in inst.constraints], atol=1e-15
        )
        mats = [inst.f0] + [
            block_project(f, inst.n) for f, _ in inst.constraints
        ]
        for got, want in zip(data.matrices, mats):
            w = want.to_float()
            assert np.allclose(got[0], w.y, atol=1e-15)
            assert np.allclose(got[1], w.uv, atol=1e-15)
            assert np.allclose(got[2], [[w.t]], atol=1e-15)

    def test_io_error_carries_path(self, tmp_path):
        inst = example_instance()
        bad = tmp_path / "missing" / "x.dat-s"
        with pytest.raises(OSError, match="x.dat-s"):
            export_sdpa(inst, bad)
