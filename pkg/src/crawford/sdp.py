"""Standard-form SDP whose optimal value is the Crawford number.

Variable lives in H_{2n+3}(R) with block sizes (2n, 2, 1):
Z = diag(Y, [[u, v], [v, w]], t).  The constraint list is

  F_1 .. F_N          annihilators pinning Y to the hat subspace and the
                      blocks to each other (entries in {-1, 0, 1}),
  F_{N+1}             u - w = <Ahat, Y>,
  F_{N+2}             2v = <Bhat, Y>,
  F_{N+3}             tr Y = 2,
  F_{N+4}             u + w + 2t = 2(frob_ceiling + 2),

with N = n^2 + 7n + 2, and the objective F_0 reads off (u + w)/2.

Construction is exact (Fraction); floats appear only in exported files
and in the solver-facing views.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np

from .linalg import ComplexMatrix, HermitianPencil


@dataclass(frozen=True)
class BlockDiagSymmetric:
    """Element of the block-diagonal subalgebra, blocks (2n, 2, 1).

    `y` is the 2n x 2n block, `uv` the 2x2 block, `t` the scalar.  Arrays
    may hold Fractions (object dtype) or float64; operations preserve
    whichever arithmetic they are given.
    """

    y: np.ndarray
    uv: np.ndarray
    t: object

    def __post_init__(self):
        if self.y.shape[0] != self.y.shape[1] or self.y.shape[0] % 2:
            raise ValueError("y block must be square of even size")
        if self.uv.shape != (2, 2):
            raise ValueError("uv block must be 2x2")

    @property
    def n(self) -> int:
        return self.y.shape[0] // 2

    @property
    def dim(self) -> int:
        return self.y.shape[0] + 3

    def inner(self, other: "BlockDiagSymmetric"):
        return (
            (self.y * other.y).sum()
            + (self.uv * other.uv).sum()
            + self.t * other.t
        )

    def embed(self) -> np.ndarray:
        """Full (2n+3) x (2n+3) matrix with this block-diagonal content."""
        m = self.dim
        exact = self.y.dtype == object
        out = (
            np.full((m, m), Fraction(0), dtype=object)
            if exact
            else np.zeros((m, m))
        )
        k = self.y.shape[0]
        out[:k, :k] = self.y
        out[k : k + 2, k : k + 2] = self.uv
        out[k + 2, k + 2] = self.t
        return out

    def to_float(self) -> "BlockDiagSymmetric":
        return BlockDiagSymmetric(
            y=self.y.astype(float), uv=self.uv.astype(float), t=float(self.t)
        )

    def flat(self) -> np.ndarray:
        """Float coordinates (y entries, uv entries, t) as one vector."""
        return np.concatenate(
            [
                self.y.astype(float).ravel(),
                self.uv.astype(float).ravel(),
                [float(self.t)],
            ]
        )

    @staticmethod
    def from_flat(n: int, vec: np.ndarray) -> "BlockDiagSymmetric":
        k = 2 * n
        y = np.asarray(vec[: k * k], dtype=float).reshape(k, k)
        uv = np.asarray(vec[k * k : k * k + 4], dtype=float).reshape(2, 2)
        return BlockDiagSymmetric(y=y, uv=uv, t=float(vec[-1]))

    @staticmethod
    def zeros(n: int, exact: bool = True) -> "BlockDiagSymmetric":
        if exact:
            return BlockDiagSymmetric(
                y=np.full((2 * n, 2 * n), Fraction(0), dtype=object),
                uv=np.full((2, 2), Fraction(0), dtype=object),
                t=Fraction(0),
            )
        return BlockDiagSymmetric(
            y=np.zeros((2 * n, 2 * n)), uv=np.zeros((2, 2)), t=0.0
        )


def block_project(full: np.ndarray, n: int) -> BlockDiagSymmetric:
    """Block-diagonal part of a full (2n+3) x (2n+3) matrix."""
    k = 2 * n
    return BlockDiagSymmetric(
        y=full[:k, :k].copy(),
        uv=full[k : k + 2, k : k + 2].copy(),
        t=full[k + 2, k + 2],
    )


def modulus_psd_block(x: float, y: float, r: float) -> np.ndarray:
    """[[r+x, y], [y, r-x]]; PSD exactly when r >= sqrt(x^2 + y^2)."""
    return np.array([[r + x, y], [y, r - x]], dtype=float)


def _sym_unit(m: int, i: int, j: int) -> np.ndarray:
    """E_ij: symmetric unit matrix with 1 at (i,j) and (j,i), Fractions."""
    out = np.full((m, m), Fraction(0), dtype=object)
    out[i, j] = Fraction(1)
    out[j, i] = Fraction(1)
    return out


def subspace_basis(n: int) -> List[np.ndarray]:
    """The N = n^2 + 7n + 2 independent annihilators of the block-diagonal
    hat-structured subspace, as full (2n+3) x (2n+3) symmetric matrices
    with entries in {-1, 0, 1}.

    Ordering (0-based indices, ambient size m = 2n+3):
      1. E_ij for i < 2n, j in {2n, 2n+1, 2n+2}: kill coupling of the big
         block to the tail coordinates.
      2. E_{i, 2n+2} for i in {2n, 2n+1}: kill coupling of the 2x2 block
         to the scalar.
      3. E_{i, n+i} for i < n: diagonal of the Im block must vanish.
      4. E_{i, n+j} + E_{j, n+i} for i < j < n: Im block antisymmetric.
      5. E_{ij} - E_{(n+i)(n+j)} for i <= j < n: the two Re blocks agree.
    """
    if n < 1:
        raise ValueError("n must be positive")
    m = 2 * n + 3
    out: List[np.ndarray] = []
    for i in range(2 * n):
        for j in (2 * n, 2 * n + 1, 2 * n + 2):
            out.append(_sym_unit(m, i, j))
    for i in (2 * n, 2 * n + 1):
        out.append(_sym_unit(m, i, 2 * n + 2))
    for i in range(n):
        out.append(_sym_unit(m, i, n + i))
    for i in range(n):
        for j in range(i + 1, n):
            out.append(_sym_unit(m, i, n + j) + _sym_unit(m, j, n + i))
    for i in range(n):
        for j in range(i, n):
            out.append(_sym_unit(m, i, j) - _sym_unit(m, n + i, n + j))
    assert len(out) == n * n + 7 * n + 2
    return out


@dataclass(frozen=True)
class SdpInstance:
    """Exact instance data.  `constraints` holds (F_i, b_i) for i = 1..N+4
    with each F_i a full symmetric object array; the last four are the
    embedded tail constraints.  `ahat` / `bhat` keep the hat matrices
    handy for the solver and for certificate repair.
    """

    n: int
    f0: BlockDiagSymmetric
    constraints: Tuple[Tuple[np.ndarray, Fraction], ...]
    frob_ceiling: int
    ahat: np.ndarray
    bhat: np.ndarray

    @property
    def N(self) -> int:
        return self.n * self.n + 7 * self.n + 2

    @property
    def block_sizes(self) -> Tuple[int, int, int]:
        return (2 * self.n, 2, 1)

    @property
    def ambient_dim(self) -> int:
        return 2 * self.n + 3

    @property
    def m(self) -> int:
        return len(self.constraints)

    def tail_constraints(self) -> List[Tuple[BlockDiagSymmetric, Fraction]]:
        return [
            (block_project(f, self.n), b) for f, b in self.constraints[self.N :]
        ]


def build_instance(pencil: HermitianPencil, frob_ceiling: int) -> SdpInstance:
    """Assemble F_0 .. F_{N+4} and b for the given Hermitian pencil."""
    if frob_ceiling < 1:
        raise ValueError("frob_ceiling must be a positive integer")
    if pencil.a.is_zero() and pencil.b.is_zero():
        raise ValueError("zero pencil: chi is 0, no instance to build")
    n = pencil.n
    zero = Fraction(0)
    one = Fraction(1)

    def bd(ydata, uvdata, tdata) -> BlockDiagSymmetric:
        return BlockDiagSymmetric(
            y=np.asarray(ydata, dtype=object),
            uv=np.array(uvdata, dtype=object),
            t=tdata,
        )

    y_zero = np.full((2 * n, 2 * n), zero, dtype=object)
    y_eye = np.full((2 * n, 2 * n), zero, dtype=object)
    for i in range(2 * n):
        y_eye[i, i] = one

    f0 = bd(y_zero, [[Fraction(1, 2), zero], [zero, Fraction(1, 2)]], zero)
    tail = [
        bd(-pencil.ahat, [[one, zero], [zero, -one]], zero),
        bd(-pencil.bhat, [[zero, one], [one, zero]], zero),
        bd(y_eye, [[zero, zero], [zero, zero]], zero),
        bd(y_zero, [[one, zero], [zero, one]], Fraction(2)),
    ]
    b_tail = [zero, zero, Fraction(2), Fraction(2 * (frob_ceiling + 2))]

    constraints = [(f, zero) for f in subspace_basis(n)]
    constraints += [(f.embed(), b) for f, b in zip(tail, b_tail)]
    return SdpInstance(
        n=n,
        f0=f0,
        constraints=tuple(constraints),
        frob_ceiling=frob_ceiling,
        ahat=pencil.ahat,
        bhat=pencil.bhat,
    )


def _fmt(v) -> str:
    # repr of the float64 value: shortest decimal that round-trips,
    # never more than 17 significant digits
    return repr(float(v))


def export_sdpa(inst: SdpInstance, path) -> None:
    """Write the instance in SDPA sparse format (.dat-s).

    Layout: mDIM, nBLOCK, block sizes, b, then entry lines
    "matno blkno i j value" (1-based indices inside each block, upper
    triangle only, matno 0 for F_0).  The format is block-diagonal by
    construction, so constraint entries coupling different blocks --
    which meet the block-diagonal variable in a zero inner product --
    are not represented; the subspace annihilators consisting solely of
    such entries come out as empty matrices.  LF endings, no comments.
    """
    n = inst.n
    k = 2 * n
    spans = [(0, k, 1), (k, k + 2, 2), (k + 2, k + 3, 3)]
    lines = [str(inst.m), "3", f"{k} 2 1"]
    lines.append(" ".join(_fmt(b) for _, b in inst.constraints))

    def emit(matno: int, full: np.ndarray):
        for lo, hi, blk in spans:
            for i in range(lo, hi):
                for j in range(i, hi):
                    v = full[i, j]
                    if v != 0:
                        lines.append(
                            f"{matno} {blk} {i - lo + 1} {j - lo + 1} {_fmt(v)}"
                        )

    emit(0, inst.f0.embed())
    for idx, (f, _) in enumerate(inst.constraints, start=1):
        emit(idx, f)
    data = "\n".join(lines) + "\n"
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(data)
    except OSError as e:
        raise OSError(f"cannot write SDPA file {path}: {e}") from e


@dataclass(frozen=True)
class SdpaData:
    mdim: int
    block_sizes: Tuple[int, ...]
    b: np.ndarray
    matrices: Tuple[Tuple[np.ndarray, ...], ...]  # [matno][block] dense float


def read_sdpa(path) -> SdpaData:
    """Parse a file produced by export_sdpa (round-trip check helper).

    Only the subset of the format we emit is supported: no comment lines,
    exactly the four header lines followed by entry quintuples.
    """
    try:
        with open(path) as fh:
            raw = [ln.strip() for ln in fh if ln.strip()]
    except OSError as e:
        raise OSError(f"cannot read SDPA file {path}: {e}") from e
    mdim = int(raw[0])
    nblock = int(raw[1])
    sizes = tuple(int(s) for s in raw[2].split())
    if len(sizes) != nblock:
        raise ValueError(f"{path}: block size count does not match nBLOCK")
    b = np.array([float(s) for s in raw[3].split()])
    if b.shape != (mdim,):
        raise ValueError(f"{path}: b length does not match mDIM")
    mats = [
        [np.zeros((s, s)) for s in sizes] for _ in range(mdim + 1)
    ]
    for ln in raw[4:]:
        parts = ln.split()
        if len(parts) != 5:
            raise ValueError(f"{path}: bad entry line {ln!r}")
        matno, blk, i, j = (int(p) for p in parts[:4])
        v = float(parts[4])
        mats[matno][blk - 1][i - 1, j - 1] = v
        mats[matno][blk - 1][j - 1, i - 1] = v
    return SdpaData(
        mdim=mdim,
        block_sizes=sizes,
        b=b,
        matrices=tuple(tuple(m) for m in mats),
    )


def assemble_feasible_point(
    inst: SdpInstance, dens: np.ndarray, r: float
) -> BlockDiagSymmetric:
    """Z = diag(hat X, [[r+x, y], [y, r-x]], c+2-r) for a density matrix X
    (complex PSD trace 1) and a modulus guess r.  Satisfies every equality
    constraint; PSD exactly when r >= |<A,X> + i<B,X>|."""
    dens = np.asarray(dens, dtype=complex)
    ahat = inst.ahat.astype(float)
    bhat = inst.bhat.astype(float)
    yh = np.block([[dens.real, -dens.imag], [dens.imag, dens.real]])
    xx = 0.5 * float((ahat * yh).sum())
    yy = 0.5 * float((bhat * yh).sum())
    return BlockDiagSymmetric(
        y=yh,
        uv=modulus_psd_block(xx, yy, r),
        t=inst.frob_ceiling + 2.0 - r,
    )
