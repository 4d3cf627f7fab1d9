import numpy as np
import pytest

from laurentnet.core.algebra import FbPoly, LaurentSeries, get_context
from laurentnet.core.errors import DimensionMismatch, Singular
from laurentnet.core.matrix import (
    LaurentMatrix,
    det_degree,
    lower_triangular_inverse,
    lq_decompose,
    mat_det,
    mat_inverse,
    mat_mul,
)

LQ_PRECISION = 120


def random_invertible(rng, b, d):
    """L D U with unit triangular polynomial L, U and monomial D, columns permuted"""
    ctx = get_context(b)

    def poly():
        return FbPoly(ctx, rng.integers(0, b, size=3))

    lower = LaurentMatrix(ctx, [[poly() if j < i else int(i == j) for j in range(d)] for i in range(d)])
    upper = LaurentMatrix(ctx, [[poly() if j > i else int(i == j) for j in range(d)] for i in range(d)])
    diag = LaurentMatrix.diag(
        ctx, [FbPoly.monomial(ctx, int(rng.integers(0, 3)), int(rng.integers(1, b))) for _ in range(d)]
    )
    t = mat_mul(mat_mul(lower, diag), upper)
    order = rng.permutation(d)
    return LaurentMatrix(ctx, [[row[k] for k in order] for row in t.rows])


@pytest.mark.parametrize("b", [2, 3, 5])
def test_lq_contract_on_random_matrices(b):
    rng = np.random.default_rng(1000 + b)
    ctx = get_context(b)
    for trial in range(200):
        d = 2 + trial % 3
        t = random_invertible(rng, b, d)
        factors = lq_decompose(t, prec=LQ_PRECISION)
        lprime, q, qinv = factors.lprime, factors.q, factors.qinv

        for i in range(d):
            for j in range(i + 1, d):
                assert lprime[i, j].is_zero
            for j in range(d):
                assert q[i, j].deg <= 0

        residual = mat_mul(lprime, q)
        for i in range(d):
            for j in range(d):
                diff = residual[i, j] - t[i, j]
                assert diff.is_zero
                assert diff.known >= 20
        assert mat_mul(q, qinv) == LaurentMatrix.identity(ctx, d)
        assert mat_det(q) == LaurentSeries.one(ctx)


def test_worked_vandermonde_inverse(worked_construction):
    b_matrix = worked_construction.vandermonde
    ctx = b_matrix.ctx
    assert mat_det(b_matrix) == LaurentSeries.one(ctx)
    assert det_degree(b_matrix) == 0
    assert mat_inverse(b_matrix).transpose() == worked_construction.lattice.generator
    assert mat_mul(b_matrix, mat_inverse(b_matrix)) == LaurentMatrix.identity(ctx, 2)


def test_lower_triangular_inverse(ctx3):
    x = FbPoly.parse(ctx3, "x")
    lower = LaurentMatrix(ctx3, [[x, 0], [1, x]])
    inverse = lower_triangular_inverse(lower)
    assert inverse[1, 0] == LaurentSeries.parse(ctx3, "2*x^-2")
    assert mat_mul(lower, inverse) == LaurentMatrix.identity(ctx3, 2)


def test_singular_matrix(ctx2):
    with pytest.raises(Singular):
        lq_decompose(LaurentMatrix(ctx2, [[0, 0], [1, 1]]))


def test_shape_errors(ctx2):
    square = LaurentMatrix.identity(ctx2, 2)
    wide = LaurentMatrix(ctx2, [[1, 0, 0], [0, 1, 0]])
    with pytest.raises(DimensionMismatch):
        mat_mul(wide, square)
    with pytest.raises(DimensionMismatch):
        lq_decompose(wide)
    with pytest.raises(DimensionMismatch):
        LaurentMatrix(ctx2, [[1, 0], [1]])


def test_json_round_trip(worked_construction):
    generator = worked_construction.lattice.generator
    loaded = LaurentMatrix.from_json_dict(generator.to_json_dict())
    assert loaded == generator
    assert loaded.min_prec == generator.min_prec


def laurent_unipotent(rng, ctx, d, lower, prec):
    """Unit triangular matrix whose off-diagonal entries are truncated series of degree < 0"""
    rows = []
    for i in range(d):
        row = []
        for j in range(d):
            if i == j:
                row.append(1)
            elif (j < i) == lower:
                tail = np.concatenate(([1], rng.integers(0, ctx.b, size=5)))
                row.append(LaurentSeries(ctx, 1, tail, prec=prec))
            else:
                row.append(0)
        rows.append(row)
    return LaurentMatrix(ctx, rows)


@pytest.mark.parametrize("b", [2, 3])
def test_lq_contract_on_laurent_entries(b):
    rng = np.random.default_rng(2000 + b)
    ctx = get_context(b)
    for trial in range(60):
        d = 2 + trial % 2
        base = random_invertible(rng, b, d)
        left = laurent_unipotent(rng, ctx, d, lower=True, prec=80)
        right = laurent_unipotent(rng, ctx, d, lower=False, prec=80)
        t = mat_mul(mat_mul(left, base), right)
        assert any(not t[i, j].frac_part().is_zero for i in range(d) for j in range(d))

        factors = lq_decompose(t, prec=LQ_PRECISION)
        lprime, q, qinv = factors.lprime, factors.q, factors.qinv
        for i in range(d):
            for j in range(i + 1, d):
                assert lprime[i, j].is_zero
            for j in range(d):
                assert q[i, j].deg <= 0

        residual = mat_mul(lprime, q)
        for i in range(d):
            for j in range(d):
                diff = residual[i, j] - t[i, j]
                assert diff.is_zero
                assert diff.known >= 20
        assert mat_mul(q, qinv) == LaurentMatrix.identity(ctx, d)
        assert sum(factors.diagonal_degrees()) == det_degree(base)
