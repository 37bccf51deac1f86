"""Finite-dimensional Lie algebras presented by structure constants.

An algebra is validated at construction (antisymmetry is filled in from the
sparse upper-triangular input, the Jacobi identity and the optional matrix
realization are checked) and is immutable afterwards.  Vectors are plain
tuples of scalars in the fixed basis; linear maps g -> g are LinearEndo
objects storing a dense square matrix in column convention.
"""

from __future__ import annotations

import json
from fractions import Fraction

from . import scalars
from .errors import (
    DimensionMismatch,
    InvalidInput,
    JacobiViolation,
    NoRealization,
    RealizationMismatch,
    UnsupportedName,
)

# ---------------------------------------------------------------------------
# vectors (plain tuples) and dense matrices (tuples of row tuples)
# ---------------------------------------------------------------------------


def vadd(x, y):
    return tuple(a + b for a, b in zip(x, y))


def vsub(x, y):
    return tuple(a - b for a, b in zip(x, y))


def vscale(c, x):
    return tuple(c * a for a in x)


def vzero(n):
    return (0,) * n


def basis_vector(n, i):
    return tuple(1 if j == i else 0 for j in range(n))


def _mat_mul(A, B):
    n, m = len(A), len(B[0])
    k = len(B)
    return tuple(
        tuple(sum(A[i][t] * B[t][j] for t in range(k)) for j in range(m))
        for i in range(n)
    )


def _mat_add(A, B, sign=1):
    return tuple(
        tuple(a + sign * b for a, b in zip(ra, rb)) for ra, rb in zip(A, B)
    )


def _mat_trace(A):
    return sum(A[i][i] for i in range(len(A)))


class LinearEndo:
    """A linear map g -> g as a dense square matrix; column j = image of x_j."""

    def __init__(self, matrix):
        rows = tuple(tuple(row) for row in matrix)
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise DimensionMismatch("LinearEndo matrix must be square")
        self.matrix = rows
        self.dim = n

    def apply(self, x):
        if len(x) != self.dim:
            raise DimensionMismatch(
                "vector of length %d fed to endo of size %d" % (len(x), self.dim)
            )
        return tuple(
            sum(self.matrix[i][j] * x[j] for j in range(self.dim))
            for i in range(self.dim)
        )

    __call__ = apply

    def compose(self, other):
        return LinearEndo(_mat_mul(self.matrix, other.matrix))

    def __add__(self, other):
        return LinearEndo(_mat_add(self.matrix, other.matrix))

    def __sub__(self, other):
        return LinearEndo(_mat_add(self.matrix, other.matrix, sign=-1))

    def scale(self, c):
        return LinearEndo(tuple(tuple(c * a for a in row) for row in self.matrix))

    def column(self, j):
        return tuple(self.matrix[i][j] for i in range(self.dim))

    @staticmethod
    def identity(n):
        return LinearEndo(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @staticmethod
    def zero(n):
        return LinearEndo(tuple((0,) * n for _ in range(n)))

    @staticmethod
    def from_columns(cols):
        n = len(cols)
        return LinearEndo(tuple(tuple(cols[j][i] for j in range(n)) for i in range(n)))

    def __eq__(self, other):
        return isinstance(other, LinearEndo) and self.matrix == other.matrix

    def __repr__(self):
        return "LinearEndo(%r)" % (self.matrix,)


# ---------------------------------------------------------------------------
# the algebra itself
# ---------------------------------------------------------------------------


class LieAlgebra:
    """Structure constants C[i][j][k] with [x_i,x_j] = sum_k C[i][j][k] x_k.

    Do not call directly; use new_lie_algebra / builtin / algebra_from_json,
    which validate the data.
    """

    def __init__(self, dim, labels, C, realization, mode, tolerance):
        self.dim = dim
        self.labels = tuple(labels)
        self.C = C
        self.realization = realization
        self.mode = mode
        self.tolerance = tolerance
        self._pbw_cache = {}
        self.splitting = None  # (plus_indices, minus_indices) for split builtins

    def is_zero_scalar(self, value):
        return scalars.is_zero(value, self.mode, self.tolerance)

    def ratio(self, p, q=1):
        return scalars.ratio(p, q, self.mode)

    def zero(self):
        return vzero(self.dim)

    def basis(self, i):
        return basis_vector(self.dim, i)

    def check_vector(self, x):
        if len(x) != self.dim:
            raise DimensionMismatch(
                "vector of length %d in algebra of dimension %d" % (len(x), self.dim)
            )
        return tuple(scalars.coerce(a, self.mode) for a in x)

    def rho(self, x):
        """Matrix of x in the attached realization."""
        if self.realization is None:
            raise NoRealization("algebra has no matrix realization")
        x = self.check_vector(x)
        m = len(self.realization[0])
        out = [[0] * m for _ in range(m)]
        for i, c in enumerate(x):
            if c == 0:
                continue
            Mi = self.realization[i]
            for a in range(m):
                for b in range(m):
                    out[a][b] += c * Mi[a][b]
        return tuple(tuple(row) for row in out)

    def __repr__(self):
        return "LieAlgebra(dim=%d, labels=%r, mode=%s)" % (
            self.dim,
            list(self.labels),
            self.mode,
        )


def _jacobi_defect(C, i, j, k, l, n):
    total = 0
    for m in range(n):
        total += (
            C[i][j][m] * C[m][k][l]
            + C[k][i][m] * C[m][j][l]
            + C[j][k][m] * C[m][i][l]
        )
    return total


def _validate(L):
    n = L.dim
    C = L.C
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                for l in range(n):
                    defect = _jacobi_defect(C, i, j, k, l, n)
                    if not L.is_zero_scalar(defect):
                        raise JacobiViolation(i, j, k, l, defect)
    if L.realization is not None:
        mats = L.realization
        if len(mats) != n:
            raise DimensionMismatch("realization must supply one matrix per basis vector")
        m = len(mats[0])
        for M in mats:
            if len(M) != m or any(len(row) != m for row in M):
                raise DimensionMismatch("realization matrices must be square of equal size")
        for i in range(n):
            for j in range(i + 1, n):
                comm = _mat_add(_mat_mul(mats[i], mats[j]), _mat_mul(mats[j], mats[i]), sign=-1)
                want = [[0] * m for _ in range(m)]
                for k in range(n):
                    c = C[i][j][k]
                    if c == 0:
                        continue
                    for a in range(m):
                        for b in range(m):
                            want[a][b] += c * mats[k][a][b]
                for a in range(m):
                    for b in range(m):
                        if not L.is_zero_scalar(comm[a][b] - want[a][b]):
                            raise RealizationMismatch(i, j)
    return L


def new_lie_algebra(dim, labels, structure_entries, realization=None,
                    mode=scalars.EXACT, tolerance=1e-10):
    """Build and validate an algebra from sparse entries (i, j, k, value), i < j.

    The antisymmetric completion C[j][i][k] = -C[i][j][k] is automatic.
    """
    scalars.check_mode(mode)
    if dim <= 0:
        raise DimensionMismatch("dim must be positive")
    if labels is None:
        labels = ["x%d" % i for i in range(dim)]
    labels = [str(s) for s in labels]
    if len(labels) != dim:
        raise DimensionMismatch("need exactly %d basis labels" % dim)
    C = [[[scalars.coerce(0, mode) for _ in range(dim)] for _ in range(dim)] for _ in range(dim)]
    for entry in structure_entries:
        i, j, k, value = entry
        if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
            raise DimensionMismatch("structure entry %r out of range" % (entry,))
        if i >= j:
            raise InvalidInput(
                "structure entries must have i < j (got %r); "
                "the antisymmetric completion is automatic" % (entry,)
            )
        v = scalars.coerce(value, mode)
        C[i][j][k] += v
        C[j][i][k] -= v
    C = tuple(tuple(tuple(row) for row in plane) for plane in C)
    if realization is not None:
        realization = tuple(
            tuple(tuple(scalars.coerce(x, mode) for x in row) for row in M)
            for M in realization
        )
    return _validate(LieAlgebra(dim, labels, C, realization, mode, float(tolerance)))


def bracket(L, x, y):
    """[x, y] by contraction against the structure constants."""
    x = L.check_vector(x)
    y = L.check_vector(y)
    n = L.dim
    out = [0] * n
    for i in range(n):
        xi = x[i]
        if xi == 0:
            continue
        Ci = L.C[i]
        for j in range(n):
            yj = y[j]
            if yj == 0:
                continue
            cij = Ci[j]
            coeff = xi * yj
            for k in range(n):
                if cij[k] != 0:
                    out[k] += coeff * cij[k]
    return tuple(out)


def ad(L, x):
    """The map ad_x y := [x, y] as a LinearEndo."""
    x = L.check_vector(x)
    cols = [bracket(L, x, L.basis(j)) for j in range(L.dim)]
    return LinearEndo.from_columns(cols)


def trace_form(L, x, y):
    """B(x,y) = tr(rho(x) rho(y)) in the attached realization."""
    if L.realization is None:
        raise NoRealization("trace_form needs a matrix realization")
    return _mat_trace(_mat_mul(L.rho(x), L.rho(y)))


# ---------------------------------------------------------------------------
# built-in algebras
# ---------------------------------------------------------------------------


def _gl_data(n):
    """Basis E_ab of gl(n) in (a,b) order given by `pairs`."""
    pairs = [(a, b) for a in range(n) for b in range(n)]
    return pairs


def _gl_structure(pairs, n):
    index = {p: i for i, p in enumerate(pairs)}
    entries = []
    for i, (a, b) in enumerate(pairs):
        for j, (c, d) in enumerate(pairs):
            if i >= j:
                continue
            # [E_ab, E_cd] = delta_bc E_ad - delta_da E_cb
            out = {}
            if b == c:
                out[index[(a, d)]] = out.get(index[(a, d)], 0) + 1
            if d == a:
                out[index[(c, b)]] = out.get(index[(c, b)], 0) - 1
            for k, v in out.items():
                if v != 0:
                    entries.append((i, j, k, v))
    return entries


def _gl_realization(pairs, n):
    mats = []
    for (a, b) in pairs:
        M = [[0] * n for _ in range(n)]
        M[a][b] = 1
        mats.append(M)
    return mats


def _parse_builtin(name):
    name = name.strip()
    if "(" in name and name.endswith(")"):
        head, arg = name[:-1].split("(", 1)
        return head.strip(), arg.strip()
    return name, None


def builtin(name, mode=scalars.EXACT, tolerance=1e-10):
    """Construct a built-in algebra with its defining matrix realization.

    Names: gl(n) with n >= 2, sl(2), so(3), upper_lower_split(n).  The split
    variant is gl(n) with the basis ordered so that the upper-triangular
    (including diagonal) span and the strictly-lower span are index ranges;
    the returned algebra carries `.splitting = (plus_indices, minus_indices)`.
    """
    head, arg = _parse_builtin(name)
    if head == "sl" and arg == "2":
        entries = [
            (0, 1, 0, -2),  # [e,h] = -2e
            (0, 2, 1, 1),   # [e,f] = h
            (1, 2, 2, -2),  # [h,f] = -2f
        ]
        realization = [
            [[0, 1], [0, 0]],
            [[1, 0], [0, -1]],
            [[0, 0], [1, 0]],
        ]
        return new_lie_algebra(3, ["e", "h", "f"], entries, realization, mode, tolerance)
    if head == "so" and arg == "3":
        entries = [
            (0, 1, 2, 1),
            (1, 2, 0, 1),
        ]
        # [e3,e1] = e2 enters as (0,2,1,-1) since entries need i < j
        entries.append((0, 2, 1, -1))
        realization = [
            [[0, 0, 0], [0, 0, -1], [0, 1, 0]],
            [[0, 0, 1], [0, 0, 0], [-1, 0, 0]],
            [[0, -1, 0], [1, 0, 0], [0, 0, 0]],
        ]
        return new_lie_algebra(3, ["e1", "e2", "e3"], entries, realization, mode, tolerance)
    if head in ("gl", "upper_lower_split"):
        try:
            n = int(arg)
        except (TypeError, ValueError):
            raise UnsupportedName("bad size in %r" % (name,))
        if n < 2:
            raise UnsupportedName("need n >= 2 in %r" % (name,))
        if head == "gl":
            pairs = _gl_data(n)
        else:
            pairs = [(a, b) for a in range(n) for b in range(n) if a <= b]
            pairs += [(a, b) for a in range(n) for b in range(n) if a > b]
        labels = ["E%d%d" % (a + 1, b + 1) for (a, b) in pairs]
        L = new_lie_algebra(
            n * n,
            labels,
            _gl_structure(pairs, n),
            _gl_realization(pairs, n),
            mode,
            tolerance,
        )
        if head == "upper_lower_split":
            n_up = sum(1 for (a, b) in pairs if a <= b)
            L.splitting = (tuple(range(n_up)), tuple(range(n_up, n * n)))
        return L
    raise UnsupportedName("unknown built-in algebra %r" % (name,))


def splitting_projections(L):
    """(pi_plus, pi_minus) for an algebra carrying `.splitting` index ranges."""
    if L.splitting is None:
        raise InvalidInput("algebra carries no splitting data")
    plus, minus = L.splitting
    n = L.dim
    d_plus = [1 if i in set(plus) else 0 for i in range(n)]
    pi_plus = LinearEndo(tuple(
        tuple(d_plus[i] if i == j else 0 for j in range(n)) for i in range(n)
    ))
    pi_minus = LinearEndo(tuple(
        tuple((1 - d_plus[i]) if i == j else 0 for j in range(n)) for i in range(n)
    ))
    return pi_plus, pi_minus


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------


def _scalar_to_str(v):
    if isinstance(v, float):
        return repr(v)
    return scalars.format_rational(v)


def algebra_to_json(L):
    structure = []
    for i in range(L.dim):
        for j in range(i + 1, L.dim):
            for k in range(L.dim):
                if L.C[i][j][k] != 0:
                    structure.append([i, j, k, _scalar_to_str(L.C[i][j][k])])
    data = {"dim": L.dim, "basis": list(L.labels), "structure": structure}
    if L.realization is not None:
        data["realization"] = {
            "size": len(L.realization[0]),
            "matrices": [
                [[_scalar_to_str(x) for x in row] for row in M] for M in L.realization
            ],
        }
    return data


def algebra_from_json(data, mode=scalars.EXACT, tolerance=1e-10):
    try:
        dim = int(data["dim"])
        labels = data.get("basis")
        structure = [(int(i), int(j), int(k), v) for (i, j, k, v) in data["structure"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput("malformed algebra JSON: %s" % (exc,))
    realization = None
    if "realization" in data and data["realization"] is not None:
        realization = data["realization"]["matrices"]
    return new_lie_algebra(dim, labels, structure, realization, mode, tolerance)


def load_algebra(path, mode=scalars.EXACT, tolerance=1e-10):
    with open(path) as fh:
        return algebra_from_json(json.load(fh), mode, tolerance)
