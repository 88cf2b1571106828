"""Uniform-grid complex scalar fields with finite-difference calculus.

A field is a complex array sampled on a tensor-product grid over a rectangle.
Values are indexed ``values[ix, iy]`` so that the first axis runs along x.
Fields are immutable after construction and every operation here is a pure
function returning new objects, which makes them safe to share across threads.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Grid2D",
    "ComplexField",
    "HolderEstimate",
    "build_field",
    "gradient",
    "holder_norm_estimate",
    "scale_field",
    "parse_descriptor",
    "register_builtin",
    "register_builtin_pattern",
    "compile_expression",
    "field_to_csv",
    "DEFAULT_SEED",
]

DEFAULT_SEED = 0

# Pair sampling used by the Hoelder seminorm estimate: all pairs within a
# window of this many nodes, plus a fixed number of seeded random global pairs.
HOLDER_WINDOW = 8
HOLDER_RANDOM_PAIRS = 10_000


@dataclass(frozen=True)
class Grid2D:
    """Uniform rectangular grid with nx * ny nodes.

    Node (i, j) sits at (xmin + i*hx, ymin + j*hy); the spacings hx, hy are
    derived from the extents and the node counts.
    """

    xmin: float
    xmax: float
    ymin: float
    ymax: float
    nx: int
    ny: int

    def __post_init__(self):
        if not (self.xmin < self.xmax and self.ymin < self.ymax):
            raise ValueError("grid extents must satisfy xmin < xmax and ymin < ymax")
        if self.nx < 2 or self.ny < 2:
            raise ValueError("grid needs at least 2 nodes per axis")

    @property
    def hx(self) -> float:
        return (self.xmax - self.xmin) / (self.nx - 1)

    @property
    def hy(self) -> float:
        return (self.ymax - self.ymin) / (self.ny - 1)

    @property
    def cell_area(self) -> float:
        return self.hx * self.hy

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.xmin, self.xmax, self.nx)

    @property
    def y(self) -> np.ndarray:
        return np.linspace(self.ymin, self.ymax, self.ny)

    def mesh(self):
        """Return coordinate arrays X, Y of shape (nx, ny)."""
        return np.meshgrid(self.x, self.y, indexing="ij")

    def zmesh(self) -> np.ndarray:
        X, Y = self.mesh()
        return X + 1j * Y

    def subgrid(self, i0: int, i1: int, j0: int, j1: int) -> "Grid2D":
        """Grid spanned by node index ranges [i0, i1] x [j0, j1] (inclusive)."""
        x, y = self.x, self.y
        return Grid2D(float(x[i0]), float(x[i1]), float(y[j0]), float(y[j1]),
                      i1 - i0 + 1, j1 - j0 + 1)


@dataclass(frozen=True)
class ComplexField:
    """Complex samples on a :class:`Grid2D`; shape (nx, ny), all finite."""

    grid: Grid2D
    values: np.ndarray

    def __post_init__(self):
        v = np.ascontiguousarray(np.asarray(self.values, dtype=np.complex128))
        if v.shape != (self.grid.nx, self.grid.ny):
            raise ValueError(
                f"values shape {v.shape} does not match grid ({self.grid.nx}, {self.grid.ny})")
        if not np.all(np.isfinite(v)):
            raise ValueError("field contains non-finite values")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def abs_max(self) -> float:
        return float(np.abs(self.values).max())


@dataclass(frozen=True)
class HolderEstimate:
    """Estimated Hoelder norm: per-order derivative sups plus the top-order
    Hoelder seminorm, with ``total = sup_derivatives + hoelder_seminorm``."""

    k: int
    alpha: float
    sup_derivatives: float
    hoelder_seminorm: float
    total: float


# --- function descriptors -------------------------------------------------

_BUILTINS: dict = {}
_BUILTIN_PATTERNS: list = []

_NUMERIC_ENV = {
    "pi": np.pi,
    "e": np.e,
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "abs": np.abs,
    "conj": np.conj,
    "real": np.real,
    "imag": np.imag,
}


def register_builtin(name: str, factory):
    """Register ``factory(grid) -> values`` under a builtin name."""
    _BUILTINS[name] = factory


def register_builtin_pattern(pattern: str, factory):
    """Register a parameterized builtin; ``factory(match, grid) -> values``."""
    _BUILTIN_PATTERNS.append((re.compile(pattern), factory))


def _lookup_builtin(name: str):
    if name in _BUILTINS:
        return lambda grid: _BUILTINS[name](grid)
    for rx, factory in _BUILTIN_PATTERNS:
        m = rx.fullmatch(name)
        if m is not None:
            return lambda grid, m=m, factory=factory: factory(m, grid)
    return None


def compile_expression(body: str, variables: tuple = ("x", "y", "z")):
    """Compile an arithmetic expression into ``f(**vars) -> ndarray``.

    ``^`` is accepted as a power operator.  Only the listed variables and a
    small numeric vocabulary are visible to the expression.
    """
    source = body.replace("^", "**")
    try:
        code = compile(source, "<field-expression>", "eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse expression {body!r}: {exc}") from exc

    def evaluate(**env):
        names = dict(_NUMERIC_ENV)
        names.update(env)
        missing = [n for n in code.co_names if n not in names]
        if missing:
            raise ValueError(f"unknown name(s) {missing} in expression {body!r}; "
                             f"allowed variables: {variables}")
        # non-finite results are rejected by the caller, not warned about here
        with np.errstate(all="ignore"):
            return eval(code, {"__builtins__": {}}, names)

    return evaluate


def parse_descriptor(spec) -> dict:
    """Normalize a function descriptor.

    Accepts either a descriptor dict ``{"kind": "builtin"|"expr", ...}`` or a
    bare string, which is resolved as a builtin name when registered and as an
    expression in x, y, z otherwise.
    """
    if isinstance(spec, str):
        if _lookup_builtin(spec) is not None:
            return {"kind": "builtin", "name": spec}
        return {"kind": "expr", "body": spec}
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValueError(f"malformed function descriptor: {spec!r}")
    kind = spec["kind"]
    if kind == "builtin":
        name = spec.get("name")
        if not isinstance(name, str) or _lookup_builtin(name) is None:
            raise ValueError(f"unknown builtin {name!r}")
        return {"kind": "builtin", "name": name}
    if kind == "expr":
        body = spec.get("body")
        if not isinstance(body, str):
            raise ValueError("expression descriptor needs a string 'body'")
        return {"kind": "expr", "body": body}
    raise ValueError(f"descriptor kind must be 'builtin' or 'expr', got {kind!r}")


def build_field(spec, grid: Grid2D) -> ComplexField:
    """Sample a described function at every grid node.

    Deterministic for a fixed descriptor and grid.  Raises ``ValueError`` for
    unknown builtins and for expressions that evaluate to non-finite values.
    """
    desc = parse_descriptor(spec)
    if desc["kind"] == "builtin":
        factory = _lookup_builtin(desc["name"])
        values = factory(grid)
    else:
        fn = compile_expression(desc["body"])
        X, Y = grid.mesh()
        values = fn(x=X, y=Y, z=X + 1j * Y)
    values = np.broadcast_to(np.asarray(values, dtype=np.complex128),
                             (grid.nx, grid.ny)).copy()
    if not np.all(np.isfinite(values)):
        bad = np.argwhere(~np.isfinite(values))[0]
        raise ValueError(f"field is non-finite at node {tuple(int(b) for b in bad)}")
    return ComplexField(grid, values)


register_builtin("z", lambda grid: grid.zmesh())
register_builtin("z2", lambda grid: grid.zmesh() ** 2)
register_builtin("z3", lambda grid: grid.zmesh() ** 3)
register_builtin("one", lambda grid: np.ones((grid.nx, grid.ny), dtype=np.complex128))


# --- calculus -------------------------------------------------------------

def gradient(field: ComplexField):
    """Finite-difference partials (d/dx, d/dy) as a pair of fields.

    Central differences in the interior, one-sided second-order stencils on
    the boundary, so affine fields differentiate exactly.
    """
    grid = field.grid
    if grid.nx < 3 or grid.ny < 3:
        raise ValueError("gradient needs at least 3 nodes per axis")
    gx = np.gradient(field.values, grid.hx, axis=0, edge_order=2)
    gy = np.gradient(field.values, grid.hy, axis=1, edge_order=2)
    return ComplexField(grid, gx), ComplexField(grid, gy)


def _derivative_table(field: ComplexField, k: int) -> dict:
    """Finite-difference partials d^(a,b) f for all a+b <= k."""
    grid = field.grid
    table = {(0, 0): field.values}
    for order in range(1, k + 1):
        for a in range(order, -1, -1):
            b = order - a
            if a > 0:
                table[(a, b)] = np.gradient(table[(a - 1, b)], grid.hx, axis=0,
                                            edge_order=2)
            else:
                table[(a, b)] = np.gradient(table[(a, b - 1)], grid.hy, axis=1,
                                            edge_order=2)
    return table


def _pair_quotient(arr: np.ndarray, grid: Grid2D, alpha: float, seed: int) -> float:
    """Max Hoelder quotient over windowed node pairs plus seeded random pairs."""
    best = 0.0
    w = HOLDER_WINDOW
    for di in range(0, w + 1):
        for dj in range(-w, w + 1):
            if di == 0 and dj <= 0:
                continue  # dedupe: (di, dj) and (-di, -dj) give the same pair
            dist = float(np.hypot(di * grid.hx, dj * grid.hy)) ** alpha
            if dj >= 0:
                d = np.abs(arr[di:, dj:] - arr[:arr.shape[0] - di, :arr.shape[1] - dj])
            else:
                d = np.abs(arr[di:, :dj] - arr[:arr.shape[0] - di, -dj:])
            if d.size:
                best = max(best, float(d.max()) / dist)
    rng = np.random.default_rng(seed)
    n = HOLDER_RANDOM_PAIRS
    i1 = rng.integers(0, arr.shape[0], n)
    j1 = rng.integers(0, arr.shape[1], n)
    i2 = rng.integers(0, arr.shape[0], n)
    j2 = rng.integers(0, arr.shape[1], n)
    keep = (i1 != i2) | (j1 != j2)
    if np.any(keep):
        num = np.abs(arr[i1[keep], j1[keep]] - arr[i2[keep], j2[keep]])
        den = np.hypot((i1 - i2)[keep] * grid.hx, (j1 - j2)[keep] * grid.hy) ** alpha
        best = max(best, float((num / den).max()))
    return best


def holder_norm_estimate(field: ComplexField, k: int, alpha: float,
                         seed: int = DEFAULT_SEED) -> HolderEstimate:
    """Estimate the C^{k,alpha} norm of a sampled field.

    The derivative part sums, over each order 0..k, the largest sampled
    magnitude of any order-j partial; the seminorm part is the largest
    alpha-Hoelder quotient of the order-k partials over sampled node pairs.
    """
    if not (0.0 < alpha <= 1.0):
        raise ValueError("alpha must lie in (0, 1]")
    if k < 0:
        raise ValueError("k must be nonnegative")
    grid = field.grid
    if grid.nx < k + 2 or grid.ny < k + 2:
        raise ValueError(f"grid too coarse for derivatives of order {k}")
    table = _derivative_table(field, k)
    sup = 0.0
    for order in range(k + 1):
        sup += max(float(np.abs(table[(a, order - a)]).max())
                   for a in range(order + 1))
    semi = max(_pair_quotient(table[(a, k - a)], grid, alpha, seed)
               for a in range(k + 1))
    return HolderEstimate(k=k, alpha=alpha, sup_derivatives=sup,
                          hoelder_seminorm=semi, total=sup + semi)


def scale_field(field: ComplexField, c: complex) -> ComplexField:
    """Pointwise multiplication by a complex scalar."""
    return ComplexField(field.grid, field.values * c)


def fmt(v) -> str:
    """Shortest round-trip decimal form of a scalar, for CSV cells."""
    return repr(float(v))


def field_to_csv(field: ComplexField) -> str:
    """Serialize as ``x,y,re,im`` rows, row-major in (ix, iy)."""
    X, Y = field.grid.mesh()
    v = field.values
    lines = ["x,y,re,im"]
    for xi, yi, re_, im_ in zip(X.ravel(), Y.ravel(), v.real.ravel(), v.imag.ravel()):
        lines.append(f"{fmt(xi)},{fmt(yi)},{fmt(re_)},{fmt(im_)}")
    return "\n".join(lines) + "\n"
