"""Truncated Cech complex for the two-chart cover of Z_k(tau).

The cover has two sets, so the complex has two levels and H^i = 0 for i >= 2
structurally; this module computes H^0 and H^1 with coefficients in any
bundle given by a transition matrix T (orientation: s_V = T * s_U).

A 1-cocycle is a vector of overlap functions in U-coordinates.  Its class is
unchanged by adding: (i) any U-holomorphic vector, and (ii) any V-holomorphic
vector converted to U-frame components, which means multiplied by T^-1 after
rewriting the component functions to U-coordinates.  For O(-n), whose
transition is (z^n), the V-side contributions are exactly the functions
z^-n * f with f holomorphic on V.

The infinite cochain spaces are truncated to a finite monomial window;
V-generator images are truncated to the window, so every computed dimension
is an in-window statement.  On the undeformed surface the monomial normal
form makes the answer exact once the window stabilizes; on deformed surfaces
the stabilization flag is reported alongside.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .errors import (
    NotTrivial,
    StepCapExceeded,
    SupportOutsideWindow,
    WindowTooSmall,
)
from .laurent import BiLaurent, Monomial, Q, U_CHART, V_CHART
from .linalg import RationalMatrix, ReducedEchelon, nullspace
from .polymatrix import PolyMatrix
from .surface import SurfaceSpec, line_transition, to_U_coords, to_V_coords

GROWTH_CAP_ENV = "LOCALSURFACES_GROWTH_CAP"
_DEFAULT_GROWTH_CAP = 8


@dataclass(frozen=True)
class Window:
    """Monomial truncation box {z^l u^i : min_z <= l <= max_z, 0 <= i <= max_u}."""

    min_z: int
    max_z: int
    max_u: int

    def __post_init__(self):
        if self.min_z > 0 or self.max_z < 0 or self.max_u < 0:
            raise ValueError("window must satisfy min_z <= 0 <= max_z, max_u >= 0")

    @property
    def size(self) -> int:
        return (self.max_z - self.min_z + 1) * (self.max_u + 1)

    def contains(self, mono: Monomial) -> bool:
        return self.min_z <= mono.z_exp <= self.max_z and 0 <= mono.u_exp <= self.max_u

    def covers(self, poly: BiLaurent) -> bool:
        return all(self.contains(m) for m in poly.support)

    def monomials(self) -> List[Monomial]:
        return [
            Monomial(l, i)
            for l in range(self.min_z, self.max_z + 1)
            for i in range(self.max_u + 1)
        ]

    def local_index(self, mono: Monomial) -> int:
        return (mono.z_exp - self.min_z) * (self.max_u + 1) + mono.u_exp

    def grown(self, dz: int, du: int) -> "Window":
        return Window(self.min_z - dz, self.max_z + dz, self.max_u + du)

    def hull(self, polys: Sequence[BiLaurent]) -> "Window":
        """Smallest enlargement of self containing every given support."""
        min_z, max_z, max_u = self.min_z, self.max_z, self.max_u
        for p in polys:
            for m in p.support:
                min_z = min(min_z, m.z_exp)
                max_z = max(max_z, m.z_exp)
                max_u = max(max_u, m.u_exp)
        return Window(min_z, max_z, max_u)

    def to_json_dict(self) -> dict:
        return {"min_z": self.min_z, "max_z": self.max_z, "max_u": self.max_u}


def default_window(s: SurfaceSpec, n: int) -> Window:
    """Default window for O(-n) on Z_k(tau): generous enough to contain the
    monomial normal-form range plus coboundary reach."""
    reach = abs(n) + s.k + 3
    floor_m = (n - 2) // s.k if n >= 2 else 0
    return Window(-reach, reach, max(0, floor_m + 3))


def default_window_for_transition(s: SurfaceSpec, transition: PolyMatrix) -> Window:
    """Window sized from the exponent span of a transition matrix."""
    span_z = 0
    span_u = 0
    for row in transition.entries:
        for p in row:
            if not p.is_zero:
                span_z = max(span_z, abs(p.min_z_exp()), abs(p.max_z_exp()))
                span_u = max(span_u, p.max_u_exp())
    reach = span_z + s.k + 3
    floor_m = (span_z - 2) // s.k if span_z >= 2 else 0
    return Window(-reach, reach, max(0, floor_m + 3) + span_u)


VectorCocycle = Tuple[BiLaurent, ...]
CocycleLike = Union[BiLaurent, Sequence[BiLaurent]]


@dataclass(frozen=True)
class CohomologyResult:
    """Outcome of a truncated H^0/H^1 computation."""

    dimension: int
    basis: Tuple[VectorCocycle, ...]
    m_row: Optional[int]
    window: Window
    stabilized: bool
    rank: int

    @property
    def scalar_basis(self) -> Tuple[BiLaurent, ...]:
        if self.rank != 1:
            raise ValueError("scalar basis only for rank-1 coefficients")
        return tuple(vec[0] for vec in self.basis)


@dataclass(frozen=True)
class TrivialityCertificate:
    """Explicit coboundary data: sigma = f_U + T^-1 * (f_V in U-coords)
    + residual, with the residual supported outside the window (empty when
    the certificate is exact)."""

    f_U: BiLaurent
    f_V: BiLaurent
    residual: BiLaurent
    window: Window

    @property
    def exact(self) -> bool:
        return self.residual.is_zero


class CechComplex:
    """Coboundary space of a bundle over a fixed window, with normal forms.

    Columns of the coboundary matrix are, in order: the in-window
    U-holomorphic vector monomials mapped by inclusion, then the images
    -T^-1 * rewrite(xi^a v^b e_slot) of V-holomorphic vector monomials whose
    image meets the window, truncated to the window.
    """

    def __init__(
        self,
        s: SurfaceSpec,
        transition: PolyMatrix,
        window: Window,
        *,
        beta_cap: Optional[int] = None,
        certificates: bool = False,
    ):
        self.surface = s
        self.transition = transition
        self.window = window
        self.rank = transition.size
        transition.unit_det()
        self.conv = transition.inverse()
        self._wsize = window.size
        self._total = self.rank * self._wsize
        self._certificates = certificates

        span = self._conv_spans()
        self._n_eff, self._u_gain = span
        self.beta_cap = (
            beta_cap
            if beta_cap is not None
            else window.max_u + self._n_eff + self._u_gain + 2
        )

        self.columns: List[Tuple[tuple, Dict[int, Q]]] = []
        self.full_images: Dict[tuple, VectorCocycle] = {}
        self.truncated_terms = 0
        self._echelon = ReducedEchelon(track_provenance=certificates)
        self._assemble()

    # -- construction ------------------------------------------------------

    def _conv_spans(self) -> Tuple[int, int]:
        n_eff = 0
        u_gain = 0
        for row in self.conv.entries:
            for p in row:
                if not p.is_zero:
                    n_eff = max(n_eff, -p.min_z_exp())
                    u_gain = max(u_gain, p.max_u_exp())
        return n_eff, u_gain

    def _index(self, slot: int, mono: Monomial) -> int:
        return slot * self._wsize + self.window.local_index(mono)

    def _coords(self, index: int) -> Tuple[int, Monomial]:
        slot, local = divmod(index, self._wsize)
        l, i = divmod(local, self.window.max_u + 1)
        return slot, Monomial(l + self.window.min_z, i)

    def _project(self, vec: Sequence[BiLaurent]) -> Dict[int, Q]:
        out: Dict[int, Q] = {}
        dropped = 0
        for slot, poly in enumerate(vec):
            for mono, coeff in poly.items():
                if self.window.contains(mono):
                    out[self._index(slot, mono)] = coeff
                else:
                    dropped += 1
        self.truncated_terms += dropped
        return out

    def _assemble(self) -> None:
        w = self.window
        # (i) U-holomorphic generators, mapped by inclusion.
        for slot in range(self.rank):
            for a in range(0, w.max_z + 1):
                for b in range(0, w.max_u + 1):
                    key = ("U", slot, a, b)
                    vec = {self._index(slot, Monomial(a, b)): Q(1)}
                    self.columns.append((key, vec))
                    self._echelon.add(vec, key)
        # (ii) V-holomorphic generators xi^alpha v^beta e_slot, mapped by
        # -T^-1 * (U-coordinate rewrite), truncated to the window.
        v_glue = self.surface.v_glue().with_tag(None)
        rho = BiLaurent.const(1)
        n_v_columns = 0
        pending: List[Tuple[tuple, Dict[int, Q], VectorCocycle]] = []
        for beta in range(self.beta_cap + 1):
            if beta:
                rho = rho * v_glue
            for slot in range(self.rank):
                base = tuple(
                    -(self.conv.entries[i][slot].with_tag(None) * rho)
                    for i in range(self.rank)
                )
                exps = [
                    m.z_exp
                    for comp in base
                    for m in comp.support
                    if m.u_exp <= w.max_u
                ]
                if not exps:
                    continue
                alpha_lo = max(0, min(exps) - w.max_z)
                alpha_hi = max(exps) - w.min_z
                for alpha in range(alpha_lo, alpha_hi + 1):
                    shift = BiLaurent.term(1, -alpha, 0)
                    image = tuple(comp * shift for comp in base)
                    vec = self._project(image)
                    if not vec:
                        continue
                    key = ("V", slot, alpha, beta)
                    pending.append((key, vec, image))
        if not pending:
            raise WindowTooSmall(
                f"no V-holomorphic generator meets window {self.window}"
            )
        pending.sort(key=lambda item: (item[0][3], item[0][1], item[0][2]))
        for key, vec, image in pending:
            self.columns.append((key, vec))
            if self._certificates:
                self.full_images[key] = image
            self._echelon.add(vec, key)
        self._n_v_columns = len(pending)

    # -- results -----------------------------------------------------------

    @property
    def dimension(self) -> int:
        return self._total - self._echelon.rank

    def non_pivot_indices(self) -> List[int]:
        pivot = self._echelon.pivots.keys()
        return [i for i in range(self._total) if i not in pivot]

    def basis(self) -> Tuple[VectorCocycle, ...]:
        out = []
        for index in self.non_pivot_indices():
            slot, mono = self._coords(index)
            vec = [BiLaurent.zero(U_CHART)] * self.rank
            vec[slot] = BiLaurent.term(1, mono.z_exp, mono.u_exp, U_CHART)
            out.append(tuple(vec))
        return tuple(out)

    # -- cocycle reduction ---------------------------------------------------

    def _as_vector(self, sigma: CocycleLike) -> VectorCocycle:
        if isinstance(sigma, BiLaurent):
            vec: Tuple[BiLaurent, ...] = (sigma,)
        else:
            vec = tuple(sigma)
        if len(vec) != self.rank:
            raise ValueError(f"cocycle must have {self.rank} components")
        for comp in vec:
            if comp.tag == V_CHART:
                raise SupportOutsideWindow(
                    "cocycles must be given in U-coordinates"
                )
        return vec

    def encode(self, sigma: CocycleLike) -> Dict[int, Q]:
        vec = self._as_vector(sigma)
        out: Dict[int, Q] = {}
        for slot, poly in enumerate(vec):
            for mono, coeff in poly.items():
                if not self.window.contains(mono):
                    raise SupportOutsideWindow(
                        f"monomial z^{mono.z_exp} u^{mono.u_exp} outside "
                        f"window {self.window}"
                    )
                out[self._index(slot, mono)] = coeff
        return out

    def decode(self, vec: Dict[int, Q]) -> VectorCocycle:
        polys = [dict() for _ in range(self.rank)]
        for index, coeff in vec.items():
            slot, mono = self._coords(index)
            polys[slot][mono] = coeff
        return tuple(BiLaurent(p, U_CHART) for p in polys)

    def normal_form(self, sigma: CocycleLike) -> CocycleLike:
        """Unique window representative of [sigma] supported on the
        non-pivot basis monomials."""
        scalar = isinstance(sigma, BiLaurent)
        residual, _ = self._echelon.reduce(self.encode(sigma))
        decoded = self.decode(residual)
        return decoded[0] if scalar else decoded

    def solve_coboundary(self, sigma: CocycleLike) -> Optional[Dict[tuple, Q]]:
        """Coefficients over the columns expressing an in-window sigma, or
        None when [sigma] != 0 in the window."""
        if not self._certificates:
            raise ValueError("complex was built without certificate tracking")
        return self._echelon.solve_in_span(self.encode(sigma))


def coboundary_matrix(
    s: SurfaceSpec, transition: PolyMatrix, window: Window,
    *, beta_cap: Optional[int] = None,
) -> RationalMatrix:
    """Dense coboundary matrix: rows indexed by window monomials (times
    rank, slot-major), columns by the generators in canonical order."""
    complex_ = CechComplex(s, transition, window, beta_cap=beta_cap)
    matrix = [
        [Q(0)] * len(complex_.columns) for _ in range(complex_.rank * window.size)
    ]
    for col_idx, (_, vec) in enumerate(complex_.columns):
        for row_idx, coeff in vec.items():
            matrix[row_idx][col_idx] = coeff
    return RationalMatrix(matrix)


def h1_dimension_formula(k: int, n: int) -> int:
    """Closed form for dim H^1(Z_k, O(-n)): (m+1)(2n-km-2)/2 with
    m = floor((n-2)/k) when n >= 2, and 0 otherwise."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if n < 2:
        return 0
    m = (n - 2) // k
    return (m + 1) * (2 * n - k * m - 2) // 2


@dataclass(frozen=True)
class StabilizedValue:
    value: int
    window: Window
    enlargements: int


def _growth_cap(step_cap: Optional[int]) -> int:
    if step_cap is not None:
        return step_cap
    env = os.environ.get(GROWTH_CAP_ENV)
    return int(env) if env else _DEFAULT_GROWTH_CAP


def stabilize_window(
    compute: Callable[[Window], int],
    w0: Window,
    *,
    grow: Tuple[int, int] = (3, 1),
    step_cap: Optional[int] = None,
) -> StabilizedValue:
    """Enlarge the window in fixed increments until the computed value is
    unchanged across two consecutive enlargements.

    Returns the first window of the stable run.  Raises StepCapExceeded
    (carrying the last value and window) if the cap is hit first.
    """
    cap = _growth_cap(step_cap)
    dz, du = grow
    windows = [w0]
    values = [compute(w0)]
    while True:
        if len(values) >= 3 and values[-1] == values[-2] == values[-3]:
            return StabilizedValue(values[-1], windows[-3], len(values) - 1)
        if len(values) - 1 >= cap:
            raise StepCapExceeded(
                f"value did not stabilize within {cap} enlargements",
                last_value=values[-1],
                last_window=windows[-1],
            )
        windows.append(windows[-1].grown(dz, du))
        values.append(compute(windows[-1]))


def h1(
    s: SurfaceSpec,
    transition: PolyMatrix,
    window: Optional[Window] = None,
    *,
    stabilize: bool = True,
    grow: Tuple[int, int] = (3, 1),
    step_cap: Optional[int] = None,
    m_row: Optional[int] = None,
) -> CohomologyResult:
    """H^1 of the bundle with the given transition matrix, over a window.

    With stabilize=True the window is enlarged until the dimension settles;
    the result reports the first stable window and stabilized=True.
    """
    if window is None:
        window = default_window_for_transition(s, transition)
    if stabilize:
        cache: Dict[Window, CechComplex] = {}

        def compute(w: Window) -> int:
            cache[w] = CechComplex(s, transition, w)
            return cache[w].dimension

        stable = stabilize_window(compute, window, grow=grow, step_cap=step_cap)
        complex_ = cache[stable.window]
        return CohomologyResult(
            dimension=complex_.dimension,
            basis=complex_.basis(),
            m_row=m_row,
            window=stable.window,
            stabilized=True,
            rank=complex_.rank,
        )
    complex_ = CechComplex(s, transition, window)
    return CohomologyResult(
        dimension=complex_.dimension,
        basis=complex_.basis(),
        m_row=m_row,
        window=window,
        stabilized=False,
        rank=complex_.rank,
    )


def h1_line_bundle(
    s: SurfaceSpec,
    n: int,
    window: Optional[Window] = None,
    *,
    stabilize: bool = True,
    step_cap: Optional[int] = None,
) -> CohomologyResult:
    """H^1(Z_k(tau), O(-n)); n is the positive twist, so n = 4 means O(-4)."""
    if window is None:
        window = default_window(s, n)
    m_row = (n - 2) // s.k if n >= 2 else None
    return h1(
        s,
        line_transition(-n),
        window,
        stabilize=stabilize,
        step_cap=step_cap,
        m_row=m_row,
    )


def normal_form(
    sigma: CocycleLike,
    s: SurfaceSpec,
    transition: PolyMatrix,
    window: Window,
) -> CocycleLike:
    """Project a cocycle onto the non-pivot monomial basis of its window."""
    return CechComplex(s, transition, window).normal_form(sigma)


def triviality_certificate(
    sigma: BiLaurent,
    s: SurfaceSpec,
    n: int,
    window: Optional[Window] = None,
) -> TrivialityCertificate:
    """Explicit f_U, f_V with sigma = f_U + z^-n * (f_V in U-coords) up to a
    window-external residual, for the line bundle O(-n).

    Raises NotTrivial when the in-window normal form of sigma is nonzero.
    The exact (residual-free) solve is attempted first: it searches for a
    V-holomorphic f_V whose conversion cancels every negative-z term of
    sigma identically, which succeeds whenever a polynomial certificate
    exists within the generator caps.
    """
    if window is None:
        window = default_window(s, n).hull([sigma])
    complex_ = CechComplex(
        s, line_transition(-n), window, certificates=True
    )
    nf = complex_.normal_form(sigma)
    if not nf.is_zero:
        raise NotTrivial(f"class of {sigma} is nonzero in window {window}")

    factor = BiLaurent.term(1, -n, 0)

    # Exact attempt: solve over full (untruncated) V-images projected to the
    # negative-z coordinates; any solution yields residual 0 since the
    # remainder sigma - z^-n * rewrite(f_V) is then U-holomorphic.
    echelon = ReducedEchelon(track_provenance=True)
    for key, image in sorted(complex_.full_images.items(), key=lambda kv: kv[0]):
        vec = {
            (m.z_exp, m.u_exp): c
            for m, c in image[0].items()
            if m.z_exp < 0
        }
        if vec:
            echelon.add(vec, key)
    target = {
        (m.z_exp, m.u_exp): c for m, c in sigma.items() if m.z_exp < 0
    }
    coeffs = echelon.solve_in_span(target)
    if coeffs is not None:
        f_V = BiLaurent.zero()
        for (_, _, alpha, beta), x in coeffs.items():
            # Columns carry -W*rewrite, so f_V picks up a sign flip.
            f_V = f_V + BiLaurent.term(-x, alpha, beta)
        f_V = f_V.with_tag(V_CHART)
        rewritten = factor * _rewrite_to_U(f_V, s)
        f_U = (sigma - rewritten).with_tag(U_CHART)
        if not f_U.is_zero and f_U.min_z_exp() < 0:
            raise AssertionError(
                "exact certificate produced a non-holomorphic f_U"
            )
        return TrivialityCertificate(f_U, f_V, BiLaurent.zero(), window)

    # Windowed fallback: solve the truncated system; the residual collects
    # the truncated (window-external) terms.
    coeffs = complex_.solve_coboundary(sigma)
    if coeffs is None:
        raise NotTrivial(
            f"no in-window coboundary expression for {sigma}"
        )
    f_U = BiLaurent.zero()
    f_V = BiLaurent.zero()
    for key, x in coeffs.items():
        side, _, third, fourth = key
        if side == "U":
            f_U = f_U + BiLaurent.term(x, third, fourth)
        else:
            f_V = f_V + BiLaurent.term(-x, third, fourth)
    f_U = f_U.with_tag(U_CHART)
    f_V = f_V.with_tag(V_CHART)
    residual = sigma.with_tag(U_CHART) - f_U - factor * _rewrite_to_U(f_V, s)
    return TrivialityCertificate(f_U, f_V, residual, window)


def _rewrite_to_U(p: BiLaurent, s: SurfaceSpec) -> BiLaurent:
    return to_U_coords(p, s).with_tag(None)


def h0_basis(
    s: SurfaceSpec,
    n: int,
    window: Optional[Window] = None,
) -> CohomologyResult:
    """Basis of the global sections of O(n) supported in the window: the
    U-holomorphic s_U (no negative z) with z^-n * s_U V-holomorphic.

    n here is the first Chern class, so h0_basis(s, 2) computes window
    sections of O(2).  The dimension is an in-window count (the full space
    of sections is infinite-dimensional on these noncompact surfaces).
    """
    if window is None:
        window = default_window(s, abs(n))
    cols = [
        Monomial(a, b)
        for a in range(0, window.max_z + 1)
        for b in range(0, window.max_u + 1)
    ]
    constraint_rows: Dict[Monomial, Dict[int, Q]] = {}
    for idx, mono in enumerate(cols):
        twisted = BiLaurent.term(1, mono.z_exp - n, mono.u_exp, U_CHART)
        rewritten = to_V_coords(twisted, s)
        for vm, coeff in rewritten.items():
            if vm.z_exp < 0:
                constraint_rows.setdefault(vm, {})[idx] = coeff
    matrix = RationalMatrix(
        [
            [row.get(c, Q(0)) for c in range(len(cols))]
            for _, row in sorted(constraint_rows.items())
        ]
        or [[Q(0)] * len(cols)]
    )
    kernel = nullspace(matrix)
    basis = []
    for vec in kernel:
        poly = BiLaurent(
            {cols[i]: coeff for i, coeff in enumerate(vec) if coeff},
            U_CHART,
        )
        basis.append((poly,))
    return CohomologyResult(
        dimension=len(basis),
        basis=tuple(basis),
        m_row=None,
        window=window,
        stabilized=False,
        rank=1,
    )
