"""Cyclic algebras over number fields with numeric embeddings.

An algebra element is a matrix of rational coefficients over a fixed Q-basis
of the maximal subfield L.  The instance stores the values of every basis
element under a full set of embeddings L -> C; Galois automorphisms then act
by permuting embeddings, and field products act pointwise on value vectors.
This avoids a symbolic number-field engine while keeping every identity exact
up to rounding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "CyclicAlgebra",
    "NumberField",
    "QuaternionSpec",
    "quaternion_norm",
    "quaternion_multiply",
    "quad_field_oracle",
    "alamouti_algebra",
    "golden_algebra",
    "mido_algebra",
    "relay_field",
    "relay_algebra",
    "mimo_relay_field",
    "mimo_relay_algebra",
]

TOL = 1e-9


def _check_perm(perm, d):
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(d)):
        raise ValueError("automorphism table is not a permutation of the embeddings")
    return perm


def _perm_power(perm, j):
    idx = list(range(len(perm)))
    for _ in range(j):
        idx = [perm[r] for r in idx]
    return idx


@dataclass(frozen=True)
class CyclicAlgebra:
    """Cyclic algebra (L/K, sigma, gamma) of degree n.

    full_emb[r, b] is the value of the b-th basis element of L under the r-th
    embedding; row 0 is the canonical embedding used for codeword entries.
    sigma_perm encodes tau_r compose sigma = tau_{sigma_perm[r]}, so sigma^j
    images are read off by walking the permutation.  gamma_coeffs expresses
    gamma in the L-basis (needed only for products).
    """

    n: int
    gamma: complex
    basis_labels: tuple
    full_emb: np.ndarray
    sigma_perm: tuple
    gamma_coeffs: np.ndarray | None = None
    name_L: str = ""
    name_K: str = ""

    def __post_init__(self):
        emb = np.array(self.full_emb, dtype=complex)
        emb.setflags(write=False)
        object.__setattr__(self, "full_emb", emb)
        d = len(self.basis_labels)
        if emb.shape != (d, d):
            raise ValueError("full_emb must be square with one row per basis element")
        object.__setattr__(self, "sigma_perm", _check_perm(self.sigma_perm, d))
        if _perm_power(self.sigma_perm, self.n) != list(range(d)):
            raise ValueError("sigma does not have order dividing n on the embeddings")
        if self.gamma_coeffs is not None:
            gc = np.asarray(self.gamma_coeffs, dtype=float)
            if gc.shape != (d,):
                raise ValueError("gamma_coeffs must have one entry per basis element")
            if abs(emb[0] @ gc - self.gamma) > TOL * (1 + abs(self.gamma)):
                raise ValueError("gamma_coeffs disagree with the gamma value")
            gc.setflags(write=False)
            object.__setattr__(self, "gamma_coeffs", gc)

    @property
    def dim_L(self) -> int:
        return len(self.basis_labels)

    def element(self, coeffs) -> np.ndarray:
        """Validate and return an (n, dim_L) rational coefficient matrix."""
        arr = np.asarray(coeffs, dtype=float)
        if arr.shape != (self.n, self.dim_L):
            raise ValueError(
                f"element coefficients must have shape ({self.n}, {self.dim_L})"
            )
        return arr

    def sigma_rows(self) -> list:
        """Embedding-row index of sigma^j composed with the canonical row."""
        rows = [0]
        for _ in range(self.n - 1):
            rows.append(self.sigma_perm[rows[-1]])
        return rows

    def value(self, coeff_vec, row: int = 0) -> complex:
        """Value of an L-element (coefficient vector) under embedding row."""
        return complex(self.full_emb[row] @ np.asarray(coeff_vec, dtype=float))

    def sigma_on_coeffs(self, coeff_vec) -> np.ndarray:
        """Coefficient vector of sigma(x) for an L-element x.

        Recovered by matching values: the permuted value vector of x equals
        the value vector of sigma(x) under all embeddings.
        """
        coeff_vec = np.asarray(coeff_vec, dtype=float)
        vals = self.full_emb @ coeff_vec
        target = vals[list(self.sigma_perm)]
        return _solve_real(self.full_emb, target)

    def multiply_field(self, a, b) -> np.ndarray:
        """Product of two L-elements as a coefficient vector."""
        va = self.full_emb @ np.asarray(a, dtype=float)
        vb = self.full_emb @ np.asarray(b, dtype=float)
        return _solve_real(self.full_emb, va * vb)

    def left_regular(self, x) -> np.ndarray:
        """The n x n matrix of left multiplication in the canonical embedding.

        Entry (i, j) holds sigma^j(x_{(i-j) mod n}), multiplied by gamma
        strictly above the diagonal.
        """
        x = self.element(x)
        rows = self.sigma_rows()
        out = np.empty((self.n, self.n), dtype=complex)
        for i in range(self.n):
            for j in range(self.n):
                v = self.full_emb[rows[j]] @ x[(i - j) % self.n]
                out[i, j] = self.gamma * v if i < j else v
        return out

    def balanced_rep(self, x) -> np.ndarray:
        """Determinant-preserving variant of the degree-2 representation."""
        if self.n != 2:
            raise ValueError("the balanced representation is defined for degree 2")
        x = self.element(x)
        rows = self.sigma_rows()
        t = np.sqrt(complex(-self.gamma))
        x0, x1 = self.full_emb[rows[0]] @ x[0], self.full_emb[rows[0]] @ x[1]
        sx0, sx1 = self.full_emb[rows[1]] @ x[0], self.full_emb[rows[1]] @ x[1]
        return np.array([[x0, -t * sx1], [t * x1, sx0]])

    def multiply(self, x, y) -> np.ndarray:
        """Algebra product of two elements, as coefficient matrices.

        Components follow from e*lambda = sigma(lambda)*e and e^n = gamma:
        z_m = sum_l gamma^[m<l] sigma^l(x_{(m-l) mod n}) y_l.
        """
        if self.gamma_coeffs is None:
            raise ValueError("products need gamma expressed in the L-basis")
        x, y = self.element(x), self.element(y)
        d = self.dim_L
        xvals = self.full_emb @ x.T  # (d_embeddings, n_components)
        yvals = self.full_emb @ y.T
        gvals = self.full_emb @ self.gamma_coeffs
        z = np.zeros((self.n, d))
        for m in range(self.n):
            acc = np.zeros(d, dtype=complex)
            for l in range(self.n):
                perm = _perm_power(self.sigma_perm, l)
                term = xvals[perm, (m - l) % self.n] * yvals[:, l]
                if m < l:
                    term = term * gvals
                acc += term
            z[m] = _solve_real(self.full_emb, acc)
        return z

    def reduced_norm_trace(self, x) -> tuple:
        rho = self.left_regular(x)
        return complex(np.linalg.det(rho)), complex(np.trace(rho))


def _solve_real(emb: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Solve emb @ c = values for a real coefficient vector c."""
    A = np.vstack([emb.real, emb.imag])
    b = np.concatenate([values.real, values.imag])
    c, residuals, rank, _ = np.linalg.lstsq(A, b, rcond=None)
    if rank < emb.shape[1]:
        raise ValueError("embedding matrix does not determine coefficients")
    if np.linalg.norm(A @ c - b) > 1e-6 * (1 + np.linalg.norm(b)):
        raise ValueError("values are inconsistent with any element of L")
    return c


# ----------------------------------------------------------------------
# Quaternion algebras (a, gamma)_K with basis 1, i, j, k and relations
# i^2 = a, j^2 = gamma, k = ij = -ji.


@dataclass(frozen=True)
class QuaternionSpec:
    a: complex
    gamma: complex
    base_field_label: str = "K"

    def __post_init__(self):
        if self.a == 0 or self.gamma == 0:
            raise ValueError("quaternion parameters must be nonzero")


def quaternion_norm(q: QuaternionSpec, x) -> complex:
    """The norm form x0^2 - a*x1^2 - gamma*x2^2 + a*gamma*x3^2."""
    x0, x1, x2, x3 = (complex(v) for v in x)
    return x0 * x0 - q.a * x1 * x1 - q.gamma * x2 * x2 + q.a * q.gamma * x3 * x3


def quaternion_multiply(q: QuaternionSpec, x, y) -> np.ndarray:
    """Product in the basis (1, i, j, k), derived from the defining relations."""
    a, g = q.a, q.gamma
    x0, x1, x2, x3 = (complex(v) for v in x)
    y0, y1, y2, y3 = (complex(v) for v in y)
    return np.array(
        [
            x0 * y0 + a * x1 * y1 + g * x2 * y2 - a * g * x3 * y3,
            x0 * y1 + x1 * y0 - g * x2 * y3 + g * x3 * y2,
            x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        ]
    )


def _is_squarefree(d: int) -> bool:
    m = abs(d)
    f = 2
    while f * f <= m:
        if m % (f * f) == 0:
            return False
        while m % f == 0:
            m //= f
        f += 1
    return True


def quad_field_oracle(d: int, element) -> tuple:
    """Norm, trace, and field discriminant for x0 + x1*sqrt(d) in Q(sqrt(d))."""
    d = int(d)
    if d in (0, 1) or not _is_squarefree(d):
        raise ValueError("d must be a squarefree integer other than 0 and 1")
    x0, x1 = element
    norm = x0 * x0 - d * x1 * x1
    trace = 2 * x0
    disc = d if d % 4 == 1 else 4 * d
    return norm, trace, disc


# ----------------------------------------------------------------------
# Shipped algebra instances.


def alamouti_algebra() -> CyclicAlgebra:
    """(Q(i)/Q, conjugation, -1): the Hamiltonian quaternions."""
    emb = np.array([[1, 1j], [1, -1j]])
    return CyclicAlgebra(
        n=2,
        gamma=-1,
        basis_labels=("1", "i"),
        full_emb=emb,
        sigma_perm=(1, 0),
        gamma_coeffs=np.array([-1.0, 0.0]),
        name_L="Q(i)",
        name_K="Q",
    )


def golden_algebra(gamma: complex = 1j) -> CyclicAlgebra:
    """(Q(i,sqrt5)/Q(i), theta -> 1-theta, gamma), default gamma = i.

    Basis 1, theta, i, i*theta with theta the golden ratio; embeddings are
    indexed by the sign choices for i and sqrt5.
    """
    theta = (1 + np.sqrt(5)) / 2
    thetabar = (1 - np.sqrt(5)) / 2
    rows = []
    for ei in (1, -1):
        for e5 in (theta, thetabar):
            rows.append([1, e5, ei * 1j, ei * 1j * e5])
    emb = np.array(rows)
    # row order: (i, theta), (i, thetabar), (-i, theta), (-i, thetabar)
    gamma = complex(gamma)
    gamma_coeffs = None
    if abs(gamma - 1j) < TOL:
        gamma_coeffs = np.array([0.0, 0.0, 1.0, 0.0])
    elif abs(gamma.imag) < TOL:
        gamma_coeffs = np.array([gamma.real, 0.0, 0.0, 0.0])
    return CyclicAlgebra(
        n=2,
        gamma=gamma,
        basis_labels=("1", "theta", "i", "i*theta"),
        full_emb=emb,
        sigma_perm=(1, 0, 3, 2),
        gamma_coeffs=gamma_coeffs,
        name_L="Q(i,sqrt5)",
        name_K="Q(i)",
    )


def mido_algebra(gamma: float = -8.0 / 9.0) -> CyclicAlgebra:
    """(Q(zeta5)/Q, zeta5 -> zeta5^3, gamma) over the difference basis.

    Basis 1-zeta5, zeta5-zeta5^2, zeta5^2-zeta5^3, zeta5^3-zeta5^4;
    embeddings send zeta5 to its m-th power, m = 1..4.
    """
    zeta = np.exp(2j * np.pi / 5)
    powers = [1, 2, 3, 4]
    rows = []
    for m in powers:
        z = zeta**m
        rows.append([1 - z, z - z**2, z**2 - z**3, z**3 - z**4])
    emb = np.array(rows)
    # sigma: zeta5 -> zeta5^3 maps embedding m to embedding (3m mod 5)
    perm = [powers.index((3 * m) % 5) for m in powers]
    gamma = float(gamma)
    # gamma is rational: 1 = (1/5)(4,3,2,1) in the difference basis
    one = np.array([4.0, 3.0, 2.0, 1.0]) / 5.0
    return CyclicAlgebra(
        n=4,
        gamma=gamma,
        basis_labels=("1-z", "z-z2", "z2-z3", "z3-z4"),
        full_emb=emb,
        sigma_perm=tuple(perm),
        gamma_coeffs=gamma * one,
        name_L="Q(zeta5)",
        name_K="Q",
    )


@dataclass(frozen=True)
class NumberField:
    """A field L given by basis values under a full embedding set, plus the
    index permutations of the automorphisms used by the code constructors."""

    basis_labels: tuple
    full_emb: np.ndarray
    autos: dict

    def __post_init__(self):
        emb = np.array(self.full_emb, dtype=complex)
        emb.setflags(write=False)
        object.__setattr__(self, "full_emb", emb)
        d = len(self.basis_labels)
        if emb.shape != (d, d):
            raise ValueError("full_emb must be square")
        object.__setattr__(
            self, "autos", {k: _check_perm(v, d) for k, v in self.autos.items()}
        )

    @property
    def dim(self) -> int:
        return len(self.basis_labels)

    def row_after(self, row: int, *auto_names) -> int:
        """Embedding row of tau_row composed with the named automorphisms.

        row_after(r, 'sigma', 'eta') returns r' with
        tau_r(sigma(eta(x))) = tau_{r'}(x) for all x.
        """
        for name in auto_names:
            row = self.autos[name][row]
        return row

    def value(self, coeff_vec, row: int = 0) -> complex:
        return complex(self.full_emb[row] @ np.asarray(coeff_vec, dtype=float))


def relay_field(radical_basis: bool = False) -> NumberField:
    """Q(sqrt5, i, sqrt-3) with automorphisms sigma, tau, and eta.

    sigma flips sqrt-3 (the inner degree-2 generator), tau flips i only,
    and eta flips sqrt5 only (the relay block automorphism, fixing Q(i)
    on the middle field Q(sqrt5, i)).  Basis: (1, t5, i, i*t5) times
    (1, t3) with t5 = (1+sqrt5)/2 and t3 = (1+sqrt-3)/2; radical_basis
    swaps the second factor for (1, sqrt-3), the suborder whose basis
    elements are purely real or purely imaginary at every embedding.
    Embedding rows run over the sign choices (e5, ei, e3) in
    lexicographic order with + first.
    """
    t5p, t5m = (1 + np.sqrt(5)) / 2, (1 - np.sqrt(5)) / 2
    s3 = 1j * np.sqrt(3)
    signs = [(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)]
    rows = []
    for e5, ei, e3 in signs:
        t5 = t5m if e5 else t5p
        iv = -1j if ei else 1j
        rad = -s3 if e3 else s3
        second = rad if radical_basis else (1 + rad) / 2
        four = [1, t5, iv, iv * t5]
        rows.append([b * t for t in (1, second) for b in four])
    emb = np.array(rows)
    idx = {s: r for r, s in enumerate(signs)}
    sigma = [idx[(a, b, 1 - c)] for a, b, c in signs]
    tau = [idx[(a, 1 - b, c)] for a, b, c in signs]
    eta = [idx[(1 - a, b, c)] for a, b, c in signs]
    suffix = "*s3" if radical_basis else "*t3"
    labels = tuple(
        f"{b}{t}" for t in ("", suffix) for b in ("1", "t5", "i", "i*t5")
    )
    return NumberField(
        basis_labels=labels,
        full_emb=emb,
        autos={"sigma": tuple(sigma), "tau": tuple(tau), "eta": tuple(eta)},
    )


def relay_algebra() -> CyclicAlgebra:
    """Degree-2 algebra (Q(sqrt5,i,sqrt-3) / Q(sqrt5,i), sigma, -2/sqrt5)."""
    field = relay_field()
    gamma = -2 / np.sqrt(5)
    gc = np.zeros(field.dim)
    gc[0], gc[1] = 0.4, -0.8  # -2/sqrt5 = (2 - 4*t5)/5
    return CyclicAlgebra(
        n=2,
        gamma=gamma,
        basis_labels=field.basis_labels,
        full_emb=field.full_emb,
        sigma_perm=field.autos["sigma"],
        gamma_coeffs=gc,
        name_L="Q(sqrt5,i,sqrt-3)",
        name_K="Q(sqrt5,i)",
    )


def mimo_relay_field(p: int = 7) -> NumberField:
    """Q(xi, omega) with xi = zeta_p + zeta_p^-1 and omega = sqrt(-5).

    sigma flips omega; eta sends xi to xi^2 - 2, cycling the real embeddings
    of the maximal real subfield.  Requires the doubling map to act
    transitively on the xi-conjugates, which holds for the shipped p = 7.
    """
    if p < 5 or any(p % f == 0 for f in range(2, int(p**0.5) + 1)):
        raise ValueError("p must be a prime >= 5")
    M = (p - 1) // 2
    # orbit of 1 under m -> 2m (mod p, folded to 1..M)
    orbit = [1]
    while True:
        nxt = (2 * orbit[-1]) % p
        nxt = min(nxt, p - nxt)
        if nxt == 1:
            break
        orbit.append(nxt)
        if len(orbit) > M:
            break
    if sorted(orbit) != list(range(1, M + 1)):
        raise ValueError(
            f"the doubling map is not transitive on the conjugates for p={p}"
        )
    omega = 1j * np.sqrt(5)
    ms = list(range(1, M + 1))
    signs = [(m, e) for m in ms for e in (0, 1)]
    rows = []
    for m, e in signs:
        xi = 2 * np.cos(2 * np.pi * m / p)
        w = -omega if e else omega
        xs = [xi**t for t in range(M)]
        rows.append([b * w**u for u in (0, 1) for b in xs])
    emb = np.array(rows)
    idx = {s: r for r, s in enumerate(signs)}
    sigma = [idx[(m, 1 - e)] for m, e in signs]

    def next_m(m):
        nm = (2 * m) % p
        return min(nm, p - nm)

    eta = [idx[(next_m(m), e)] for m, e in signs]
    labels = tuple(
        f"xi^{t}{w}" for w in ("", "*w") for t in range(M)
    )
    return NumberField(basis_labels=labels, full_emb=emb, autos={"sigma": tuple(sigma), "eta": tuple(eta)})


def mimo_relay_algebra(p: int = 7) -> CyclicAlgebra:
    """Degree-2 algebra (Q(xi,omega) / Q(xi), sigma, -2/(1+xi))."""
    field = mimo_relay_field(p)
    xi = 2 * np.cos(2 * np.pi / p)
    gamma = -2 / (1 + xi)
    gc = np.zeros(field.dim)
    if p == 7:
        # 1/(1+xi) = 2 - xi^2 from xi^3 + xi^2 - 2xi - 1 = 0
        gc[0], gc[2] = -4.0, 2.0
    else:
        # solve for the coefficients from the per-embedding values of gamma
        vals = -2 / (1 + field.full_emb[:, 1])
        gc = _solve_real(field.full_emb, vals)
    return CyclicAlgebra(
        n=2,
        gamma=gamma,
        basis_labels=field.basis_labels,
        full_emb=field.full_emb,
        sigma_perm=field.autos["sigma"],
        gamma_coeffs=gc,
        name_L="Q(xi,sqrt-5)",
        name_K="Q(xi)",
    )
