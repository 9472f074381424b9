#!/usr/bin/env python3
"""Hessenberg and CMV representations and their Möbius transforms.

Every matrix is assembled from the 2x2 blocks Θ_k = [[−a_k, ρ_k], [ρ_k, ā_k]]
placed at rows/columns (k−1, k):

    ℋ_n = F_1 F_2 ⋯ F_n        𝒞_n = 𝒞_on 𝒞_en
    𝒞_on = Π_{k odd} F_k       𝒞_en = Π_{k even} F_k

where F_k is the identity with Θ_k embedded and clipped to n x n, so the
block straddling the truncation reduces to its corner −a_n. Passing a
boundary value u (|u| = 1) in place of a_n makes both representations
unitary by construction.

Row and column index i correspond to α_i with α_0 = 0 (circle) or i (line);
𝒜_n = diag(α_0, ..., α_{n−1}) always starts at α_0.
"""

import json
from dataclasses import dataclass
from enum import Enum

import numpy as np

try:
    from .errors import ValidationError
    from .moebius import Domain, PoleSeq
    from .opmoebius import (
        CONDITION_LIMIT,
        UNIT_TOLERANCE,
        DiagParam,
        conjugate_by_eta,
        op_mobius_inverse,
        pair_factors,
    )
    from .orfcore import UNIMODULAR_TOLERANCE, ParamSeq
except ImportError:
    from errors import ValidationError
    from moebius import Domain, PoleSeq
    from opmoebius import (
        CONDITION_LIMIT,
        UNIT_TOLERANCE,
        DiagParam,
        conjugate_by_eta,
        op_mobius_inverse,
        pair_factors,
    )
    from orfcore import UNIMODULAR_TOLERANCE, ParamSeq


class RepKind(Enum):
    """Matrix representations that build_matrix can produce."""

    HESSENBERG = "hessenberg"
    CMV = "cmv"
    CMV_ODD = "cmv_odd"
    CMV_EVEN = "cmv_even"
    HAT_HESSENBERG = "hat_hessenberg"
    HAT_CMV = "hat_cmv"
    V_TRUNC = "v"
    U_TRUNC = "u"


class Family(Enum):
    """Which truncated representation: Hessenberg (V) or five-diagonal (U)."""

    V = "V"
    U = "U"


@dataclass(frozen=True)
class RepSpec:
    """Requested representation, its order and an optional boundary value."""

    kind: RepKind
    order: int
    boundary: complex | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", RepKind(self.kind))
        if self.order < 1:
            raise ValidationError(f"representation order must be at least 1, got {self.order}")
        if self.boundary is not None:
            u = complex(self.boundary)
            object.__setattr__(self, "boundary", u)
            if abs(abs(u) - 1.0) > UNIMODULAR_TOLERANCE:
                raise ValidationError(f"boundary value {u} is not unimodular")


def theta_block(a_k: complex) -> np.ndarray:
    """Return Θ = [[−a, ρ], [ρ, ā]] with ρ = √(1 − |a|²).

    |a| = 1 is allowed and gives the diagonal block [[−u, 0], [0, ū]].

    Raises:
        ValidationError: If |a_k| > 1.
    """
    a_k = complex(a_k)
    modulus = abs(a_k)
    if modulus > 1.0 + UNIMODULAR_TOLERANCE:
        raise ValidationError(f"|a| = {modulus} exceeds 1")
    rho = np.sqrt(max(0.0, 1.0 - modulus**2))
    return np.array([[-a_k, rho], [rho, a_k.conjugate()]], dtype=complex)


def _apply_factor(M: np.ndarray, k: int, a_k: complex) -> None:
    """Right-multiply M in place by F_k (Θ_k at columns k−1, k, clipped)."""
    size = M.shape[0]
    if k < size:
        block = theta_block(a_k)
        columns = M[:, k - 1 : k + 1].copy()
        M[:, k - 1 : k + 1] = columns @ block
    else:
        M[:, k - 1] *= -a_k


def hessenberg_matrix(coefs: np.ndarray) -> np.ndarray:
    """ℋ_n for coefficients a_1..a_n (a_n possibly unimodular)."""
    coefs = np.asarray(coefs, dtype=complex)
    n = coefs.size
    M = np.eye(n, dtype=complex)
    for k in range(1, n + 1):
        _apply_factor(M, k, coefs[k - 1])
    return M


def cmv_factors(coefs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return (𝒞_on, 𝒞_en) for coefficients a_1..a_n."""
    coefs = np.asarray(coefs, dtype=complex)
    n = coefs.size
    odd = np.eye(n, dtype=complex)
    even = np.eye(n, dtype=complex)
    for k in range(1, n + 1):
        _apply_factor(odd if k % 2 else even, k, coefs[k - 1])
    return odd, even


def cmv_matrix(coefs: np.ndarray) -> np.ndarray:
    odd, even = cmv_factors(coefs)
    return odd @ even


def build_matrix(
    a: ParamSeq,
    poles: PoleSeq | None,
    spec: RepSpec,
    condition_limit: float = CONDITION_LIMIT,
    unit_tolerance: float = UNIT_TOLERANCE,
) -> np.ndarray:
    """Build the order-n matrix of the requested representation.

    Args:
        a: Parameters (at least n, or n − 1 when spec carries a boundary).
        poles: Needed for the hat and truncated kinds; may be None otherwise.
        spec: Kind, order and boundary value.
        condition_limit: Passed to the Möbius transform of the V/U kinds.
        unit_tolerance: Line domain, distance from 1 that counts as an eigenvalue at 1.

    Returns:
        Dense complex n x n matrix.

    Raises:
        ValidationError: If data is missing for the requested kind.
        ConditioningError: From the Möbius transform for V/U kinds.
    """
    n = spec.order
    coefs = a.coefficients(n, spec.boundary)
    kind = spec.kind

    if kind in (RepKind.HESSENBERG, RepKind.HAT_HESSENBERG, RepKind.V_TRUNC):
        base = hessenberg_matrix(coefs)
    elif kind is RepKind.CMV_ODD:
        return cmv_factors(coefs)[0]
    elif kind is RepKind.CMV_EVEN:
        return cmv_factors(coefs)[1]
    else:
        base = cmv_matrix(coefs)

    if kind in (RepKind.HESSENBERG, RepKind.CMV):
        return base
    if poles is None:
        raise ValidationError(f"{kind.value} representation needs a pole sequence")
    A = DiagParam.from_poles(poles, n)
    if kind in (RepKind.HAT_HESSENBERG, RepKind.HAT_CMV):
        return conjugate_by_eta(A, base)
    return op_mobius_inverse(A, base, condition_limit, unit_tolerance)


def _base_kind(family: Family | str) -> RepKind:
    family = Family(family)
    return RepKind.HESSENBERG if family is Family.V else RepKind.CMV


def truncated_rep(
    a: ParamSeq,
    poles: PoleSeq,
    n: int,
    family: Family | str = Family.U,
    boundary: complex | None = None,
    condition_limit: float = CONDITION_LIMIT,
    unit_tolerance: float = UNIT_TOLERANCE,
) -> np.ndarray:
    """Return 𝒱⁽ⁿ⁾ = ζ̃_{𝒜_n}(ℋ_n) or 𝒰⁽ⁿ⁾ = ζ̃_{𝒜_n}(𝒞_n).

    With a boundary value the result is the unitary 𝒱⁽ⁿ;ᵘ⁾ or 𝒰⁽ⁿ;ᵘ⁾ (on
    the line: the self-adjoint counterpart).
    """
    kind = RepKind.V_TRUNC if Family(family) is Family.V else RepKind.U_TRUNC
    return build_matrix(a, poles, RepSpec(kind, n, boundary), condition_limit, unit_tolerance)


def pair_rep(
    a: ParamSeq,
    poles: PoleSeq,
    n: int,
    family: Family | str = Family.U,
    boundary: complex | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Return the pencil (ϖ̃*_{𝒜_n}(M_n), ϖ̃_{𝒜_n}(M_n)) for M = ℋ or 𝒞.

    On the circle this is (M + 𝒜, 1 + 𝒜†M); on the line (𝒜 − 𝒜†M, 1 − M).
    Its eigenvalues equal those of truncated_rep without any inversion, and
    on the line an eigenvalue at infinity marks mass at infinity.
    """
    M = build_matrix(a, None, RepSpec(_base_kind(family), n, boundary))
    return pair_factors(DiagParam.from_poles(poles, n), M)


def tridiagonal_pair(
    a: ParamSeq, poles: PoleSeq, n: int, boundary: complex | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Return the reduced pencil built from the unitary CMV factor.

    Odd n (𝒞_en unitary): circle (𝒞_o + 𝒜𝒞_e†, 𝒞_e† + 𝒜†𝒞_o),
    line (𝒜𝒞_e† − 𝒜†𝒞_o, 𝒞_e† − 𝒞_o).
    Even n (𝒞_on unitary), through 𝒞ᵀ = 𝒞_e𝒞_o: circle
    (𝒞_e + 𝒜𝒞_o†, 𝒞_o† + 𝒜†𝒞_e), line (𝒜𝒞_o† − 𝒜†𝒞_e, 𝒞_o† − 𝒞_e).
    """
    odd, even = cmv_factors(a.coefficients(n, boundary))
    if n % 2:
        unitary, other = even, odd
    else:
        unitary, other = odd, even
    A = DiagParam.from_poles(poles, n)
    diag = A.diag
    back = unitary.conj().T
    if poles.domain is Domain.CIRCLE:
        return other + diag[:, None] * back, back + diag.conj()[:, None] * other
    return diag[:, None] * back - diag.conj()[:, None] * other, back - other


def matrix_to_json(M: np.ndarray, kind: RepKind | str) -> dict:
    """Serialize a square matrix as {"n", "kind", "entries": [[re, im], ...]} row-major."""
    M = np.asarray(M, dtype=complex)
    kind_name = kind.value if isinstance(kind, RepKind) else str(kind)
    return {
        "n": int(M.shape[0]),
        "kind": kind_name,
        "entries": [[float(z.real), float(z.imag)] for z in M.reshape(-1)],
    }


def matrix_from_json(data: dict | str) -> np.ndarray:
    """Inverse of matrix_to_json.

    Raises:
        ValidationError: On a malformed document.
    """
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as e:
            raise ValidationError(f"matrix JSON is malformed: {e}") from e
    try:
        n = int(data["n"])
        entries = [complex(float(re), float(im)) for re, im in data["entries"]]
    except (KeyError, TypeError, ValueError) as e:
        raise ValidationError(f"matrix JSON is malformed: {e}") from e
    if len(entries) != n * n:
        raise ValidationError(f"matrix JSON has {len(entries)} entries, expected {n * n}")
    return np.array(entries, dtype=complex).reshape(n, n)


def matrix_to_csv(M: np.ndarray, precision: int = 17) -> str:
    """One matrix row per line, each entry written as the two columns re,im."""
    M = np.asarray(M, dtype=complex)
    lines = []
    for row in M:
        cells = []
        for z in row:
            cells.append(f"{z.real:.{precision}g}")
            cells.append(f"{z.imag:.{precision}g}")
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
