"""
Surface conductivity tensors
General 2x2 form for admissibility checks and the isotropic-plus-rotation
class Σ = aI + bJ used by the spectral solvers
"""

from dataclasses import dataclass
from typing import Dict, Union

import numpy as np

# J acts as ν× in a right-handed frame (t1, t2, ν): J t1 = t2, J t2 = -t1
ROTATION = np.array([[0.0, -1.0], [1.0, 0.0]])


@dataclass(frozen=True)
class GeneralTensor2:
    """
    Σ in the local tangential frame; (Σξ)_i = Σ_j σ_ij ξ_j for ξ = (α, β)
    """
    s11: complex
    s12: complex
    s21: complex
    s22: complex

    def __post_init__(self):
        if not np.all(np.isfinite(self.matrix)):
            raise ValueError("Tensor entries must be finite")

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.s11, self.s12], [self.s21, self.s22]], dtype=complex)

    @classmethod
    def from_matrix(cls, matrix) -> 'GeneralTensor2':
        m = np.asarray(matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"Expected a 2x2 matrix, got shape {m.shape}")
        return cls(complex(m[0, 0]), complex(m[0, 1]), complex(m[1, 0]), complex(m[1, 1]))

    @classmethod
    def identity(cls, scale: complex = 1.0) -> 'GeneralTensor2':
        return cls(scale, 0.0, 0.0, scale)

    def hermitian_part(self) -> np.ndarray:
        m = self.matrix
        return 0.5 * (m + m.conj().T)

    def skew_part(self) -> np.ndarray:
        """(Σ - Σ^H)/(2i), Hermitian"""
        m = self.matrix
        return (m - m.conj().T) / 2j

    def to_dict(self) -> Dict:
        return {name: [complex(v).real, complex(v).imag]
                for name, v in zip(('s11', 's12', 's21', 's22'),
                                   (self.s11, self.s12, self.s21, self.s22))}


@dataclass(frozen=True)
class SurfaceTensor:
    """Σξ = aξ + b(ν×ξ), constant on the unit sphere"""
    a: complex
    b: complex = 0.0

    def __post_init__(self):
        if not (np.isfinite(complex(self.a)) and np.isfinite(complex(self.b))):
            raise ValueError("Tensor entries must be finite")

    def to_general(self) -> GeneralTensor2:
        a, b = complex(self.a), complex(self.b)
        return GeneralTensor2(s11=a, s12=-b, s21=b, s22=a)

    @property
    def matrix(self) -> np.ndarray:
        return self.to_general().matrix

    @property
    def is_symmetric(self) -> bool:
        return complex(self.b) == 0

    def apply(self, tangential: np.ndarray, normals: np.ndarray) -> np.ndarray:
        """Apply Σ to Cartesian tangential fields (P, 3) at surface normals (P, 3)"""
        return complex(self.a) * tangential + complex(self.b) * np.cross(normals, tangential)

    def to_dict(self) -> Dict:
        a, b = complex(self.a), complex(self.b)
        return {'a_re': a.real, 'a_im': a.imag, 'b_re': b.real, 'b_im': b.imag}

    @classmethod
    def from_dict(cls, data: Dict) -> 'SurfaceTensor':
        return cls(a=complex(data.get('a_re', 0.0), data.get('a_im', 0.0)),
                   b=complex(data.get('b_re', 0.0), data.get('b_im', 0.0)))


AnyTensor = Union[GeneralTensor2, SurfaceTensor]


def as_general(t: AnyTensor) -> GeneralTensor2:
    return t.to_general() if isinstance(t, SurfaceTensor) else t


def quadratic_form(t: AnyTensor, xi) -> complex:
    """
    ξ̄ᵀ Σ ξ = |α|²σ11 + ᾱβσ12 + β̄ασ21 + |β|²σ22

    Args:
        t: Tensor
        xi: Complex 2-vector (α, β) of frame components

    Returns:
        Complex value of the form
    """
    g = as_general(t)
    alpha, beta = complex(xi[0]), complex(xi[1])
    return (abs(alpha) ** 2 * g.s11 + alpha.conjugate() * beta * g.s12
            + beta.conjugate() * alpha * g.s21 + abs(beta) ** 2 * g.s22)


def transpose(t: AnyTensor) -> AnyTensor:
    """Swap σ12 and σ21; maps SurfaceTensor (a, b) to (a, -b)"""
    if isinstance(t, SurfaceTensor):
        return SurfaceTensor(a=t.a, b=-complex(t.b))
    return GeneralTensor2(s11=t.s11, s12=t.s21, s21=t.s12, s22=t.s22)
