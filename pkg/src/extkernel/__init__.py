"""Exterior algebras of multivectors and multiforms.

Duality scalar product, left and right contractions, extensors and the
extended/generalized lifts of linear operators, over ``R^n`` with its
canonical dual frame.
"""

from .algebra import (
    FORM,
    MAX_DIM,
    VECTOR,
    AlgebraContext,
    AlgebraError,
    DomainError,
    GradeSet,
    Multiform,
    Multivector,
    VarianceError,
    grade_involution,
    grade_part,
    gradeset_part,
    render,
    reversion,
    wedge,
)
from .duality import (
    left_contract,
    left_contract_form,
    right_contract,
    right_contract_vec,
    scalar_product,
    scalar_product_det_oracle,
)
from .extensors import (
    ArityError,
    Extensor,
    ExtensorSignature,
    act_extended,
    act_generalized,
    ext_adjoint,
    ext_left_contract,
    ext_right_contract,
    ext_scalar,
    ext_wedge,
)
from .operators import (
    ExtendedOperator,
    GeneralizedOperator,
    LinearMap,
    SingularOperatorError,
    adjoint,
    apply_extended,
    apply_generalized,
    contragredient,
    extend,
    extended_adjoint_commutes,
    generalize,
    generalized_adjoint_commutes,
    inverse,
)

__version__ = "0.1.0"

__all__ = [
    "FORM",
    "MAX_DIM",
    "VECTOR",
    "AlgebraContext",
    "AlgebraError",
    "DomainError",
    "GradeSet",
    "Multiform",
    "Multivector",
    "VarianceError",
    "grade_involution",
    "grade_part",
    "gradeset_part",
    "render",
    "reversion",
    "wedge",
    "left_contract",
    "left_contract_form",
    "right_contract",
    "right_contract_vec",
    "scalar_product",
    "scalar_product_det_oracle",
    "ArityError",
    "Extensor",
    "ExtensorSignature",
    "act_extended",
    "act_generalized",
    "ext_adjoint",
    "ext_left_contract",
    "ext_right_contract",
    "ext_scalar",
    "ext_wedge",
    "ExtendedOperator",
    "GeneralizedOperator",
    "LinearMap",
    "SingularOperatorError",
    "adjoint",
    "apply_extended",
    "apply_generalized",
    "contragredient",
    "extend",
    "extended_adjoint_commutes",
    "generalize",
    "generalized_adjoint_commutes",
    "inverse",
]
