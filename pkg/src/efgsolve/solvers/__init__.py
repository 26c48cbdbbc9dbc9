from .cfr import Cfr
from .mccfr import MccfrEs
from .xfp import Xfp
from .matrix_solvers import MatrixSolution, solve_matrix_fp, solve_matrix_lp

__all__ = ["Cfr", "MccfrEs", "Xfp", "MatrixSolution", "solve_matrix_fp",
           "solve_matrix_lp"]
