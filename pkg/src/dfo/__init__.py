"""First-order logic over data structures: locality, reductions, bounded model finding."""

from .errors import DfoError, FragmentError, InputError, PreconditionError, UnsupportedError
from .evaluator import evaluate, evaluate_sentence
from .parser import ParseError, parse_formula, parse_structure, serialize_formula, serialize_structure
from .structures import DataStructure, FieldRef, ball, data_equivalent, view

__version__ = "0.1.0"
