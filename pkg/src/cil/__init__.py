"""Combinatory intensional logic: sequences, CIL and BL terms, the translation
between them, sense-rule rewriting, finite term models and a CLI."""

from .bl import alpha_eq, canon
from .model import (Carrier, Extension, ModelConfig, check_model_conditions, eval_extension,
                    satisfies, validity_harness)
from .parser import parse_bl, parse_cil, print_program, show_bl
from .rewrite import applicable_redexes, is_canonical, normalize, sense_equiv
from .terms import Signature, SortError, show, sort_of
from .translate import bealer_decompose, j_translate, oracle_sense_equiv, pseudo_bind

__all__ = [
    "Carrier", "Extension", "ModelConfig", "Signature", "SortError", "alpha_eq",
    "applicable_redexes", "bealer_decompose", "canon", "check_model_conditions",
    "eval_extension", "is_canonical", "j_translate", "normalize", "oracle_sense_equiv",
    "parse_bl", "parse_cil", "print_program", "pseudo_bind", "satisfies", "sense_equiv",
    "show", "show_bl", "sort_of", "validity_harness",
]
