"""The shipped rule library and the reformulation driver."""

from .reformulate import (NotApplicable, ReformulationResult, builtin_rule_files, export_rules, load_rules,
                          reformulate)

__all__ = ["NotApplicable", "ReformulationResult", "builtin_rule_files", "export_rules", "load_rules",
           "reformulate"]
