from dpohill.kernel.check import (
    CheckReport,
    Failure,
    LocationReport,
    SortBalance,
    check,
    check_sequent,
    infer_sigma,
    location_correspondence,
    location_map,
)
from dpohill.kernel.prf import format_prf, parse_prf
from dpohill.kernel.proof import CUT_RULES, Instantiation, ProofTree, RuleTag, height, is_cut_free, rules_used, size
from dpohill.kernel.rules import identity_proof, make_sequent
from dpohill.kernel.search import prove, verify_cut_admissibility

__all__ = [
    "RuleTag",
    "CUT_RULES",
    "Instantiation",
    "ProofTree",
    "size",
    "height",
    "rules_used",
    "is_cut_free",
    "make_sequent",
    "identity_proof",
    "check",
    "check_sequent",
    "CheckReport",
    "Failure",
    "infer_sigma",
    "location_map",
    "location_correspondence",
    "LocationReport",
    "SortBalance",
    "prove",
    "verify_cut_admissibility",
    "parse_prf",
    "format_prf",
]
