from dpohill.dpo.matching import (
    check_dangling,
    check_identification,
    dangling_witnesses,
    find_matches,
    identification_witnesses,
    iter_morphisms,
    satisfies_gluing,
)
from dpohill.dpo.rule import GTS, GTSBuilder, Match, Rule, StepRecord
from dpohill.dpo.text import GtsDocument, parse_gts
from dpohill.dpo.transform import (
    Successor,
    TraceEntry,
    apply,
    comatch,
    forced_result,
    pushout,
    pushout_complement,
    reachable,
    successors,
)

__all__ = [
    "Rule",
    "GTS",
    "GTSBuilder",
    "Match",
    "StepRecord",
    "find_matches",
    "iter_morphisms",
    "check_identification",
    "check_dangling",
    "identification_witnesses",
    "dangling_witnesses",
    "satisfies_gluing",
    "pushout_complement",
    "pushout",
    "apply",
    "comatch",
    "forced_result",
    "successors",
    "reachable",
    "Successor",
    "TraceEntry",
    "GtsDocument",
    "parse_gts",
]
