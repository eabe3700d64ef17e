from dpohill.encoder.correspondence import (
    CorrespondenceBatch,
    CorrespondenceReport,
    default_type_graph,
    random_graph,
    random_instance,
    verify_correspondence,
    verify_system,
)
from dpohill.encoder.graphs import (
    Encoding,
    GraphSignature,
    Representative,
    canonical_formula,
    decode,
    edge_type_formula,
    encode_abstract,
    encode_graph,
    representative,
)
from dpohill.encoder.rules import RuleSignature, encode_rule, parallel_rule_formula, rule_formula, rule_signature
from dpohill.encoder.steps import (
    emit_reachability,
    emit_step_derivation,
    reachability_sequent,
    step_sequent,
    transformation_sequent,
)

__all__ = [
    "Representative",
    "representative",
    "canonical_formula",
    "GraphSignature",
    "Encoding",
    "encode_graph",
    "encode_abstract",
    "edge_type_formula",
    "decode",
    "RuleSignature",
    "rule_signature",
    "rule_formula",
    "encode_rule",
    "parallel_rule_formula",
    "emit_step_derivation",
    "step_sequent",
    "transformation_sequent",
    "reachability_sequent",
    "emit_reachability",
    "CorrespondenceReport",
    "CorrespondenceBatch",
    "verify_correspondence",
    "verify_system",
    "random_instance",
    "random_graph",
    "default_type_graph",
]
