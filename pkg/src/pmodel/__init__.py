"""Two derivation pipelines over one grammar toolkit.

The T pipeline runs deep structure through movement to surface structure
and on to logical form; the P pipeline starts from an F-representation
(formal string, referents, declarants, force) and generates deep then
surface structure. Around the pipelines: a first-order formula language with
finite-model evaluation, scope-reading enumeration, an incremental
garden-path parser, and cohort-style word recognition.
"""

from .errors import PmodelError
from .formal import (
    And,
    Atom,
    Exists,
    Forall,
    Formula,
    FormulaSyntaxError,
    Implies,
    Membership,
    Model,
    Not,
    NotCanonicalizable,
    Or,
    Pierce,
    ProbAssertion,
    Sheffer,
    Term,
    WhQuery,
    canonicalize,
    evaluate,
    formula_from_json,
    formula_to_json,
    free_vars,
    model_from_json,
    model_to_json,
    parse_formula,
    render_formula,
    to_sheffer,
    well_formed,
)
from .frep import (
    Force,
    FormalDeclarants,
    FRepresentation,
    FRepValidationError,
    LexicalReferent,
    binding_referents,
    build_frep,
    frep_from_json,
    frep_to_json,
    load_frep,
    resolve_scope,
)
from .gardenpath import (
    BoundExceeded,
    Grammar,
    IncompleteParse,
    NoAttachment,
    ParseTree,
    enumerate_parses,
    is_garden_path,
    load_grammar,
    parse_incremental,
    render_tree,
    step,
)
from .lexicon import (
    Cohort,
    LexEntry,
    Lexicon,
    NoCandidate,
    access,
    edit_distance,
    integrate,
    load_lexicon,
    recognize,
    select,
)
from .movement import (
    DEFAULT_CONFIG,
    GrammarConfig,
    MovementError,
    MovementRecord,
    apply_emphasis,
    quantifier_lower,
    quantifier_raise,
    wh_lower,
    wh_raise,
)
from .pipeline import (
    CompareReport,
    Derivation,
    DerivationError,
    DerivationStep,
    compare,
    delexicalize,
    derive_p,
    derive_t,
    generate_ds,
)
from .sstring import (
    CloseBracket,
    Indexed,
    InvalidSString,
    OpenBracket,
    SString,
    Trace,
    Word,
    equivalent_mod_indices,
    parse_sstring,
    render,
    strip,
)

__version__ = "0.1.0"

__all__ = [
    "And",
    "Atom",
    "BoundExceeded",
    "CloseBracket",
    "Cohort",
    "CompareReport",
    "DEFAULT_CONFIG",
    "Derivation",
    "DerivationError",
    "DerivationStep",
    "Exists",
    "Forall",
    "Force",
    "FormalDeclarants",
    "Formula",
    "FormulaSyntaxError",
    "FRepresentation",
    "FRepValidationError",
    "Grammar",
    "GrammarConfig",
    "Implies",
    "IncompleteParse",
    "Indexed",
    "InvalidSString",
    "LexEntry",
    "LexicalReferent",
    "Lexicon",
    "Membership",
    "Model",
    "MovementError",
    "MovementRecord",
    "NoAttachment",
    "NoCandidate",
    "Not",
    "NotCanonicalizable",
    "OpenBracket",
    "Or",
    "ParseTree",
    "Pierce",
    "PmodelError",
    "ProbAssertion",
    "SString",
    "Sheffer",
    "Term",
    "Trace",
    "WhQuery",
    "Word",
    "access",
    "apply_emphasis",
    "binding_referents",
    "build_frep",
    "canonicalize",
    "compare",
    "delexicalize",
    "derive_p",
    "derive_t",
    "edit_distance",
    "enumerate_parses",
    "equivalent_mod_indices",
    "evaluate",
    "formula_from_json",
    "formula_to_json",
    "free_vars",
    "frep_from_json",
    "frep_to_json",
    "generate_ds",
    "integrate",
    "is_garden_path",
    "load_frep",
    "load_grammar",
    "load_lexicon",
    "model_from_json",
    "model_to_json",
    "parse_formula",
    "parse_incremental",
    "parse_sstring",
    "quantifier_lower",
    "quantifier_raise",
    "recognize",
    "render",
    "render_formula",
    "render_tree",
    "resolve_scope",
    "select",
    "step",
    "strip",
    "to_sheffer",
    "well_formed",
    "wh_lower",
    "wh_raise",
]
