//! Abelianization and low-degree cohomology of free products of families.

mod colimit;
mod formulas;
mod oracle;
mod restricted;
mod sequence;
mod sum;

pub use oracle::{oracle_h1, oracle_h1_capped, OracleH1, DEFAULT_ENUMERATION_CAP};
pub use restricted::{dualize_family, AbPair, FamilyShape, Flavor, RestrictedAbFamily, TailClass};
pub use sequence::{
    check_exactness, four_term_sequence, sequence_of_modules, ExactnessReport, FourTermSequence,
    PositionReport,
};
pub use formulas::{
    abelianization_formula, corestriction_compare, cross_check_h1_vs_ab, h_formula,
    h_formula_capped, high_degree_formula, splitting_check, CorestrictionFiber,
    CorestrictionReport, CrossCheckFiber, CrossCheckReport, HFormula, HSummary, HighDegree,
    RetractionReport, SplittingReport,
};
pub use colimit::{truncation_colimit, ColimitSystem};
