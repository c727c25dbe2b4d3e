//! Orbits of linear dynamical systems: reachability, hyperplane hitting,
//! and characteristic words of constructible predicates.

mod analysis;
mod lasso;
mod lds;
mod predicate;

pub use analysis::{
    characteristic_word, distance_polynomial, hit_hyperplane, hyperplane_sequence, orbit_prefix,
    reach_point, reach_sequence, word_from_evidence, AtomEvidence, CharacteristicWord,
    ReachVerdict,
};
pub use lasso::{LassoWord, Letter};
pub use lds::Lds;
pub use predicate::{
    eval_predicate, BoolFormula, ConstructiblePredicate, Relation, SemialgebraicPredicate, SignAtom,
};
