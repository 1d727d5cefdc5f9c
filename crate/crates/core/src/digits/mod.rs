//! Enumeration of D_n(θ) and the bounded-height relation search.

mod gap;
mod level;
mod recurrence;
mod witness;

pub use gap::{level_gap, min_gap, GapResult};
pub use level::{
    advance_level, advance_level_with, count_sequence, count_sequence_with, growth_ratios, level_set, CountSequence,
    EnumerationConfig, GrowthRow, LevelSet, Truncation,
};
pub use recurrence::{guess_recurrence, Recurrence};
pub use witness::{
    find_height_witness, find_height_witness_with, verify_witness, CollisionWitness, SearchConfig,
    SearchStats,
};
