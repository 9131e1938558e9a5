//! Chaotic primitives: logistic-map keystreams and permutations, and the
//! generalized cat map used to scatter watermark pixels.

mod catmap;
mod key;
mod logistic;

pub use catmap::{
    cat_map_apply, cat_map_order, cat_map_period, period_report, CatKey, CatMapParams,
    CompiledCatMap, PeriodReport,
};
pub use key::SecretKey;
pub use logistic::{
    binarize, invert_permutation, keyed_permutation, logistic_bits, logistic_sequence,
    rank_permutation, LogisticParams, CHAOS_THRESHOLD, DEFAULT_BURN_IN,
};
