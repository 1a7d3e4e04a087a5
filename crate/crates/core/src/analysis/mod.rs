//! Diagnostics built on the solver: regime classification, Harnack-type
//! inequalities, weighted integral bounds, small-data certificates and
//! Hölder regularity fits.

pub mod harnack;
pub mod holder;
pub mod integrals;
pub mod regime;
pub mod small_data;

pub use harnack::{harnack_constants, verify_harnack, HarnackConstants, HarnackReport};
pub use holder::{holder_estimate, HolderEstimate, HolderParams};
pub use integrals::{check_moment_bound, check_weighted_integrals, MomentBoundReport, WeightedIntegralReport};
pub use regime::{classify_regime, RegimeConditions, RegimeVerdict, Verdict};
pub use small_data::{
    contraction_feasibility, envelope_check, measure_small_data_constants, EnvelopeReport, Feasibility,
    SmallDataConfig, SmallDataConstants,
};
