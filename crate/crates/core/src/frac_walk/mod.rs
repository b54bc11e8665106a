//! Random-walk samplers for `L_β` whose one-step laws coincide with the
//! explicit and implicit finite-difference schemes.

mod exact;
mod sampler;
mod transition;

pub use exact::{exact_walk_law, MAX_EXACT_NODES, MAX_EXACT_STEPS};
pub use sampler::{
    sample_lbeta, sample_lbeta_explicit, sample_lbeta_implicit, LbetaMethod, LbetaSampler, Resolved,
    AUTO_IMPLICIT_BELOW,
};
pub use transition::{build_transition_p, TransitionMatrixP};
