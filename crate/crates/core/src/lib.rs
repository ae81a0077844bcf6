//! Lower bounds for the union-closed sets problem from entropy and
//! symmetric couplings.
//!
//! An OR-closed family `A` of `{0,1}^n` has an element of frequency at
//! least `t` whenever the sup over `alpha` of the minimum, over two-block
//! symmetric distributions `P_pq` with mean `t`, of
//! `g(P_pq, alpha) / E h(p)` exceeds 1. [`optimizer`] evaluates that bound;
//! [`scalar`], [`dist`] and [`maxcorr`] hold its ingredients and [`lab`]
//! checks the combinatorial side exhaustively for small `n`.

pub mod assignment;
pub mod dist;
pub mod error;
pub mod lab;
pub mod maxcorr;
pub mod optimizer;
pub mod scalar;
pub mod search;

pub use dist::{
    extreme_to_dist, g_objective, marginal, mean_entropy, ratio_objective, AtomDist, Branch,
    ExtremeFamily, RhoMixture, SymmetricPairDist,
};
pub use error::{Error, Result};
pub use lab::{
    check_entropy_inequality, element_frequencies, enumerate_or_closed, is_or_closed,
    max_symmetric_coupling_entropy, min_pa, or_closure, CouplingMatrix, FamilySet,
};
pub use maxcorr::{
    conditional_maximal_correlation, coupling_from_pq, maximal_correlation, pearson,
    product_coupling, ConditionalJoint, JointDist,
};
pub use optimizer::{
    find_tmax, gamma_hat, inner_inf, verify_reference_point, GammaHatCertificate, InnerInfReport,
    SearchConfig,
};
pub use scalar::{binary_entropy, median3, phi, phi_rho1, z_bounds, Entropy, Probability};
