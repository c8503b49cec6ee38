//! Certified quadrature for functions with a convex (or power-convex)
//! `|f''|`: a one-parameter family of two-point rules, explicit remainder
//! bounds, composite versions, and the special-mean inequalities that fall
//! out of them.
//!
//! Every bound is returned as a [`Certificate`], which carries the rule value,
//! the bound and the hypotheses it relies on, and can be checked against an
//! adaptive Gauss–Kronrod reference with [`Certificate::verify`].

pub mod bounds;
pub mod composite;
pub mod error;
pub mod functions;
pub mod kernel;
pub mod means;
pub mod oracle;
pub mod rules;
pub mod summation;

pub use bounds::{
    bound_cerone_dragomir, bound_cerone_dragomir_estimated, bound_convex, bound_holder, bound_holds,
    bound_ostrowski, bound_ostrowski_estimated, bound_power_mean, bound_trapezoid, certify, BoundFamily, CdCase,
    Certificate, ConvexityBound, HolderPair, HypothesisFlag, Verification,
};
pub use composite::{
    composite_generalized, composite_midpoint, composite_perturbed_trapezoid, convergence_table, estimate_order,
    uniform_nodes, CompositeResult, CompositeRule, ConvergenceRow, Partition, XiPolicy,
};
pub use error::{Error, Result};
pub use functions::{
    check_abs_f2_convexity, check_abs_f2_pow_convexity, register_builtin, Builtin, Domain, FunctionTriple, Interval,
};
pub use kernel::{identity_residual, kernel_abs_moment, kernel_eval, kernel_lp_moment, KernelSpec};
pub use means::{
    check_proposition, mean_value, means_chain, means_chain_check, MeanKind, MeansChain, PropositionParams,
    PropositionReport,
};
pub use oracle::{estimate_norm, integrate, NormEstimate, NormKind, QuadratureEstimate};
pub use rules::{
    generalized_rule, midpoint_rule, perturbed_trapezoid_rule, point_value_rule, trapezoid_rule, RuleKind, RuleValue,
};
