//! Value of information for finite decision problems: Gibbs channels,
//! cumulant generating functions, rate-distortion curves and transport costs on
//! circles.
//!
//! Conventions: `Γ(β) = Σ_x p(x) ln Z(x, β)` with
//! `Z(x, β) = Σ_u q(u) e^{-βc(x,u)}`, so `Γ' = -E{c}` and the information is
//! `I = βΓ' - Γ ≥ 0`. The value at `β` is `E{c}(0) - E{c}(β)`.

pub mod engine;
pub mod error;
pub mod geometry;
pub mod io;
pub mod measure;
pub mod oracle;
pub mod par;
pub mod special;

pub use engine::{
    beta_for_info, check_marginal_conditions, cumulant, cumulant_derivative, gibbs_channel,
    info_from_cumulant, shape_report, value_at_info, voi_curve, voi_curve_with, BetaGrid,
    BetaScale, CumulantModel, CumulantPoint, CurvePoint, DecisionProblem, GibbsSolution,
    MarginalReport, ShapeReport, VoiCurve,
};
pub use error::{Result, VoiError};
pub use geometry::{Family, HartleyPoint, Model, ModelSpec, PriorSpec};
pub use measure::{CostMatrix, FiniteSpace, Geometry, JointMeasure, LogBase, ProbVector};
pub use par::Execution;
