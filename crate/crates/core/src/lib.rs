//! Finite, series-labeled posets of semidualizing classes over a local ring.
//!
//! Each class carries its Poincaré series as an exact rational function. The
//! crate computes curvatures, the curvature-weighted taxi-cab distance on the
//! comparability graph, the dagger duality, and change-of-rings maps, and
//! checks the structural theorems about them on concrete models.
//!
//! The crate is `no_std` and needs only `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod change;
pub mod curvature;
pub mod duality;
pub mod error;
pub mod examples;
pub mod metric;
pub mod model;
pub mod parse;
pub mod poly;
pub mod report;
pub mod series;

pub use change::{
    base_change, check_mixed_distance, check_specialization, cobase_change_model, injcurv_phi,
    CobaseChange, HomomorphismDescriptor,
};
pub use curvature::{curvature, curvature_estimate, Curvature};
pub use duality::{build_dagger, check_dagger, check_fixed_points, check_isometry, DaggerMap};
pub use error::Error;
pub use metric::{
    ball, diameter, distance, route_length, sigma, ComparabilityGraph, MetricSpace, Route,
};
pub use model::{ModelBuilder, SdcClass, SdcModel};
pub use parse::{parse, parse_series, render, ParseError, SeriesExpr};
pub use poly::IntPolynomial;
pub use report::{CheckReport, ValidationReport};
pub use series::{LaurentSeries, N_CHECK};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Numeric knobs shared by every computation on a model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Settings {
    /// How many leading coefficients a nonnegativity check inspects.
    pub n_check: usize,
    /// Maximum width of an interval-valued curvature.
    pub eps: BigRational,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            n_check: N_CHECK,
            eps: BigRational::new(BigInt::from(1), BigInt::from(1_000_000_000)),
        }
    }
}
