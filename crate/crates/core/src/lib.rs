//! Hochschild cohomology dimension tables for equivariant matrix factorisations
//! of invertible polynomials, computed exactly.

pub mod document;
pub mod engine;
pub mod error;
pub mod invariants;
pub mod jacobian;
pub mod lattice;
pub mod poly;
pub mod symmetry;

pub use error::{Error, Result};
pub use jacobian::{milnor_number, monomial_basis, restrict, JacobianCache, MonomialBasis, MonomialOrder};
pub use poly::{Atom, InvertiblePolynomial, WeightSystem};
pub use symmetry::{AffineFamily, GroupElement, SymmetryContext};
pub use engine::{
    compute_table, compute_table_with, contributions_for, hh2_vanishes, list_contributions, list_contributions_with,
    BigradedTable, Contribution, EngineOptions, GammaMonomial, Kind, Window,
};
pub use invariants::{
    golden_check, golden_report, golden_window, rescale, scale_compare, small_res_probe, Family, GoldenReport,
    ScaleVerdict, SmallResVerdict,
};
pub use document::{Cell, ContributionRecord, TableDocument};
