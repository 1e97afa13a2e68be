//! Dimension counts for the covariant 2-differentials of a curve with a
//! finite automorphism group, computed from purely combinatorial input: a
//! finite group, the genus of the quotient curve, and the ramification
//! data of the branch points.
//!
//! The pipeline is exact from end to end. Linear algebra runs over the
//! prime field F_p (ranks there are insensitive to field extension, so the
//! prime subfield stands in for any algebraically closed field of
//! characteristic p) and over the integers with arbitrary precision.
//! Group homology in degrees 0..=2 comes from the normalized bar complex;
//! an integral (Smith normal form) route is kept alongside the F_p route
//! wherever the two can be played against each other.
//!
//! Modules:
//! - [`fpalgebra`]: matrices over F_p and over Z, rank, nullspace, Smith
//!   normal form.
//! - [`groups`]: finite groups as multiplication tables, subgroups,
//!   commutators, abelianization p-rank.
//! - [`catalog`]: the built-in named test groups.
//! - [`homology`]: F_p[G]-modules, the bar complex, homology dimensions,
//!   induced maps, and the integral H_2 computations.
//! - [`covers`]: branch points, ramification filtrations, divisor degrees,
//!   Riemann-Hurwitz, the ordinarity diagnosis.
//! - [`dimensions`]: the dimension formulas and the per-cover report.
//! - [`verify`]: the built-in verification suites.
//! - [`io`], [`cli`]: file formats and the command line front end.
//!
//! Everything is immutable after construction and all operations are pure
//! functions, so values can be shared freely across threads; repeated runs
//! on identical input produce byte-identical reports.

pub mod catalog;
pub mod cli;
pub mod covers;
pub mod dimensions;
pub mod fpalgebra;
pub mod groups;
pub mod homology;
pub mod io;
pub mod verify;

pub use covers::{BranchPoint, IndexStart, RamifiedCover};
pub use dimensions::{DimensionReport, ImAlphaConvention};
pub use fpalgebra::{IntegerMatrix, PrimeFieldMatrix};
pub use groups::{FiniteGroup, GroupSpec, Subgroup};
pub use homology::{GModule, ModuleMorphism, ModuleSpec, SizeCaps};
