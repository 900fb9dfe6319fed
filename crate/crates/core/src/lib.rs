//! Numerical verification of stability bounds for the multiplicative Sincov
//! equation `F(a,x)·F(x,b) = F(a,b)` and of the Cauchy-Schwarz, Buzano and
//! Richard inequalities in finite-dimensional inner product spaces.
//!
//! * [`value`]: complex and real 2×2 matrix values with their norms.
//! * [`kernel`]: finite kernels, generators and the JSON file format.
//! * [`sincov`]: defect, factorizations and bound checks.
//! * [`ipspace`]: vectors, inequality margins and the normalized Gram kernel.
//! * [`cli`]: the `sincov` command-line front end.

pub mod cli;
pub mod error;
pub mod ipspace;
pub mod kernel;
pub mod report;
pub mod sincov;
pub mod value;

pub use error::{Error, Result};
pub use kernel::{generate, load_kernel, save_kernel, FiniteKernel, GeneratorSpec};
pub use sincov::{
    factorize, gm_factorize, is_exact, sincov_defect, Analysis, BoundCheck, DefectReport, Factorization,
};
pub use value::{AlgebraValue, ValueKind};
