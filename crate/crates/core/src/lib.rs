//! Construction and exact analysis of quadratic APN functions over GF(2^n).
//!
//! * [`field`]: GF(2^n) arithmetic, Frobenius maps and traces.
//! * [`poly`]: sparse polynomials, value tables and the APN families.
//! * [`analysis`]: Walsh spectra, nonlinearity, differential spectra.
//! * [`quadratic`]: bilinear-form kernels, the squared-transform identity and
//!   the F5 kernel-bound trace.

pub mod analysis;
pub mod error;
pub mod field;
pub mod poly;
pub mod quadratic;

pub use error::{Error, Result, Violation};
pub use field::{FieldElement, FieldSpec};
pub use poly::{FunctionTable, SparsePoly};
