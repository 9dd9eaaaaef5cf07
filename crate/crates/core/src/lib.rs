//! Blendstrings: piecewise two-point Hermite interpolants built from local
//! Taylor series, and a collocation ODE marcher that produces them.
//!
//! ```
//! use blendstring::{blendstring::Blendstring, oracles, scalar::C64};
//!
//! let knots: Vec<C64> = [-1.0, -1.0 / 3.0, 1.0 / 3.0, 1.0]
//!     .iter()
//!     .map(|&x| C64::new(x, 0.0))
//!     .collect();
//! let b = Blendstring::build(&knots, 5, &oracles::exp).unwrap();
//! let y = b.eval(C64::new(0.5, 0.0)).unwrap();
//! assert!((y.re - 0.5f64.exp()).abs() < 1e-14);
//! ```

pub mod blend;
pub mod blendstring;
pub mod document;
pub mod error;
mod jet;
pub mod mathieu;
pub mod ode;
pub mod oracles;
pub mod parse;
pub mod problem;
pub mod scalar;
pub mod stability;
pub mod taylor;

pub use crate::blendstring::Blendstring;
pub use crate::error::{Error, Result};
