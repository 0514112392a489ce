//! Arc spaces of Bautin ideals.
//!
//! Exact rational polynomials and truncated jets are used to compute orders
//! of arcs with respect to polynomial ideals and the points they hit on the
//! exceptional divisor of the blow-up. The `kapteyn` module specialises this
//! to the center set of plane quadratic vector fields; `numeric` checks the
//! algebraic orders against Poincaré return maps.

pub mod aksing;
pub mod blowup;
pub mod error;
pub mod exactalg;
pub mod io;
pub mod jets;
pub mod kapteyn;
pub mod numeric;
pub mod rng;

pub use blowup::{Ideal, OrderResult, ProjPoint};
pub use error::{Error, Result};
pub use exactalg::{OneForm, Poly, Rational};
pub use jets::{Arc, Coeff, Jet, Valuation};
pub use kapteyn::{FamilyId, FamilySpec, Stratum};

/// Default jet truncation order.
pub const DEFAULT_TRUNCATION: usize = 12;

/// Version string stamped into run reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
