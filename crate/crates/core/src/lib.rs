//! Hermite-Hadamard type error bounds for functions whose second derivative
//! is (phi-, log-phi-, quasi-phi- or s-) convex, sampling falsifiers for
//! those hypotheses, and certified brackets of integrals of convex functions.
//!
//! The contraction `eta` in `(0, 1]` carried by [`PathInterval`] shortens the
//! integration path to `[a, a + eta (b - a)]`; `eta = 1` gives the classical
//! statements.
//!
//! ```
//! use hhcert_core::{bounds, parse, report_all, BoundParams, PathInterval, ReportConfig, Status};
//!
//! let f = parse("exp(x)")?;
//! let iv = PathInterval::new(0.0, 1.0, 1.0)?;
//! let d = bounds::defect(&f, &iv, 1e-10)?;
//! let reports = report_all(&f, &iv, &BoundParams::default(), &ReportConfig::default());
//! assert!(reports.iter().all(|r| r.status == Status::Holds && r.bound.unwrap() >= d.value));
//! # Ok::<(), hhcert_core::Error>(())
//! ```

pub mod autodiff;
pub mod bounds;
pub mod bracket;
pub mod classify;
pub mod cli;
pub mod error;
pub mod expr;
pub mod json;
pub mod quad;
pub mod special;

pub use autodiff::{eval_jet2, Jet2};
pub use bounds::{report_all, BoundParams, BoundReport, Defect, ReportConfig, Status, TheoremId};
pub use bracket::{bracket_integral, Bracket};
pub use classify::{PathInterval, SampleConfig, Verdict, Witness};
pub use error::{Error, Result};
pub use expr::{parse, Expr};
pub use quad::{integrate, QuadResult};
pub use special::MeanPair;
