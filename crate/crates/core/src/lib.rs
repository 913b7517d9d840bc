//! Slow-fast reduction of polynomial ODEs `x' = h0(x) + eps h1(x)` on a
//! parameterized critical manifold, with mass-action reaction networks as the
//! main input. See the `tfred` binary for the command-line front end.

pub use tfr_exact as exact;
pub mod cli;
pub mod crn;
pub mod manifold;
pub mod model;
pub mod numeric;
pub mod reduce;
pub mod sim;
pub mod system;
