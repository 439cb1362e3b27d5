//! Witnesses and certification of non-classical correlations in quantum networks.
//!
//! The crate evaluates nonlinear (I–J type) and linear (CHSH-block and
//! Mermin–Svetlichny type) inequalities on chain and star networks, keeps the
//! closed-form bound table for every model class (fully classical, hybrid with
//! no-signaling resources, hybrid with quantum resources, quantum maximum) and
//! turns a witness value into the strongest ℓ-level claims it supports.
//!
//! Module map:
//!
//! * [`quantum`]: dense complex algebra for few-qubit states and measurements.
//! * [`network`]: topologies and the chain/star cover of bipartite networks.
//! * [`behavior`]: probability tables, Born-rule and hybrid simulation, correlators.
//! * [`witness`]: witness evaluation, bound table, certification, classical oracle.
//! * [`strategy`]: canonical violating and bound-saturating strategies.
//! * [`io`], [`sweep`], [`report`]: file formats and the pieces behind the CLI.

pub mod behavior;
pub mod error;
pub mod io;
pub mod network;
pub mod quantum;
pub mod report;
pub mod strategy;
pub mod sweep;
pub mod witness;

mod tol;

pub use error::{Error, Result};
pub use tol::{set_tolerance, tolerance, DEFAULT_TOLERANCE};
