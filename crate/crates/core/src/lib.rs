//! Binary coherent-state communication through a Gaussian phase-diffusion
//! channel.
//!
//! The crate evaluates four figures of merit for the ensemble
//! `{q_x, N_sigma(|alpha_x><alpha_x|)}`:
//!
//! * the Helstrom bound ([`discrimination::helstrom_bound`]),
//! * the accessible information by steepest ascent
//!   ([`discrimination::accessible_information`]),
//! * error probability and mutual information of the Jaynes-Cummings atomic
//!   receiver, in closed form and optimized over its three parameters
//!   ([`atomic`]),
//! * the same for a displaced photon-number-resolving receiver with MAP
//!   decisions ([`pnr`]),
//!
//! and sweeps them over a grid of phase-diffusion strengths ([`sweep`]).

pub mod atomic;
pub mod channel;
pub mod discrimination;
pub mod error;
pub mod fock;
pub mod information;
pub mod pnr;
pub mod quadrature;
pub mod simplex;
pub mod sweep;
pub mod tolerances;

pub use atomic::{AtomicParams, Objective, OptimizerConfig, Optimum, SeriesConfig};
pub use channel::{PhaseDiffusion, SignalParams};
pub use discrimination::{AscentConfig, AscentReport, BinaryEnsemble, BinaryPovm};
pub use error::{Error, Result};
pub use fock::{ComplexMatrix, DensityOperator, FockDim, HermitianOperator, KetVector};
pub use pnr::PnrConfig;
pub use sweep::{find_crossing, run_point, run_sweep, SweepConfig, SweepResult};
pub use tolerances::Tolerances;
