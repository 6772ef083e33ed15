//! Bifurcation and chaos detection with CROCKER matrices.
//!
//! The pipeline sweeps the control parameter of an ODE system, samples the
//! attractor at each value, and summarizes its Vietoris–Rips persistence as
//! Betti vectors over a shared ε grid. Stacked across the sweep these form
//! CROCKER matrices, whose column L1 norms are compared against the maximal
//! Lyapunov exponent.
//!
//! Modules, in pipeline order:
//!
//! * [`systems`]: vector fields and the RK4 integrator
//! * [`pointcloud`]: greedy subsampling and distance matrices
//! * [`persistence`]: Rips barcodes in dimensions 0 and 1
//! * [`crocker`]: partitions, Betti vectors, CROCKER matrices
//! * [`lyapunov`]: Benettin estimate of the maximal exponent
//! * [`sweep`]: orchestration and summary statistics
//! * [`export`]: CSV, PGM and SVG writers
//! * [`verify`]: reference oracles and the self-test suite

pub mod crocker;
pub mod export;
pub mod lyapunov;
pub mod persistence;
pub mod pointcloud;
pub mod sweep;
pub mod systems;
pub mod verify;

pub use crocker::{betti_vector, crocker_matrix, l1_norm, make_partition, BettiVector, CrockerMatrix, Partition};
pub use lyapunov::{lyapunov_curve, max_lyapunov, LyapunovConfig, LyapunovEstimate};
pub use persistence::{
    build_filtration, max_finite_death, persistence_h0, persistence_h1, Barcode, Interval, RipsFiltration,
};
pub use pointcloud::{distance_matrix, greedy_subsample, DistanceMatrix, PointCloud};
pub use sweep::{run_sweep, SweepConfig, SweepResult};
pub use systems::{integrate, IntegrationConfig, SystemSpec, Trajectory};
