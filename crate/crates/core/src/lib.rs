//! Statevector simulation of a charged particle on a diatomic tight-binding
//! chain in a time-dependent electric field.
//!
//! Sites are encoded in binary on `Γ = log2 N` qubits per particle. The
//! hopping, field and contact terms each have an exact circuit, and a time
//! step is their first-order product. Independent matrix, Bessel and
//! spin-chain references live in [`oracle`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circuit;
pub mod error;
pub mod evolve;
pub mod model;
pub mod observables;
pub mod oracle;
pub mod statevector;
pub mod transpile;

pub use circuit::{Circuit, Op};
pub use error::{Error, Result};
pub use evolve::{make_initial, run, EvolutionPlan, FieldSampling, InitialKind, SiteState, Stepper, Storage, Trajectory};
pub use model::ModelParams;
pub use oracle::dense::DenseOperator;
pub use observables::{Band, LadderSpectrum, ObservableSeries, Sublattice};
pub use statevector::{Control, ControlledGate, DiagonalGate, Matrix2, Polarity, Statevector};
pub use transpile::{BasisCircuit, BasisGate, GateCounts};
