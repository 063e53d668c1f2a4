//! Kernel-based clustering with quantum-inspired similarity measures.
//!
//! This crate compares four routes from a feature matrix to a Gram matrix
//! and pushes them all through one spectral-clustering pipeline:
//!
//! * [`pqk`]: a parameterized product-state quantum fidelity kernel with a
//!   kernel-target-alignment parameter search,
//! * [`neuromorphic`]: spiking kernels built from population-coded inputs,
//!   classical or single-qubit leaky integrate-and-fire dynamics, and
//!   Victor-Purpura or van Rossum train distances,
//! * [`spectral::rbf_kernel`]: the Gaussian RBF baseline,
//!
//! plus [`dataset`] generators for the benchmark shapes, a dense symmetric
//! eigensolver in [`linalg`], normalized spectral clustering in
//! [`spectral`], and clustering scores in [`metrics`].
//!
//! All numeric code is generic over the floating-point width through the
//! [`Scalar`] trait; `*64`/`*32` aliases pin the common choices.

// Validation guards are written `!(x >= 0)` on purpose: the negation also
// fires on NaN, which `x < 0` would silently let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dataset;
pub mod error;
pub mod kernel;
pub mod linalg;
pub mod metrics;
pub mod neuromorphic;
pub mod pqk;
pub mod scalar;
pub mod spectral;

#[cfg(feature = "test-oracles")]
pub mod oracles;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use dataset::{DatasetKind, DatasetSpec, LabeledDataset};
pub use kernel::{KernelKind, KernelMatrix};
pub use metrics::MetricsReport;
pub use neuromorphic::{SpikeKernelConfig, SpikeKernelOutput, SpikeTrain};
pub use pqk::EncodingParams;
pub use spectral::{ClusterAssignment, SpectralConfig, SpectralDecomposition};

/// Double-precision aliases for the main generic types.
pub type LabeledDataset64 = LabeledDataset<f64>;
pub type DatasetSpec64 = DatasetSpec<f64>;
pub type KernelMatrix64 = KernelMatrix<f64>;
pub type EncodingParams64 = EncodingParams<f64>;
pub type SpikeTrain64 = SpikeTrain<f64>;
pub type SpikeKernelConfig64 = SpikeKernelConfig<f64>;
pub type SpectralDecomposition64 = SpectralDecomposition<f64>;
pub type ClusterAssignment64 = ClusterAssignment<f64>;

/// Single-precision aliases.
pub type LabeledDataset32 = LabeledDataset<f32>;
pub type DatasetSpec32 = DatasetSpec<f32>;
pub type KernelMatrix32 = KernelMatrix<f32>;
pub type EncodingParams32 = EncodingParams<f32>;
pub type SpikeTrain32 = SpikeTrain<f32>;
pub type SpikeKernelConfig32 = SpikeKernelConfig<f32>;
pub type SpectralDecomposition32 = SpectralDecomposition<f32>;
pub type ClusterAssignment32 = ClusterAssignment<f32>;
