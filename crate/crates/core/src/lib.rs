//! Exact tensor networks for the Motzkin and Fredkin spin-chain ground states.
//!
//! The crate is `no_std` (it only needs `alloc`) and is organised bottom-up:
//!
//! * [`scalar`]: the exact semirings amplitudes live in (big integers,
//!   rationals, integer polynomials in `t`) plus `f64`.
//! * [`walk`], [`state`], [`schmidt`]: brute-force ground truth built from
//!   lattice-walk enumeration.
//! * [`tiles`]: the square and triangular tile inventories, grid tilings and
//!   the walk/tiling bijection.
//! * [`tensor`]: sparse charge-labelled tensors built as sums of tiles.
//! * [`network`]: the binary-height, height-renormalisation and U(1) networks.
//! * [`contraction`]: exact evaluation of networks.
//! * [`equivalence`]: mechanised checks of the local rewrite identities the
//!   networks rely on.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod contraction;
pub mod equivalence;
pub mod error;
pub mod label;
pub mod network;
pub mod scalar;
pub mod schmidt;
pub mod state;
pub mod tensor;
pub mod tiles;
pub mod walk;

pub use error::Error;
pub use label::{Alphabet, Label};
pub use scalar::{Poly, Scalar, ScalarKind};
pub use state::{SiteKind, SpinConfig, StateVector};
pub use tensor::{LabeledTensor, TensorSet};
