//! Arbitrarily varying wiretap channels at desk scale.
//!
//! The crate is organised bottom-up:
//!
//! * [`channel`]: distributions, channels, state families, mixtures and
//!   memoryless products.
//! * [`info`]: entropy, mutual information and divergence in bits.
//! * [`lp`]: phase-one simplex used by the structure tests.
//! * [`structure`]: symmetrisability, degradedness, best eavesdropper channel.
//! * [`optim`]: simplex grids, line search and multi-start ascent.
//! * [`bounds`]: secrecy-capacity lower and upper bounds, AVC capacity.
//! * [`coding`]: codebooks, exact error and leakage, robustification,
//!   reduction and elimination of randomness.
//!
//! The algebra in the first four modules is generic over [`Real`]; the
//! aliases at the crate root fix the scalar to `f64` or `f32`. The
//! optimisation and coding layers work in `f64` only.

pub mod bounds;
pub mod channel;
pub mod coding;
pub mod error;
pub mod info;
pub mod lp;
pub mod optim;
pub mod scalar;
pub mod structure;

pub use channel::{
    iid_extension, mixture_channel, product_channel_prob, product_output_distribution,
    StateSequence,
};
pub use error::{Error, Result};
pub use scalar::Real;

pub type Distribution = channel::Distribution<f64>;
pub type Channel = channel::Channel<f64>;
pub type Avwc = channel::Avwc<f64>;
pub type LinearSystem = lp::LinearSystem<f64>;

pub type Distribution32 = channel::Distribution<f32>;
pub type Channel32 = channel::Channel<f32>;
pub type Avwc32 = channel::Avwc<f32>;
