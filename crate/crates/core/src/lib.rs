//! Exact interaction decomposition for value functions over maskable inputs.
//!
//! A model evaluated on masked input patterns induces a cooperative game: each
//! coalition mask selects which variables are present, and the model output is
//! the coalition's value. This crate decomposes such games into Harsanyi
//! dividends (one effect per coalition), connects them to classical
//! attribution indices (Shapley value, Shapley interaction, Shapley-Taylor),
//! and measures how concentrated the decomposition is across interaction
//! orders.
//!
//! The dense lattice representation indexes every array by coalition mask, so
//! all algorithms are exact up to floating point; nothing is sampled.
//!
//! ```
//! use harsanyi_core::{harsanyi_dividends, ValueTable};
//! use harsanyi_core::attribution::shapley_values_from_effects;
//!
//! let table = ValueTable::from_values(2, vec![0.0, 1.0, 1.0, 3.0]).unwrap();
//! let effects = harsanyi_dividends(&table);
//! assert_eq!(effects.effects().as_slice(), &[0.0, 1.0, 1.0, 1.0]); // the pair synergises
//! let phi = shapley_values_from_effects(&effects);
//! assert_eq!(phi.phi, vec![1.5, 1.5]);
//! ```

pub mod attribution;
pub mod error;
pub mod game_oracle;
pub mod interaction;
pub mod jsonio;
pub mod sparsity;
pub mod subset_algebra;
pub mod synth;
pub mod verify;

pub use attribution::AttributionVector;
pub use error::{Error, Result};
pub use game_oracle::{tabulate, Oracle, OracleDescriptor, ValueTable};
pub use interaction::{harsanyi_dividends, InteractionTable};
pub use sparsity::{full_report, SparsityReport};
pub use subset_algebra::{binomial, mobius_transform, zeta_transform, LatticeArray, SubsetMask};
pub use synth::{GameKind, GameSpec};
pub use verify::{all_pass, run_suite, CheckResult, SuiteConfig};
