//! Sharp bounds on how the uncentered Hardy-Littlewood maximal operator acts on
//! moduli of continuity, together with discrete maximal-function oracles.

pub mod error;
pub mod moduli;
pub mod norm;
pub mod numerics;
pub mod opnorm;
pub mod oracle;

pub use error::{Error, Result};
pub use moduli::{Extremal, ExtremalDomain, ModulusKind, ModulusSpec};
pub use norm::NormKind;
