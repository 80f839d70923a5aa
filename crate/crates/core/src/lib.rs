//! Accessible information of symmetric qubit sources.
//!
//! The building blocks are small dense complex matrices ([`matcore`]),
//! ensembles of states ([`ensembles`]), measurements ([`povm`]) and the
//! figures of merit computed from them ([`measures`]). On top sit the
//! explicit optimal measurements for the M-fold symmetric source
//! ([`strategies`]), a brute-force scan of the full three-outcome family
//! ([`oracle`]) and an optical dilation of the three-outcome measurement
//! ([`naimark`]).
//!
//! ```
//! use accessible_info::{ensembles::make_em, measures::mutual_information, strategies::covariant_am};
//!
//! let trine = make_em(3).unwrap();
//! let info = mutual_information(&trine, &covariant_am(3).unwrap()).unwrap();
//! assert!((info - 1.5f64.ln()).abs() < 1e-10);
//! ```

mod error;

pub mod cli;
pub mod ensembles;
pub mod matcore;
pub mod measures;
pub mod naimark;
pub mod oracle;
pub mod povm;
pub mod random;
pub mod strategies;

pub use error::{Error, Result};
pub use matcore::{CMat, CVec};
pub use povm::{Povm, Rank1Real};
