//! Exact cohomology, regularity certificates and patch frequencies for
//! one-dimensional substitution tilings.
//!
//! ```
//! use tilecohom::cohomology::presentation;
//! use tilecohom::frequency::FrequencyTable;
//! use tilecohom::substitution::parse_substitution;
//!
//! let s = parse_substitution("a -> a b\nb -> b a")?;
//! assert_eq!(presentation(&s, 2)?.k, 2);
//! let f = FrequencyTable::new(&s, 2)?.frequency(&s.word("ab")?)?;
//! assert_eq!(f.value().to_string(), "1/3");
//! # Ok::<(), tilecohom::Error>(())
//! ```

pub mod cohomology;
pub mod error;
pub mod exactalg;
pub mod frequency;
pub mod language;
pub mod par;
pub mod regularity;
pub mod substitution;

pub use error::{Error, Result};
pub use par::ExecMode;
