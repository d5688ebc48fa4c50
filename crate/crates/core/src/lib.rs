//! Cellular automata over finite alphabets: local rules, periodic and
//! finitely presented configurations, language computations on images and
//! limit sets, column factors, and a firing squad whose backward histories
//! can be recognised.

pub mod alphabet;
pub mod config;
pub mod constructions;
pub mod dfa;
pub mod error;
pub mod firing_squad;
pub mod render;
pub mod rule;
pub mod subshift;
pub mod verify;
pub mod xs;

pub use alphabet::{Alphabet, Sym, Word};
pub use config::{PeriodicConfig, PresentedConfig};
pub use error::{Error, Result};
pub use rule::Rule;
