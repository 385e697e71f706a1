//! Finite-group toolkit for FSZ indicator sets.
//!
//! Groups are built by [`constructions`], handled uniformly through
//! [`group::GroupHandle`], and tested by the [`fsz`] engine and the
//! [`wreath_analyzer`].

pub mod constructions;
pub mod element;
pub mod error;
pub mod fsz;
pub mod group;
pub mod kinds;
pub mod modular;
pub mod wreath_analyzer;

pub use element::ElementKey;
pub use error::{FszError, Result};
pub use group::{GroupHandle, GroupKind};
