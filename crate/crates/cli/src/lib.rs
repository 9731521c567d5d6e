//! Support code for the `gmebound` binary: named states, input loading,
//! exit-code classification and the acceptance checks.

pub mod reproduce;
pub mod source;
