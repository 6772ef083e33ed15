//! Verification: reference oracles and the embedded self-test suite.

pub mod oracle;
pub mod selftest;
