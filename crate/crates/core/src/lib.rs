//! Secrecy-rate regions for the two-receiver broadcast channel with mutual
//! secrecy requirement and noiseless feedback.
//!
//! - [`probcore`]: joint pmfs and information measures
//! - [`polyregion`]: exact Fourier-Motzkin elimination and 2-D regions
//! - [`bounds`]: per-distribution inner/outer bound evaluators
//! - [`channels`]: Dueck-type and Blackwell-type examples, closed forms, sweeps
//! - [`keysim`]: key extraction from feedback and one-time-pad simulation

pub mod probcore;
pub mod polyregion;
pub mod bounds;
pub mod channels;
pub mod keysim;
