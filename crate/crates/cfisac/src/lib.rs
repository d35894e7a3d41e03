//! Anti-malicious cell-free massive-MIMO ISAC toolkit.
//!
//! A malicious cell-free massive-MIMO network serves a suspicious UE and, at
//! the same time, senses an aerial target through dedicated sensing APs. A
//! legitimate full-duplex proactive monitor eavesdrops on the suspicious UE
//! (helped by pilot spoofing) while jamming both the UE and the target
//! direction to degrade the malicious sensing.
//!
//! Modules, bottom-up:
//!
//! - [`scenario`]: configuration and random network realizations.
//! - [`channels`]: small-scale fading and line-of-sight channel builders.
//! - [`estimation`]: pilot-spoofed MMSE channel estimation.
//! - [`sinr`]: closed-form SINRs of UE, monitor and sensing CPU, q-coefficients, limits.
//! - [`montecarlo`]: empirical oracle for every closed-form term.
//! - [`optimizer`]: bisection solvers for the two jamming-allocation problems.
//! - [`metrics`]: SDP / MSP / CDF / lifetime statistics.
//! - [`experiments`]: validation and figure sweeps with CSV output.

pub mod channels;
pub mod estimation;
pub mod experiments;
pub mod metrics;
pub mod montecarlo;
pub mod optimizer;
pub mod scenario;
pub mod sinr;
