//! The coordinate-wise objective `Q`: finite domains, the fast
//! decreasing-point list, and a definitional oracle.

mod domain;
mod list;
mod oracle;

pub use domain::{domain_spec, enumerate_domain, DomainElement, DomainSpec, Prefix, DEFAULT_ENUMERATION_CAP};
pub use list::{build_decreasing_list, intersection_candidates, q_eval, q_interval_min, DecreasingPointList};
pub use oracle::{q_definitional, QOracle};
