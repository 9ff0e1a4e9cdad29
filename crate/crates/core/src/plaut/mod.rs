//! Piecewise-linear order-automorphisms of `Q` and the left-order induced by
//! a well-order of `Q`: `f ≺ g` iff `f(t) < g(t)` at the first point `t` (in
//! the well-order) where the two maps differ.

mod hull;
mod map;
mod wellorder;

pub use hull::{
    example22_build, hull_of_cyclic_membership, orbit_bound_certificate,
    orbit_bound_certificate_with, HullCounterexample, HullCertificate, HullMembership, HullSide,
    OrbitCertificate, OrbitSample, OrbitSide,
};
pub use map::{
    first_difference, plaut_compare, plaut_compose, plaut_inverse, FirstDifference, PlAut,
};
pub use wellorder::QWellOrder;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

pub type Rational = BigRational;

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlError {
    #[error("not an order-automorphism of Q: {0}")]
    InvalidMap(String),
    #[error("no difference found among the first {cap} rationals of the well-order")]
    Exhausted { cap: u64 },
    #[error("{point} is not a fixed point (it maps to {image})")]
    NotFixed { point: Rational, image: Rational },
    #[error("orbit start {start} is not on the required side of {fixed_point}")]
    WrongSide {
        start: Rational,
        fixed_point: Rational,
    },
    #[error("the cyclic subgroup of the identity has a trivial hull")]
    IdentityGenerator,
}

pub(crate) mod ratser {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse()
            .map_err(|_| serde::de::Error::custom(format!("invalid rational {s:?}")))
    }
}
